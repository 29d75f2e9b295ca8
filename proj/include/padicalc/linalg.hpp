#pragma once
// Dense linear algebra over the fraction field of V at capped precision.
// Pivoting always picks a minimal-valuation entry, which keeps precision
// loss down; an entry counts as zero below pi^t only when its digit string
// vanishes there.

#include <optional>
#include <vector>

#include "padicalc/scalar.hpp"

namespace padicalc {

class PMatrix {
 public:
  PMatrix(int rows, int cols, const PadicScalar& fill)
      : rows_(rows), cols_(cols), a_((size_t)rows * cols, fill) {}
  static PMatrix zero(int rows, int cols, int32_t p, int32_t prec) {
    return PMatrix(rows, cols, PadicScalar::zero(p, prec));
  }
  PadicScalar& at(int i, int j) { return a_[(size_t)i * cols_ + j]; }
  const PadicScalar& at(int i, int j) const { return a_[(size_t)i * cols_ + j]; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  int rows_, cols_;
  std::vector<PadicScalar> a_;
};

struct EchelonResult {
  PMatrix mat;
  std::vector<int> pivotCols;     // one per pivot row
  bool precisionWarning = false;  // some entry vanished only at its own precision < t
};

inline bool pivotable(const PadicScalar& c, int32_t t) {
  auto v = c.val_pi();
  return v.has_value() && *v < t;
}

inline EchelonResult row_echelon(PMatrix M, int32_t t) {
  EchelonResult res{M, {}, false};
  PMatrix& A = res.mat;
  int r = 0;
  for (int c = 0; c < A.cols() && r < A.rows(); ++c) {
    int best = -1;
    int64_t bestVal = 0;
    for (int i = r; i < A.rows(); ++i) {
      const PadicScalar& x = A.at(i, c);
      if (!pivotable(x, t)) {
        if (!x.zero_at_prec() || x.prec() < t) res.precisionWarning |= (x.prec() < t);
        continue;
      }
      int64_t v = *x.val_pi();
      if (best < 0 || v < bestVal) {
        best = i;
        bestVal = v;
      }
    }
    if (best < 0) continue;
    if (best != r)
      for (int j = 0; j < A.cols(); ++j) std::swap(A.at(r, j), A.at(best, j));
    PadicScalar inv = A.at(r, c).inv();
    for (int j = c; j < A.cols(); ++j) A.at(r, j) = A.at(r, j) * inv;
    for (int i = 0; i < A.rows(); ++i) {
      if (i == r) continue;
      const PadicScalar& f = A.at(i, c);
      if (f.zero_at_prec()) continue;
      PadicScalar fac = f;
      for (int j = c; j < A.cols(); ++j) A.at(i, j) = A.at(i, j) - fac * A.at(r, j);
    }
    res.pivotCols.push_back(c);
    ++r;
  }
  return res;
}

inline int rank(const PMatrix& M, int32_t t) { return (int)row_echelon(M, t).pivotCols.size(); }

// basis of the right nullspace at precision t
inline std::vector<std::vector<PadicScalar>> nullspace(const PMatrix& M, int32_t t, int32_t p,
                                                       int32_t prec) {
  EchelonResult e = row_echelon(M, t);
  std::vector<bool> isPivot(M.cols(), false);
  for (int c : e.pivotCols) isPivot[c] = true;
  std::vector<std::vector<PadicScalar>> basis;
  for (int fc = 0; fc < M.cols(); ++fc) {
    if (isPivot[fc]) continue;
    std::vector<PadicScalar> v(M.cols(), PadicScalar::zero(p, prec));
    v[fc] = PadicScalar::one(p, prec);
    for (size_t r = 0; r < e.pivotCols.size(); ++r)
      v[e.pivotCols[r]] = -e.mat.at((int)r, fc);
    basis.push_back(std::move(v));
  }
  return basis;
}

// solves A x = b at precision t; nullopt when inconsistent
inline std::optional<std::vector<PadicScalar>> solve(const PMatrix& A,
                                                     const std::vector<PadicScalar>& b, int32_t t,
                                                     int32_t p, int32_t prec) {
  PMatrix aug = PMatrix::zero(A.rows(), A.cols() + 1, p, prec);
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < A.cols(); ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, A.cols()) = b[i];
  }
  EchelonResult e = row_echelon(aug, t);
  for (int c : e.pivotCols)
    if (c == A.cols()) return std::nullopt;
  std::vector<PadicScalar> x(A.cols(), PadicScalar::zero(p, prec));
  for (size_t r = 0; r < e.pivotCols.size(); ++r) x[e.pivotCols[r]] = e.mat.at((int)r, A.cols());
  return x;
}

}  // namespace padicalc
