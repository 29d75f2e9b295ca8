#pragma once
// Dwork operators and Frobenius descent through the lift F*(y_i) = x_i^q:
//   - the projector H = prod_i H_i with H_i = q^{-1} sum_{zeta^q=1} sum_k
//     (zeta-1)^k x_i^k del_i^[k]  (the q^{-1} is forced by H^2 = H, H(1) = 1);
//   - the dual-basis operators H x^{-k} of {x^k}, 0 <= k < q;
//   - the transfer P -> P^o built from the monomial action of (del')^o,
//     materialized by a triangular solve instead of inverting q x^{q-1};
//   - the Taylor element comparing two congruent lifts.
//
// On a monomial x^j with 0 <= j <= K the truncated operators act exactly
// (the omitted divided-power tail annihilates polynomials of degree <= K),
// so every identity below is checked on that exact range.

#include <map>
#include <vector>

#include "padicalc/diffop.hpp"
#include "padicalc/roots.hpp"

namespace padicalc {

struct FrobeniusLift {
  int dim = 1;
  int64_t q = 3;
};

// substitution y_i -> x_i^q on exponent vectors
inline LaurentPoly frobenius_pullback(const FrobeniusLift& F, const LaurentPoly& g) {
  LaurentPoly r = LaurentPoly::zero(g.prime(), g.window(), g.prec());
  for (auto& [e, c] : g.terms()) {
    Exp e2(e);
    for (auto& v : e2) {
      int64_t big = (int64_t)v * F.q;
      if (big < INT32_MIN || big > INT32_MAX) throw OverflowError("pullback exponent");
      v = (int32_t)big;
    }
    r.add_term(e2, c);
  }
  return r;
}

class DworkContext {
 public:
  DworkContext(TruncationParams pm, int dim)
      : pm_(pm), dim_(dim) {
    pm_.validate();
    sp_.p = pm_.p;
    sp_.K = pm_.K;
    sp_.prec = pm_.piPrec();
    sp_.win = Window::uniform(dim, pm_.degLo, pm_.degHi);
    roots_ = roots_of_unity(pm_);
    qInv_ = PadicScalar::from_int(pm_.p, pm_.q(), sp_.prec + 2 * (pm_.p - 1) + 2).inv();
  }

  const TruncationParams& params() const { return pm_; }
  const OpSpace& space() const { return sp_; }
  int dim() const { return dim_; }
  int64_t q() const { return pm_.q(); }
  const std::vector<PadicScalar>& roots() const { return roots_; }

  // q^{-1} sum_zeta zeta^j: 1 if q | j, else 0 (the projector eigenvalue)
  PadicScalar eigenvalue(int64_t j) const {
    PadicScalar s = PadicScalar::zero(pm_.p, sp_.prec);
    for (auto& z : roots_) s += z.pow(mod_q(j));
    return s * qInv_;
  }

  // d_b(k) = q^{-1} sum_zeta zeta^{-k} (zeta-1)^b; vanishes for b < k
  PadicScalar dual_coeff(int64_t b, int64_t k) const {
    PadicScalar s = PadicScalar::zero(pm_.p, sp_.prec);
    PadicScalar onev = PadicScalar::one(pm_.p, sp_.prec);
    for (auto& z : roots_) s += z.pow(mod_q(-k)) * (z - onev).pow(b);
    return s * qInv_;
  }

  // H_i truncated at the order cap (or an explicit materialization order)
  DiffOp dwork_H(int i, int32_t maxOrder = -1) const {
    if (maxOrder < 0) maxOrder = sp_.K;
    DiffOp H(sp_);
    for (int32_t b = 0; b <= maxOrder; ++b) {
      Exp a(dim_, 0), bb(dim_, 0);
      a[i] = b;
      bb[i] = b;
      H.add_term(a, bb, dual_coeff(b, 0));
    }
    return H;
  }

  // product over all variables, built tensor-wise (coefficients multiply)
  DiffOp dwork_H_all() const { return dual_basis_op(std::vector<int64_t>(dim_, 0)); }

  // H x^{-k}: per variable sum_{b >= k} d_b(k) x^{b-k} del^[b].
  // `maxOrder` caps the materialization; the action is exact on monomials of
  // degree <= maxOrder.
  DiffOp dual_basis_op(const std::vector<int64_t>& k, int32_t maxOrder = -1) const {
    if (maxOrder < 0) maxOrder = sp_.K;
    if ((int)k.size() != dim_) throw DomainError("multi-index arity");
    for (auto v : k)
      if (v < 0 || v >= q()) throw DomainError("dual-basis index outside [0,q)");
    DiffOp r = DiffOp::one(sp_);
    for (int i = 0; i < dim_; ++i) {
      DiffOp fi(sp_);
      for (int32_t b = (int32_t)k[i]; b <= maxOrder; ++b) {
        Exp a(dim_, 0), bb(dim_, 0);
        a[i] = b - (int32_t)k[i];
        bb[i] = b;
        fi.add_term(a, bb, dual_coeff(b, k[i]));
      }
      r = tensor_merge(r, fi);
    }
    return r;
  }

  // (del'_i^[k])^o: the unique truncated normal form acting on monomials by
  // x^j -> [q | j] C(j/q, k) x^{j-kq}; solved triangularly against that action
  DiffOp transfer_del_pow(int i, int32_t k, int32_t maxOrder = -1) const {
    if (maxOrder < 0) maxOrder = sp_.K;
    auto key = std::make_tuple(i, k, maxOrder);
    auto it = delCache_.find(key);
    if (it != delCache_.end()) return it->second;
    std::vector<PadicScalar> h((size_t)maxOrder + 1, PadicScalar::zero(pm_.p, sp_.prec));
    for (int32_t j = 0; j <= maxOrder; ++j) {
      PadicScalar target = (j % q() == 0)
                               ? padic_binomial(j / q(), k, pm_.p, sp_.prec)
                               : PadicScalar::zero(pm_.p, sp_.prec);
      for (int32_t b = (int32_t)(k * q()); b < j; ++b)
        target -= h[b] * padic_binomial(j, b, pm_.p, sp_.prec);
      h[j] = std::move(target);
    }
    DiffOp r(sp_);
    for (int32_t b = (int32_t)(k * q()); b <= maxOrder; ++b) {
      if (h[b].zero_at_prec()) continue;
      Exp a(dim_, 0), bb(dim_, 0);
      a[i] = b - (int32_t)(k * q());
      bb[i] = b;
      r.add_term(a, bb, h[b]);
    }
    delCache_.emplace(key, r);
    return r;
  }

  // the descent transfer: sum c y^a del'^[b]  ->  sum c x^{qa} (del'^[b])^o
  DiffOp transfer(const DiffOp& P, int32_t maxOrder = -1) const {
    DiffOp r(sp_);
    for (auto& [key, c] : P.terms()) {
      const Exp& a = key.first;
      const Exp& b = key.second;
      DiffOp t = DiffOp::one(sp_).scaled(c);
      for (int i = 0; i < dim_; ++i) {
        if (a[i] < 0) throw DomainError("transfer needs polynomial coefficients");
        if (b[i] > 0) t = tensor_merge(t, transfer_del_pow(i, b[i], maxOrder));
      }
      Exp xa(dim_, 0);
      for (int i = 0; i < dim_; ++i) {
        int64_t big = (int64_t)a[i] * q();
        if (big > sp_.win.hi[i]) throw OverflowError("transfer exponent outside window");
        xa[i] = (int32_t)big;
      }
      r = r + DiffOp::term(sp_, xa, Exp(dim_, 0), PadicScalar::one(pm_.p, sp_.prec)) * t;
    }
    return r;
  }

  // f . P^o . H x^{-k} in normal form; the two factors share the order cap,
  // so their materialization orders must add up to at most K
  DiffOp garnier_iso(const LaurentPoly& f, const DiffOp& P, const std::vector<int64_t>& k,
                     int32_t transferOrder = -1, int32_t dualOrder = -1) const {
    return DiffOp::from_poly(sp_, f) * transfer(P, transferOrder) * dual_basis_op(k, dualOrder);
  }

 private:
  // product of operators supported on disjoint variables: plain term tensor
  static DiffOp tensor_merge(const DiffOp& A, const DiffOp& B) {
    DiffOp r(A.space());
    for (auto& [ka, ca] : A.terms())
      for (auto& [kb, cb] : B.terms()) {
        Exp a(ka.first), b(ka.second);
        for (size_t i = 0; i < a.size(); ++i) {
          a[i] += kb.first[i];
          b[i] += kb.second[i];
        }
        r.add_term(a, b, ca * cb);
      }
    return r;
  }

  int64_t mod_q(int64_t j) const {
    int64_t r = j % q();
    return r < 0 ? r + q() : r;
  }

  TruncationParams pm_;
  int dim_;
  OpSpace sp_;
  std::vector<PadicScalar> roots_;
  PadicScalar qInv_;
  mutable std::map<std::tuple<int, int32_t, int32_t>, DiffOp> delCache_;
};

// ---------------------------------------------------------------------------
// Taylor element between two congruent systems of coordinates.
//
// T = sum_k Delta^{{k}_(m)} (x) del^{<k>_(m)} with Delta_i = f'*(y_i)-f*(y_i),
// z^{{k}_(m)} := z^k / q_k^(m)!.  Contracting T against a polynomial g
// reproduces g o f' from data at f; on polynomials the sum is finite, so the
// evaluation identity is exact.

class TaylorMap {
 public:
  TaylorMap(TruncationParams pm, std::vector<LaurentPoly> f, std::vector<LaurentPoly> fp)
      : pm_(pm), f_(std::move(f)), fp_(std::move(fp)) {
    const int32_t p = pm_.p;
    bool hasPi = false;
    for (size_t i = 0; i < f_.size(); ++i) {
      LaurentPoly d = fp_[i] - f_[i];
      for (auto& [e, c] : d.terms()) {
        auto v = c.val_pi();
        if (v && *v < p - 1) throw DomainError("congruence failure: f' - f must vanish mod p");
        if (has_pi_digits(c)) hasPi = true;
      }
      delta_.push_back(d);
    }
    // p^m > e/(p-1) with e the ramification index of the coefficients used
    int32_t e = hasPi ? p - 1 : 1;
    if ((int64_t)ipow(p, pm_.m) * (p - 1) <= e)
      throw DomainError("level too small for the Taylor element: need p^m > e/(p-1)");
  }

  int dim() const { return (int)f_.size(); }
  const std::vector<LaurentPoly>& deltas() const { return delta_; }

  // tau_{f,f'}(g) = sum_k Delta^k . (del^[k] g) o f
  LaurentPoly evaluate(const LaurentPoly& g) const {
    const Window& w = f_[0].window();
    const int32_t p = pm_.p;
    int32_t degMax = 0;
    for (auto& [e, c] : g.terms())
      for (auto v : e) degMax = std::max(degMax, v);
    OpSpace gsp{p, g.window(), std::max(degMax, 1), pm_.piPrec()};
    LaurentPoly acc = LaurentPoly::zero(p, w, pm_.piPrec());
    Exp k(dim(), 0);
    while (true) {
      // Delta^k
      LaurentPoly coef = LaurentPoly::one(p, w, pm_.piPrec());
      for (int i = 0; i < dim(); ++i)
        for (int32_t t = 0; t < k[i]; ++t) coef = coef * delta_[i];
      // (del^[k] g) o f
      DiffOp dk = DiffOp::one(gsp);
      for (int i = 0; i < dim(); ++i)
        if (k[i] > 0) dk = dk * DiffOp::del(gsp, i, k[i]);
      LaurentPoly der = DiffOp::apply(dk, g);
      if (!der.zero_at_prec()) acc = acc + coef * der.substitute(f_);
      int i = 0;
      for (; i < dim(); ++i) {
        if (k[i] < degMax) {
          ++k[i];
          break;
        }
        k[i] = 0;
      }
      if (i == dim()) break;
    }
    return acc;
  }

  // the m-PD coefficient Delta^k / q_k^(m)! of del^{<k>_(m)}; exhaustion from
  // the division is visible in the scalar precision of the result
  LaurentPoly term_coefficient(const Exp& k) const {
    const Window& w = f_[0].window();
    LaurentPoly coef = LaurentPoly::one(pm_.p, w, pm_.piPrec());
    for (int i = 0; i < dim(); ++i)
      for (int32_t t = 0; t < k[i]; ++t) coef = coef * delta_[i];
    PadicScalar scale = PadicScalar::one(pm_.p, pm_.piPrec());
    for (int i = 0; i < dim(); ++i) {
      int64_t q = q_floor(k[i], pm_.p, pm_.m);
      if (q > 1) scale = scale / DiffOp::factorial_scalar_of(pm_.p, pm_.piPrec(), q);
    }
    return coef.scaled(scale);
  }

 private:
  static bool has_pi_digits(const PadicScalar& c) {
    // true if some digit sits at a position not divisible by p-1
    int32_t p = c.prime();
    for (size_t i = 0; i < c.digits().size(); ++i)
      if (c.digits()[i] != 0 && ((c.lo() + (int64_t)i) % (p - 1)) != 0) return true;
    return false;
  }

  TruncationParams pm_;
  std::vector<LaurentPoly> f_, fp_, delta_;
};

}  // namespace padicalc
