#pragma once
// Divided-power differential operators in left normal form
//     sum c_{a,b} x^a del^[b],  a in Z^d (window-bounded), b in N^d (b <= K).
//
// The stored basis is always del^[b]; level-m views are conversions.  The
// commutation rule behind every product is, per variable,
//     del^[b] x^a = sum_{j <= min+(a,b)} C(a,j) x^{a-j} del^[b-j]
// with generalized binomials for a < 0.  Terms that would leave the window
// or exceed the order cap raise OverflowError.

#include <map>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "padicalc/laurent.hpp"
#include "padicalc/valuation.hpp"

namespace padicalc {

struct OpSpace {
  int32_t p = 0;
  Window win;
  int32_t K = 0;     // divided-power order cap per variable
  int32_t prec = 0;  // default scalar precision

  int dim() const { return win.dim(); }
  bool operator==(const OpSpace& o) const {
    return p == o.p && K == o.K && win.lo == o.win.lo && win.hi == o.win.hi;
  }
};

struct GaugeReport {
  int32_t level = 0;
  RationalValuation slack;  // min over terms of v_p(c) - nu_m(exponent data)
  bool member = false;
  std::optional<std::pair<Exp, Exp>> offendingTerm;
};

enum class GaugeMode {
  EhatInfinity,  // nu_m of the positive x-exponents
  PoleDivisor,   // nu_m of the negative x-exponents (pole orders)
  LevelBasis,    // divisor-free D-hat^(m): v_p(c) >= v_p(q_b^(m)!)
};

class DiffOp {
 public:
  using Key = std::pair<Exp, Exp>;  // (a, b)

  DiffOp() = default;
  explicit DiffOp(OpSpace sp) : sp_(std::move(sp)) {}

  static DiffOp zero(const OpSpace& sp) { return DiffOp(sp); }
  static DiffOp term(const OpSpace& sp, const Exp& a, const Exp& b, PadicScalar c) {
    DiffOp r(sp);
    r.add_term(a, b, std::move(c));
    return r;
  }
  static DiffOp one(const OpSpace& sp) {
    return term(sp, Exp(sp.dim(), 0), Exp(sp.dim(), 0), PadicScalar::one(sp.p, sp.prec));
  }
  // x_i^e
  static DiffOp coordinate(const OpSpace& sp, int i, int32_t e = 1) {
    Exp a(sp.dim(), 0);
    a[i] = e;
    return term(sp, a, Exp(sp.dim(), 0), PadicScalar::one(sp.p, sp.prec));
  }
  // del_i^[k]
  static DiffOp del(const OpSpace& sp, int i, int32_t k = 1) {
    Exp b(sp.dim(), 0);
    b[i] = k;
    return term(sp, Exp(sp.dim(), 0), b, PadicScalar::one(sp.p, sp.prec));
  }
  static DiffOp from_poly(const OpSpace& sp, const LaurentPoly& f) {
    DiffOp r(sp);
    for (auto& [e, c] : f.terms()) r.add_term(e, Exp(sp.dim(), 0), c);
    r.prec_ = std::min(r.prec_, f.prec());
    return r;
  }

  const OpSpace& space() const { return sp_; }
  int dim() const { return sp_.dim(); }
  int32_t prec() const { return prec_; }
  const std::map<Key, PadicScalar>& terms() const { return terms_; }
  bool zero_at_prec() const { return terms_.empty(); }

  void add_term(const Exp& a, const Exp& b, PadicScalar c) {
    if ((int)a.size() != dim() || (int)b.size() != dim())
      throw DomainError("term dimension mismatch");
    if (!sp_.win.contains(a)) throw OverflowError("x-exponent outside window");
    for (auto k : b)
      if (k < 0 || k > sp_.K) throw OverflowError("divided-power order outside cap");
    prec_ = std::min(prec_, c.prec());
    Key key{a, b};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      if (!c.zero_at_prec()) terms_.emplace(std::move(key), std::move(c));
    } else {
      it->second += c;
      if (it->second.zero_at_prec()) terms_.erase(it);
    }
  }

  friend DiffOp operator+(const DiffOp& P, const DiffOp& Q) {
    DiffOp r = P;
    r.prec_ = std::min(P.prec_, Q.prec_);
    for (auto& [k, c] : Q.terms_) r.add_term(k.first, k.second, c);
    return r;
  }
  DiffOp operator-() const {
    DiffOp r(sp_);
    r.prec_ = prec_;
    for (auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
  }
  friend DiffOp operator-(const DiffOp& P, const DiffOp& Q) { return P + (-Q); }

  DiffOp scaled(const PadicScalar& c) const {
    DiffOp r(sp_);
    r.prec_ = std::min(prec_, c.prec());
    for (auto& [k, co] : terms_) {
      PadicScalar x = co * c;
      if (!x.zero_at_prec()) r.terms_.emplace(k, std::move(x));
    }
    return r;
  }

  friend DiffOp operator*(const DiffOp& P, const DiffOp& Q) { return op_mul(P, Q); }

  // normal form of the composition P o Q
  static DiffOp op_mul(const DiffOp& P, const DiffOp& Q) {
    DiffOp r(P.sp_);
    r.prec_ = std::min(P.prec_, Q.prec_);
    const int d = P.dim();
    for (auto& [kp, cp] : P.terms_) {
      const Exp& a = kp.first;
      const Exp& b = kp.second;
      for (auto& [kq, cq] : Q.terms_) {
        const Exp& a2 = kq.first;
        const Exp& b2 = kq.second;
        // enumerate j with 0 <= j_i <= b_i and (a2_i >= 0 ? j_i <= a2_i : true)
        Exp jmax(d);
        for (int i = 0; i < d; ++i)
          jmax[i] = a2[i] >= 0 ? std::min(b[i], a2[i]) : b[i];
        Exp j(d, 0);
        while (true) {
          PadicScalar coef = cp * cq;
          Exp ra(d), rb(d);
          for (int i = 0; i < d; ++i) {
            if (j[i] > 0) coef *= padic_binomial(a2[i], j[i], P.sp_.p, P.sp_.prec);
            rb[i] = b[i] - j[i] + b2[i];
            ra[i] = a[i] + a2[i] - j[i];
            if (b2[i] > 0 && rb[i] != b2[i])
              coef *= padic_binomial(rb[i], b2[i], P.sp_.p, P.sp_.prec);
          }
          r.add_term(ra, rb, std::move(coef));
          // odometer over j
          int i = 0;
          for (; i < d; ++i) {
            if (j[i] < jmax[i]) {
              ++j[i];
              break;
            }
            j[i] = 0;
          }
          if (i == d) break;
        }
      }
    }
    return r;
  }

  // del^[b](x^e) = prod C(e_i, b_i) x^{e-b}, extended linearly
  static LaurentPoly apply(const DiffOp& P, const LaurentPoly& f) {
    LaurentPoly r = LaurentPoly::zero(P.sp_.p, f.window(), std::min(P.prec_, f.prec()));
    for (auto& [kp, cp] : P.terms_) {
      const Exp& a = kp.first;
      const Exp& b = kp.second;
      for (auto& [e, cf] : f.terms()) {
        PadicScalar coef = cp * cf;
        bool vanish = false;
        Exp re(P.dim());
        for (int i = 0; i < P.dim(); ++i) {
          if (e[i] >= 0 && e[i] < b[i]) {
            vanish = true;
            break;
          }
          if (b[i] > 0) coef *= padic_binomial(e[i], b[i], P.sp_.p, P.sp_.prec);
          re[i] = a[i] + e[i] - b[i];
        }
        if (!vanish) r.add_term(re, std::move(coef));
      }
    }
    return r;
  }

  // formal adjoint: x -> x, del^[k] -> (-1)^{|k|} del^[k], products reversed
  DiffOp transpose() const {
    DiffOp r(sp_);
    r.prec_ = prec_;
    for (auto& [k, c] : terms_) {
      const Exp& a = k.first;
      const Exp& b = k.second;
      int64_t tot = 0;
      for (auto v : b) tot += v;
      PadicScalar sc = (tot % 2 == 0) ? c : -c;
      // (-1)^{|b|} del^[b] x^a in normal form
      DiffOp db = DiffOp::term(sp_, Exp(dim(), 0), b, std::move(sc));
      DiffOp xa = DiffOp::term(sp_, a, Exp(dim(), 0), PadicScalar::one(sp_.p, c.prec()));
      r = r + op_mul(db, xa);
    }
    return r;
  }

  // coefficients relative to del^{<b>_(m)} = q_b^(m)! del^[b]
  struct LevelTerm {
    Exp a, b;
    PadicScalar coef;  // c_{a,b} / prod q_{b_i}^{(m)}!
  };
  std::vector<LevelTerm> to_level(int32_t m) const {
    std::vector<LevelTerm> out;
    for (auto& [k, c] : terms_) {
      PadicScalar v = c;
      for (int i = 0; i < dim(); ++i) {
        int64_t q = q_floor(k.second[i], sp_.p, m);
        if (q > 1) v = v / factorial_scalar(q);
      }
      out.push_back({k.first, k.second, std::move(v)});
    }
    return out;
  }
  static DiffOp from_level(const OpSpace& sp, const std::vector<LevelTerm>& ts, int32_t m) {
    DiffOp r(sp);
    for (auto& t : ts) {
      PadicScalar v = t.coef;
      for (int i = 0; i < sp.dim(); ++i) {
        int64_t q = q_floor(t.b[i], sp.p, m);
        if (q > 1) v *= factorial_scalar_of(sp.p, sp.prec, q);
      }
      r.add_term(t.a, t.b, std::move(v));
    }
    return r;
  }

  GaugeReport gauge(int32_t m, GaugeMode mode) const {
    GaugeReport rep;
    rep.level = m;
    rep.slack = RationalValuation::infinite();
    for (auto& [k, c] : terms_) {
      int64_t penalty = 0;  // in units of 1/(p-1)
      if (mode == GaugeMode::LevelBasis) {
        for (int i = 0; i < dim(); ++i)
          penalty += val_factorial_int(q_floor(k.second[i], sp_.p, m), sp_.p) * (sp_.p - 1);
      } else {
        for (int i = 0; i < dim(); ++i) {
          int64_t e = k.first[i];
          int64_t data = (mode == GaugeMode::EhatInfinity) ? std::max<int64_t>(e, 0)
                                                           : std::max<int64_t>(-e, 0);
          penalty += nu_m(data, sp_.p, m) * (sp_.p - 1);
        }
      }
      RationalValuation v = c.val();
      RationalValuation slack =
          v.is_finite() ? RationalValuation::finite(v.num - penalty, sp_.p - 1)
                        : RationalValuation::exhausted(v.num - penalty, sp_.p - 1);
      if (slack < rep.slack) {
        rep.slack = slack;
        rep.offendingTerm = k;
      }
    }
    rep.member = rep.slack.ge(0, 1);
    if (rep.member) rep.offendingTerm.reset();
    return rep;
  }

  static bool eq_mod(const DiffOp& P, const DiffOp& Q, int32_t t) {
    if (P.prec_ < t || Q.prec_ < t) return false;
    DiffOp d = P - Q;
    for (auto& [k, c] : d.terms_)
      if (!c.vanishes_mod(t)) return false;
    return true;
  }
  bool vanishes_mod(int32_t t) const {
    if (prec_ < t) return false;
    for (auto& [k, c] : terms_)
      if (!c.vanishes_mod(t)) return false;
    return true;
  }

  std::string str(const std::vector<std::string>& xs, const std::vector<std::string>& ds) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [k, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.str() << ")";
      for (size_t i = 0; i < k.first.size(); ++i)
        if (k.first[i] != 0)
          os << "*" << xs[i] << (k.first[i] == 1 ? "" : "^" + std::to_string(k.first[i]));
      for (size_t i = 0; i < k.second.size(); ++i)
        if (k.second[i] != 0) os << "*" << ds[i] << "^[" << k.second[i] << "]";
    }
    return os.str();
  }

 private:
  PadicScalar factorial_scalar(int64_t k) const { return factorial_scalar_of(sp_.p, sp_.prec, k); }

 public:
  static PadicScalar factorial_scalar_of(int32_t p, int32_t prec, int64_t k) {
    PadicScalar r = PadicScalar::one(p, prec + (int32_t)(val_factorial_int(k, p) * (p - 1)) + 2);
    for (int64_t i = 2; i <= k; ++i) r = r.mul_int(i);
    return r;
  }

 private:
  OpSpace sp_;
  int32_t prec_ = INT32_MAX;
  std::map<Key, PadicScalar> terms_;
};

inline DiffOp op_mul(const DiffOp& P, const DiffOp& Q) { return DiffOp::op_mul(P, Q); }
inline LaurentPoly apply(const DiffOp& P, const LaurentPoly& f) { return DiffOp::apply(P, f); }

}  // namespace padicalc
