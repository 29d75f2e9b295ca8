#pragma once
// Finitely supported Laurent polynomials over V: exponent vectors in a
// declared per-variable window, coefficients PadicScalar.  Arithmetic that
// would leave the window raises OverflowError; nothing is truncated silently.

#include <map>
#include <sstream>
#include <vector>

#include "padicalc/scalar.hpp"

namespace padicalc {

using Exp = std::vector<int32_t>;

struct Window {
  std::vector<int32_t> lo, hi;  // inclusive, one entry per variable

  static Window uniform(int dim, int32_t l, int32_t h) {
    Window w;
    w.lo.assign(dim, l);
    w.hi.assign(dim, h);
    return w;
  }
  int dim() const { return (int)lo.size(); }
  bool contains(const Exp& e) const {
    for (size_t i = 0; i < lo.size(); ++i)
      if (e[i] < lo[i] || e[i] > hi[i]) return false;
    return true;
  }
};

class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(int32_t p, Window win, int32_t prec)
      : p_(p), win_(std::move(win)), prec_(prec) {}

  static LaurentPoly zero(int32_t p, const Window& w, int32_t prec) {
    return LaurentPoly(p, w, prec);
  }
  static LaurentPoly monomial(int32_t p, const Window& w, const Exp& e, PadicScalar c) {
    LaurentPoly f(p, w, c.prec());
    f.add_term(e, std::move(c));
    return f;
  }
  static LaurentPoly constant(int32_t p, const Window& w, PadicScalar c) {
    return monomial(p, w, Exp(w.dim(), 0), std::move(c));
  }
  static LaurentPoly one(int32_t p, const Window& w, int32_t prec) {
    return constant(p, w, PadicScalar::one(p, prec));
  }
  static LaurentPoly variable(int32_t p, const Window& w, int i, int32_t prec, int32_t e = 1) {
    Exp ex(w.dim(), 0);
    ex[i] = e;
    return monomial(p, w, ex, PadicScalar::one(p, prec));
  }

  int dim() const { return win_.dim(); }
  int32_t prime() const { return p_; }
  int32_t prec() const { return prec_; }
  const Window& window() const { return win_; }
  const std::map<Exp, PadicScalar>& terms() const { return coef_; }
  bool zero_at_prec() const { return coef_.empty(); }

  void add_term(const Exp& e, PadicScalar c) {
    if ((int)e.size() != dim()) throw DomainError("exponent dimension mismatch");
    if (!win_.contains(e)) throw OverflowError("exponent outside window");
    prec_ = std::min(prec_, c.prec());
    auto it = coef_.find(e);
    if (it == coef_.end()) {
      if (!c.zero_at_prec()) coef_.emplace(e, std::move(c));
    } else {
      it->second += c;
      if (it->second.zero_at_prec()) coef_.erase(it);
    }
  }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r = a;
    r.prec_ = std::min(a.prec_, b.prec_);
    for (auto& [e, c] : b.coef_) r.add_term(e, c);
    return r;
  }
  LaurentPoly operator-() const {
    LaurentPoly r(p_, win_, prec_);
    for (auto& [e, c] : coef_) r.coef_.emplace(e, -c);
    return r;
  }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r(a.p_, a.win_, std::min(a.prec_, b.prec_));
    for (auto& [ea, ca] : a.coef_)
      for (auto& [eb, cb] : b.coef_) {
        Exp e(ea);
        for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  LaurentPoly scaled(const PadicScalar& c) const {
    LaurentPoly r(p_, win_, std::min(prec_, c.prec()));
    for (auto& [e, co] : coef_) {
      PadicScalar x = co * c;
      if (!x.zero_at_prec()) r.coef_.emplace(e, std::move(x));
    }
    return r;
  }

  PadicScalar coeff(const Exp& e) const {
    auto it = coef_.find(e);
    if (it != coef_.end()) return it->second;
    return PadicScalar::zero(p_, prec_);
  }
  PadicScalar constant_term() const { return coeff(Exp(dim(), 0)); }

  // substitution x_i -> g_i; used by the Frobenius pull-back and the
  // canonical-model restriction maps
  LaurentPoly substitute(const std::vector<LaurentPoly>& g) const {
    if ((int)g.size() != dim()) throw DomainError("substitution arity mismatch");
    const Window& w = g[0].window();
    LaurentPoly r = LaurentPoly::zero(p_, w, prec_);
    for (auto& [e, c] : coef_) {
      LaurentPoly t = LaurentPoly::constant(p_, w, c);
      for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (e[i] < 0) throw DomainError("negative exponent in substitution");
        for (int32_t j = 0; j < e[i]; ++j) t = t * g[i];
      }
      r = r + t;
    }
    return r;
  }

  static bool eq_mod(const LaurentPoly& a, const LaurentPoly& b, int32_t t) {
    if (a.prec_ < t || b.prec_ < t) return false;
    LaurentPoly d = a - b;
    for (auto& [e, c] : d.coef_)
      if (!c.vanishes_mod(t)) return false;
    return true;
  }
  bool vanishes_mod(int32_t t) const {
    if (prec_ < t) return false;
    for (auto& [e, c] : coef_)
      if (!c.vanishes_mod(t)) return false;
    return true;
  }

  std::string str(const std::vector<std::string>& names) const {
    if (coef_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : coef_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.str() << ")";
      for (size_t i = 0; i < e.size(); ++i)
        if (e[i] != 0) os << "*" << names[i] << (e[i] == 1 ? "" : "^" + std::to_string(e[i]));
    }
    return os.str();
  }

 private:
  int32_t p_ = 0;
  Window win_;
  int32_t prec_ = 0;
  std::map<Exp, PadicScalar> coef_;
};

}  // namespace padicalc
