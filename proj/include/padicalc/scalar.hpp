#pragma once
// Exact arithmetic in V = Z_p[pi]/(pi^{p-1} + p) and its fraction field.
//
// An element is stored as a canonical pi-adic digit string
//     sum_{i >= lo} d_i * pi^i,   0 <= d_i < p,
// known modulo pi^prec.  The defining relation enters only through the carry
// rule p * pi^i = -pi^{i + p - 1}.  For p = 2 this is the negabinary system
// with pi = -2.  Every operation tracks the absolute precision of its result,
// so precision exhaustion is visible instead of silent.

#include <cassert>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "padicalc/params.hpp"

namespace padicalc {

// p-adic valuation with denominator p-1 (so v(pi) = 1/(p-1), v(p) = 1).
// `Exhausted` marks a value that vanishes to the full stored precision.
struct RationalValuation {
  enum class Kind { Finite, Exhausted, Infinite };
  int64_t num = 0;  // valuation = num / den
  int32_t den = 1;
  Kind kind = Kind::Finite;

  static RationalValuation finite(int64_t n, int32_t d) { return {n, d, Kind::Finite}; }
  static RationalValuation infinite() { return {0, 1, Kind::Infinite}; }
  static RationalValuation exhausted(int64_t atLeast, int32_t d) {
    return {atLeast, d, Kind::Exhausted};
  }
  bool is_finite() const { return kind == Kind::Finite; }
  // compares by value; Infinite/Exhausted compare as large
  bool operator<(const RationalValuation& o) const {
    auto rank = [](Kind k) { return k == Kind::Finite ? 0 : 1; };
    if (rank(kind) != rank(o.kind)) return rank(kind) < rank(o.kind);
    return (__int128)num * o.den < (__int128)o.num * den;
  }
  bool ge(int64_t n, int32_t d) const {
    if (kind != Kind::Finite) return true;
    return (__int128)num * d >= (__int128)n * den;
  }
  std::string str() const {
    if (kind == Kind::Infinite) return "inf";
    std::ostringstream os;
    if (kind == Kind::Exhausted) os << ">=";
    if (num % den == 0)
      os << num / den;
    else
      os << num << "/" << den;
    return os.str();
  }
};

class PadicScalar {
 public:
  PadicScalar() = default;

  static PadicScalar zero(int32_t p, int32_t prec) { return PadicScalar(p, 0, prec, {}); }
  static PadicScalar one(int32_t p, int32_t prec) { return from_int(p, 1, prec); }
  static PadicScalar pi(int32_t p, int32_t prec, int32_t e = 1) {
    PadicScalar r(p, e, prec, {});
    if (e < prec) r.digits_ = {1};
    r.trim();
    return r;
  }

  static PadicScalar from_int(int32_t p, int64_t n, int32_t prec) {
    // n = sum a_j p^j with p^j = (-1)^j pi^{(p-1) j}
    std::vector<int64_t> c;
    bool neg = n < 0;
    uint64_t u = neg ? (uint64_t)(-(n + 1)) + 1 : (uint64_t)n;
    int j = 0;
    while (u != 0) {
      int64_t a = (int64_t)(u % (uint64_t)p);
      u /= (uint64_t)p;
      size_t pos = (size_t)j * (size_t)(p - 1);
      if (c.size() <= pos) c.resize(pos + 1, 0);
      int64_t v = (j % 2 == 0) ? a : -a;
      c[pos] += neg ? -v : v;
      ++j;
    }
    return make(p, 0, std::move(c), prec);
  }

  // builds the canonical form of sum c[i] * pi^{base+i} mod pi^prec
  static PadicScalar make(int32_t p, int32_t base, std::vector<int64_t> c, int32_t prec) {
    if (base >= prec || c.empty()) return PadicScalar(p, 0, prec, {});
    if ((int64_t)c.size() > (int64_t)prec - base) c.resize((size_t)(prec - base));
    for (size_t i = 0; i < c.size(); ++i) {
      int64_t d = c[i] % p;
      if (d < 0) d += p;
      int64_t carry = (c[i] - d) / p;
      c[i] = d;
      if (carry != 0) {
        size_t j = i + (size_t)(p - 1);
        if ((int64_t)base + (int64_t)j < prec) {
          if (c.size() <= j) c.resize(j + 1, 0);
          c[j] -= carry;
        }
      }
    }
    PadicScalar r;
    r.p_ = p;
    r.lo_ = base;
    r.prec_ = prec;
    r.digits_.assign(c.begin(), c.end());
    r.trim();
    return r;
  }

  int32_t prime() const { return p_; }
  int32_t prec() const { return prec_; }
  bool zero_at_prec() const { return digits_.empty(); }

  // valuation in pi-units; nullopt means "vanishes mod pi^prec"
  std::optional<int64_t> val_pi() const {
    if (digits_.empty()) return std::nullopt;
    return lo_;
  }
  RationalValuation val() const {
    if (digits_.empty()) return RationalValuation::exhausted(prec_, p_ - 1);
    return RationalValuation::finite(lo_, p_ - 1);
  }
  bool is_unit() const { return !digits_.empty() && lo_ == 0; }

  PadicScalar with_prec(int32_t prec) const {
    std::vector<int64_t> c(digits_.begin(), digits_.end());
    return make(p_, lo_, std::move(c), std::min(prec, prec_));
  }

  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
    assert(a.p_ == b.p_);
    int32_t prec = std::min(a.prec_, b.prec_);
    if (a.digits_.empty()) return b.with_prec(prec);
    if (b.digits_.empty()) return a.with_prec(prec);
    int32_t base = std::min(a.lo_, b.lo_);
    std::vector<int64_t> c(std::max(a.lo_ + (int64_t)a.digits_.size(),
                                    b.lo_ + (int64_t)b.digits_.size()) -
                               base,
                           0);
    for (size_t i = 0; i < a.digits_.size(); ++i) c[a.lo_ - base + i] += a.digits_[i];
    for (size_t i = 0; i < b.digits_.size(); ++i) c[b.lo_ - base + i] += b.digits_[i];
    return make(a.p_, base, std::move(c), prec);
  }

  PadicScalar operator-() const {
    std::vector<int64_t> c(digits_.begin(), digits_.end());
    for (auto& d : c) d = -d;
    return make(p_, lo_, std::move(c), prec_);
  }

  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + (-b); }

  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
    assert(a.p_ == b.p_);
    // known digits of ab: positions < min(prec_a + v_b, prec_b + v_a)
    int64_t va = a.digits_.empty() ? a.prec_ : a.lo_;
    int64_t vb = b.digits_.empty() ? b.prec_ : b.lo_;
    int32_t prec = (int32_t)std::min<int64_t>(std::min(a.prec_ + vb, b.prec_ + va),
                                              (int64_t)INT32_MAX);
    if (a.digits_.empty() || b.digits_.empty())
      return PadicScalar(a.p_, 0, prec, {});
    int32_t base = a.lo_ + b.lo_;
    std::vector<int64_t> c((size_t)std::max<int64_t>(
                               0, std::min<int64_t>((int64_t)a.digits_.size() +
                                                        (int64_t)b.digits_.size() - 1,
                                                    (int64_t)prec - base)),
                           0);
    for (size_t i = 0; i < a.digits_.size(); ++i) {
      if (a.digits_[i] == 0) continue;
      for (size_t j = 0; j < b.digits_.size(); ++j) {
        size_t k = i + j;
        if (k >= c.size()) break;
        c[k] += (int64_t)a.digits_[i] * b.digits_[j];
      }
    }
    return make(a.p_, base, std::move(c), prec);
  }

  PadicScalar& operator+=(const PadicScalar& o) { return *this = *this + o; }
  PadicScalar& operator-=(const PadicScalar& o) { return *this = *this - o; }
  PadicScalar& operator*=(const PadicScalar& o) { return *this = *this * o; }

  PadicScalar mul_int(int64_t n) const { return *this * from_int(p_, n, prec_ + std::abs(lo_) + 4); }

  // multiply by pi^e (e may be negative); absolute precision shifts with it
  PadicScalar shift(int32_t e) const {
    PadicScalar r = *this;
    r.lo_ += e;
    r.prec_ += e;
    return r;
  }

  PadicScalar inv() const {
    if (digits_.empty()) throw NonUnitError("inversion of a value that vanishes at working precision");
    int32_t v = lo_;
    // unit part u = x * pi^{-v}, solve u*y = 1 digit by digit
    PadicScalar u = shift(-v);
    int32_t goal = u.prec_;
    if (goal <= 0) throw NonUnitError("no precision left to invert");
    int32_t p = p_;
    int64_t u0inv = mod_inverse(u.digits_[0], p);
    PadicScalar y(p, 0, goal, {});
    PadicScalar r = one(p, goal);  // residual 1 - u*y
    for (int32_t j = 0; j < goal; ++j) {
      int64_t rj = r.digit_at(j);
      if (rj == 0) continue;
      int64_t d = (rj * u0inv) % p;
      if (d < 0) d += p;
      if (d == 0) continue;
      PadicScalar step = pi(p, goal, 0);
      step.digits_ = {(int32_t)d};
      step.lo_ = j;
      step.trim();
      y += step;
      r -= u * step;
    }
    return y.shift(-v);
  }

  friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) { return a * b.inv(); }

  PadicScalar pow(int64_t e) const {
    assert(e >= 0);
    PadicScalar r = one(p_, prec_ + 2 * (p_ - 1));
    PadicScalar b = *this;
    while (e > 0) {
      if (e & 1) r = r * b;
      e >>= 1;
      b = b * b;
    }
    return r;
  }

  int64_t digit_at(int64_t pos) const {
    if (digits_.empty() || pos < lo_ || pos >= lo_ + (int64_t)digits_.size()) return 0;
    return digits_[pos - lo_];
  }
  int32_t lo() const { return lo_; }
  const std::vector<int32_t>& digits() const { return digits_; }

  // equality of the digit strings below pi^t; requires both known to t
  static bool eq_mod(const PadicScalar& a, const PadicScalar& b, int32_t t) {
    if (a.prec_ < t || b.prec_ < t) return false;  // precision exhausted counts as failure
    PadicScalar d = a - b;
    return d.digits_.empty() || d.lo_ >= t;
  }
  // congruence to zero below pi^t
  bool vanishes_mod(int32_t t) const {
    if (prec_ < t) return false;
    return digits_.empty() || lo_ >= t;
  }

  std::string str() const {
    if (digits_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < digits_.size(); ++i) {
      if (digits_[i] == 0) continue;
      int64_t e = lo_ + (int64_t)i;
      if (!first) os << " + ";
      first = false;
      if (e == 0)
        os << digits_[i];
      else if (digits_[i] == 1)
        os << "pi" << (e == 1 ? "" : "^" + std::to_string(e));
      else
        os << digits_[i] << "*pi" << (e == 1 ? "" : "^" + std::to_string(e));
    }
    return os.str();
  }

 private:
  PadicScalar(int32_t p, int32_t lo, int32_t prec, std::vector<int32_t> d)
      : p_(p), lo_(lo), prec_(prec), digits_(std::move(d)) {}

  static int64_t mod_inverse(int64_t a, int64_t p) {
    int64_t r = 1, b = a % p, e = p - 2;  // Fermat
    while (e > 0) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  }

  void trim() {
    size_t a = 0;
    while (a < digits_.size() && digits_[a] == 0) ++a;
    size_t b = digits_.size();
    while (b > a && digits_[b - 1] == 0) --b;
    if (a > 0 || b < digits_.size()) {
      digits_ = std::vector<int32_t>(digits_.begin() + a, digits_.begin() + b);
      lo_ += (int32_t)a;
    }
    if (digits_.empty()) lo_ = 0;
  }

  int32_t p_ = 0;
  int32_t lo_ = 0;
  int32_t prec_ = 0;
  std::vector<int32_t> digits_;
};

// named arithmetic entry point mirroring the module surface
enum class ScalarOp { Add, Sub, Mul, Inv };
inline PadicScalar scalar_arith(const PadicScalar& a, const PadicScalar& b, ScalarOp op) {
  switch (op) {
    case ScalarOp::Add: return a + b;
    case ScalarOp::Sub: return a - b;
    case ScalarOp::Mul: return a * b;
    case ScalarOp::Inv: return a.inv();
  }
  throw DomainError("bad op");
}

}  // namespace padicalc
