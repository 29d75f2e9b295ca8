#pragma once
// Valuation combinatorics: the carry-counting functions nu_m and q_k^(m),
// factorial and binomial valuations via Legendre's formula, exact p-adic
// binomial coefficients (valuation + unit part, no big integers), and the
// pointwise checker for the five inequalities relating them.

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "padicalc/scalar.hpp"

namespace padicalc {

// nu_m(k): 0 for k < 0; otherwise the rounded-up quotient of k by p^{m+1}
inline int64_t nu_m(int64_t k, int32_t p, int32_t m) {
  if (k < 0) return 0;
  int64_t P = ipow(p, m + 1);
  return (k + P - 1) / P;
}

inline int64_t nu_m(const std::vector<int64_t>& ks, int32_t p, int32_t m) {
  int64_t s = 0;
  for (auto k : ks) s += nu_m(k, p, m);
  return s;
}

// q_k^(m): quotient of the division of k >= 0 by p^m
inline int64_t q_floor(int64_t k, int32_t p, int32_t m) {
  if (k < 0) throw DomainError("q_k^(m) needs k >= 0");
  return k / ipow(p, m);
}

inline int64_t digit_sum(int64_t k, int32_t p) {
  int64_t s = 0;
  while (k > 0) {
    s += k % p;
    k /= p;
  }
  return s;
}

// v_p(k!) = (k - s_p(k)) / (p - 1)
inline int64_t val_factorial_int(int64_t k, int32_t p) {
  if (k < 0) throw DomainError("factorial of negative integer");
  return (k - digit_sum(k, p)) / (p - 1);
}
inline RationalValuation val_factorial(int64_t k, int32_t p) {
  return RationalValuation::finite(k - digit_sum(k, p), p - 1);
}

// v_p of the generalized binomial C(n, k), n in Z, k >= 0; C(n,k) is an
// integer, zero exactly when 0 <= n < k.
inline RationalValuation val_binomial(int64_t n, int64_t k, int32_t p) {
  if (k < 0) throw DomainError("binomial lower index < 0");
  if (k == 0) return RationalValuation::finite(0, 1);
  if (n >= 0) {
    if (k > n) return RationalValuation::infinite();
    int64_t v = (digit_sum(k, p) + digit_sum(n - k, p) - digit_sum(n, p));
    return RationalValuation::finite(v, p - 1);
  }
  // C(n,k) = (-1)^k C(k-n-1, k)
  return val_binomial(k - n - 1, k, p);
}

// factorial units: k! = p^{v} * unit, unit returned mod p^M (M = pm.prec)
class FactorialTable {
 public:
  FactorialTable(int32_t p, int32_t pPow, int64_t upTo) : p_(p) {
    mod_ = 1;
    for (int i = 0; i < pPow; ++i) {
      if (mod_ > (int64_t)1 << 61) throw OverflowError("factorial table modulus too large");
      mod_ *= p;
    }
    unit_.reserve(upTo + 1);
    val_.reserve(upTo + 1);
    unit_.push_back(1);
    val_.push_back(0);
    for (int64_t k = 1; k <= upTo; ++k) {
      int64_t u = k, v = 0;
      while (u % p == 0) {
        u /= p;
        ++v;
      }
      unit_.push_back((int64_t)((__int128)unit_.back() * (u % mod_) % mod_));
      val_.push_back(val_.back() + v);
    }
  }
  int64_t unit(int64_t k) const { return unit_.at(k); }
  int64_t val(int64_t k) const { return val_.at(k); }
  int64_t modulus() const { return mod_; }
  int64_t unit_inv(int64_t k) const { return inv_mod(unit_.at(k)); }

  int64_t inv_mod(int64_t a) const {  // a must be a unit mod p^e
    // Fermat-Euler: phi(p^e) = p^{e-1}(p-1)
    int64_t e = mod_ / p_ * (p_ - 1) - 1;
    int64_t r = 1, b = a % mod_;
    while (e > 0) {
      if (e & 1) r = (int64_t)((__int128)r * b % mod_);
      b = (int64_t)((__int128)b * b % mod_);
      e >>= 1;
    }
    return r;
  }

 private:
  int32_t p_;
  int64_t mod_;
  std::vector<int64_t> unit_, val_;
};

// exact generalized binomial C(n, k) as a scalar, via p-part stripping
inline PadicScalar padic_binomial(int64_t n, int64_t k, int32_t p, int32_t prec) {
  if (k < 0) throw DomainError("binomial lower index < 0");
  if (k == 0) return PadicScalar::one(p, prec);
  bool negate = false;
  if (n < 0) {  // C(n,k) = (-1)^k C(k-n-1,k)
    n = k - n - 1;
    negate = (k % 2) != 0;
  }
  if (k > n) return PadicScalar::zero(p, prec);
  // C(n,k) = prod_{i=1..k} (n-k+i)/i
  int64_t v = 0;
  int64_t pPow = prec / (p - 1) + 2;
  int64_t mod = 1;
  for (int i = 0; i < pPow && mod < ((int64_t)1 << 61); ++i) mod *= p;
  int64_t unit = 1;
  auto strip = [&](int64_t x, int sign) {
    int64_t vv = 0;
    while (x % p == 0) {
      x /= p;
      ++vv;
    }
    v += sign * vv;
    if (sign > 0)
      unit = (int64_t)((__int128)unit * (x % mod) % mod);
    else {
      // invert x mod p^e
      int64_t e = mod / p * (p - 1) - 1, r = 1, b = x % mod;
      while (e > 0) {
        if (e & 1) r = (int64_t)((__int128)r * b % mod);
        b = (int64_t)((__int128)b * b % mod);
        e >>= 1;
      }
      unit = (int64_t)((__int128)unit * r % mod);
    }
  };
  for (int64_t i = 1; i <= k; ++i) {
    strip(n - k + i, +1);
    strip(i, -1);
  }
  // the unit is only known mod p^pPow; cap the precision accordingly
  PadicScalar u = PadicScalar::from_int(p, unit, (int32_t)(pPow * (p - 1)));
  PadicScalar r = u.shift((int32_t)(v * (p - 1)));
  if (v % 2 != 0) r = -r;  // p^v = (-1)^v pi^{v(p-1)}
  if (negate) r = -r;
  return r;
}

// ---------------------------------------------------------------------------
// The five displayed inequalities.  All are checked pointwise; the report
// carries the first counterexample found.

struct EstimationRange {
  int32_t p = 3;
  int64_t kMax = 1000;   // scalar ranges for k, l
  int32_t nMax = 3;      // multi-index length
  int32_t mMax = 4;      // level range
  int64_t boxN2 = 100;   // exhaustive per-coordinate bound for n = 2
  int64_t boxN3 = 21;    // exhaustive per-coordinate bound for n = 3
  uint64_t seed = 1;
  int64_t randomSamples = 2000;
};

struct EstimationReport {
  bool ok = true;
  std::string counterexample;
  int64_t pointsChecked = 0;
};

namespace detail {
inline long double log_p(long double x, int32_t p) { return std::log(x) / std::log((long double)p); }

// v >= A/(p-1) - n log_p(B) - C, with margin guard
inline bool lower_bound_ok(long double v, long double A, int32_t p, long double n, long double B,
                           long double C) {
  long double rhs = A / (p - 1) - n * detail::log_p(B, p) - C;
  return v >= rhs - 1e-9L;
}
}  // namespace detail

// one multi-index point of inequalities (1)-(4)
inline std::optional<std::string> check_estimation_point(const std::vector<int64_t>& kv, int32_t p,
                                                         int32_t m) {
  int64_t n = (int64_t)kv.size();
  int64_t total = 0;
  for (auto k : kv) total += k;
  // (1) |k|/(p-1) - n log_p(|k|+1) - n <= v_p(k!) <= |k|/(p-1)
  int64_t vfacI = 0;
  for (auto k : kv) vfacI += val_factorial_int(k, p);
  if (vfacI * (p - 1) > total) return "ineq1 upper failed";
  if (!detail::lower_bound_ok((long double)vfacI, (long double)total, p, (long double)n,
                              (long double)(total + 1), (long double)n))
    return "ineq1 lower failed";
  // (2) same for q_k^{(m)}! with p^m(p-1) and n*p/(p-1)
  int64_t vqI = 0;
  for (auto k : kv) vqI += val_factorial_int(q_floor(k, p, m), p);
  if (vqI * ipow(p, m) * (p - 1) > total) return "ineq2 upper failed";
  {
    long double rhs = (long double)total / ((long double)ipow(p, m) * (p - 1)) -
                      (long double)n * detail::log_p((long double)(total + 1), p) -
                      (long double)n * p / (p - 1);
    if (!((long double)vqI >= rhs - 1e-9L)) return "ineq2 lower failed";
  }
  // (3) |l|/p^{m+1} <= nu_m(l) <= |l|/p^{m+1} + n
  {
    int64_t nu = nu_m(kv, p, m);
    int64_t P = ipow(p, m + 1);
    if (total > nu * P) return "ineq3 lower failed";
    if (nu * P > total + n * P) return "ineq3 upper failed";
  }
  // (4) 0 <= nu_m(l) - nu_m(|l|) <= n
  {
    int64_t gap = nu_m(kv, p, m) - nu_m(total, p, m);
    if (gap < 0 || gap > n) return "ineq4 failed";
  }
  return std::nullopt;
}

inline EstimationReport check_estimations(const EstimationRange& r) {
  EstimationReport rep;
  auto fail = [&](const std::string& what, const std::vector<int64_t>& kv, int32_t m) {
    rep.ok = false;
    std::ostringstream os;
    os << what << " at p=" << r.p << " m=" << m << " k=(";
    for (size_t i = 0; i < kv.size(); ++i) os << (i ? "," : "") << kv[i];
    os << ")";
    rep.counterexample = os.str();
  };

  // digit sums reused across the n = 1 sweep
  for (int32_t m = 0; m <= r.mMax && rep.ok; ++m) {
    for (int64_t k = 0; k <= r.kMax && rep.ok; ++k) {
      ++rep.pointsChecked;
      if (auto w = check_estimation_point({k}, r.p, m)) fail(*w, {k}, m);
    }
  }
  // (5) 0 <= v_p(C(l,r)) <= p(log_p(l)+1), exhaustive over the triangle
  {
    std::vector<int32_t> ds(r.kMax + 1);
    for (int64_t k = 0; k <= r.kMax; ++k) ds[k] = (int32_t)digit_sum(k, r.p);
    for (int64_t l = 1; l <= r.kMax && rep.ok; ++l) {
      long double ub = r.p * (detail::log_p((long double)l, r.p) + 1) + 1e-9L;
      for (int64_t j = 0; j <= l; ++j) {
        ++rep.pointsChecked;
        int64_t v = (ds[j] + ds[l - j] - ds[l]) / (r.p - 1);
        if (v < 0 || (long double)v > ub) {
          fail("ineq5 failed", {l, j}, 0);
          break;
        }
      }
    }
  }
  // n = 2, 3 boxes
  for (int32_t m = 0; m <= r.mMax && rep.ok; ++m) {
    for (int64_t a = 0; a <= r.boxN2 && rep.ok; ++a)
      for (int64_t b = 0; b <= r.boxN2 && rep.ok; ++b) {
        ++rep.pointsChecked;
        if (auto w = check_estimation_point({a, b}, r.p, m)) fail(*w, {a, b}, m);
      }
    for (int64_t a = 0; a <= r.boxN3 && rep.ok; ++a)
      for (int64_t b = 0; b <= r.boxN3 && rep.ok; ++b)
        for (int64_t c = 0; c <= r.boxN3 && rep.ok; ++c) {
          ++rep.pointsChecked;
          if (auto w = check_estimation_point({a, b, c}, r.p, m)) fail(*w, {a, b, c}, m);
        }
  }
  // random large samples up to kMax per coordinate, n in {2,3}
  {
    Rng rng(r.seed);
    for (int64_t t = 0; t < r.randomSamples && rep.ok; ++t) {
      int32_t n = (int32_t)rng.uniform(2, r.nMax);
      int32_t m = (int32_t)rng.uniform(0, r.mMax);
      std::vector<int64_t> kv;
      for (int32_t i = 0; i < n; ++i) kv.push_back(rng.uniform(0, r.kMax));
      ++rep.pointsChecked;
      if (auto w = check_estimation_point(kv, r.p, m)) fail(*w, kv, m);
    }
  }
  return rep;
}

}  // namespace padicalc
