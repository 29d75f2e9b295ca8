#pragma once
// Truncated models of the two-variable overconvergent Weyl algebra and the
// division theory for D = -del_y + pi x:
//
//   - closed-form building blocks S_l, R_l, c_l(r,s) satisfying
//       p^{nu_m(l)} x^l = S_l D + R_l
//     with the certified valuation bound on c_l(r,s);
//   - the iterative division P = Q D + R with R free of x, exploiting
//     [x, del_y] = [D, del_y] = 0 through the single step
//       x^l = pi^{-1} x^{l-1} del_y + pi^{-1} x^{l-1} D;
//   - the chart division by -x'del_y + pi over x' = 1/x;
//   - the augmentation eps' onto the induced module with connection
//     nabla(1) = -pi(x dy + y dx), i.e. del_y . 1 = -pi x,
//     del_x . 1 = del_x - pi y;
//   - the Fourier-quotient normal form A2/(del_x A2 + A2 D) = A1 realized by
//     dividing first and then dropping del_x-terms.
//
// Variable slots: 0 = x (or x' in a chart), 1 = y (or t).

#include <vector>

#include "padicalc/diffop.hpp"
#include "padicalc/linalg.hpp"

namespace padicalc {

enum class Chart { Global, U1V0, U1V1 };

struct DaggerElt {
  DiffOp op;
  Chart chart = Chart::Global;
};

class WeylContext {
 public:
  WeylContext(TruncationParams pm) : pm_(pm) {
    pm_.validate();
    sp_.p = pm_.p;
    sp_.K = pm_.K;
    sp_.prec = pm_.piPrec();
    sp_.win = Window::uniform(2, pm_.degLo, pm_.degHi);
    piScalar_ = PadicScalar::pi(pm_.p, sp_.prec + 4 * (pm_.p - 1));
  }

  const TruncationParams& params() const { return pm_; }
  const OpSpace& space() const { return sp_; }

  // D = -del_y + pi x
  DiffOp dirac() const {
    return DiffOp::coordinate(sp_, 0).scaled(piScalar_) - DiffOp::del(sp_, 1);
  }
  // chart division element: -x'del_t + pi on U1V0, x' t^2 del_t + pi on U1V1
  DiffOp chart_dirac(Chart chart) const {
    DiffOp pi1 = DiffOp::one(sp_).scaled(piScalar_);
    if (chart == Chart::U1V0)
      return pi1 - DiffOp::coordinate(sp_, 0) * DiffOp::del(sp_, 1);
    if (chart == Chart::U1V1) {
      DiffOp t2 = DiffOp::term(sp_, Exp{1, 2}, Exp{0, 0}, PadicScalar::one(pm_.p, sp_.prec));
      return pi1 + t2 * DiffOp::del(sp_, 1);
    }
    throw DomainError("chart_dirac needs a chart element");
  }

  bool is_B2(const DiffOp& P) const {
    for (auto& [k, c] : P.terms())
      if (k.first[0] != 0) return false;
    return true;
  }
  bool in_infprime_class(const DiffOp& P) const {
    for (auto& [k, c] : P.terms())
      if (k.first[0] < 0) return false;
    return true;
  }

  // ---- closed-form building blocks -----------------------------------

  // c_l(r,s) = (-1)^{r-1+s} p^{nu_m(l)}/pi^{l-s} C(l,r) C(r-1,s)
  //            (l-1-s)!/q_{l-1-s}^{(m+2)}!
  PadicScalar coeff_c(int64_t l, int64_t r, int64_t s, int32_t m) const {
    if (!(1 <= r && r <= l && 0 <= s && s <= r - 1)) throw DomainError("coeff_c index range");
    int32_t prec = sp_.prec;
    PadicScalar c = PadicScalar::from_int(pm_.p, ipow(pm_.p, (int)nu_m(l, pm_.p, m)),
                                          prec + (int32_t)(l + 4) * (pm_.p - 1));
    c = c.shift((int32_t)-(l - s));
    c *= padic_binomial(l, r, pm_.p, prec);
    c *= padic_binomial(r - 1, s, pm_.p, prec);
    c *= DiffOp::factorial_scalar_of(pm_.p, prec, l - 1 - s);
    int64_t qf = q_floor(l - 1 - s, pm_.p, m + 2);
    if (qf > 1) c = c / DiffOp::factorial_scalar_of(pm_.p, prec, qf);
    if ((r - 1 + s) % 2 != 0) c = -c;
    return c;
  }

  // exact integer-arithmetic valuation of c_l(r,s), in units of 1/(p-1)
  int64_t coeff_c_valuation_num(int64_t l, int64_t r, int64_t s, int32_t m) const {
    const int32_t p = pm_.p;
    int64_t num = nu_m(l, p, m) * (p - 1) - (l - s);
    auto vb = val_binomial(l, r, p);
    num += vb.num * ((p - 1) / vb.den);
    auto vb2 = val_binomial(r - 1, s, p);
    num += vb2.num * ((p - 1) / vb2.den);
    num += val_factorial_int(l - 1 - s, p) * (p - 1);
    num -= val_factorial_int(q_floor(l - 1 - s, p, m + 2), p) * (p - 1);
    return num;  // valuation = num / (p-1)
  }

  // v_p(c_l(r,s)) >= (p^2-p-1) l / (p^{m+2}(p-1)) - log_p(l+1) - 2
  bool coeff_c_bound_ok(int64_t l, int64_t r, int64_t s, int32_t m) const {
    const int32_t p = pm_.p;
    long double lhs = (long double)coeff_c_valuation_num(l, r, s, m) / (p - 1);
    long double rhs = (long double)(p * (int64_t)p - p - 1) * l /
                          ((long double)ipow(p, m + 2) * (p - 1)) -
                      std::log((long double)(l + 1)) / std::log((long double)p) - 2.0L;
    return lhs >= rhs - 1e-9L;
  }

  // The level-jump certificate.  Integral membership of S_l, R_l in the
  // level-(m+2) gauge holds only for l large (their small-l coefficients can
  // carry a bounded p-power denominator; that is the Q-subscript in the
  // division theorem).  The deficit table quantifies it: dividing any
  // level-m member supported on x-degrees <= Lx moves the gauge slack down
  // by at most max_l deficit(l).
  struct JumpCertificate {
    int64_t deficitNum = 0;   // in units of 1/(p-1)
    int64_t integralFrom = 0; // smallest l0 with deficit(l) = 0 for l0 <= l <= range
  };
  JumpCertificate jump_certificate(int32_t m, int64_t Lx, int64_t range = 0) const {
    JumpCertificate cert;
    if (range < Lx) range = Lx;
    int64_t lastBad = 0;
    for (int64_t l = 1; l <= range; ++l) {
      int64_t deficit = 0;
      // R_l: v_p = nu_m(l) - s_p(l)/(p-1); requirement nu_{m+2}(0) = 0
      int64_t rNum = nu_m(l, pm_.p, m) * (pm_.p - 1) - digit_sum(l, pm_.p);
      deficit = std::max<int64_t>(deficit, -rNum);
      for (int64_t r = 1; r <= l; ++r)
        for (int64_t s = 0; s <= r - 1; ++s) {
          int64_t num = coeff_c_valuation_num(l, r, s, m) +
                        val_factorial_int(q_floor(l - 1 - s, pm_.p, m + 2), pm_.p) * (pm_.p - 1) -
                        nu_m(s, pm_.p, m + 2) * (pm_.p - 1);
          deficit = std::max<int64_t>(deficit, -num);
        }
      if (deficit > 0) lastBad = l;
      if (l <= Lx) cert.deficitNum = std::max(cert.deficitNum, deficit);
    }
    cert.integralFrom = lastBad + 1;
    return cert;
  }

  // S_l and R_l with p^{nu_m(l)} x^l = S_l D + R_l
  std::pair<DiffOp, DiffOp> build_S_R(int64_t l, int32_t m) const {
    if (l < 1) throw DomainError("build_S_R needs l >= 1");
    int32_t prec = sp_.prec;
    DiffOp S(sp_);
    for (int64_t r = 1; r <= l; ++r)
      for (int64_t s = 0; s <= r - 1; ++s) {
        // del_y^{<l-1-s>_(m+2)} x^s = q! x^s del_y^[l-1-s] (x, del_y commute)
        PadicScalar c = coeff_c(l, r, s, m);
        int64_t qf = q_floor(l - 1 - s, pm_.p, m + 2);
        if (qf > 1) c *= DiffOp::factorial_scalar_of(pm_.p, prec, qf);
        S.add_term(Exp{(int32_t)s, 0}, Exp{0, (int32_t)(l - 1 - s)}, c);
      }
    PadicScalar cr = PadicScalar::from_int(pm_.p, ipow(pm_.p, (int)nu_m(l, pm_.p, m)),
                                           prec + (int32_t)(l + 4) * (pm_.p - 1))
                         .shift((int32_t)(-l));
    cr *= DiffOp::factorial_scalar_of(pm_.p, prec, l);
    DiffOp R = DiffOp::term(sp_, Exp{0, 0}, Exp{0, (int32_t)l}, cr);
    return {S, R};
  }

  // ---- division -------------------------------------------------------

  // P = Q (-del_y + pi x) + R with R free of x; top x-degree strictly drops
  // each pass, so the loop terminates inside the window
  std::pair<DaggerElt, DaggerElt> divide_dirac(const DaggerElt& P) const {
    if (P.chart != Chart::Global) throw DomainError("divide_dirac expects the global chart");
    for (auto& [k, c] : P.op.terms())
      if (k.first[0] < 0 || k.first[1] < 0)
        throw DomainError("global-chart elements have non-negative exponents");
    DiffOp D = dirac();
    DiffOp rem = P.op;
    DiffOp Q(sp_);
    PadicScalar piInv = piScalar_.inv();
    while (true) {
      int32_t top = 0;
      for (auto& [k, c] : rem.terms()) top = std::max(top, k.first[0]);
      if (top <= 0) {
        bool hasX = false;
        for (auto& [k, c] : rem.terms()) hasX |= (k.first[0] > 0);
        if (!hasX) break;
      }
      DiffOp T(sp_);
      for (auto& [k, c] : rem.terms()) {
        if (k.first[0] != top) continue;
        Exp a(k.first);
        a[0] -= 1;
        T.add_term(a, k.second, c * piInv);
      }
      if (T.zero_at_prec()) {
        // all top-degree coefficients vanished at working precision
        DiffOp cleaned(sp_);
        for (auto& [k, c] : rem.terms())
          if (k.first[0] != top) cleaned.add_term(k.first, k.second, c);
        rem = cleaned;
        continue;
      }
      Q = Q + T;
      rem = rem - T * D;
    }
    return {DaggerElt{Q, Chart::Global}, DaggerElt{rem, Chart::Global}};
  }

  struct KernelReport {
    bool inputZero = false;
    bool productZero = false;
    bool ok = false;  // product zero only for the zero input
  };
  KernelReport kernel_test(const DiffOp& Q, int32_t t) const {
    KernelReport rep;
    rep.inputZero = Q.vanishes_mod(t);
    rep.productZero = (Q * dirac()).vanishes_mod(t);
    rep.ok = (rep.inputZero == rep.productZero);
    return rep;
  }

  // chart division P = Q (-x'del_t + pi) + R, eliminating negative
  // x'-exponents; on U1V1 the division element is x' t^2 del_t + pi
  std::pair<DaggerElt, DaggerElt> divide_chart(const DaggerElt& P) const {
    if (P.chart == Chart::Global) throw DomainError("divide_chart expects a chart element");
    DiffOp Dp = chart_dirac(P.chart);
    DiffOp rem = P.op;
    DiffOp Q(sp_);
    PadicScalar piInv = piScalar_.inv();
    while (true) {
      int32_t low = 0;
      for (auto& [k, c] : rem.terms()) low = std::min(low, k.first[0]);
      if (low >= 0) break;
      // peel all terms at the most negative exponent with maximal del_x' order
      int32_t kmax = 0;
      for (auto& [k, c] : rem.terms())
        if (k.first[0] == low) kmax = std::max(kmax, k.second[0]);
      DiffOp T(sp_);
      for (auto& [k, c] : rem.terms()) {
        if (k.first[0] != low || k.second[0] != kmax) continue;
        T.add_term(k.first, k.second, c * piInv);
      }
      if (T.zero_at_prec()) {
        DiffOp cleaned(sp_);
        for (auto& [k, c] : rem.terms())
          if (!(k.first[0] == low && k.second[0] == kmax)) cleaned.add_term(k.first, k.second, c);
        rem = cleaned;
        continue;
      }
      Q = Q + T;
      rem = rem - T * Dp;
    }
    return {DaggerElt{Q, P.chart}, DaggerElt{rem, P.chart}};
  }

  // ---- the augmentation onto the Fourier-kernel module ----------------

  // module action on elements f(x,y) (x) del_x^[j], stored as operators with
  // no del_y part
  DiffOp module_act(const DiffOp& P, const DiffOp& elt) const {
    for (auto& [k, c] : elt.terms())
      if (k.second[1] != 0) throw DomainError("module elements carry no del_y part");
    DiffOp acc(sp_);
    for (auto& [k, c] : P.terms()) {
      DiffOp cur = act_del_y_pow(elt, k.second[1]);
      cur = act_del_x_pow(cur, k.second[0]);
      cur = DiffOp::term(sp_, k.first, Exp{0, 0}, c) * cur;
      acc = acc + cur;
    }
    return acc;
  }

  // the augmentation: P . (1 (x) 1)
  DiffOp epsilon_prime(const DiffOp& P) const { return module_act(P, DiffOp::one(sp_)); }

  // ---- Fourier-quotient normal form ------------------------------------

  // class of P in A2 / (del_x A2 + A2 (-del_y + pi x)): divide, then drop
  // every term with a del_x factor (del_x is central in B2, so left and
  // right del_x-multiples agree there)
  DiffOp fourier_reduce(const DaggerElt& P) const {
    auto [Q, R] = divide_dirac(P);
    DiffOp out(sp_);
    for (auto& [k, c] : R.op.terms()) {
      if (k.second[0] > 0) continue;
      out.add_term(k.first, k.second, c);
    }
    return out;
  }

  // rank of the reduction on the monomial window: must be the number of
  // (y-exponent, del_y-order) cells reachable, i.e. (Ly+1)(K2+Lx+1)
  struct RankReport {
    int rank = 0;
    int expected = 0;
    bool ok = false;
  };
  RankReport reduction_rank(int32_t Lx, int32_t Ly, int32_t K1, int32_t K2, int32_t t) const {
    std::vector<DiffOp> images;
    for (int32_t l1 = 0; l1 <= Lx; ++l1)
      for (int32_t l2 = 0; l2 <= Ly; ++l2)
        for (int32_t k1 = 0; k1 <= K1; ++k1)
          for (int32_t k2 = 0; k2 <= K2; ++k2) {
            DiffOp mono = DiffOp::term(sp_, Exp{l1, l2}, Exp{k1, k2},
                                       PadicScalar::one(pm_.p, sp_.prec));
            images.push_back(fourier_reduce(DaggerElt{mono, Chart::Global}));
          }
    // cells (l2, k2): l2 <= Ly, k2 <= K2 + Lx
    int cells = (Ly + 1) * (K2 + Lx + 1);
    std::map<std::pair<int32_t, int32_t>, int> cellIndex;
    PMatrix M = PMatrix::zero(cells, (int)images.size(), pm_.p, sp_.prec);
    int next = 0;
    for (size_t j = 0; j < images.size(); ++j)
      for (auto& [k, c] : images[j].terms()) {
        auto key = std::make_pair(k.first[1], k.second[1]);
        auto it = cellIndex.find(key);
        if (it == cellIndex.end()) it = cellIndex.emplace(key, next++).first;
        if (it->second >= cells) throw DomainError("unexpected reduction cell");
        M.at(it->second, (int)j) = c;
      }
    RankReport rep;
    rep.rank = rank(M, t);
    rep.expected = cells;
    rep.ok = rep.rank == rep.expected;
    return rep;
  }

 private:
  // del_y^[k] . (f (x) del_x^[j]):
  //   sum_{i<=min(k,beta)} C(beta,i) (-pi)^{k-i}/(k-i)! x^{k-i} y^{beta-i} ...
  DiffOp act_del_y_pow(const DiffOp& elt, int32_t k) const {
    if (k == 0) return elt;
    DiffOp acc(sp_);
    for (auto& [key, c] : elt.terms()) {
      int32_t alpha = key.first[0], beta = key.first[1];
      for (int32_t i = 0; i <= std::min(k, beta); ++i) {
        PadicScalar coef = c * padic_binomial(beta, i, pm_.p, sp_.prec) *
                           pi_pow_over_factorial(k - i);
        acc.add_term(Exp{alpha + (k - i), beta - i}, key.second, std::move(coef));
      }
    }
    return acc;
  }

  // del_x^[k] . (f (x) del_x^[j]): split k = i + i' + i'' into the
  // derivative, the -pi y twist, and the D_Y shift C(j+i'', i'')
  DiffOp act_del_x_pow(const DiffOp& elt, int32_t k) const {
    if (k == 0) return elt;
    DiffOp acc(sp_);
    for (auto& [key, c] : elt.terms()) {
      int32_t alpha = key.first[0], beta = key.first[1], j = key.second[0];
      for (int32_t i = 0; i <= std::min(k, alpha); ++i)
        for (int32_t i2 = 0; i2 <= k - i; ++i2) {
          int32_t i3 = k - i - i2;
          PadicScalar coef = c * padic_binomial(alpha, i, pm_.p, sp_.prec) *
                             pi_pow_over_factorial(i2) *
                             padic_binomial(j + i3, i3, pm_.p, sp_.prec);
          // the twist contributes (-pi y)^{i2}/i2!
          acc.add_term(Exp{alpha - i, beta + i2}, Exp{j + i3, 0}, std::move(coef));
        }
    }
    return acc;
  }

  // (-pi)^t / t!
  PadicScalar pi_pow_over_factorial(int32_t t) const {
    PadicScalar r = PadicScalar::one(pm_.p, sp_.prec + (int32_t)(2 * t + 4) * (pm_.p - 1));
    if (t == 0) return r;
    r = (-piScalar_).pow(t);
    return r / DiffOp::factorial_scalar_of(pm_.p, sp_.prec, t);
  }

  TruncationParams pm_;
  OpSpace sp_;
  PadicScalar piScalar_;
};

}  // namespace padicalc
