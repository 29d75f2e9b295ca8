#include <catch2/catch_amalgamated.hpp>

#include "padicalc/diffop.hpp"

using namespace padicalc;

static OpSpace space_for(int p, int dim, int32_t K = 8, int32_t lo = -12, int32_t hi = 24) {
  TruncationParams pm;
  pm.p = p;
  OpSpace sp;
  sp.p = p;
  sp.K = K;
  sp.prec = pm.piPrec();
  sp.win = Window::uniform(dim, lo, hi);
  return sp;
}

static DiffOp random_op(Rng& rng, const OpSpace& sp, int terms, int32_t degMax, int32_t ordMax) {
  DiffOp P(sp);
  for (int t = 0; t < terms; ++t) {
    Exp a(sp.dim()), b(sp.dim());
    for (int i = 0; i < sp.dim(); ++i) {
      a[i] = (int32_t)rng.uniform(0, degMax);
      b[i] = (int32_t)rng.uniform(0, ordMax);
    }
    P.add_term(a, b, PadicScalar::from_int(sp.p, rng.uniform(-50, 50), sp.prec));
  }
  return P;
}

static LaurentPoly random_poly(Rng& rng, const OpSpace& sp, int terms, int32_t degMax) {
  LaurentPoly f = LaurentPoly::zero(sp.p, sp.win, sp.prec);
  for (int t = 0; t < terms; ++t) {
    Exp e(sp.dim());
    for (int i = 0; i < sp.dim(); ++i) e[i] = (int32_t)rng.uniform(0, degMax);
    f.add_term(e, PadicScalar::from_int(sp.p, rng.uniform(-50, 50), sp.prec));
  }
  return f;
}

TEST_CASE("canonical commutation and apply basics") {
  auto sp = space_for(3, 1);
  int32_t tN = 12 * 2;
  DiffOp x = DiffOp::coordinate(sp, 0);
  DiffOp del = DiffOp::del(sp, 0);
  // del^[1] x = x del^[1] + 1
  REQUIRE(DiffOp::eq_mod(del * x, x * del + DiffOp::one(sp), tN));
  // del^[k] x^k has constant term 1
  for (int k = 1; k <= 5; ++k) {
    DiffOp dk = DiffOp::del(sp, 0, k);
    DiffOp xk = DiffOp::coordinate(sp, 0, k);
    auto prod = dk * xk;
    auto it = prod.terms().find({Exp{0}, Exp{0}});
    REQUIRE(it != prod.terms().end());
    REQUIRE(PadicScalar::eq_mod(it->second, PadicScalar::one(3, sp.prec), tN));
  }
  LaurentPoly x5 = LaurentPoly::variable(3, sp.win, 0, sp.prec, 5);
  LaurentPoly got = DiffOp::apply(DiffOp::del(sp, 0, 2), x5);
  LaurentPoly want = LaurentPoly::variable(3, sp.win, 0, sp.prec, 3)
                         .scaled(PadicScalar::from_int(3, 10, sp.prec));
  REQUIRE(LaurentPoly::eq_mod(got, want, tN));
  // order above degree kills
  LaurentPoly x1 = LaurentPoly::variable(3, sp.win, 0, sp.prec, 1);
  REQUIRE(DiffOp::apply(DiffOp::del(sp, 0, 2), x1).zero_at_prec());
  // del^[3](x^{-1}) = -x^{-4}
  LaurentPoly xm1 = LaurentPoly::variable(3, sp.win, 0, sp.prec, -1);
  LaurentPoly want2 = LaurentPoly::variable(3, sp.win, 0, sp.prec, -4)
                          .scaled(-PadicScalar::one(3, sp.prec));
  REQUIRE(LaurentPoly::eq_mod(DiffOp::apply(DiffOp::del(sp, 0, 3), xm1), want2, tN));
}

TEST_CASE("op_mul is action-compatible and associative via the action oracle") {
  for (int p : {2, 3}) {
    for (int dim : {1, 2}) {
      auto sp = space_for(p, dim, 10, -8, 40);
      int32_t tN = 10 * (p - 1);
      Rng rng(17 + p + dim);
      for (int t = 0; t < 60; ++t) {
        DiffOp P = random_op(rng, sp, 3, 4, 3);
        DiffOp Q = random_op(rng, sp, 3, 4, 3);
        LaurentPoly f = random_poly(rng, sp, 3, 6);
        LaurentPoly lhs = DiffOp::apply(P * Q, f);
        LaurentPoly rhs = DiffOp::apply(P, DiffOp::apply(Q, f));
        REQUIRE(LaurentPoly::eq_mod(lhs, rhs, tN));
      }
      // associativity through the action
      for (int t = 0; t < 20; ++t) {
        DiffOp P = random_op(rng, sp, 2, 3, 2);
        DiffOp Q = random_op(rng, sp, 2, 3, 2);
        DiffOp R = random_op(rng, sp, 2, 3, 2);
        LaurentPoly f = random_poly(rng, sp, 3, 5);
        LaurentPoly a = DiffOp::apply((P * Q) * R, f);
        LaurentPoly b = DiffOp::apply(P * (Q * R), f);
        REQUIRE(LaurentPoly::eq_mod(a, b, tN));
      }
    }
  }
}

TEST_CASE("overflow is an error, not a truncation") {
  auto sp = space_for(3, 1, 4, -2, 6);
  REQUIRE_THROWS_AS(DiffOp::coordinate(sp, 0, 4) * DiffOp::coordinate(sp, 0, 4), OverflowError);
  REQUIRE_THROWS_AS(DiffOp::del(sp, 0, 3) * DiffOp::del(sp, 0, 3), OverflowError);
  LaurentPoly xm2 = LaurentPoly::variable(3, sp.win, 0, sp.prec, -2);
  REQUIRE_THROWS_AS(DiffOp::apply(DiffOp::del(sp, 0, 2), xm2), OverflowError);
}

TEST_CASE("transpose: examples, anti-automorphism, involution") {
  auto sp = space_for(3, 1);
  int32_t tN = 12 * 2;
  DiffOp del = DiffOp::del(sp, 0);
  REQUIRE(DiffOp::eq_mod(del.transpose(), -del, tN));
  // t(x del^[2]) = del^[2] x = x del^[2] + del^[1]
  DiffOp lhs = (DiffOp::coordinate(sp, 0) * DiffOp::del(sp, 0, 2)).transpose();
  DiffOp rhs = DiffOp::coordinate(sp, 0) * DiffOp::del(sp, 0, 2) + DiffOp::del(sp, 0, 1);
  REQUIRE(DiffOp::eq_mod(lhs, rhs, tN));
  Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    DiffOp P = random_op(rng, sp, 3, 4, 3);
    DiffOp Q = random_op(rng, sp, 3, 4, 3);
    REQUIRE(DiffOp::eq_mod(P.transpose().transpose(), P, tN));
    REQUIRE(DiffOp::eq_mod((P * Q).transpose(), Q.transpose() * P.transpose(), tN));
  }
}

TEST_CASE("level-m views round-trip and match the q_k^(m)! scaling") {
  auto sp = space_for(3, 1);
  int32_t tN = 10 * 2;
  // del^{<3>_(1)} = q_3^(1)! del^[3] = 1! del^[3]
  {
    DiffOp d3 = DiffOp::del(sp, 0, 3);
    auto lt = d3.to_level(1);
    REQUIRE(lt.size() == 1);
    REQUIRE(PadicScalar::eq_mod(lt[0].coef, PadicScalar::one(3, sp.prec), tN));
  }
  // at level 0, q_3^(0)! = 3! = 6, so the displayed coefficient is 1/6
  {
    DiffOp d3 = DiffOp::del(sp, 0, 3);
    auto lt = d3.to_level(0);
    REQUIRE(lt.size() == 1);
    PadicScalar six = PadicScalar::from_int(3, 6, sp.prec);
    REQUIRE(PadicScalar::eq_mod(lt[0].coef * six, PadicScalar::one(3, sp.prec), tN));
  }
  Rng rng(29);
  for (int t = 0; t < 50; ++t) {
    DiffOp P = random_op(rng, sp, 4, 4, 6);
    for (int m : {0, 1, 2}) {
      auto lt = P.to_level(m);
      DiffOp back = DiffOp::from_level(sp, lt, m);
      REQUIRE(DiffOp::eq_mod(back, P, tN));
    }
  }
}

TEST_CASE("apply is linear in the function and in the operator") {
  auto sp = space_for(3, 1, 8, -8, 30);
  int32_t tN = 10 * 2;
  Rng rng(47);
  for (int t = 0; t < 40; ++t) {
    DiffOp P = random_op(rng, sp, 3, 4, 3);
    DiffOp Q = random_op(rng, sp, 3, 4, 3);
    LaurentPoly f = random_poly(rng, sp, 3, 6);
    LaurentPoly g = random_poly(rng, sp, 3, 6);
    REQUIRE(LaurentPoly::eq_mod(DiffOp::apply(P, f + g),
                                DiffOp::apply(P, f) + DiffOp::apply(P, g), tN));
    REQUIRE(LaurentPoly::eq_mod(DiffOp::apply(P + Q, f),
                                DiffOp::apply(P, f) + DiffOp::apply(Q, f), tN));
  }
}

TEST_CASE("gauge slack of a product degrades by at most the dimension") {
  // checked empirically over random members; a violation would be a finding,
  // not an axiom
  for (int dim : {1, 2}) {
    auto sp = space_for(3, dim, 10, -4, 60);
    Rng rng(53 + dim);
    int64_t worst = 100;
    for (int t = 0; t < 60; ++t) {
      auto member = [&]() {
        DiffOp P(sp);
        for (int tt = 0; tt < 3; ++tt) {
          Exp a(dim), b(dim);
          int64_t scale = 1;
          for (int i = 0; i < dim; ++i) {
            a[i] = (int32_t)rng.uniform(0, 5);
            b[i] = (int32_t)rng.uniform(0, 2);
            scale *= ipow(3, (int)nu_m(a[i], 3, 1));
          }
          P.add_term(a, b, PadicScalar::from_int(3, scale * rng.uniform(1, 9), sp.prec));
        }
        return P;
      };
      DiffOp P = member(), Q = member();
      auto gp = P.gauge(1, GaugeMode::EhatInfinity);
      auto gq = Q.gauge(1, GaugeMode::EhatInfinity);
      auto gpq = (P * Q).gauge(1, GaugeMode::EhatInfinity);
      if (!gpq.slack.is_finite()) continue;
      int64_t margin = gpq.slack.num - gp.slack.num - gq.slack.num;  // units of 1/(p-1)
      worst = std::min(worst, margin);
    }
    INFO("worst margin (units of 1/(p-1)) for dim " << dim << ": " << worst);
    REQUIRE(worst >= -dim * (3 - 1));  // slack drop bounded by d in p-units
  }
}

TEST_CASE("gauges: slack arithmetic on both exponent modes") {
  for (int m : {0, 1, 2}) {
    auto sp = space_for(3, 1, 8, -40, 90);
    int64_t e = ipow(3, m + 1);
    // p * x^{p^{m+1}}: slack 0, member
    DiffOp P = DiffOp::coordinate(sp, 0, (int32_t)e)
                   .scaled(PadicScalar::from_int(3, 3, sp.prec));
    auto g = P.gauge(m, GaugeMode::EhatInfinity);
    REQUIRE(g.member);
    REQUIRE(g.slack.num == 0);
    // without the p: slack -1
    DiffOp Q = DiffOp::coordinate(sp, 0, (int32_t)e);
    auto g2 = Q.gauge(m, GaugeMode::EhatInfinity);
    REQUIRE_FALSE(g2.member);
    REQUIRE(g2.slack.num * 1 == -1 * g2.slack.den);
    REQUIRE(g2.offendingTerm.has_value());
    // pole mode reads negative exponents
    DiffOp R = DiffOp::coordinate(sp, 0, (int32_t)-e);
    REQUIRE_FALSE(R.gauge(m, GaugeMode::PoleDivisor).member);
    REQUIRE(R.gauge(m, GaugeMode::EhatInfinity).member);
  }
}
