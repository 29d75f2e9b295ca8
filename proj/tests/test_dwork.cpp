#include <catch2/catch_amalgamated.hpp>

#include "padicalc/dwork.hpp"

using namespace padicalc;

static TruncationParams battery_params(int p) {
  TruncationParams pm;
  pm.p = p;
  pm.N = 12;
  pm.guard = 6;
  pm.K = 3 * p;
  pm.degLo = -8;
  pm.degHi = 30;
  return pm;
}

TEST_CASE("pullback through F*(y) = x^q is a ring map") {
  TruncationParams pm = battery_params(3);
  FrobeniusLift F{1, pm.q()};
  Window w = Window::uniform(1, -8, 30);
  int32_t prec = pm.piPrec();
  LaurentPoly y = LaurentPoly::variable(3, w, 0, prec);
  LaurentPoly g = y * y + y;
  LaurentPoly img = frobenius_pullback(F, g);
  LaurentPoly want = LaurentPoly::variable(3, w, 0, prec, 6) + LaurentPoly::variable(3, w, 0, prec, 3);
  REQUIRE(LaurentPoly::eq_mod(img, want, pm.piPrecN()));
  REQUIRE(LaurentPoly::eq_mod(frobenius_pullback(F, LaurentPoly::one(3, w, prec)),
                              LaurentPoly::one(3, w, prec), pm.piPrecN()));
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    LaurentPoly a = LaurentPoly::variable(3, w, 0, prec, (int32_t)rng.uniform(0, 4))
                        .scaled(PadicScalar::from_int(3, rng.uniform(-9, 9), prec));
    LaurentPoly b = LaurentPoly::variable(3, w, 0, prec, (int32_t)rng.uniform(0, 4))
                        .scaled(PadicScalar::from_int(3, rng.uniform(-9, 9), prec));
    REQUIRE(LaurentPoly::eq_mod(frobenius_pullback(F, a * b),
                                frobenius_pullback(F, a) * frobenius_pullback(F, b),
                                pm.piPrecN()));
  }
}

TEST_CASE("Dwork projector battery on the exact monomial range") {
  for (int p : {2, 3, 5}) {
    TruncationParams pm = battery_params(p);
    DworkContext ctx(pm, 1);
    const auto& sp = ctx.space();
    int32_t tN = pm.piPrecN();
    DiffOp H = ctx.dwork_H(0);
    LaurentPoly onePoly = LaurentPoly::one(p, sp.win, sp.prec);
    REQUIRE(LaurentPoly::eq_mod(DiffOp::apply(H, onePoly), onePoly, tN));
    for (int32_t j = 0; j <= sp.K; ++j) {
      LaurentPoly xj = LaurentPoly::variable(p, sp.win, 0, sp.prec, j);
      LaurentPoly img = DiffOp::apply(H, xj);
      if (j % pm.q() == 0) {
        REQUIRE(LaurentPoly::eq_mod(img, xj, tN));
      } else {
        REQUIRE(img.vanishes_mod(tN));
      }
      // idempotence through the action
      REQUIRE(LaurentPoly::eq_mod(DiffOp::apply(H, img), img, tN));
    }
  }
}

TEST_CASE("dual basis: delta property, vanishing d_b for b < k, partition of unity") {
  for (int p : {2, 3, 5}) {
    TruncationParams pm = battery_params(p);
    DworkContext ctx(pm, 1);
    const auto& sp = ctx.space();
    int32_t tN = pm.piPrecN();
    int64_t q = pm.q();
    for (int64_t k = 0; k < q; ++k) {
      DiffOp D = ctx.dual_basis_op({k});
      // no term with b < k, none with negative x-exponent
      for (auto& [key, c] : D.terms()) {
        REQUIRE(key.second[0] >= k);
        REQUIRE(key.first[0] >= 0);
      }
      for (int32_t j = 0; j <= sp.K; ++j) {
        LaurentPoly xj = LaurentPoly::variable(p, sp.win, 0, sp.prec, j);
        LaurentPoly img = DiffOp::apply(D, xj);
        if ((j - k) % q == 0) {
          LaurentPoly want = LaurentPoly::variable(p, sp.win, 0, sp.prec, j - (int32_t)k);
          REQUIRE(LaurentPoly::eq_mod(img, want, tN));
        } else {
          REQUIRE(img.vanishes_mod(tN));
        }
      }
    }
    // partition of unity holds at the operator level even truncated
    DiffOp sum(sp);
    for (int64_t k = 0; k < q; ++k)
      sum = sum + DiffOp::coordinate(sp, 0, (int32_t)k) * ctx.dual_basis_op({k});
    REQUIRE(DiffOp::eq_mod(sum, DiffOp::one(sp), tN));
  }
}

TEST_CASE("two-variable Dwork operators multiply tensor-wise") {
  TruncationParams pm = battery_params(3);
  pm.K = 12;
  pm.degHi = 24;
  DworkContext ctx(pm, 2);
  const auto& sp = ctx.space();
  int32_t tN = pm.piPrecN();
  int64_t q = pm.q();
  DiffOp sum(sp);
  for (int64_t k1 = 0; k1 < q; ++k1)
    for (int64_t k2 = 0; k2 < q; ++k2) {
      Exp a{(int32_t)k1, (int32_t)k2};
      sum = sum + DiffOp::term(sp, a, Exp{0, 0}, PadicScalar::one(3, sp.prec)) *
                      ctx.dual_basis_op({k1, k2});
    }
  REQUIRE(DiffOp::eq_mod(sum, DiffOp::one(sp), tN));
  // H is O'-linear: H(f F*(g)) = H(f) F*(g); exact while deg(f F*g) <= K
  FrobeniusLift F{2, q};
  Rng rng(9);
  DiffOp H = ctx.dwork_H_all();
  for (int t = 0; t < 20; ++t) {
    LaurentPoly f = LaurentPoly::zero(3, sp.win, sp.prec);
    f.add_term(Exp{(int32_t)rng.uniform(0, 5), (int32_t)rng.uniform(0, 5)},
               PadicScalar::from_int(3, rng.uniform(-9, 9), sp.prec));
    LaurentPoly g = LaurentPoly::zero(3, sp.win, sp.prec);
    g.add_term(Exp{(int32_t)rng.uniform(0, 2), (int32_t)rng.uniform(0, 2)},
               PadicScalar::from_int(3, rng.uniform(-9, 9), sp.prec));
    LaurentPoly Fg = frobenius_pullback(F, g);  // degree <= 6, f <= 5, sum <= 11 < K
    REQUIRE(LaurentPoly::eq_mod(DiffOp::apply(H, f * Fg), DiffOp::apply(H, f) * Fg, tN));
  }
}

TEST_CASE("descent transfer: monomial action, unit, chain rule, multiplicativity") {
  TruncationParams pm = battery_params(3);
  pm.K = 18;
  pm.degHi = 40;
  DworkContext ctx(pm, 1);
  const auto& sp = ctx.space();
  int32_t tN = pm.piPrecN();

  // (del')^o (x^6) = 2 x^3 at q = 3
  DiffOp dpo = ctx.transfer_del_pow(0, 1);
  LaurentPoly x6 = LaurentPoly::variable(3, sp.win, 0, sp.prec, 6);
  LaurentPoly want = LaurentPoly::variable(3, sp.win, 0, sp.prec, 3)
                         .scaled(PadicScalar::from_int(3, 2, sp.prec));
  REQUIRE(LaurentPoly::eq_mod(DiffOp::apply(dpo, x6), want, tN));

  OpSpace ysp = sp;  // source space for operators in y
  DiffOp one = DiffOp::one(ysp);
  REQUIRE(DiffOp::eq_mod(ctx.transfer(one), DiffOp::one(sp), tN));

  FrobeniusLift F{1, pm.q()};
  Rng rng(31);
  auto random_y_op = [&](int terms) {
    DiffOp P(ysp);
    for (int t = 0; t < terms; ++t)
      P.add_term(Exp{(int32_t)rng.uniform(0, 2)}, Exp{(int32_t)rng.uniform(0, 2)},
                 PadicScalar::from_int(3, rng.uniform(-9, 9), sp.prec));
    return P;
  };
  for (int t = 0; t < 40; ++t) {
    DiffOp P = random_y_op(2);
    DiffOp Q = random_y_op(2);
    // ring homomorphism, certified through the action oracle: (PQ)^o and
    // P^o Q^o act identically on the exact monomial range.  (The two
    // full-order normal forms cannot be multiplied without escaping the
    // order cap, so the action is the comparison surface.)
    DiffOp PQo = ctx.transfer(P * Q);
    DiffOp Po = ctx.transfer(P), Qo = ctx.transfer(Q);
    // the intermediate monomial degree j + q a' must stay inside the exact
    // action range of the truncated P^o
    for (int32_t j = 0; j + 6 <= sp.K; j += 3) {
      LaurentPoly xj = LaurentPoly::variable(3, sp.win, 0, sp.prec, j);
      REQUIRE(LaurentPoly::eq_mod(DiffOp::apply(PQo, xj),
                                  DiffOp::apply(Po, DiffOp::apply(Qo, xj)), tN));
    }
    // chain rule P^o(F* g) = F*(P g)
    LaurentPoly g = LaurentPoly::zero(3, sp.win, sp.prec);
    g.add_term(Exp{(int32_t)rng.uniform(0, 4)},
               PadicScalar::from_int(3, rng.uniform(-9, 9), sp.prec));
    LaurentPoly lhs = DiffOp::apply(Po, frobenius_pullback(F, g));
    LaurentPoly rhs = frobenius_pullback(F, DiffOp::apply(P, g));
    REQUIRE(LaurentPoly::eq_mod(lhs, rhs, tN));
  }
  // chain rule example from the y-side: P = y del', g = y^2 -> F*(2 y^2)
  {
    DiffOp P = DiffOp::coordinate(ysp, 0) * DiffOp::del(ysp, 0);
    LaurentPoly g = LaurentPoly::variable(3, sp.win, 0, sp.prec, 2);
    LaurentPoly lhs = DiffOp::apply(ctx.transfer(P), frobenius_pullback(F, g));
    LaurentPoly rhs = frobenius_pullback(F, g.scaled(PadicScalar::from_int(3, 2, sp.prec)));
    REQUIRE(LaurentPoly::eq_mod(lhs, rhs, tN));
  }
}

TEST_CASE("garnier normal forms") {
  TruncationParams pm = battery_params(3);
  pm.K = 9;
  DworkContext ctx(pm, 1);
  const auto& sp = ctx.space();
  int32_t tN = pm.piPrecN();
  // (1, 1, 0) -> H
  LaurentPoly onep = LaurentPoly::one(3, sp.win, sp.prec);
  REQUIRE(DiffOp::eq_mod(ctx.garnier_iso(onep, DiffOp::one(sp), {0}), ctx.dwork_H(0), tN));
  // (x, 1, 1) -> x * Hx^{-1}
  LaurentPoly x = LaurentPoly::variable(3, sp.win, 0, sp.prec);
  REQUIRE(DiffOp::eq_mod(ctx.garnier_iso(x, DiffOp::one(sp), {1}),
                         DiffOp::coordinate(sp, 0) * ctx.dual_basis_op({1}), tN));
}

TEST_CASE("Taylor element: classical case, exact evaluation, cocycle") {
  TruncationParams pm = battery_params(3);
  pm.m = 1;
  Window w = Window::uniform(1, -8, 30);
  int32_t prec = pm.piPrec();
  int32_t tN = pm.piPrecN();
  auto mkpoly = [&](std::vector<std::pair<int, int>> ts) {
    LaurentPoly f = LaurentPoly::zero(3, w, prec);
    for (auto [e, c] : ts) f.add_term(Exp{e}, PadicScalar::from_int(3, c, prec));
    return f;
  };
  LaurentPoly id = mkpoly({{1, 1}});

  // f = f': T = 1 and evaluation is substitution
  {
    TaylorMap T(pm, {id}, {id});
    LaurentPoly g = mkpoly({{2, 1}, {1, 2}});
    REQUIRE(LaurentPoly::eq_mod(T.evaluate(g), g, tN));
  }
  // classical m = 0 over Z_p coefficients: recover g o f' exactly
  {
    TruncationParams pm0 = pm;
    pm0.m = 0;
    LaurentPoly fp = mkpoly({{1, 1}, {2, 3}});  // x + 3 x^2
    TaylorMap T(pm0, {id}, {fp});
    LaurentPoly g = mkpoly({{2, 1}});  // y^2
    REQUIRE(LaurentPoly::eq_mod(T.evaluate(g), fp * fp, tN));
  }
  // cocycle on three congruent lifts, p = 3, m = 1: the composite
  // tau_{f1,f2} tau_{f2,f3} has t-th tensor coefficient
  // sum_{j+k=t} C(t,k) Delta12^j Delta23^k, which must equal Delta13^t
  {
    Rng rng(41);
    for (int t = 0; t < 10; ++t) {
      auto lift = [&]() {
        LaurentPoly f = id;
        for (int j = 0; j <= 2; ++j)
          f.add_term(Exp{j}, PadicScalar::from_int(3, 3 * rng.uniform(-3, 3), prec));
        return f;
      };
      LaurentPoly f1 = lift(), f2 = lift(), f3 = lift();
      TaylorMap t12(pm, {f1}, {f2}), t23(pm, {f2}, {f3}), t13(pm, {f1}, {f3});
      const LaurentPoly& d12 = t12.deltas()[0];
      const LaurentPoly& d23 = t23.deltas()[0];
      const LaurentPoly& d13 = t13.deltas()[0];
      for (int deg = 0; deg <= 4; ++deg) {
        LaurentPoly conv = LaurentPoly::zero(3, w, prec);
        for (int k = 0; k <= deg; ++k) {
          LaurentPoly term = LaurentPoly::one(3, w, prec)
                                 .scaled(padic_binomial(deg, k, 3, prec));
          for (int i = 0; i < k; ++i) term = term * d23;
          for (int i = 0; i < deg - k; ++i) term = term * d12;
          conv = conv + term;
        }
        LaurentPoly want = LaurentPoly::one(3, w, prec);
        for (int i = 0; i < deg; ++i) want = want * d13;
        REQUIRE(LaurentPoly::eq_mod(conv, want, tN));
      }
      // tau_{f,f} = 1: zero deltas
      TaylorMap tid(pm, {f1}, {f1});
      REQUIRE(tid.deltas()[0].zero_at_prec());
    }
  }
  // congruence precondition is enforced
  {
    LaurentPoly fp = mkpoly({{1, 1}, {0, 1}});  // differs by a unit
    REQUIRE_THROWS_AS(TaylorMap(pm, {id}, {fp}), DomainError);
  }
}
