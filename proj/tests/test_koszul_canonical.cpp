#include <catch2/catch_amalgamated.hpp>

#include "padicalc/canonical.hpp"
#include "padicalc/koszul.hpp"

using namespace padicalc;

namespace {

TruncationParams params_for(int p) {
  TruncationParams pm;
  pm.p = p;
  pm.N = 12;
  pm.guard = 6;
  return pm;
}

LaurentPoly rand_poly(Rng& rng, int32_t p, const Window& w, int32_t prec, int dim, int32_t deg,
                      bool unitConst = false) {
  LaurentPoly f = LaurentPoly::zero(p, w, prec);
  for (int t = 0; t < 4; ++t) {
    Exp e(dim, 0);
    for (int i = 0; i < dim; ++i) e[i] = (int32_t)rng.uniform(0, deg);
    f.add_term(e, PadicScalar::from_int(p, rng.uniform(-20, 20), prec));
  }
  if (unitConst) {
    int64_t c = rng.uniform(1, 40);
    while (c % p == 0) ++c;
    f.add_term(Exp(dim, 0), PadicScalar::from_int(p, c, prec));
  }
  return f;
}

}  // namespace

TEST_CASE("Koszul differentials square to zero; regular sequences certified") {
  auto pm = params_for(3);
  int32_t prec = pm.piPrec(), tN = pm.piPrecN();
  Window w1 = Window::uniform(1, 0, 12), w2 = Window::uniform(2, 0, 12);
  // d = 1: z = (x)
  {
    KoszulComplex K({LaurentPoly::variable(3, w1, 0, prec)});
    REQUIRE(K.d_squared_zero(tN));
    REQUIRE(regular_sequence({K.seq(0)}, 5, tN));
  }
  // d = 2: z = (x, y)
  {
    std::vector<LaurentPoly> z{LaurentPoly::variable(3, w2, 0, prec),
                               LaurentPoly::variable(3, w2, 1, prec)};
    KoszulComplex K(z);
    REQUIRE(K.d_squared_zero(tN));
    REQUIRE(regular_sequence(z, 4, tN));
  }
  // a non-regular "sequence": (x, x)
  {
    std::vector<LaurentPoly> z{LaurentPoly::variable(3, w2, 0, prec),
                               LaurentPoly::variable(3, w2, 0, prec)};
    REQUIRE_FALSE(regular_sequence(z, 4, tN));
  }
  // random unit-triangular change of coordinates stays regular
  {
    Rng rng(13);
    for (int t = 0; t < 10; ++t) {
      LaurentPoly x = LaurentPoly::variable(3, w2, 0, prec);
      LaurentPoly y = LaurentPoly::variable(3, w2, 1, prec);
      LaurentPoly u = rand_poly(rng, 3, w2, prec, 2, 1);
      std::vector<LaurentPoly> z{x + u * y, y};
      REQUIRE(regular_sequence(z, 3, tN));
    }
  }
}

TEST_CASE("comparison chain map: identity, 1x1 scaling, random 2x2") {
  auto pm = params_for(3);
  int32_t prec = pm.piPrec(), tN = pm.piPrecN();
  Window w1 = Window::uniform(1, 0, 14), w2 = Window::uniform(2, 0, 20);
  // G = identity
  {
    std::vector<LaurentPoly> y{LaurentPoly::variable(3, w2, 0, prec),
                               LaurentPoly::variable(3, w2, 1, prec)};
    std::vector<std::vector<LaurentPoly>> G(
        2, std::vector<LaurentPoly>(2, LaurentPoly::zero(3, w2, prec)));
    G[0][0] = G[1][1] = LaurentPoly::one(3, w2, prec);
    KoszulChainMap cm(KoszulComplex{y}, KoszulComplex{y}, G);
    REQUIRE(cm.relation_holds(tN));
    REQUIRE(cm.chain_map_ok(tN));
    WedgeElt e = cm.source().generator(0) ^ cm.source().generator(1);
    REQUIRE(WedgeElt::eq_mod(cm.map(e), e, tN));
  }
  // d = 1: z = f y, gamma_1 = multiplication by f
  {
    Rng rng(7);
    LaurentPoly y = LaurentPoly::variable(3, w1, 0, prec);
    LaurentPoly f = rand_poly(rng, 3, w1, prec, 1, 3, true);
    KoszulChainMap cm(KoszulComplex({f * y}), KoszulComplex({y}), {{f}});
    REQUIRE(cm.relation_holds(tN));
    REQUIRE(cm.chain_map_ok(tN));
  }
  // 50 random 2x2 G
  {
    Rng rng(19);
    for (int t = 0; t < 50; ++t) {
      std::vector<LaurentPoly> y{LaurentPoly::variable(3, w2, 0, prec),
                                 LaurentPoly::variable(3, w2, 1, prec)};
      std::vector<std::vector<LaurentPoly>> G(
          2, std::vector<LaurentPoly>(2, LaurentPoly::zero(3, w2, prec)));
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) G[i][j] = rand_poly(rng, 3, w2, prec, 2, 2);
      std::vector<LaurentPoly> z{G[0][0] * y[0] + G[0][1] * y[1],
                                 G[1][0] * y[0] + G[1][1] * y[1]};
      KoszulChainMap cm(KoszulComplex(z), KoszulComplex(y), G);
      REQUIRE(cm.relation_holds(tN));
      REQUIRE(cm.chain_map_ok(tN));
    }
  }
}

TEST_CASE("iota/alpha: determinant formula equals the chain-level composite") {
  auto pm = params_for(3);
  int32_t prec = pm.piPrec(), tN = pm.piPrecN();
  auto identity_phi = [](const LaurentPoly& g) { return g; };
  // d = 1, G = (1), phi = identity functional
  {
    Window w1 = Window::uniform(1, 0, 14);
    LaurentPoly y = LaurentPoly::variable(3, w1, 0, prec);
    KoszulChainMap cm(KoszulComplex({y}), KoszulComplex({y}),
                      {{LaurentPoly::one(3, w1, prec)}});
    auto res = iota_alpha(cm, identity_phi, tN);
    REQUIRE(res.agrees);
    REQUIRE(PadicScalar::eq_mod(res.closedClass, PadicScalar::one(3, prec), tN));
  }
  // d = 2, G = diag(f1, f2): coefficient is phi(f1 f2) at the origin
  {
    Window w2 = Window::uniform(2, 0, 24);
    Rng rng(23);
    LaurentPoly f1 = rand_poly(rng, 3, w2, prec, 2, 2, true);
    LaurentPoly f2 = rand_poly(rng, 3, w2, prec, 2, 2, true);
    std::vector<LaurentPoly> y{LaurentPoly::variable(3, w2, 0, prec),
                               LaurentPoly::variable(3, w2, 1, prec)};
    std::vector<std::vector<LaurentPoly>> G(
        2, std::vector<LaurentPoly>(2, LaurentPoly::zero(3, w2, prec)));
    G[0][0] = f1;
    G[1][1] = f2;
    KoszulChainMap cm(KoszulComplex({f1 * y[0], f2 * y[1]}), KoszulComplex(y), G);
    auto res = iota_alpha(cm, identity_phi, tN);
    REQUIRE(res.agrees);
    REQUIRE(PadicScalar::eq_mod(res.closedClass, (f1 * f2).constant_term(), tN));
  }
  // 50 random (phi, G) for d in {1, 2}; phi = multiplication by w
  for (int d : {1, 2}) {
    Window w = Window::uniform(d, 0, d == 1 ? 20 : 30);
    Rng rng(29 + d);
    for (int t = 0; t < 50; ++t) {
      std::vector<LaurentPoly> y;
      for (int i = 0; i < d; ++i) y.push_back(LaurentPoly::variable(3, w, i, prec));
      std::vector<std::vector<LaurentPoly>> G(
          d, std::vector<LaurentPoly>(d, LaurentPoly::zero(3, w, prec)));
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) G[i][j] = rand_poly(rng, 3, w, prec, d, 2, i == j);
      std::vector<LaurentPoly> z;
      for (int i = 0; i < d; ++i) {
        LaurentPoly zi = LaurentPoly::zero(3, w, prec);
        for (int j = 0; j < d; ++j) zi = zi + G[i][j] * y[j];
        z.push_back(zi);
      }
      LaurentPoly wmul = rand_poly(rng, 3, w, prec, d, 2);
      auto phi = [&](const LaurentPoly& g) { return wmul * g; };
      KoszulChainMap cm(KoszulComplex(z), KoszulComplex(y), G);
      auto res = iota_alpha(cm, phi, tN);
      REQUIRE(res.agrees);
    }
  }
}

TEST_CASE("mu: closed form against the composite route") {
  for (int q : {2, 3}) {
    TruncationParams pm = params_for(q);
    pm.degHi = 40;
    MuModel model(pm, 1);
    int32_t tN = pm.piPrecN();
    // f = 1 reproduces the key evaluation (Hx^{-(q-1)})'(det G) = 1 (x) 1
    auto base = model.mu_via_composite(LaurentPoly::one(pm.p, model.x_window(), model.prec()), tN);
    REQUIRE(base.chainOk);
    REQUIRE(base.keyEvaluationOk);
    REQUIRE(base.matchesClosedForm);
    Rng rng(31 + q);
    for (int t = 0; t < 25; ++t) {
      LaurentPoly f = rand_poly(rng, pm.p, model.x_window(), model.prec(), 1, 3);
      auto res = model.mu_via_composite(f, tN);
      REQUIRE(res.matchesClosedForm);
    }
  }
  // d = 2 at q = 2: the model stays small enough to run the same certificate
  {
    TruncationParams pm = params_for(2);
    pm.degHi = 40;
    MuModel model(pm, 2);
    int32_t tN = pm.piPrecN();
    auto base = model.mu_via_composite(LaurentPoly::one(pm.p, model.x_window(), model.prec()), tN);
    REQUIRE(base.chainOk);
    REQUIRE(base.keyEvaluationOk);
    REQUIRE(base.matchesClosedForm);
  }
}

TEST_CASE("scalar identities of the base-change proof") {
  for (int p : {2, 3, 5}) {
    TruncationParams pm = params_for(p);
    auto ts = ts_identity(pm);
    REQUIRE(ts.ok);
    auto bi = binomial_identity(pm);
    REQUIRE(bi.ok);
    REQUIRE(bi.perRootOk);
    REQUIRE(bi.termMatchOk);
  }
  // operator route at reduced internal truncation for q in {2, 3}: the
  // truncation tail sits at pi^Kop, so compare up to min(Kop - 2, N(p-1))
  for (int p : {2, 3}) {
    TruncationParams pm = params_for(p);
    int32_t Kop = 20;
    PadicScalar got = ts_via_transpose(pm, Kop);
    int32_t t = std::min(Kop - 2, pm.piPrecN());
    REQUIRE(PadicScalar::eq_mod(got, PadicScalar::one(pm.p, pm.piPrec()), t));
  }
}

TEST_CASE("mu_M / nu_N round-trip recovers the function factor") {
  TruncationParams pm = params_for(3);
  pm.K = 12;
  pm.degHi = 30;
  DworkContext ctx(pm, 1);
  int32_t tN = pm.piPrecN();
  Rng rng(37);
  for (int t = 0; t < 20; ++t) {
    LaurentPoly f = rand_poly(rng, 3, ctx.space().win, ctx.space().prec, 1, 3);
    MuMImage img = mu_M(ctx, f);
    LaurentPoly back = nu_N(ctx, img.op, 3);
    REQUIRE(LaurentPoly::eq_mod(back, f, tN));
  }
}

TEST_CASE("chi and xi_0 agree after partition-of-unity recombination") {
  TruncationParams pm = params_for(3);
  pm.K = 14;
  pm.degHi = 40;
  DworkContext ctx(pm, 1);
  int32_t tN = pm.piPrecN();
  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    DiffOp P(ctx.space());
    P.add_term(Exp{(int32_t)rng.uniform(0, 1)}, Exp{(int32_t)rng.uniform(0, 1)},
               PadicScalar::from_int(3, rng.uniform(-9, 9), ctx.space().prec));
    std::vector<int64_t> l{rng.uniform(0, 2)};
    PushRecord direct = xi0(ctx, l, P, 6, 8);
    direct.pull_right_scalar_left(RingTag::OX, ctx.q());
    for (int64_t k = 0; k < ctx.q(); ++k) {
      PushRecord viaChi = chi_route(ctx, l, P, {k}, 6, 8);
      viaChi.pull_right_scalar_left(RingTag::OX, ctx.q());
      REQUIRE(PushRecord::eq_mod(viaChi, direct, tN));
    }
  }
  // moving a non-O_X'-scalar across an O_X'-linear mark is rejected
  {
    PushRecord rec = chi_route(ctx, {1}, DiffOp::one(ctx.space()), {1}, 6, 8);
    REQUIRE_THROWS_AS(rec.pull_right_scalar_left(RingTag::OXPrime, ctx.q()), DomainError);
  }
}

TEST_CASE("Tate twist bookkeeping and the q^d multiplier") {
  TruncationParams pm = params_for(3);
  FrobeniusScalar psi{PadicScalar::one(3, pm.piPrec()), 0};
  REQUIRE(twist(psi, 1).qExp == -1);
  REQUIRE(twist(twist(psi, 2), 3).qExp == twist(psi, 5).qExp);
  // identical maps commute with ratio 1
  {
    PMatrix A = PMatrix::zero(2, 2, 3, pm.piPrec());
    A.at(0, 0) = PadicScalar::from_int(3, 4, pm.piPrec());
    A.at(1, 1) = PadicScalar::from_int(3, 7, pm.piPrec());
    auto r = commute_up_to(A, A, 3, pm.piPrecN(), 3, pm.piPrec());
    REQUIRE(r.ok);
    REQUIRE(r.asRational.has_value());
    REQUIRE(r.asRational->first == 1);
    REQUIRE(r.asRational->second == 1);
    PMatrix Z = PMatrix::zero(2, 2, 3, pm.piPrec());
    REQUIRE(commute_up_to(Z, Z, 3, pm.piPrecN(), 3, pm.piPrec()).ambiguous);
  }
  for (int d : {1, 2})
    for (int q : {2, 3}) {
      TruncationParams pq = params_for(q);
      auto rep = frobenius_twist_ratio(pq, d);
      REQUIRE(rep.ok);
      REQUIRE(rep.ratio->first == ipow(q, d));
      REQUIRE(rep.ratio->second == 1);
    }
}
