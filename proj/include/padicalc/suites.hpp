#pragma once
// The invariant batteries behind `padicalc check <suite>`.  Every battery is
// deterministic in (params, seed); failures become report entries carrying a
// witness, never exceptions.

#include "padicalc/canonical.hpp"
#include "padicalc/parse.hpp"
#include "padicalc/report.hpp"
#include "padicalc/weyl.hpp"

namespace padicalc {

namespace suites {

inline LaurentPoly random_poly(Rng& rng, int32_t p, const Window& w, int32_t prec, int32_t deg,
                               int terms = 3) {
  LaurentPoly f = LaurentPoly::zero(p, w, prec);
  for (int t = 0; t < terms; ++t) {
    Exp e(w.dim(), 0);
    for (int i = 0; i < w.dim(); ++i) e[i] = (int32_t)rng.uniform(0, deg);
    f.add_term(e, PadicScalar::from_int(p, rng.uniform(-30, 30), prec));
  }
  return f;
}

inline DiffOp random_op(Rng& rng, const OpSpace& sp, int terms, int32_t deg, int32_t ord) {
  DiffOp P(sp);
  for (int t = 0; t < terms; ++t) {
    Exp a(sp.dim()), b(sp.dim());
    for (int i = 0; i < sp.dim(); ++i) {
      a[i] = (int32_t)rng.uniform(0, deg);
      b[i] = (int32_t)rng.uniform(0, ord);
    }
    P.add_term(a, b, PadicScalar::from_int(sp.p, rng.uniform(-30, 30), sp.prec));
  }
  return P;
}

// ---- dwork ---------------------------------------------------------------

inline void run_dwork(Report& rep, const TruncationParams& pm) {
  TruncationParams p2 = pm;
  p2.K = std::max(pm.K, 3 * pm.p);
  p2.degHi = std::max(pm.degHi, 2 * p2.K);
  DworkContext ctx(p2, 1);
  const OpSpace& sp = ctx.space();
  int32_t tN = p2.piPrecN();
  int64_t q = p2.q();

  {
    auto roots = ctx.roots();
    bool ok = true;
    PadicScalar sum = PadicScalar::zero(p2.p, sp.prec);
    for (auto& z : roots) {
      ok &= PadicScalar::eq_mod(z.pow(q), PadicScalar::one(p2.p, sp.prec), tN);
      sum += z;
    }
    rep.add("dwork/roots_exact", ok);
    rep.add("dwork/roots_sum_zero", sum.vanishes_mod(tN));
  }
  DiffOp H = ctx.dwork_H(0);
  {
    bool proj = true, eig = true;
    for (int32_t j = 0; j <= sp.K && (proj || eig); ++j) {
      LaurentPoly xj = LaurentPoly::variable(p2.p, sp.win, 0, sp.prec, j);
      LaurentPoly img = DiffOp::apply(H, xj);
      bool want = (j % q == 0);
      eig &= want ? LaurentPoly::eq_mod(img, xj, tN) : img.vanishes_mod(tN);
      proj &= LaurentPoly::eq_mod(DiffOp::apply(H, img), img, tN);
    }
    rep.add("dwork/projector_eigenvalues", eig);
    rep.add("dwork/projector_idempotent", proj);
  }
  {
    bool delta = true, vanish = true;
    for (int64_t k = 0; k < q; ++k) {
      DiffOp D = ctx.dual_basis_op({k});
      for (auto& [key, c] : D.terms()) vanish &= key.second[0] >= k && key.first[0] >= 0;
      for (int32_t j = 0; j <= sp.K; ++j) {
        LaurentPoly xj = LaurentPoly::variable(p2.p, sp.win, 0, sp.prec, j);
        LaurentPoly img = DiffOp::apply(D, xj);
        if ((j - k) % q == 0)
          delta &= LaurentPoly::eq_mod(
              img, LaurentPoly::variable(p2.p, sp.win, 0, sp.prec, j - (int32_t)k), tN);
        else
          delta &= img.vanishes_mod(tN);
      }
    }
    rep.add("dwork/dual_basis_delta", delta);
    rep.add("dwork/dual_coeff_vanishing", vanish);
  }
  {
    DiffOp sum(sp);
    for (int64_t k = 0; k < q; ++k)
      sum = sum + DiffOp::coordinate(sp, 0, (int32_t)k) * ctx.dual_basis_op({k});
    rep.add("dwork/partition_of_unity", DiffOp::eq_mod(sum, DiffOp::one(sp), tN));
  }
  {
    // O'-linearity inside the exact range
    Rng rng(pm.seed + 11);
    FrobeniusLift F{1, q};
    bool ok = true;
    for (int t = 0; t < 25; ++t) {
      int32_t df = (int32_t)rng.uniform(0, std::max(1, sp.K / 2));
      int32_t dg = (int32_t)rng.uniform(0, std::max<int64_t>(1, (sp.K - df) / q));
      LaurentPoly f = LaurentPoly::variable(p2.p, sp.win, 0, sp.prec, df)
                          .scaled(PadicScalar::from_int(p2.p, rng.uniform(-9, 9), sp.prec));
      LaurentPoly g = LaurentPoly::variable(p2.p, sp.win, 0, sp.prec, dg)
                          .scaled(PadicScalar::from_int(p2.p, rng.uniform(-9, 9), sp.prec));
      LaurentPoly Fg = frobenius_pullback(F, g);
      ok &= LaurentPoly::eq_mod(DiffOp::apply(H, f * Fg), DiffOp::apply(H, f) * Fg, tN);
    }
    rep.add("dwork/projector_Oprime_linear", ok);
  }
  {
    // transfer: homomorphism through the action, chain rule
    Rng rng(pm.seed + 13);
    FrobeniusLift F{1, q};
    bool homOk = true, chainOk = true;
    auto rand_y = [&](int terms) {
      DiffOp P(sp);
      for (int t = 0; t < terms; ++t)
        P.add_term(Exp{(int32_t)rng.uniform(0, 2)}, Exp{(int32_t)rng.uniform(0, 2)},
                   PadicScalar::from_int(p2.p, rng.uniform(-9, 9), sp.prec));
      return P;
    };
    for (int t = 0; t < 25; ++t) {
      DiffOp P = rand_y(2), Q = rand_y(2);
      DiffOp PQo = ctx.transfer(P * Q);
      DiffOp Po = ctx.transfer(P), Qo = ctx.transfer(Q);
      for (int32_t j = 0; j + 2 * (int32_t)q <= sp.K; j += (int32_t)q) {
        LaurentPoly xj = LaurentPoly::variable(p2.p, sp.win, 0, sp.prec, j);
        homOk &= LaurentPoly::eq_mod(DiffOp::apply(PQo, xj),
                                     DiffOp::apply(Po, DiffOp::apply(Qo, xj)), tN);
      }
      LaurentPoly g = LaurentPoly::variable(p2.p, sp.win, 0, sp.prec,
                                            (int32_t)rng.uniform(0, sp.K / (int32_t)q));
      chainOk &= LaurentPoly::eq_mod(DiffOp::apply(Po, frobenius_pullback(F, g)),
                                     frobenius_pullback(F, DiffOp::apply(P, g)), tN);
    }
    rep.add("dwork/transfer_homomorphism", homOk);
    rep.add("dwork/transfer_chain_rule", chainOk);
  }
  {
    // gauges: level-basis membership for all k, nu-mode at k = q-1
    bool lvl = true;
    for (int64_t k = 0; k < q; ++k)
      lvl &= ctx.dual_basis_op({k}).gauge(pm.s, GaugeMode::LevelBasis).member;
    rep.add("dwork/dual_levelbasis_member", lvl);
    rep.add("dwork/dual_numode_member_qm1",
            ctx.dual_basis_op({q - 1}).gauge(pm.s, GaugeMode::EhatInfinity).member);
  }
  {
    // Taylor element: evaluation identity and cocycle coefficients
    TruncationParams pt = p2;
    pt.m = std::max<int32_t>(1, pm.m);
    Window w = sp.win;
    Rng rng(pm.seed + 17);
    LaurentPoly id = LaurentPoly::variable(pt.p, w, 0, sp.prec);
    bool evalOk = true, cocOk = true;
    for (int t = 0; t < 6; ++t) {
      auto lift = [&]() {
        LaurentPoly f = id;
        for (int j = 0; j <= 2; ++j)
          f.add_term(Exp{j}, PadicScalar::from_int(pt.p, pt.p * rng.uniform(-3, 3), sp.prec));
        return f;
      };
      LaurentPoly f1 = lift(), f2 = lift(), f3 = lift();
      TaylorMap t12(pt, {f1}, {f2}), t23(pt, {f2}, {f3}), t13(pt, {f1}, {f3});
      LaurentPoly g = random_poly(rng, pt.p, w, sp.prec, 3, 2);
      evalOk &= LaurentPoly::eq_mod(t13.evaluate(g), g.substitute({f3}), tN);
      for (int deg = 0; deg <= 3 && cocOk; ++deg) {
        LaurentPoly conv = LaurentPoly::zero(pt.p, w, sp.prec);
        for (int k = 0; k <= deg; ++k) {
          LaurentPoly term =
              LaurentPoly::one(pt.p, w, sp.prec).scaled(padic_binomial(deg, k, pt.p, sp.prec));
          for (int i = 0; i < k; ++i) term = term * t23.deltas()[0];
          for (int i = 0; i < deg - k; ++i) term = term * t12.deltas()[0];
          conv = conv + term;
        }
        LaurentPoly want = LaurentPoly::one(pt.p, w, sp.prec);
        for (int i = 0; i < deg; ++i) want = want * t13.deltas()[0];
        cocOk &= LaurentPoly::eq_mod(conv, want, tN);
      }
    }
    rep.add("dwork/taylor_evaluation", evalOk);
    rep.add("dwork/taylor_cocycle", cocOk);
  }
}

// ---- division ------------------------------------------------------------

inline void run_division(Report& rep, const TruncationParams& pm) {
  for (int32_t m : {0, 1}) {
    TruncationParams pw = pm;
    pw.K = std::max<int32_t>(pm.K, 16);
    pw.degHi = std::max<int32_t>(pm.degHi, 30);
    pw.guard = std::max<int32_t>(pm.guard, 8);
    WeylContext W(pw);
    const OpSpace& sp = W.space();
    int32_t tN = pw.piPrecN();
    std::string tag = "division/m" + std::to_string(m) + "/";
    Rng rng(pm.seed + m);
    bool exact = true, xfree = true;
    for (int t = 0; t < 60; ++t) {
      DiffOp P(sp);
      for (int tt = 0; tt < 4; ++tt)
        P.add_term(Exp{(int32_t)rng.uniform(0, 5), (int32_t)rng.uniform(0, 4)},
                   Exp{(int32_t)rng.uniform(0, 3), (int32_t)rng.uniform(0, 3)},
                   PadicScalar::from_int(pw.p, rng.uniform(-40, 40), sp.prec));
      auto [Q, R] = W.divide_dirac({P, Chart::Global});
      xfree &= W.is_B2(R.op);
      exact &= DiffOp::eq_mod(Q.op * W.dirac() + R.op, P, tN);
    }
    rep.add(tag + "exactness", exact);
    rep.add(tag + "remainder_x_free", xfree);
    {
      auto cert = W.jump_certificate(m, 6, 100);
      rep.add(tag + "jump_deficit_bounded", cert.deficitNum <= (m + 2) * (pw.p - 1),
              "deficit=" + std::to_string(cert.deficitNum));
      bool slackOk = true;
      for (int t = 0; t < 20; ++t) {
        DiffOp P(sp);
        for (int tt = 0; tt < 3; ++tt) {
          Exp a{(int32_t)rng.uniform(0, 6), (int32_t)rng.uniform(0, 4)};
          Exp b{(int32_t)rng.uniform(0, 2), (int32_t)rng.uniform(0, 2)};
          int64_t c = rng.uniform(1, 20);
          P.add_term(a, b,
                     PadicScalar::from_int(
                         pw.p, c * ipow(pw.p, (int)(nu_m(a[0], pw.p, m) + nu_m(a[1], pw.p, m))),
                         sp.prec));
        }
        auto gP = P.gauge(m, GaugeMode::EhatInfinity);
        auto [Q, R] = W.divide_dirac({P, Chart::Global});
        slackOk &= Q.op.gauge(m + 2, GaugeMode::EhatInfinity)
                       .slack.ge(gP.slack.num - cert.deficitNum, pw.p - 1);
        slackOk &= R.op.gauge(m + 2, GaugeMode::EhatInfinity)
                       .slack.ge(gP.slack.num - cert.deficitNum, pw.p - 1);
      }
      rep.add(tag + "jump_slack_transfer", slackOk);
    }
    {
      bool sOk = true;
      TruncationParams pf = pw;
      pf.K = 34;
      pf.degHi = 40;
      WeylContext Wf(pf);
      const OpSpace& spf = Wf.space();
      for (int64_t l : {1, 2, 3, 5, 8, 13, 21, 30}) {
        auto [S, R] = Wf.build_S_R(l, m);
        DiffOp lhs =
            DiffOp::coordinate(spf, 0, (int32_t)l)
                .scaled(PadicScalar::from_int(pf.p, ipow(pf.p, (int)nu_m(l, pf.p, m)),
                                              spf.prec + (int32_t)l * (pf.p - 1) + 8));
        sOk &= DiffOp::eq_mod(S * Wf.dirac() + R, lhs, pf.piPrecN());
      }
      rep.add(tag + "formuleS_identity", sOk);
    }
    {
      bool bound = true;
      for (int64_t l = 1; l <= 100 && bound; ++l)
        for (int64_t r = 1; r <= l && bound; ++r)
          for (int64_t s = 0; s <= r - 1 && bound; ++s) bound &= W.coeff_c_bound_ok(l, r, s, m);
      rep.add(tag + "coeff_c_bound", bound);
    }
    {
      bool ok = W.kernel_test(DiffOp::zero(sp), tN).ok;
      for (int t = 0; t < 30; ++t) {
        DiffOp Q = random_op(rng, sp, 3, 3, 2);
        ok &= W.kernel_test(Q, tN).ok;
      }
      rep.add(tag + "kernel", ok);
    }
  }
  {
    // chart division
    TruncationParams pc = pm;
    pc.K = std::max<int32_t>(pm.K, 12);
    pc.degLo = std::min<int32_t>(pm.degLo, -12);
    pc.degHi = std::max<int32_t>(pm.degHi, 30);
    pc.guard = std::max<int32_t>(pm.guard, 8);
    WeylContext W(pc);
    const OpSpace& sp = W.space();
    int32_t tN = pc.piPrecN();
    DiffOp x = DiffOp::coordinate(sp, 0, -1);
    DiffOp Dglob = x.scaled(PadicScalar::pi(pc.p, sp.prec)) - DiffOp::del(sp, 1);
    rep.add("division/chart_ideal_identity",
            DiffOp::eq_mod(x * W.chart_dirac(Chart::U1V0), Dglob, tN));
    Rng rng(pm.seed + 5);
    bool exact = true, inClass = true;
    for (Chart chart : {Chart::U1V0, Chart::U1V1}) {
      for (int t = 0; t < 25; ++t) {
        DiffOp P(sp);
        for (int tt = 0; tt < 3; ++tt)
          P.add_term(Exp{(int32_t)rng.uniform(-3, 2), (int32_t)rng.uniform(0, 2)},
                     Exp{(int32_t)rng.uniform(0, 2), (int32_t)rng.uniform(0, 2)},
                     PadicScalar::from_int(pc.p, rng.uniform(-40, 40), sp.prec));
        auto [Q, R] = W.divide_chart({P, chart});
        inClass &= W.in_infprime_class(R.op);
        exact &= DiffOp::eq_mod(Q.op * W.chart_dirac(chart) + R.op, P, tN);
      }
    }
    rep.add("division/chart_exactness", exact);
    rep.add("division/chart_remainder_class", inClass);
  }
}

// ---- koszul ----------------------------------------------------------------

inline void run_koszul(Report& rep, const TruncationParams& pm) {
  int32_t prec = pm.piPrec(), tN = pm.piPrecN();
  Rng rng(pm.seed + 23);
  for (int d : {1, 2}) {
    Window w = Window::uniform(d, 0, 24);
    std::string tag = "koszul/d" + std::to_string(d) + "/";
    std::vector<LaurentPoly> y;
    for (int i = 0; i < d; ++i) y.push_back(LaurentPoly::variable(pm.p, w, i, prec));
    KoszulComplex K(y);
    rep.add(tag + "d_squared_zero", K.d_squared_zero(tN));
    rep.add(tag + "coordinate_sequence_regular", regular_sequence(y, 3, tN));
    bool chainOk = true, agreeOk = true;
    for (int t = 0; t < 15; ++t) {
      std::vector<std::vector<LaurentPoly>> G(
          d, std::vector<LaurentPoly>(d, LaurentPoly::zero(pm.p, w, prec)));
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          G[i][j] = random_poly(rng, pm.p, w, prec, 2, 2);
          if (i == j) {
            int64_t c = rng.uniform(1, 20);
            while (c % pm.p == 0) ++c;
            G[i][j].add_term(Exp(d, 0), PadicScalar::from_int(pm.p, c, prec));
          }
        }
      std::vector<LaurentPoly> z;
      for (int i = 0; i < d; ++i) {
        LaurentPoly zi = LaurentPoly::zero(pm.p, w, prec);
        for (int j = 0; j < d; ++j) zi = zi + G[i][j] * y[j];
        z.push_back(zi);
      }
      KoszulChainMap cm(KoszulComplex{z}, KoszulComplex{y}, G);
      chainOk &= cm.relation_holds(tN) && cm.chain_map_ok(tN);
      LaurentPoly wmul = random_poly(rng, pm.p, w, prec, 2, 2);
      auto res = iota_alpha(cm, [&](const LaurentPoly& g) { return wmul * g; }, tN);
      agreeOk &= res.agrees;
    }
    rep.add(tag + "chain_map", chainOk);
    rep.add(tag + "iota_alpha_agreement", agreeOk);
  }
}

// ---- canonical -------------------------------------------------------------

inline void run_canonical(Report& rep, const TruncationParams& pm) {
  int32_t tN = pm.piPrecN();
  {
    auto ts = ts_identity(pm);
    rep.add("canonical/ts_identity", ts.ok, ts.value.str());
    auto bi = binomial_identity(pm);
    rep.add("canonical/binomial_identity", bi.ok, bi.value.str());
    rep.add("canonical/binomial_per_root", bi.perRootOk);
  }
  {
    TruncationParams pq = pm;
    pq.degHi = std::max<int32_t>(pm.degHi, 40);
    MuModel model(pq, 1);
    Rng rng(pm.seed + 29);
    bool ok = true, keyOk = true;
    auto base = model.mu_via_composite(
        LaurentPoly::one(pq.p, model.x_window(), model.prec()), tN);
    keyOk = base.keyEvaluationOk && base.chainOk;
    for (int t = 0; t < 10; ++t) {
      LaurentPoly f = random_poly(rng, pq.p, model.x_window(), model.prec(), 3);
      ok &= model.mu_via_composite(f, tN).matchesClosedForm;
    }
    rep.add("canonical/mu_key_evaluation", keyOk);
    rep.add("canonical/mu_composite_matches_closed", ok);
  }
  {
    TruncationParams pc = pm;
    pc.K = std::max<int32_t>(pm.K, 14);
    pc.degHi = std::max<int32_t>(pm.degHi, 40);
    DworkContext ctx(pc, 1);
    Rng rng(pm.seed + 31);
    bool ok = true, reject = false;
    for (int t = 0; t < 5; ++t) {
      DiffOp P(ctx.space());
      P.add_term(Exp{(int32_t)rng.uniform(0, 1)}, Exp{(int32_t)rng.uniform(0, 1)},
                 PadicScalar::from_int(pc.p, rng.uniform(-9, 9), ctx.space().prec));
      std::vector<int64_t> l{rng.uniform(0, 2)};
      PushRecord direct = xi0(ctx, l, P, 6, 8);
      direct.pull_right_scalar_left(RingTag::OX, ctx.q());
      for (int64_t k = 0; k < ctx.q(); ++k) {
        PushRecord viaChi = chi_route(ctx, l, P, {k}, 6, 8);
        viaChi.pull_right_scalar_left(RingTag::OX, ctx.q());
        ok &= PushRecord::eq_mod(viaChi, direct, tN);
      }
    }
    try {
      PushRecord rec = chi_route(ctx, {1}, DiffOp::one(ctx.space()), {1}, 6, 8);
      rec.pull_right_scalar_left(RingTag::OXPrime, ctx.q());
    } catch (const DomainError&) {
      reject = true;
    }
    rep.add("canonical/chi_xi0_recombination", ok);
    rep.add("canonical/illegal_scalar_move_rejected", reject);
  }
  {
    bool ok = true;
    for (int d : {1, 2}) {
      auto r = frobenius_twist_ratio(pm, d);
      ok &= r.ok && r.ratio->first == ipow(pm.q(), d) && r.ratio->second == 1;
    }
    rep.add("canonical/frobenius_twist_ratio", ok);
    FrobeniusScalar psi{PadicScalar::one(pm.p, pm.piPrec()), 0};
    rep.add("canonical/twist_additive",
            twist(twist(psi, 1), 2).qExp == -3 && twist(psi, 0).qExp == 0);
  }
  {
    // mu_M / nu_N round-trip
    TruncationParams pc = pm;
    pc.K = std::max<int32_t>(pm.K, 12);
    pc.degHi = std::max<int32_t>(pm.degHi, 30);
    DworkContext ctx(pc, 1);
    Rng rng(pm.seed + 37);
    bool ok = true;
    for (int t = 0; t < 10; ++t) {
      LaurentPoly f = random_poly(rng, pc.p, ctx.space().win, ctx.space().prec, 3);
      ok &= LaurentPoly::eq_mod(nu_N(ctx, mu_M(ctx, f).op, 3), f, tN);
    }
    rep.add("canonical/mu_nu_roundtrip", ok);
  }
}

// ---- estimates -------------------------------------------------------------

inline void run_estimates(Report& rep, const TruncationParams& pm) {
  EstimationRange r;
  r.p = pm.p;
  r.kMax = 2000;
  r.boxN2 = 60;
  r.boxN3 = 16;
  r.mMax = 4;
  r.seed = pm.seed;
  auto res = check_estimations(r);
  rep.add("estimates/five_inequalities", res.ok, res.counterexample);
  rep.add("estimates/nu_subadditivity_gap", [&] {
    for (int64_t a = 0; a <= 300; ++a)
      for (int64_t b = 0; b <= 300; ++b)
        for (int32_t m = 0; m <= 2; ++m)
          if (nu_m(a, pm.p, m) + nu_m(b, pm.p, m) < nu_m(a + b, pm.p, m) - 1) return false;
    return true;
  }());
}

// ---- fourier ---------------------------------------------------------------

inline void run_fourier(Report& rep, const TruncationParams& pm) {
  TruncationParams pw = pm;
  pw.K = std::max<int32_t>(pm.K, 16);
  pw.degHi = std::max<int32_t>(pm.degHi, 30);
  pw.guard = std::max<int32_t>(pm.guard, 8);
  WeylContext W(pw);
  const OpSpace& sp = W.space();
  int32_t tN = pw.piPrecN();
  rep.add("fourier/reduce_one",
          DiffOp::eq_mod(W.fourier_reduce({DiffOp::one(sp), Chart::Global}), DiffOp::one(sp), tN));
  {
    DiffOp got = W.fourier_reduce(
        {DiffOp::coordinate(sp, 0).scaled(PadicScalar::pi(pw.p, sp.prec)), Chart::Global});
    rep.add("fourier/reduce_pix_is_dely", DiffOp::eq_mod(got, DiffOp::del(sp, 1), tN));
  }
  Rng rng(pm.seed + 41);
  bool leftKill = true, rightKill = true, exchange = true, idem = true;
  for (int t = 0; t < 40; ++t) {
    DiffOp A = random_op(rng, sp, 3, 3, 2);
    leftKill &= W.fourier_reduce({DiffOp::del(sp, 0) * A, Chart::Global}).vanishes_mod(tN);
    rightKill &= W.fourier_reduce({A * W.dirac(), Chart::Global}).vanishes_mod(tN);
    DiffOp viaX = W.fourier_reduce(
        {A * DiffOp::coordinate(sp, 0).scaled(PadicScalar::pi(pw.p, sp.prec)), Chart::Global});
    DiffOp viaD = W.fourier_reduce({A * DiffOp::del(sp, 1), Chart::Global});
    exchange &= DiffOp::eq_mod(viaX, viaD, tN);
    DiffOp red = W.fourier_reduce({A, Chart::Global});
    idem &= DiffOp::eq_mod(W.fourier_reduce({red, Chart::Global}), red, tN);
  }
  rep.add("fourier/annihilates_delx_A2", leftKill);
  rep.add("fourier/annihilates_A2_dirac", rightKill);
  rep.add("fourier/x_dely_exchange", exchange);
  rep.add("fourier/idempotent_on_image", idem);
  {
    auto rr = W.reduction_rank(4, 3, 2, 2, tN);
    rep.add("fourier/reduction_full_rank", rr.ok,
            "rank=" + std::to_string(rr.rank) + " expected=" + std::to_string(rr.expected));
  }
  {
    // del_x is central in B2, so left and right del_x-multiples agree there
    bool central = true;
    for (int t = 0; t < 15; ++t) {
      DiffOp B(sp);
      for (int tt = 0; tt < 3; ++tt)
        B.add_term(Exp{0, (int32_t)rng.uniform(0, 4)},
                   Exp{(int32_t)rng.uniform(0, 2), (int32_t)rng.uniform(0, 2)},
                   PadicScalar::from_int(pw.p, rng.uniform(-30, 30), sp.prec));
      central &= DiffOp::eq_mod(DiffOp::del(sp, 0) * B, B * DiffOp::del(sp, 0), tN);
    }
    rep.add("fourier/delx_central_in_B2", central);
  }
  {
    // the augmentation behind the quotient
    PadicScalar pi = PadicScalar::pi(pw.p, sp.prec);
    DiffOp dyPix = DiffOp::del(sp, 1) + DiffOp::coordinate(sp, 0).scaled(pi);
    bool ok = W.epsilon_prime(dyPix).vanishes_mod(tN);
    ok &= DiffOp::eq_mod(W.epsilon_prime(DiffOp::del(sp, 1)),
                         DiffOp::coordinate(sp, 0).scaled(-pi), tN);
    ok &= DiffOp::eq_mod(W.epsilon_prime(DiffOp::del(sp, 0)),
                         DiffOp::del(sp, 0) - DiffOp::coordinate(sp, 1).scaled(pi), tN);
    for (int t = 0; t < 10; ++t) {
      DiffOp P = random_op(rng, sp, 2, 2, 2);
      ok &= W.epsilon_prime(P * dyPix).vanishes_mod(tN);
    }
    rep.add("fourier/augmentation", ok);
  }
}

}  // namespace suites

inline Report run_suite(const std::string& name, const TruncationParams& pm) {
  Report rep;
  rep.suite = name;
  rep.params = pm;
  StopWatch sw;
  if (name == "dwork") suites::run_dwork(rep, pm);
  else if (name == "division") suites::run_division(rep, pm);
  else if (name == "koszul") suites::run_koszul(rep, pm);
  else if (name == "canonical") suites::run_canonical(rep, pm);
  else if (name == "estimates") suites::run_estimates(rep, pm);
  else if (name == "fourier") suites::run_fourier(rep, pm);
  else if (name == "all") {
    suites::run_dwork(rep, pm);
    suites::run_division(rep, pm);
    suites::run_koszul(rep, pm);
    suites::run_canonical(rep, pm);
    suites::run_estimates(rep, pm);
    suites::run_fourier(rep, pm);
  } else {
    throw DomainError("unknown suite '" + name +
                      "' (try dwork, division, koszul, canonical, estimates, fourier, all)");
  }
  rep.sort();
  rep.wall_ms = sw.ms();
  return rep;
}

}  // namespace padicalc
