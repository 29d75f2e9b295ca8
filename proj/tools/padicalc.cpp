// padicalc: exact p-adic operator calculus at desk scale.
//
//   padicalc check <suite>   run an invariant battery (dwork, division,
//                            koszul, canonical, estimates, fourier, all)
//   padicalc eval <expr>     evaluate an expression of the operator language
//   padicalc divide <expr>   divide by -del_y + pi x, report {Q, R, gauges}
//   padicalc reduce <expr>   Fourier-quotient normal form in (y, del_y)
//   padicalc koszul          shorthand for `check koszul`
//
// Exit codes: 0 all checks pass, 1 failures, 2 usage or parse errors.

#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "padicalc/parse.hpp"
#include "padicalc/suites.hpp"
#include "padicalc/weyl.hpp"

using namespace padicalc;

namespace {

nlohmann::json op_to_json(const DiffOp& P) {
  nlohmann::json terms = nlohmann::json::array();
  for (auto& [k, c] : P.terms()) {
    nlohmann::json t;
    t["a"] = k.first;
    t["b"] = k.second;
    t["c"] = {{"pi_lo", c.lo()}, {"digits", c.digits()}, {"precision", c.prec()}};
    terms.push_back(t);
  }
  return terms;
}

nlohmann::json scalar_to_json(const PadicScalar& c) {
  return {{"pi_lo", c.lo()}, {"digits", c.digits()}, {"precision", c.prec()}};
}

nlohmann::json gauge_to_json(const GaugeReport& g) {
  nlohmann::json j;
  j["level"] = g.level;
  j["slack"] = g.slack.str();
  j["member"] = g.member;
  return j;
}

int do_eval(const std::string& expr, const TruncationParams& pm, const std::string& format) {
  EvalResult r = parse_eval(expr, pm);
  if (format == "json") {
    nlohmann::json j;
    j["schema"] = 1;
    j["variables"] = r.slots;
    switch (r.value.kind) {
      case Value::Kind::Scalar:
        j["kind"] = "scalar";
        j["value"] = scalar_to_json(r.value.scalar);
        break;
      case Value::Kind::Poly:
        j["kind"] = "poly";
        break;
      case Value::Kind::Op:
        j["kind"] = "operator";
        j["terms"] = op_to_json(r.value.op);
        break;
    }
    j["printed"] = r.printed;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << r.printed << "\n";
  }
  return 0;
}

int do_divide(const std::string& expr, const TruncationParams& pmIn, const std::string& format) {
  TruncationParams pm = pmIn;
  pm.K = std::max<int32_t>(pm.K, 16);
  EvalResult r = parse_eval(expr, pm);
  WeylContext W(pm);
  const OpSpace& sp = W.space();
  // re-evaluate in the fixed (x, y) space of the division algebra
  DiffOp P(sp);
  DiffOp parsed = r.value.kind == Value::Kind::Op
                      ? r.value.op
                      : DiffOp::one(sp).scaled(r.value.scalar);
  for (auto& [k, c] : parsed.terms()) {
    Exp a(2, 0), b(2, 0);
    for (size_t i = 0; i < k.first.size() && i < 2; ++i) {
      a[i] = k.first[i];
      b[i] = k.second[i];
    }
    P.add_term(a, b, c);
  }
  auto [Q, R] = W.divide_dirac({P, Chart::Global});
  auto before = P.gauge(pm.m, GaugeMode::EhatInfinity);
  auto gq = Q.op.gauge(pm.m + 2, GaugeMode::EhatInfinity);
  auto gr = R.op.gauge(pm.m + 2, GaugeMode::EhatInfinity);
  std::vector<std::string> xs{"x", "y"}, ds{"dx", "dy"};
  if (format == "json") {
    nlohmann::json j;
    j["schema"] = 1;
    j["Q"] = op_to_json(Q.op);
    j["R"] = op_to_json(R.op);
    j["gauge_before"] = gauge_to_json(before);
    j["gauge_after"] = {{"Q", gauge_to_json(gq)}, {"R", gauge_to_json(gr)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "Q = " << Q.op.str(xs, ds) << "\n";
    std::cout << "R = " << R.op.str(xs, ds) << "\n";
    std::cout << "gauge before (level " << pm.m << "): slack " << before.slack.str()
              << (before.member ? " member" : " not a member") << "\n";
    std::cout << "gauge after  (level " << pm.m + 2 << "): Q slack " << gq.slack.str() << ", R slack "
              << gr.slack.str() << "\n";
  }
  return 0;
}

int do_reduce(const std::string& expr, const TruncationParams& pmIn, const std::string& format) {
  TruncationParams pm = pmIn;
  pm.K = std::max<int32_t>(pm.K, 16);
  EvalResult r = parse_eval(expr, pm);
  WeylContext W(pm);
  const OpSpace& sp = W.space();
  DiffOp P(sp);
  DiffOp parsed = r.value.kind == Value::Kind::Op
                      ? r.value.op
                      : DiffOp::one(sp).scaled(r.value.scalar);
  for (auto& [k, c] : parsed.terms()) {
    Exp a(2, 0), b(2, 0);
    for (size_t i = 0; i < k.first.size() && i < 2; ++i) {
      a[i] = k.first[i];
      b[i] = k.second[i];
    }
    P.add_term(a, b, c);
  }
  DiffOp red = W.fourier_reduce({P, Chart::Global});
  if (format == "json") {
    nlohmann::json j;
    j["schema"] = 1;
    j["reduced"] = op_to_json(red);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << red.str({"x", "y"}, {"dx", "dy"}) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact p-adic operator calculus: Dwork operators, Frobenius descent,\n"
               "Koszul oracles and overconvergent Weyl division at capped precision"};
  app.set_config("--config", "", "key=value configuration file");
  app.fallthrough();

  TruncationParams pm;
  std::string format = "text";
  app.add_option("--p", pm.p, "prime p")->capture_default_str();
  app.add_option("--s", pm.s, "Frobenius power, q = p^s")->capture_default_str();
  app.add_option("--prec", pm.N, "working precision in powers of p")->capture_default_str();
  app.add_option("--deg-lo", pm.degLo, "window lower bound")->capture_default_str();
  app.add_option("--deg-hi", pm.degHi, "window upper bound")->capture_default_str();
  app.add_option("--order", pm.K, "divided-power order cap")->capture_default_str();
  app.add_option("--level", pm.m, "level m")->capture_default_str();
  app.add_option("--seed", pm.seed, "seed for the property suites")->capture_default_str();
  app.add_option("--format", format, "output format: text | json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  std::string suiteName, exprText;
  CLI::App* check = app.add_subcommand("check", "run an invariant battery");
  check->add_option("suite", suiteName, "dwork | division | koszul | canonical | estimates | fourier | all")
      ->required();
  CLI::App* evalCmd = app.add_subcommand("eval", "evaluate an expression");
  evalCmd->add_option("expr", exprText, "expression")->required();
  CLI::App* divideCmd = app.add_subcommand("divide", "divide by -del_y + pi x");
  divideCmd->add_option("expr", exprText, "expression in x, y, dx, dy")->required();
  CLI::App* reduceCmd = app.add_subcommand("reduce", "Fourier-quotient normal form");
  reduceCmd->add_option("expr", exprText, "expression in x, y, dx, dy")->required();
  CLI::App* koszulCmd = app.add_subcommand("koszul", "shorthand for `check koszul`");

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    pm.validate();
    if (check->parsed() || koszulCmd->parsed()) {
      Report rep = run_suite(koszulCmd->parsed() ? "koszul" : suiteName, pm);
      if (format == "json")
        std::cout << rep.to_json().dump(2) << "\n";
      else
        std::cout << rep.to_text();
      return rep.exit_code();
    }
    if (evalCmd->parsed()) return do_eval(exprText, pm, format);
    if (divideCmd->parsed()) return do_divide(exprText, pm, format);
    if (reduceCmd->parsed()) return do_reduce(exprText, pm, format);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const OverflowError& e) {
    std::cerr << "overflow: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
