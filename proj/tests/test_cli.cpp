#include <catch2/catch_amalgamated.hpp>

#include "padicalc/parse.hpp"
#include "padicalc/suites.hpp"

using namespace padicalc;

namespace {
TruncationParams base_params(int p = 3) {
  TruncationParams pm;
  pm.p = p;
  pm.N = 10;
  pm.guard = 5;
  pm.K = 8;
  pm.degLo = -8;
  pm.degHi = 24;
  return pm;
}
}  // namespace

TEST_CASE("grammar smoke tests") {
  auto pm = base_params();
  // dx^[2] * x^5 acts as del^[2] o x^5
  {
    EvalResult r = parse_eval("dx^[2] * x^5", pm);
    REQUIRE(r.value.kind == Value::Kind::Op);
    OpSpace sp{pm.p, Window::uniform(1, pm.degLo, pm.degHi), pm.K, pm.piPrec()};
    LaurentPoly one = LaurentPoly::one(pm.p, sp.win, sp.prec);
    LaurentPoly lhs = DiffOp::apply(r.value.op, one);
    // del^[2](x^5) = 10 x^3
    LaurentPoly want = LaurentPoly::variable(pm.p, sp.win, 0, sp.prec, 3)
                           .scaled(PadicScalar::from_int(pm.p, 10, sp.prec));
    REQUIRE(LaurentPoly::eq_mod(lhs, want, pm.piPrecN()));
  }
  // pi^2 + p is an exact zero at p = 3
  {
    EvalResult r = parse_eval("pi^2 + p", pm);
    REQUIRE(r.value.kind == Value::Kind::Scalar);
    REQUIRE(r.value.scalar.vanishes_mod(pm.piPrecN()));
  }
  // Dwork factors multiply
  {
    TruncationParams pd = pm;
    pd.K = 12;
    EvalResult r = parse_eval("H(x1) * Hx^-{1}", pd);
    REQUIRE(r.value.kind == Value::Kind::Op);
    REQUIRE_FALSE(r.value.op.zero_at_prec());
  }
  // level display basis: dx^<3;0> = q_3^(0)! dx^[3] = 6 dx^[3]
  {
    EvalResult r = parse_eval("dx^<3;0> - 6 * dx^[3]", pm);
    REQUIRE(r.value.op.vanishes_mod(pm.piPrecN()));
  }
  // scalar division
  {
    EvalResult r = parse_eval("p/pi", pm);
    REQUIRE(r.value.kind == Value::Kind::Scalar);
    REQUIRE(r.value.scalar.val().num == 1);  // v(p/pi) = 1 - 1/2 -> 1/2, num=1 den=2
  }
}

TEST_CASE("parse errors carry position and expectations") {
  auto pm = base_params();
  try {
    parse_eval("x ^", pm);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    REQUIRE(e.line == 1);
    REQUIRE(e.col >= 3);
    REQUIRE_FALSE(e.expected.empty());
  }
  REQUIRE_THROWS_AS(parse_eval("dx * x", pm), ParseError);   // dop needs a bracket
  REQUIRE_THROWS_AS(parse_eval("x' + y", pm), DomainError);  // chart/global mix
  REQUIRE_THROWS_AS(parse_eval("q + 1", pm), ParseError);
}

TEST_CASE("print/parse round-trip on module-produced values") {
  auto pm = base_params();
  Rng rng(91);
  for (int t = 0; t < 30; ++t) {
    // build a random printable expression through the evaluator itself
    std::ostringstream os;
    os << rng.uniform(-9, 9) << " + " << rng.uniform(1, 9) << "*x1^" << rng.uniform(0, 4)
       << "*dx1^[" << rng.uniform(0, 3) << "]"
       << " + " << rng.uniform(-9, 9) << "*y1^" << rng.uniform(0, 3);
    EvalResult r1 = parse_eval(os.str(), pm);
    EvalResult r2 = parse_eval(r1.printed, pm);
    REQUIRE(r2.printed == r1.printed);
    // value equality whenever the reparse lands in the same variable space
    // (a vanished variable shrinks the inferred space; the printed form is
    // the canonical comparison there)
    if (r1.value.kind == Value::Kind::Op && r2.value.kind == Value::Kind::Op &&
        r1.value.op.dim() == r2.value.op.dim())
      REQUIRE(DiffOp::eq_mod(r1.value.op, r2.value.op, pm.piPrecN()));
  }
  // scalar round-trip including negative pi-powers
  for (int t = 0; t < 20; ++t) {
    int64_t n = rng.uniform(-500, 500);
    if (n == 0) n = 1;
    std::string e = std::to_string(n) + " / pi^" + std::to_string(rng.uniform(0, 3));
    EvalResult r1 = parse_eval(e, pm);
    EvalResult r2 = parse_eval(r1.printed, pm);
    REQUIRE(r2.printed == r1.printed);
  }
}

TEST_CASE("suite reports are deterministic given (params, seed)") {
  auto pm = base_params(2);
  pm.seed = 42;
  Report a = run_suite("fourier", pm);
  Report b = run_suite("fourier", pm);
  auto ja = a.to_json(), jb = b.to_json();
  ja.erase("wall_ms");
  jb.erase("wall_ms");
  REQUIRE(ja.dump() == jb.dump());
  REQUIRE(a.exit_code() == 0);
  // failure entries flip the exit code
  Report c;
  c.suite = "x";
  c.params = pm;
  c.add("synthetic", false, "witness");
  REQUIRE(c.exit_code() == 1);
}

TEST_CASE("every suite passes at small parameters") {
  for (const char* name : {"dwork", "division", "koszul", "canonical", "estimates", "fourier"}) {
    auto pm = base_params(3);
    pm.N = 8;
    pm.guard = 6;
    Report rep = run_suite(name, pm);
    INFO(rep.to_text());
    REQUIRE(rep.exit_code() == 0);
  }
}
