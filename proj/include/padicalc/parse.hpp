#pragma once
// Expression language of the command-line front end.  Whitespace-insensitive
// grammar, mirroring the notation the operators print with:
//
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := scalar | var power? | dop | dwork | '(' expr ')'
//   var    := 'x' index? | 'y' index? | "x'" | 't'
//   power  := '^' int
//   dop    := ('dx'|'dy') index? ('^[' nat ']' | '^<' nat ';' nat '>')
//   dwork  := 'H' ('(' var ')')? | 'Hx^-{' nat (',' nat)* '}'
//   scalar := int | 'p' | 'pi' power? | 'zeta' power? | scalar '/' scalar
//
// Values evaluate into the operator algebra over the variable slots the
// expression actually uses; parse errors carry line, column and the set of
// tokens that would have been accepted.

#include <algorithm>
#include <cctype>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "padicalc/dwork.hpp"

namespace padicalc {

struct ParseError : std::runtime_error {
  int line, col;
  std::set<std::string> expected;
  ParseError(int l, int c, std::string msg, std::set<std::string> exp)
      : std::runtime_error("parse error at " + std::to_string(l) + ":" + std::to_string(c) +
                           ": " + msg + expected_str(exp)),
        line(l), col(c), expected(std::move(exp)) {}
  static std::string expected_str(const std::set<std::string>& e) {
    if (e.empty()) return "";
    std::string s = " (expected ";
    bool first = true;
    for (auto& t : e) {
      if (!first) s += ", ";
      s += t;
      first = false;
    }
    return s + ")";
  }
};

// a parsed value is a scalar, a function, or an operator
struct Value {
  enum class Kind { Scalar, Poly, Op } kind;
  PadicScalar scalar;
  LaurentPoly poly;
  DiffOp op;
};

namespace ast {
struct Node;
using Ptr = std::shared_ptr<Node>;
struct Node {
  enum class Kind { Add, Sub, Mul, Div, Int, P, Pi, Zeta, Var, Dop, DworkH, DworkDual } kind;
  Ptr lhs, rhs;
  int64_t value = 0;       // Int; or power for Pi/Zeta/Var
  std::string var;         // variable name: x1.., y1.., x', t
  int64_t order = 1;       // dop order k
  int64_t level = -1;      // dop level m (for the <k;m> display basis), -1 = divided
  std::vector<int64_t> multi;  // dwork dual multi-index
};
}  // namespace ast

class Lexer {
 public:
  explicit Lexer(std::string s) : s_(std::move(s)) {}
  struct Tok {
    std::string text;
    int line, col;
  };
  Tok peek() {
    if (!cached_) {
      cached_ = lex();
    }
    return *cached_;
  }
  Tok next() {
    Tok t = peek();
    cached_.reset();
    return t;
  }
  bool accept(const std::string& t) {
    if (peek().text == t) {
      next();
      return true;
    }
    return false;
  }
  void expect(const std::string& t, const std::set<std::string>& also = {}) {
    if (!accept(t)) {
      auto e = also;
      e.insert("'" + t + "'");
      fail("unexpected token '" + peek().text + "'", e);
    }
  }
  [[noreturn]] void fail(const std::string& msg, std::set<std::string> expected) {
    Tok t = peek();
    throw ParseError(t.line, t.col, msg, std::move(expected));
  }

 private:
  Tok lex() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n')) {
      if (s_[pos_] == '\n') {
        ++line_;
        colBase_ = pos_ + 1;
      }
      ++pos_;
    }
    int col = (int)(pos_ - colBase_) + 1;
    if (pos_ >= s_.size()) return {"", line_, col};
    char c = s_[pos_];
    auto one = [&](const char* t) {
      ++pos_;
      return Tok{t, line_, col};
    };
    switch (c) {
      case '+': return one("+");
      case '-': return one("-");
      case '*': return one("*");
      case '/': return one("/");
      case '(': return one("(");
      case ')': return one(")");
      case '^': return one("^");
      case '[': return one("[");
      case ']': return one("]");
      case '{': return one("{");
      case '}': return one("}");
      case '<': return one("<");
      case '>': return one(">");
      case ';': return one(";");
      case ',': return one(",");
      default: break;
    }
    if (isdigit((unsigned char)c)) {
      size_t start = pos_;
      while (pos_ < s_.size() && isdigit((unsigned char)s_[pos_])) ++pos_;
      return {s_.substr(start, pos_ - start), line_, col};
    }
    if (isalpha((unsigned char)c)) {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (isalnum((unsigned char)s_[pos_]) || s_[pos_] == '\'')) ++pos_;
      return {s_.substr(start, pos_ - start), line_, col};
    }
    throw ParseError(line_, col, std::string("stray character '") + c + "'", {});
  }

  std::string s_;
  size_t pos_ = 0;
  size_t colBase_ = 0;
  int line_ = 1;
  std::optional<Tok> cached_;
};

class Parser {
 public:
  explicit Parser(const std::string& s) : lx_(s) {}

  ast::Ptr parse() {
    ast::Ptr e = expr();
    if (!lx_.peek().text.empty())
      lx_.fail("trailing input '" + lx_.peek().text + "'", {"'+'", "'-'", "'*'", "end of input"});
    return e;
  }

 private:
  static ast::Ptr mk(ast::Node::Kind k) {
    auto n = std::make_shared<ast::Node>();
    n->kind = k;
    return n;
  }

  ast::Ptr expr() {
    ast::Ptr e = term();
    while (true) {
      if (lx_.accept("+")) {
        auto n = mk(ast::Node::Kind::Add);
        n->lhs = e;
        n->rhs = term();
        e = n;
      } else if (lx_.accept("-")) {
        auto n = mk(ast::Node::Kind::Sub);
        n->lhs = e;
        n->rhs = term();
        e = n;
      } else
        return e;
    }
  }

  ast::Ptr term() {
    ast::Ptr e = factor();
    while (lx_.accept("*")) {
      auto n = mk(ast::Node::Kind::Mul);
      n->lhs = e;
      n->rhs = factor();
      e = n;
    }
    return e;
  }

  int64_t integer() {
    bool neg = lx_.accept("-");
    auto t = lx_.peek();
    if (t.text.empty() || !isdigit((unsigned char)t.text[0]))
      lx_.fail("expected an integer", {"integer"});
    lx_.next();
    int64_t v = std::stoll(t.text);
    return neg ? -v : v;
  }

  int64_t nat() {
    auto t = lx_.peek();
    if (t.text.empty() || !isdigit((unsigned char)t.text[0]))
      lx_.fail("expected a natural number", {"natural number"});
    lx_.next();
    return std::stoll(t.text);
  }

  ast::Ptr factor() {
    auto t = lx_.peek();
    if (t.text == "(") {
      lx_.next();
      ast::Ptr e = expr();
      lx_.expect(")");
      return maybe_div(e);
    }
    if (t.text == "-" || (!t.text.empty() && isdigit((unsigned char)t.text[0]))) {
      auto n = mk(ast::Node::Kind::Int);
      n->value = integer();
      return maybe_div(n);
    }
    if (t.text == "p") {
      lx_.next();
      return maybe_div(mk(ast::Node::Kind::P));
    }
    if (t.text == "pi" || t.text == "zeta") {
      lx_.next();
      auto n = mk(t.text == "pi" ? ast::Node::Kind::Pi : ast::Node::Kind::Zeta);
      n->value = 1;
      if (lx_.accept("^")) n->value = integer();
      return maybe_div(n);
    }
    if (t.text == "H") {
      lx_.next();
      auto n = mk(ast::Node::Kind::DworkH);
      if (lx_.accept("(")) {
        n->var = var_name();
        lx_.expect(")");
      }
      return n;
    }
    if (t.text == "Hx") {
      lx_.next();
      lx_.expect("^");
      lx_.expect("-");
      lx_.expect("{");
      auto n = mk(ast::Node::Kind::DworkDual);
      n->multi.push_back(nat());
      while (lx_.accept(",")) n->multi.push_back(nat());
      lx_.expect("}");
      return n;
    }
    if (t.text.size() >= 2 && (t.text.rfind("dx", 0) == 0 || t.text.rfind("dy", 0) == 0)) {
      lx_.next();
      auto n = mk(ast::Node::Kind::Dop);
      n->var = t.text;  // dx, dx1, dy2, ...
      lx_.expect("^", {"'^['", "'^<'"});
      if (lx_.accept("[")) {
        n->order = nat();
        lx_.expect("]");
      } else if (lx_.accept("<")) {
        n->order = nat();
        lx_.expect(";");
        n->level = nat();
        lx_.expect(">");
      } else {
        lx_.fail("expected a divided-power or level bracket", {"'['", "'<'"});
      }
      return n;
    }
    if (!t.text.empty() && (t.text[0] == 'x' || t.text[0] == 'y' || t.text[0] == 't')) {
      auto n = mk(ast::Node::Kind::Var);
      n->var = var_name();
      n->value = 1;
      if (lx_.accept("^")) n->value = integer();
      return n;
    }
    lx_.fail("unexpected token '" + t.text + "'",
             {"integer", "'p'", "'pi'", "'zeta'", "variable", "'dx'", "'dy'", "'H'", "'('"});
  }

  // scalar '/' scalar
  ast::Ptr maybe_div(ast::Ptr e) {
    while (lx_.accept("/")) {
      auto n = mk(ast::Node::Kind::Div);
      n->lhs = e;
      n->rhs = factor();
      e = n;
    }
    return e;
  }

  std::string var_name() {
    auto t = lx_.peek();
    if (t.text.empty()) lx_.fail("expected a variable", {"'x'", "'y'", "'x''", "'t'"});
    const std::string& s = t.text;
    bool ok = s == "t" || s == "x'" ||
              ((s[0] == 'x' || s[0] == 'y') &&
               (s.size() == 1 || std::all_of(s.begin() + 1, s.end(),
                                             [](char c) { return isdigit((unsigned char)c); })));
    if (!ok) lx_.fail("expected a variable, got '" + s + "'", {"'x'", "'y'", "'x''", "'t'"});
    lx_.next();
    return s;
  }

  Lexer lx_;
};

// ---------------------------------------------------------------------------
// evaluation

namespace detail {

inline void collect_dops(const ast::Ptr& n, std::set<std::string>& dops) {
  if (!n) return;
  if (n->kind == ast::Node::Kind::Dop) {
    std::string base = n->var.substr(1);
    if (base == "x") base = "x1";
    if (base == "y") base = "y1";
    dops.insert(base);
  }
  collect_dops(n->lhs, dops);
  collect_dops(n->rhs, dops);
}

inline void collect_vars(const ast::Ptr& n, std::set<std::string>& xs, std::set<std::string>& ys,
                         bool& chart, int& dwork) {
  if (!n) return;
  using K = ast::Node::Kind;
  switch (n->kind) {
    case K::Var:
      if (n->var == "x'" || n->var == "t") chart = true;
      else if (n->var[0] == 'x') xs.insert(n->var == "x" ? "x1" : n->var);
      else ys.insert(n->var == "y" ? "y1" : n->var);
      break;
    case K::Dop: {
      // recorded separately: on a chart the same tokens name the chart
      // derivatives, not global variables
      break;
    }
    case K::DworkH:
      ++dwork;
      if (!n->var.empty()) xs.insert(n->var == "x" ? "x1" : n->var);
      else xs.insert("x1");
      break;
    case K::DworkDual:
      ++dwork;
      for (size_t i = 0; i < n->multi.size(); ++i) xs.insert("x" + std::to_string(i + 1));
      break;
    default: break;
  }
  collect_vars(n->lhs, xs, ys, chart, dwork);
  collect_vars(n->rhs, xs, ys, chart, dwork);
}

}  // namespace detail

class Evaluator {
 public:
  Evaluator(const TruncationParams& pm) : pm_(pm) { pm_.validate(); }

  // variable slots in declaration order; the Dwork context is created on
  // demand for the x-block
  Value eval(const ast::Ptr& root) {
    std::set<std::string> xs, ys;
    bool chart = false;
    int dwork = 0;
    detail::collect_vars(root, xs, ys, chart, dwork);
    if (chart && (!xs.empty() || !ys.empty()))
      throw DomainError("chart variables x', t cannot mix with global x, y");
    slots_.clear();
    if (chart) {
      slots_ = {"x'", "t"};
    } else {
      std::set<std::string> dops;
      detail::collect_dops(root, dops);
      for (auto& d : dops) (d[0] == 'x' ? xs : ys).insert(d);
      for (auto& v : xs) slots_.push_back(v);
      for (auto& v : ys) slots_.push_back(v);
      if (slots_.empty()) slots_ = {"x1"};
    }
    nx_ = 0;
    for (auto& s : slots_)
      if (s[0] == 'x') ++nx_;
    sp_.p = pm_.p;
    sp_.K = pm_.K;
    sp_.prec = pm_.piPrec();
    sp_.win = Window::uniform((int)slots_.size(), pm_.degLo, pm_.degHi);
    if (dwork > 0) {
      if (nx_ == 0) throw DomainError("Dwork operators need an x-variable");
      dctx_ = std::make_shared<DworkContext>(pm_, (int)slots_.size());
      // with several Dwork factors, materialize each at a fraction of the
      // cap so that their normal-form products close inside it
      dworkCap_ = dwork >= 2 ? std::max(1, sp_.K / dwork) : sp_.K;
    }
    return run(root);
  }

  const std::vector<std::string>& slots() const { return slots_; }
  const OpSpace& space() const { return sp_; }

  std::string print(const Value& v) const {
    switch (v.kind) {
      case Value::Kind::Scalar: return v.scalar.str();
      case Value::Kind::Poly: return v.poly.str(slots_);
      case Value::Kind::Op: {
        // on a chart the derivative tokens stay dx, dy
        std::vector<std::string> ds;
        for (auto& s : slots_) ds.push_back(s == "x'" ? "dx" : (s == "t" ? "dy" : "d" + s));
        return v.op.str(slots_, ds);
      }
    }
    return "0";
  }

 private:
  int slot_of(std::string name) const {
    if (name == "x") name = "x1";
    if (name == "y") name = "y1";
    for (size_t i = 0; i < slots_.size(); ++i)
      if (slots_[i] == name) return (int)i;
    throw DomainError("unknown variable " + name);
  }

  Value scalar_value(PadicScalar s) const {
    return Value{Value::Kind::Scalar, std::move(s), {}, {}};
  }
  Value op_value(DiffOp op) const { return Value{Value::Kind::Op, {}, {}, std::move(op)}; }

  DiffOp to_op(const Value& v) const {
    switch (v.kind) {
      case Value::Kind::Op: return v.op;
      case Value::Kind::Poly: return DiffOp::from_poly(sp_, v.poly);
      case Value::Kind::Scalar: return DiffOp::one(sp_).scaled(v.scalar);
    }
    throw DomainError("bad value");
  }

  Value run(const ast::Ptr& n) {
    using K = ast::Node::Kind;
    switch (n->kind) {
      case K::Int: return scalar_value(PadicScalar::from_int(pm_.p, n->value, pm_.piPrec()));
      case K::P: return scalar_value(PadicScalar::from_int(pm_.p, pm_.p, pm_.piPrec()));
      case K::Pi: {
        PadicScalar pi = PadicScalar::pi(pm_.p, pm_.piPrec() + 2 * (pm_.p - 1));
        if (n->value >= 0) return scalar_value(pi.pow(n->value));
        return scalar_value(pi.pow(-n->value).inv());
      }
      case K::Zeta: {
        auto roots = roots_of_unity(pm_);
        PadicScalar z = roots[1];
        int64_t e = ((n->value % pm_.q()) + pm_.q()) % pm_.q();
        return scalar_value(z.pow(e));
      }
      case K::Var: {
        int i = slot_of(n->var);
        if (n->value == 0) return scalar_value(PadicScalar::one(pm_.p, pm_.piPrec()));
        return op_value(DiffOp::coordinate(sp_, i, (int32_t)n->value));
      }
      case K::Dop: {
        std::string base = n->var.substr(1);
        if (slots_[0] == "x'") {
          // chart: dx differentiates x', dy differentiates t
          base = base[0] == 'x' ? "x'" : "t";
        } else {
          if (base == "x") base = "x1";
          if (base == "y") base = "y1";
        }
        int i = slot_of(base);
        DiffOp d = DiffOp::del(sp_, i, (int32_t)n->order);
        if (n->level >= 0) {
          int64_t qf = q_floor(n->order, pm_.p, (int32_t)n->level);
          if (qf > 1)
            d = d.scaled(DiffOp::factorial_scalar_of(pm_.p, pm_.piPrec(), qf));
        }
        return op_value(d);
      }
      case K::DworkH: {
        if (!n->var.empty()) return op_value(dctx_->dwork_H(slot_of(n->var), dworkCap_));
        std::vector<int64_t> k(slots_.size(), 0);
        return op_value(dctx_->dual_basis_op(k, dworkCap_));
      }
      case K::DworkDual: {
        std::vector<int64_t> k = n->multi;
        if ((int)k.size() != nx_)
          throw DomainError("dual-basis index arity does not match the x-variables");
        // pad with y-slots acting as identity
        while ((int)k.size() < (int)slots_.size()) k.push_back(0);
        return op_value(dctx_->dual_basis_op(k, dworkCap_));
      }
      case K::Add: case K::Sub: {
        Value a = run(n->lhs), b = run(n->rhs);
        if (a.kind == Value::Kind::Scalar && b.kind == Value::Kind::Scalar)
          return scalar_value(n->kind == K::Add ? a.scalar + b.scalar : a.scalar - b.scalar);
        DiffOp r = n->kind == K::Add ? to_op(a) + to_op(b) : to_op(a) - to_op(b);
        return op_value(r);
      }
      case K::Mul: {
        Value a = run(n->lhs), b = run(n->rhs);
        if (a.kind == Value::Kind::Scalar && b.kind == Value::Kind::Scalar)
          return scalar_value(a.scalar * b.scalar);
        return op_value(to_op(a) * to_op(b));
      }
      case K::Div: {
        Value a = run(n->lhs), b = run(n->rhs);
        if (b.kind != Value::Kind::Scalar) throw DomainError("division only by scalars");
        if (a.kind == Value::Kind::Scalar) return scalar_value(a.scalar / b.scalar);
        return op_value(to_op(a).scaled(b.scalar.inv()));
      }
    }
    throw DomainError("bad node");
  }

  TruncationParams pm_;
  std::vector<std::string> slots_;
  int nx_ = 0;
  int32_t dworkCap_ = 0;
  OpSpace sp_;
  std::shared_ptr<DworkContext> dctx_;
};

struct EvalResult {
  Value value;
  std::vector<std::string> slots;
  std::string printed;
};

inline EvalResult parse_eval(const std::string& text, const TruncationParams& pm) {
  Parser ps(text);
  ast::Ptr root = ps.parse();
  Evaluator ev(pm);
  Value v = ev.eval(root);
  std::string printed = ev.print(v);
  return {std::move(v), ev.slots(), std::move(printed)};
}

}  // namespace padicalc
