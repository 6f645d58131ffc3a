#include "surfhol/exprlang.hpp"

#include <charconv>
#include <cmath>
#include <vector>

namespace surfhol::expr {

struct Node {
  enum class Op { num, var, add, sub, mul, div, pow, neg, sin, cos, exp };
  Op op = Op::num;
  double value = 0.0;  // literal, or exponent for pow
  Var var;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;
using Op = Node::Op;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->value = value;
  return n;
}

NodePtr num(double v) { return make(Op::num, nullptr, nullptr, v); }

bool is_literal(const NodePtr& n, double v) { return n->op == Op::num && n->value == v; }

// Builders used by differentiation; they only drop neutral literals.
NodePtr add(NodePtr a, NodePtr b) {
  if (is_literal(a, 0.0)) return b;
  if (is_literal(b, 0.0)) return a;
  return make(Op::add, std::move(a), std::move(b));
}

NodePtr neg(NodePtr a) {
  if (is_literal(a, 0.0)) return a;
  return make(Op::neg, std::move(a));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_literal(b, 0.0)) return a;
  if (is_literal(a, 0.0)) return neg(std::move(b));
  return make(Op::sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_literal(a, 0.0) || is_literal(b, 0.0)) return num(0.0);
  if (is_literal(a, 1.0)) return b;
  if (is_literal(b, 1.0)) return a;
  return make(Op::mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_literal(a, 0.0)) return a;
  return make(Op::div, std::move(a), std::move(b));
}

NodePtr pow_node(NodePtr base, double exponent) { return make(Op::pow, std::move(base), nullptr, exponent); }

bool constant(const Node& n) {
  switch (n.op) {
    case Op::num: return true;
    case Op::var: return false;
    default: return (!n.lhs || constant(*n.lhs)) && (!n.rhs || constant(*n.rhs));
  }
}

double evaluate(const Node& n, const Bindings& b) {
  switch (n.op) {
    case Op::num: return n.value;
    case Op::var:
      switch (n.var.kind) {
        case Var::Kind::coord: {
          const auto i = static_cast<std::size_t>(n.var.index - 1);
          if (i >= b.x.size()) throw EvalError("unbound variable " + n.var.name());
          return b.x[i];
        }
        case Var::Kind::t:
          if (!b.t) throw EvalError("unbound variable t");
          return *b.t;
        case Var::Kind::s:
          if (!b.s) throw EvalError("unbound variable s");
          return *b.s;
      }
      return 0.0;
    case Op::add: return evaluate(*n.lhs, b) + evaluate(*n.rhs, b);
    case Op::sub: return evaluate(*n.lhs, b) - evaluate(*n.rhs, b);
    case Op::mul: return evaluate(*n.lhs, b) * evaluate(*n.rhs, b);
    case Op::div: return evaluate(*n.lhs, b) / evaluate(*n.rhs, b);
    case Op::pow: return std::pow(evaluate(*n.lhs, b), n.value);
    case Op::neg: return -evaluate(*n.lhs, b);
    case Op::sin: return std::sin(evaluate(*n.lhs, b));
    case Op::cos: return std::cos(evaluate(*n.lhs, b));
    case Op::exp: return std::exp(evaluate(*n.lhs, b));
  }
  return 0.0;
}

NodePtr differentiate(const NodePtr& n, const Var& v) {
  switch (n->op) {
    case Op::num: return num(0.0);
    case Op::var: return num(n->var == v ? 1.0 : 0.0);
    case Op::add: return add(differentiate(n->lhs, v), differentiate(n->rhs, v));
    case Op::sub: return sub(differentiate(n->lhs, v), differentiate(n->rhs, v));
    case Op::mul:
      return add(mul(differentiate(n->lhs, v), n->rhs), mul(n->lhs, differentiate(n->rhs, v)));
    case Op::div: {
      NodePtr top = sub(mul(differentiate(n->lhs, v), n->rhs), mul(n->lhs, differentiate(n->rhs, v)));
      return div(std::move(top), pow_node(n->rhs, 2.0));
    }
    case Op::pow:
      return mul(mul(num(n->value), pow_node(n->lhs, n->value - 1.0)), differentiate(n->lhs, v));
    case Op::neg: return neg(differentiate(n->lhs, v));
    case Op::sin: return mul(make(Op::cos, n->lhs), differentiate(n->lhs, v));
    case Op::cos: return mul(neg(make(Op::sin, n->lhs)), differentiate(n->lhs, v));
    case Op::exp: return mul(n, differentiate(n->lhs, v));
  }
  return num(0.0);
}

// --- printing -------------------------------------------------------------

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

int precedence(const Node& n) {
  switch (n.op) {
    case Op::num: return n.value < 0.0 || std::signbit(n.value) ? 3 : 5;
    case Op::add:
    case Op::sub: return 1;
    case Op::mul:
    case Op::div: return 2;
    case Op::neg: return 3;
    case Op::pow: return 4;
    default: return 5;
  }
}

void print(const Node& n, int min_prec, std::string& out) {
  const bool parens = precedence(n) < min_prec;
  if (parens) out += '(';
  switch (n.op) {
    case Op::num: out += format_number(n.value); break;
    case Op::var: out += n.var.name(); break;
    case Op::add:
    case Op::sub:
      print(*n.lhs, 1, out);
      out += n.op == Op::add ? " + " : " - ";
      print(*n.rhs, 2, out);
      break;
    case Op::mul:
    case Op::div:
      print(*n.lhs, 2, out);
      out += n.op == Op::mul ? '*' : '/';
      print(*n.rhs, 3, out);
      break;
    case Op::pow:
      print(*n.lhs, 5, out);
      out += '^';
      out += format_number(n.value);
      break;
    case Op::neg:
      out += '-';
      print(*n.lhs, 3, out);
      break;
    case Op::sin:
    case Op::cos:
    case Op::exp:
      out += n.op == Op::sin ? "sin(" : n.op == Op::cos ? "cos(" : "exp(";
      print(*n.lhs, 1, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

// --- parsing --------------------------------------------------------------

constexpr int kMaxDepth = 200;

class Parser {
 public:
  Parser(std::string_view src, int dim) : src_(src), dim_(dim) {}

  NodePtr parse_all() {
    skip_ws();
    if (at_end()) fail(ParseError::Kind::syntax, pos_, "empty expression");
    NodePtr e = parse_sum();
    skip_ws();
    if (!at_end()) fail(ParseError::Kind::syntax, pos_, "unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(ParseError::Kind kind, std::size_t offset, const std::string& msg) {
    throw ParseError(kind, offset, msg);
  }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }

  void skip_ws() {
    while (!at_end() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r')) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : p_(p) {
      if (++p_.depth_ > kMaxDepth) p_.fail(ParseError::Kind::syntax, p_.pos_, "expression nested too deeply");
    }
    ~DepthGuard() { --p_.depth_; }
    Parser& p_;
  };

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) lhs = make(Op::add, lhs, parse_product());
      else if (accept('-')) lhs = make(Op::sub, lhs, parse_product());
      else return lhs;
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) lhs = make(Op::mul, lhs, parse_unary());
      else if (accept('/')) lhs = make(Op::div, lhs, parse_unary());
      else return lhs;
    }
  }

  NodePtr parse_unary() {
    DepthGuard guard(*this);
    if (accept('-')) return make(Op::neg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t where = pos_;
    return pow_node(std::move(base), parse_exponent(where));
  }

  double parse_exponent(std::size_t where) {
    DepthGuard guard(*this);
    const bool negate = accept('-');
    NodePtr e = parse_power();
    if (!constant(*e)) fail(ParseError::Kind::syntax, where, "exponent must be a numeric literal");
    const double v = evaluate(*e, Bindings{});
    return negate ? -v : v;
  }

  NodePtr parse_atom() {
    DepthGuard guard(*this);
    skip_ws();
    const std::size_t start = pos_;
    if (at_end()) fail(ParseError::Kind::syntax, pos_, "unexpected end of input");
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      if (!accept(')')) fail(ParseError::Kind::syntax, pos_, "expected ')'");
      return inner;
    }
    fail(ParseError::Kind::syntax, start, std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t from = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return pos_ > from;
    };
    bool any = digits();
    if (peek() == '.') {
      ++pos_;
      any = digits() || any;
    }
    if (!any) fail(ParseError::Kind::syntax, start, "malformed number");
    if (peek() == 'e' || peek() == 'E') {
      const std::size_t mark = pos_;
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (!digits()) pos_ = mark;
    }
    double v = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
      fail(ParseError::Kind::syntax, start, "malformed number");
    }
    return num(v);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);

    skip_ws();
    if (peek() == '(') {
      Op op;
      if (name == "sin") op = Op::sin;
      else if (name == "cos") op = Op::cos;
      else if (name == "exp") op = Op::exp;
      else fail(ParseError::Kind::unknown_identifier, start, "unknown function '" + std::string(name) + "'");
      ++pos_;
      std::vector<NodePtr> args;
      if (!accept(')')) {
        args.push_back(parse_sum());
        while (accept(',')) args.push_back(parse_sum());
        if (!accept(')')) fail(ParseError::Kind::syntax, pos_, "expected ')'");
      }
      if (args.size() != 1) {
        fail(ParseError::Kind::arity, start, std::string(name) + " takes exactly one argument");
      }
      return make(op, args.front());
    }
    if (name == "sin" || name == "cos" || name == "exp") {
      fail(ParseError::Kind::syntax, pos_, "expected '(' after " + std::string(name));
    }
    if (name == "t") return variable(Var::t());
    if (name == "s") return variable(Var::s());
    if (name.size() >= 2 && name[0] == 'x') {
      int index = 0;
      const auto res = std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (res.ec == std::errc() && res.ptr == name.data() + name.size() && name[1] != '0' && index >= 1 &&
          index <= dim_) {
        return variable(Var::coord(index));
      }
    }
    fail(ParseError::Kind::unknown_identifier, start, "unknown identifier '" + std::string(name) + "'");
  }

  static NodePtr variable(Var v) {
    auto n = std::make_shared<Node>();
    n->op = Op::var;
    n->var = v;
    return n;
  }

  std::string_view src_;
  int dim_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

std::string Var::name() const {
  switch (kind) {
    case Kind::coord: return "x" + std::to_string(index);
    case Kind::t: return "t";
    case Kind::s: return "s";
  }
  return "?";
}

Var parse_var(std::string_view name) {
  if (name == "t") return Var::t();
  if (name == "s") return Var::s();
  if (name.size() >= 2 && name[0] == 'x') {
    int index = 0;
    const auto res = std::from_chars(name.data() + 1, name.data() + name.size(), index);
    if (res.ec == std::errc() && res.ptr == name.data() + name.size() && index >= 1) return Var::coord(index);
  }
  throw std::invalid_argument("not a variable: " + std::string(name));
}

ParseError::ParseError(Kind kind, std::size_t offset, const std::string& what)
    : std::runtime_error(what + " at offset " + std::to_string(offset)), kind_(kind), offset_(offset) {}

Expr Expr::number(double value) { return Expr(num(value)); }

Expr Expr::variable(Var v) {
  auto n = std::make_shared<Node>();
  n->op = Op::var;
  n->var = v;
  return Expr(std::move(n));
}

double Expr::eval(const Bindings& b) const { return evaluate(*node_, b); }

Expr Expr::derivative(Var v) const { return Expr(differentiate(node_, v)); }

std::string Expr::to_string() const {
  std::string out;
  print(*node_, 0, out);
  return out;
}

bool Expr::is_constant() const { return constant(*node_); }

bool Expr::is_zero_literal() const { return is_literal(node_, 0.0); }

Expr parse(std::string_view src, int dim) { return Expr(Parser(src, dim).parse_all()); }

}  // namespace surfhol::expr
