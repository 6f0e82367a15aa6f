#include "confcurv/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <utility>

namespace confcurv {

struct Expr::Node {
  Kind kind;
  double value = 0.0;
  int index = 0;
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(int index) {
  if (index < 0) throw std::invalid_argument("negative variable index");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::unary(UnaryOp op, Expr child) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Unary;
  n->uop = op;
  n->a = std::move(child.node_);
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->bop = op;
  n->a = std::move(lhs.node_);
  n->b = std::move(rhs.node_);
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::constant_value() const { return node_->value; }
int Expr::variable_index() const { return node_->index; }
UnaryOp Expr::unary_op() const { return node_->uop; }
BinaryOp Expr::binary_op() const { return node_->bop; }

Expr Expr::child() const { return Expr(node_->a); }
Expr Expr::lhs() const { return Expr(node_->a); }
Expr Expr::rhs() const { return Expr(node_->b); }

int Expr::arity() const {
  struct Walk {
    static int run(const Node& n) {
      switch (n.kind) {
        case Kind::Constant: return 0;
        case Kind::Variable: return n.index + 1;
        case Kind::Unary: return run(*n.a);
        case Kind::Binary: return std::max(run(*n.a), run(*n.b));
      }
      return 0;
    }
  };
  return Walk::run(*node_);
}

bool operator==(const Expr& x, const Expr& y) {
  struct Walk {
    static bool run(const Expr::Node& a, const Expr::Node& b) {
      if (&a == &b) return true;
      if (a.kind != b.kind) return false;
      switch (a.kind) {
        case Expr::Kind::Constant: return a.value == b.value;
        case Expr::Kind::Variable: return a.index == b.index;
        case Expr::Kind::Unary: return a.uop == b.uop && run(*a.a, *b.a);
        case Expr::Kind::Binary:
          return a.bop == b.bop && run(*a.a, *b.a) && run(*a.b, *b.b);
      }
      return false;
    }
  };
  return Walk::run(*x.node_, *y.node_);
}

Expr operator+(Expr a, Expr b) { return Expr::binary(BinaryOp::Add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(BinaryOp::Sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(BinaryOp::Mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary(BinaryOp::Div, std::move(a), std::move(b)); }
Expr operator-(Expr a) { return Expr::unary(UnaryOp::Neg, std::move(a)); }
Expr exp(Expr a) { return Expr::unary(UnaryOp::Exp, std::move(a)); }
Expr log(Expr a) { return Expr::unary(UnaryOp::Log, std::move(a)); }
Expr sin(Expr a) { return Expr::unary(UnaryOp::Sin, std::move(a)); }
Expr cos(Expr a) { return Expr::unary(UnaryOp::Cos, std::move(a)); }
Expr sqrt(Expr a) { return Expr::unary(UnaryOp::Sqrt, std::move(a)); }
Expr pow(Expr base, Expr exponent) {
  return Expr::binary(BinaryOp::Pow, std::move(base), std::move(exponent));
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    const std::size_t start = i_;
    if (i_ >= s_.size()) {
      tok_ = {Tok::End, start, "<end of input>"};
      return;
    }
    const char c = s_[i_];
    auto single = [&](Tok k) {
      ++i_;
      tok_ = {k, start, std::string(1, c)};
    };
    switch (c) {
      case '+': return single(Tok::Plus);
      case '-': return single(Tok::Minus);
      case '*': return single(Tok::Star);
      case '/': return single(Tok::Slash);
      case '^': return single(Tok::Caret);
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i_;
      while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
      if (j < s_.size() && s_[j] == '.') {
        ++j;
        while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
      }
      if (j < s_.size() && (s_[j] == 'e' || s_[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
        if (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) {
          while (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) ++k;
          j = k;
        }
      }
      std::string text(s_.substr(i_, j - i_));
      if (text == ".") throw ParseError("malformed number at position " + std::to_string(start), start, text);
      i_ = j;
      tok_ = {Tok::Number, start, text, std::strtod(text.c_str(), nullptr)};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
        ++j;
      tok_ = {Tok::Ident, start, std::string(s_.substr(i_, j - i_))};
      i_ = j;
      return;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "' at position " +
                         std::to_string(start),
                     start, std::string(1, c));
  }

  std::string_view s_;
  std::size_t i_ = 0;
  Token tok_{Tok::End, 0, ""};
};

class Parser {
 public:
  Parser(std::string_view text, int n) : lex_(text), n_(n) {}

  Expr parse_all() {
    Expr e = expr();
    if (lex_.peek().kind != Tok::End) fail("unexpected token", lex_.peek());
    return e;
  }

 private:
  [[noreturn]] static void fail(const std::string& why, const Token& t) {
    throw ParseError("syntax error: " + why + " \"" + t.text + "\" at position " +
                         std::to_string(t.pos),
                     t.pos, t.text);
  }

  Expr expr() {
    Expr e = term();
    while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
      const bool add = lex_.take().kind == Tok::Plus;
      Expr r = term();
      e = Expr::binary(add ? BinaryOp::Add : BinaryOp::Sub, std::move(e), std::move(r));
    }
    return e;
  }

  Expr term() {
    Expr e = unary();
    while (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Slash) {
      const bool mul = lex_.take().kind == Tok::Star;
      Expr r = unary();
      e = Expr::binary(mul ? BinaryOp::Mul : BinaryOp::Div, std::move(e), std::move(r));
    }
    return e;
  }

  // A minus sign directly on a literal yields a negative constant, so that
  // print() output parses back to the same tree.
  static Expr negate(Expr e) {
    if (e.kind() == Expr::Kind::Constant) return Expr::constant(-e.constant_value());
    return -e;
  }

  Expr unary() {
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      return negate(unary());
    }
    return power();
  }

  Expr power() {
    Expr e = primary();
    while (lex_.peek().kind == Tok::Caret) {
      lex_.take();
      Expr r = exponent();
      e = Expr::binary(BinaryOp::Pow, std::move(e), std::move(r));
    }
    return e;
  }

  Expr exponent() {
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      return negate(exponent());
    }
    return primary();
  }

  Expr primary() {
    const Token t = lex_.take();
    switch (t.kind) {
      case Tok::Number: return Expr::constant(t.number);
      case Tok::LParen: {
        Expr e = expr();
        if (lex_.peek().kind != Tok::RParen) fail("expected ')' but found", lex_.peek());
        lex_.take();
        return e;
      }
      case Tok::Ident: return identifier(t);
      default: fail("unexpected token", t);
    }
  }

  Expr identifier(const Token& t) {
    const std::string& id = t.text;
    static const std::pair<const char*, UnaryOp> funcs[] = {
        {"exp", UnaryOp::Exp}, {"log", UnaryOp::Log},   {"sin", UnaryOp::Sin},
        {"cos", UnaryOp::Cos}, {"sqrt", UnaryOp::Sqrt},
    };
    for (const auto& [name, op] : funcs) {
      if (id == name) {
        if (lex_.peek().kind != Tok::LParen) fail("expected '(' after function name, found", lex_.peek());
        lex_.take();
        Expr arg = expr();
        if (lex_.peek().kind != Tok::RParen) fail("expected ')' but found", lex_.peek());
        lex_.take();
        return Expr::unary(op, std::move(arg));
      }
    }
    if (id.size() >= 2 && id[0] == 'x' &&
        id.find_first_not_of("0123456789", 1) == std::string::npos && id[1] != '0') {
      const long k = std::strtol(id.c_str() + 1, nullptr, 10);
      if (k < 1 || k > n_)
        throw ParseError("variable " + id + " out of range for dimension " +
                             std::to_string(n_) + " at position " + std::to_string(t.pos),
                         t.pos, id);
      return Expr::variable(static_cast<int>(k - 1));
    }
    throw ParseError("unknown identifier \"" + id + "\" at position " + std::to_string(t.pos),
                     t.pos, id);
  }

  Lexer lex_;
  int n_;
};

}  // namespace

Expr parse(std::string_view text, int n) {
  if (n < 1) throw std::invalid_argument("parse: dimension must be positive");
  return Parser(text, n).parse_all();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", std::fabs(v));
  std::string s(buf);
  if (std::signbit(v)) return "(-" + s + ")";
  return s;
}

const char* unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Log: return "log";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Sqrt: return "sqrt";
  }
  return "?";
}

const char* binary_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return " + ";
    case BinaryOp::Sub: return " - ";
    case BinaryOp::Mul: return " * ";
    case BinaryOp::Div: return " / ";
    case BinaryOp::Pow: return "^";
  }
  return "?";
}

}  // namespace

std::string print(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return format_number(e.constant_value());
    case Expr::Kind::Variable: return "x" + std::to_string(e.variable_index() + 1);
    case Expr::Kind::Unary: {
      const std::string inner = print(e.child());
      if (e.unary_op() == UnaryOp::Neg) return "(-" + inner + ")";
      return std::string(unary_name(e.unary_op())) + "(" + inner + ")";
    }
    case Expr::Kind::Binary: {
      const std::string l = print(e.lhs());
      const std::string r = print(e.rhs());
      return "(" + l + binary_symbol(e.binary_op()) + r + ")";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

template <typename Result, typename Leaf, typename Apply1, typename Apply2>
Result walk(const Expr& e, const Leaf& leaf, const Apply1& un, const Apply2& bin) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
    case Expr::Kind::Variable: return leaf(e);
    case Expr::Kind::Unary: {
      Expr c = e.child();
      return un(e, walk<Result>(c, leaf, un, bin));
    }
    case Expr::Kind::Binary: {
      Expr l = e.lhs();
      Expr r = e.rhs();
      Result a = walk<Result>(l, leaf, un, bin);
      Result b = walk<Result>(r, leaf, un, bin);
      return bin(e, std::move(a), std::move(b));
    }
  }
  return leaf(e);
}

bool is_integral(double v) {
  return std::isfinite(v) && std::fabs(v) <= 1e6 && v == std::nearbyint(v);
}

}  // namespace

Jet2<double> eval_jet2(const Expr& e, const VectorXd& x) {
  const Eigen::Index n = x.size();
  if (e.arity() > n)
    throw std::invalid_argument("eval_jet2: expression uses x" + std::to_string(e.arity()) +
                                " but the point has dimension " + std::to_string(n));
  using J = Jet2<double>;

  auto leaf = [&](const Expr& node) -> J {
    if (node.kind() == Expr::Kind::Constant) return J(node.constant_value(), n);
    return J::variable(x(node.variable_index()), node.variable_index(), n);
  };

  auto un = [&](const Expr& node, J a) -> J {
    switch (node.unary_op()) {
      case UnaryOp::Neg: return -a;
      case UnaryOp::Exp: return exp(a);
      case UnaryOp::Log:
        if (!(a.value() > 0.0)) throw DomainError("log of non-positive value", print(node));
        return log(a);
      case UnaryOp::Sin: return sin(a);
      case UnaryOp::Cos: return cos(a);
      case UnaryOp::Sqrt:
        if (!(a.value() > 0.0)) throw DomainError("sqrt of non-positive value", print(node));
        return sqrt(a);
    }
    return a;
  };

  auto bin = [&](const Expr& node, J a, J b) -> J {
    switch (node.binary_op()) {
      case BinaryOp::Add: return a + b;
      case BinaryOp::Sub: return a - b;
      case BinaryOp::Mul: return a * b;
      case BinaryOp::Div:
        if (b.value() == 0.0) throw DomainError("division by zero", print(node));
        return a / b;
      case BinaryOp::Pow: {
        const bool constant_exponent =
            b.grad().isZero(0.0) && b.packed_hess().isZero(0.0);
        if (constant_exponent && is_integral(b.value())) {
          const long k = static_cast<long>(b.value());
          if (k < 0 && a.value() == 0.0)
            throw DomainError("negative power of zero", print(node));
          return pow_int(a, k);
        }
        if (!(a.value() > 0.0))
          throw DomainError("non-integer power of non-positive base", print(node));
        return exp(b * log(a));
      }
    }
    return a;
  };

  J r = walk<J>(e, leaf, un, bin);
  if (!std::isfinite(r.value()))
    throw DomainError("non-finite value", print(e));
  return r;
}

double eval(const Expr& e, const VectorXd& x) { return eval_jet2(e, x).value(); }

}  // namespace confcurv
