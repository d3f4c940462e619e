#include "mscale/expr.hpp"

#include <cctype>
#include <charconv>
#include <string>

namespace mscale {

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_number(double v) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::number;
  n->number = v;
  return n;
}

NodePtr make_var(int v) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::variable;
  n->var = v;
  return n;
}

NodePtr make_binary(Expr::Kind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

NodePtr make_unary(Expr::Kind k, NodePtr a, Expr::Fn fn = Expr::Fn::abs) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->fn = fn;
  n->lhs = std::move(a);
  return n;
}

// Recursive descent:
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | '+' unary | power
//   power   := primary ('^' unary)?
//   primary := number | ident | ident '(' expr ')' | '(' expr ')'
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression '" + std::string(text_) + "': " + msg + " at offset " +
                     std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make_binary(Expr::Kind::add, lhs, term());
      else if (accept('-'))
        lhs = make_binary(Expr::Kind::sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make_binary(Expr::Kind::mul, lhs, unary());
      else if (accept('/'))
        lhs = make_binary(Expr::Kind::div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_unary(Expr::Kind::negate, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make_binary(Expr::Kind::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return make_number(value);
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));

    if (name == "t" || name == "x0") return make_var(static_cast<int>(Var::t));
    if (name == "x1") return make_var(static_cast<int>(Var::x1));
    if (name == "x2") return make_var(static_cast<int>(Var::x2));
    if (name == "x3") return make_var(static_cast<int>(Var::x3));
    if (name == "s") return make_var(static_cast<int>(Var::s));
    if (name == "pi") return make_number(3.14159265358979323846);

    static const std::pair<const char*, Expr::Fn> kFunctions[] = {
        {"abs", Expr::Fn::abs},   {"sqrt", Expr::Fn::sqrt}, {"exp", Expr::Fn::exp},
        {"log", Expr::Fn::log},   {"sin", Expr::Fn::sin},   {"cos", Expr::Fn::cos},
        {"cosh", Expr::Fn::cosh}, {"sinh", Expr::Fn::sinh}, {"tanh", Expr::Fn::tanh}};
    for (const auto& [fname, fn] : kFunctions) {
      if (name == fname) {
        if (!accept('(')) fail("expected '(' after " + name);
        NodePtr arg = expr();
        if (!accept(')')) fail("expected ')'");
        return make_unary(Expr::Kind::call, arg, fn);
      }
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool node_depends_on(const Expr::Node& n, int var) {
  if (n.kind == Expr::Kind::variable) return n.var == var;
  if (n.lhs && node_depends_on(*n.lhs, var)) return true;
  if (n.rhs && node_depends_on(*n.rhs, var)) return true;
  return false;
}

}  // namespace

Expr Expr::parse(std::string_view text) {
  Parser p(text);
  return Expr(p.parse(), std::string(text));
}

Expr Expr::constant(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return Expr(make_number(value), std::string(buf, ptr));
}

Expr Expr::variable(Var v) {
  static const char* kNames[] = {"t", "x1", "x2", "x3", "s"};
  return Expr(make_var(static_cast<int>(v)), kNames[static_cast<int>(v)]);
}

bool Expr::depends_on(Var v) const { return node_depends_on(*root_, static_cast<int>(v)); }

bool Expr::is_constant() const {
  for (int v = 0; v < kVarCount; ++v)
    if (node_depends_on(*root_, v)) return false;
  return true;
}

Expr operator+(const Expr& a, const Expr& b) {
  return Expr(make_binary(Expr::Kind::add, a.root_, b.root_), "(" + a.source_ + ")+(" + b.source_ + ")");
}

Expr operator-(const Expr& a, const Expr& b) {
  return Expr(make_binary(Expr::Kind::sub, a.root_, b.root_), "(" + a.source_ + ")-(" + b.source_ + ")");
}

Expr operator*(const Expr& a, const Expr& b) {
  return Expr(make_binary(Expr::Kind::mul, a.root_, b.root_), "(" + a.source_ + ")*(" + b.source_ + ")");
}

Expr operator/(const Expr& a, const Expr& b) {
  return Expr(make_binary(Expr::Kind::div, a.root_, b.root_), "(" + a.source_ + ")/(" + b.source_ + ")");
}

Expr pow(const Expr& a, const Expr& b) {
  return Expr(make_binary(Expr::Kind::pow, a.root_, b.root_), "(" + a.source_ + ")^(" + b.source_ + ")");
}

Expr operator-(const Expr& a) {
  return Expr(make_unary(Expr::Kind::negate, a.root_), "-(" + a.source_ + ")");
}

Expr Expr::call(Fn fn, const Expr& arg) {
  static const char* kNames[] = {"abs", "sqrt", "exp", "log", "sin", "cos", "cosh", "sinh", "tanh"};
  return Expr(make_unary(Kind::call, arg.root_, fn),
              std::string(kNames[static_cast<int>(fn)]) + "(" + arg.source_ + ")");
}

}  // namespace mscale
