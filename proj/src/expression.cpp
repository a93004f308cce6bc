#include "deform/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "deform/errors.hpp"

namespace deform {

struct Expression::Node {
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
  double value = 0.0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(double x) const {
    switch (kind) {
      case Kind::Number: return value;
      case Kind::Var: return x;
      case Kind::Neg: return -lhs->eval(x);
      case Kind::Add: return lhs->eval(x) + rhs->eval(x);
      case Kind::Sub: return lhs->eval(x) - rhs->eval(x);
      case Kind::Mul: return lhs->eval(x) * rhs->eval(x);
      case Kind::Div: return lhs->eval(x) / rhs->eval(x);
      case Kind::Pow: return std::pow(lhs->eval(x), rhs->eval(x));
      case Kind::Call: return fn(lhs->eval(x));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr l = nullptr, NodePtr r = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

NodePtr number(double v) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = Kind::Number;
  n->value = v;
  return n;
}

struct Function {
  const char* name;
  double (*fn)(double);
};

double fabs_wrap(double x) { return std::fabs(x); }
double exp_wrap(double x) { return std::exp(x); }
double log_wrap(double x) { return std::log(x); }
double sqrt_wrap(double x) { return std::sqrt(x); }
double sin_wrap(double x) { return std::sin(x); }
double cos_wrap(double x) { return std::cos(x); }
double tan_wrap(double x) { return std::tan(x); }
double tanh_wrap(double x) { return std::tanh(x); }
double cosh_wrap(double x) { return std::cosh(x); }
double sinh_wrap(double x) { return std::sinh(x); }

const Function kFunctions[] = {
    {"exp", exp_wrap},   {"log", log_wrap},   {"sqrt", sqrt_wrap},
    {"sin", sin_wrap},   {"cos", cos_wrap},   {"tan", tan_wrap},
    {"tanh", tanh_wrap}, {"cosh", cosh_wrap}, {"sinh", sinh_wrap},
    {"abs", fabs_wrap},
};

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("expression \"" + s_ + "\": " + msg + " at offset " +
                      std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (eat('+'))
        n = make(Kind::Add, n, term());
      else if (eat('-'))
        n = make(Kind::Sub, n, term());
      else
        return n;
    }
  }
  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (eat('*'))
        n = make(Kind::Mul, n, unary());
      else if (eat('/'))
        n = make(Kind::Div, n, unary());
      else
        return n;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Kind::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }
  // right associative; binds tighter than unary minus on its left
  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Kind::Pow, base, unary());
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      NodePtr n = expr();
      if (!eat(')')) fail("missing ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return number(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                  s_[pos_] == '_'))
        ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "x") return make(Kind::Var);
      if (id == "pi") return number(std::numbers::pi);
      if (id == "e") return number(std::numbers::e);
      for (const auto& f : kFunctions) {
        if (id == f.name) {
          if (!eat('(')) fail("expected '(' after " + id);
          NodePtr arg = expr();
          if (!eat(')')) fail("missing ')'");
          auto n = std::make_shared<Expression::Node>();
          n->kind = Kind::Call;
          n->fn = f.fn;
          n->lhs = arg;
          return n;
        }
      }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(e.text_).parse();
  return e;
}

double Expression::operator()(double x) const { return root_->eval(x); }

}  // namespace deform
