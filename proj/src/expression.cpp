#include "llb/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace llb {

struct Expression::Node {
  enum class Kind { number, variable, neg, add, sub, mul, div, pow, call } kind;
  double value = 0.0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> a, b;

  double eval(double x) const {
    switch (kind) {
      case Kind::number: return value;
      case Kind::variable: return x;
      case Kind::neg: return -a->eval(x);
      case Kind::add: return a->eval(x) + b->eval(x);
      case Kind::sub: return a->eval(x) - b->eval(x);
      case Kind::mul: return a->eval(x) * b->eval(x);
      case Kind::div: return a->eval(x) / b->eval(x);
      case Kind::pow: return std::pow(a->eval(x), b->eval(x));
      case Kind::call: return fn(a->eval(x));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

struct Function {
  const char* name;
  double (*fn)(double);
};

const Function kFunctions[] = {
    {"abs", [](double x) { return std::abs(x); }},
    {"exp", [](double x) { return std::exp(x); }},
    {"log", [](double x) { return std::log(x); }},
    {"sqrt", [](double x) { return std::sqrt(x); }},
    {"sin", [](double x) { return std::sin(x); }},
    {"cos", [](double x) { return std::cos(x); }},
};

// expr   := term (('+' | '-') term)*
// term   := unary (('*' | '/') unary)*
// unary  := '-' unary | power
// power  := atom ('^' unary)?
// atom   := number | variable | name '(' expr ')' | '(' expr ')'
class Parser {
 public:
  Parser(const std::string& s, const std::string& var) : s_(s), var_(var) {}

  NodePtr parse() {
    auto n = expr();
    skip();
    if (pos_ != s_.size()) throw ExpressionError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return n;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
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
    auto n = term();
    for (;;) {
      if (eat('+')) n = make(Kind::add, n, term());
      else if (eat('-')) n = make(Kind::sub, n, term());
      else return n;
    }
  }
  NodePtr term() {
    auto n = unary();
    for (;;) {
      if (eat('*')) n = make(Kind::mul, n, unary());
      else if (eat('/')) n = make(Kind::div, n, unary());
      else return n;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Kind::neg, unary());
    if (eat('+')) return unary();
    return power();
  }
  NodePtr power() {
    auto n = atom();
    if (eat('^')) return make(Kind::pow, n, unary());
    return n;
  }
  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) throw ExpressionError("unexpected end of expression", pos_);
    const char c = s_[pos_];
    if (eat('(')) {
      auto n = expr();
      if (!eat(')')) throw ExpressionError("expected ')'", pos_);
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) throw ExpressionError("bad number", pos_);
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::number;
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == var_) return make(Kind::variable);
      if (name == "pi") {
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::number;
        n->value = M_PI;
        return n;
      }
      for (const auto& f : kFunctions) {
        if (name == f.name) {
          if (!eat('(')) throw ExpressionError("expected '(' after " + name, pos_);
          auto arg = expr();
          if (!eat(')')) throw ExpressionError("expected ')'", pos_);
          auto n = std::make_shared<Expression::Node>();
          n->kind = Kind::call;
          n->fn = f.fn;
          n->a = std::move(arg);
          return n;
        }
      }
      throw ExpressionError("unknown name '" + name + "'", start);
    }
    throw ExpressionError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  const std::string& s_;
  const std::string& var_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text, const std::string& variable) {
  Expression e;
  e.root_ = Parser(text, variable).parse();
  e.text_ = text;
  return e;
}

double Expression::operator()(double x) const { return root_->eval(x); }

}  // namespace llb
