// Scalar expressions in one variable, used for Levy densities given in the
// config: numbers, the variable, + - * / ^, parentheses and
// abs/exp/log/sqrt/sin/cos.
#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace llb {

class ExpressionError : public std::invalid_argument {
 public:
  ExpressionError(const std::string& what, std::size_t column)
      : std::invalid_argument(what + " at column " + std::to_string(column + 1)), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

class Expression {
 public:
  struct Node;

  static Expression parse(const std::string& text, const std::string& variable = "l");

  double operator()(double x) const;
  const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace llb
