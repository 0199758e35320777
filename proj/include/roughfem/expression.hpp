#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace roughfem {

class ExpressionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parsed scalar expression in x and y.
///
/// Grammar: numbers, x, y, pi, + - * / ^ (right associative, binds tighter than unary
/// minus), parentheses and the functions sin cos exp sqrt abs log (one argument),
/// min max (two) and norm (one or two: norm(a, b) = sqrt(a^2 + b^2)).
class Expression {
 public:
  struct Node;

  Expression();  // the constant 0
  static Expression parse(const std::string& text);
  static Expression constant(double value);

  double operator()(double x, double y) const;
  /// Fully parenthesised form with 17-digit numbers; parse(str()).str() == str().
  std::string str() const;
  bool is_constant() const;
  /// Value of a constant expression (throws otherwise).
  double constant_value() const;

 private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace roughfem
