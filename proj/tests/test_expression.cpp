#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "roughfem/expression.hpp"

using roughfem::Expression;
using roughfem::ExpressionError;

TEST(Expression, Precedence) {
  EXPECT_DOUBLE_EQ(Expression::parse("2^3^2")(0, 0), 512.0);
  EXPECT_DOUBLE_EQ(Expression::parse("-2^2")(0, 0), -4.0);
  EXPECT_DOUBLE_EQ(Expression::parse("1 - 2 - 3")(0, 0), -4.0);
  EXPECT_DOUBLE_EQ(Expression::parse("8 / 4 / 2")(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(Expression::parse("1 + 2 * 3")(0, 0), 7.0);
  EXPECT_DOUBLE_EQ(Expression::parse("2 ^ -1")(0, 0), 0.5);
}

TEST(Expression, VariablesAndFunctions) {
  const auto e = Expression::parse("sin(pi*x)*cos(y) + exp(0) + sqrt(4) + abs(-1) + log(1)");
  EXPECT_NEAR(e(0.5, 0.0), 1.0 + 1.0 + 2.0 + 1.0, 1e-15);
  EXPECT_NEAR(Expression::parse("norm(x - 1, y)")(4.0, 4.0), 5.0, 1e-15);
  EXPECT_NEAR(Expression::parse("norm(x)")(-3.0, 0.0), 3.0, 1e-15);
  EXPECT_EQ(Expression::parse("min(x, y) + max(x, y)")(2.0, 5.0), 7.0);
  EXPECT_NEAR(Expression::parse("1e-3 * x")(2.0, 0.0), 2e-3, 1e-18);
}

TEST(Expression, Errors) {
  EXPECT_THROW(Expression::parse(""), ExpressionError);
  EXPECT_THROW(Expression::parse("1 +"), ExpressionError);
  EXPECT_THROW(Expression::parse("(x"), ExpressionError);
  EXPECT_THROW(Expression::parse("z"), ExpressionError);
  EXPECT_THROW(Expression::parse("sin(x, y)"), ExpressionError);
  EXPECT_THROW(Expression::parse("x y"), ExpressionError);
  EXPECT_THROW(Expression::parse("tan(x)"), ExpressionError);
}

TEST(Expression, CanonicalRoundTrip) {
  for (const char* text : {"x", "-x^2 + 3*y", "1/3", "norm(x-0.5, y-0.5)^(-1.5)", "sin(pi*x)*sin(pi*y)",
                           "max(0, min(1, 2*x - y)) - -1"}) {
    const auto e = Expression::parse(text);
    const std::string once = e.str();
    const auto again = Expression::parse(once);
    EXPECT_EQ(again.str(), once) << text;
    EXPECT_EQ(again(0.3, 0.7), e(0.3, 0.7)) << text;
  }
  EXPECT_EQ(Expression::parse("1 + 2 * x").str(), "(1 + (2 * x))");
}

TEST(Expression, Constness) {
  EXPECT_TRUE(Expression::parse("2 * pi").is_constant());
  EXPECT_NEAR(Expression::parse("2 * pi").constant_value(), 2.0 * std::numbers::pi, 1e-15);
  EXPECT_FALSE(Expression::parse("x - x").is_constant());
  EXPECT_THROW(Expression::parse("y").constant_value(), ExpressionError);
  EXPECT_EQ(Expression()(1.0, 2.0), 0.0);
}
