#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "stable_ergo/errors.hpp"
#include "stable_ergo/expression.hpp"

using namespace stable_ergo;

TEST_CASE("expression matches the polynomial profile it spells") {
  const auto e = parse_expression("(1+abs(x))^2");
  for (double x = -7.0; x <= 7.0; x += 0.25) {
    CHECK(evaluate(*e, x) == doctest::Approx(std::pow(1.0 + std::abs(x), 2.0)).epsilon(1e-15));
  }
}

TEST_CASE("incomplete input reports the offset where an operand was expected") {
  try {
    parse_expression("1+");
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.offset() == 2);
    CHECK(!err.expected().empty());
  }
  CHECK_THROWS_AS(parse_expression(""), ParseError);
  CHECK_THROWS_AS(parse_expression("(1+x"), ParseError);
  CHECK_THROWS_AS(parse_expression("sin(x)"), ParseError);
  CHECK_THROWS_AS(parse_expression("min(x)"), ParseError);
  CHECK_THROWS_AS(parse_expression("x y"), ParseError);
  CHECK_THROWS_AS(parse_expression("abs(x, 2)"), ParseError);
}

TEST_CASE("functions and precedence") {
  CHECK(evaluate(*parse_expression("min(exp(x), 10)"), 5.0) == 10.0);
  CHECK(evaluate(*parse_expression("max(exp(x), 10)"), 0.0) == 10.0);
  CHECK(evaluate(*parse_expression("2^3^2"), 0.0) == 512.0);
  CHECK(evaluate(*parse_expression("-2^2"), 0.0) == -4.0);
  CHECK(evaluate(*parse_expression("2^-1"), 0.0) == 0.5);
  CHECK(evaluate(*parse_expression("1-2-3"), 0.0) == -4.0);
  CHECK(evaluate(*parse_expression("8/4/2"), 0.0) == 1.0);
  CHECK(evaluate(*parse_expression("1+2*3"), 0.0) == 7.0);
  CHECK(evaluate(*parse_expression("1.5e1 + x"), 1.0) == 16.0);
  CHECK(evaluate(*parse_expression("log(exp(x))"), 3.0) == doctest::Approx(3.0));
}

TEST_CASE("domain faults raise EvalError") {
  CHECK_THROWS_AS(evaluate(*parse_expression("log(x)"), 0.0), EvalError);
  CHECK_THROWS_AS(evaluate(*parse_expression("log(x)"), -1.0), EvalError);
  CHECK_THROWS_AS(evaluate(*parse_expression("1/x"), 0.0), EvalError);
  CHECK_THROWS_AS(evaluate(*parse_expression("x^0.5"), -1.0), EvalError);
  CHECK(std::isinf(evaluate(*parse_expression("exp(x)"), 1000.0)));
}

TEST_CASE("print then parse is the identity on a corpus") {
  const std::vector<std::string> corpus = {
      "x", "1", "-x", "(1+abs(x))^2", "1+x", "1-x", "2*x", "x/3", "x^2", "-x^2",
      "2^3^2", "(2^3)^2", "abs(x)", "exp(x)", "log(1+abs(x))", "min(x, 1)", "max(x, -1)",
      "1+2*3", "(1+2)*3", "1-2-3", "1-(2-3)", "8/4/2", "8/(4/2)", "2^-x", "-(1+x)",
      "--x", "1e-3*x", "1.25e10+x", "0.1+0.2", "exp(-abs(x))", "(1+x^2)^0.75",
      "min(max(x, 0), 5)", "abs(x)^1.5 + 1", "1/(1+x^2)", "exp(log(2)*x)",
      "(1+abs(x))^(1/1.5)", "2*abs(x)+3*abs(x)^2", "max(1, abs(x))^2.5", "x*x*x",
      "x - -x", "(x)", "((x))", "3", "1 + 2 + 3 + 4", "abs(-x)", "min(1,2)+max(3,4)",
      "exp(min(abs(x), 50))", "log(2+x^2)*abs(x)", "(1+abs(x))^2 / (2 + abs(x))", "1/3",
  };
  REQUIRE(corpus.size() == 50);
  for (const auto& text : corpus) {
    CAPTURE(text);
    const auto e = parse_expression(text);
    const std::string printed = print_expression(*e);
    const auto again = parse_expression(printed);
    CHECK(structurally_equal(*e, *again));
    CHECK(print_expression(*again) == printed);
  }
}
