#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace stable_ergo {

// Operator tree for user-supplied sigma(x) expressions.
//
// Grammar, loosest to tightest binding:
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := atom ('^' unary)?            (right-associative)
//   atom    := number | 'x' | '(' sum ')' | func '(' sum (',' sum)* ')'
//   func    := abs | exp | log | min | max
struct ExprNode {
  enum class Kind { number, variable, add, sub, mul, div, pow, neg, abs, exp, log, min, max };

  Kind kind = Kind::number;
  double value = 0.0;
  std::vector<std::shared_ptr<const ExprNode>> args;
};

using ExprPtr = std::shared_ptr<const ExprNode>;

/// Throws ParseError carrying the byte offset and the set of tokens that
/// would have been accepted there.
ExprPtr parse_expression(std::string_view text);

/// Canonical text: every compound subexpression parenthesized, literals in
/// shortest round-trip form. parse_expression(print_expression(e)) rebuilds e.
std::string print_expression(const ExprNode& node);

/// Throws EvalError on domain faults (log of a nonpositive number, division by
/// zero, non-real powers) or a non-finite result that is not +infinity.
double evaluate(const ExprNode& node, double x);

bool structurally_equal(const ExprNode& a, const ExprNode& b);

}  // namespace stable_ergo
