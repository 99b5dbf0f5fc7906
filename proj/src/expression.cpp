#include "stable_ergo/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "stable_ergo/errors.hpp"

namespace stable_ergo {
namespace {

using Kind = ExprNode::Kind;

ExprPtr make(Kind kind, std::vector<ExprPtr> args = {}, double value = 0.0) {
  auto node = std::make_shared<ExprNode>();
  node->kind = kind;
  node->value = value;
  node->args = std::move(args);
  return node;
}

const std::vector<std::string> kOperandStart = {"number", "x", "(", "-", "abs", "exp", "log", "min", "max"};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    skip_space();
    if (pos_ == text_.size()) fail(kOperandStart, "empty expression");
    ExprPtr root = parse_expr(0);
    skip_space();
    if (pos_ != text_.size()) fail({"+", "-", "*", "/", "^", "end of input"}, "unexpected trailing input");
    return root;
  }

 private:
  static constexpr int kUnaryPower = 30;

  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& why) const {
    std::string what = "parse error at offset " + std::to_string(pos_) + ": " + why + " (expected one of:";
    for (const auto& e : expected) what += " '" + e + "'";
    what += ")";
    throw ParseError(pos_, std::move(expected), what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail({std::string(1, c)}, std::string("missing '") + c + "'");
    ++pos_;
  }

  static bool binding(char op, int& left, int& right) {
    switch (op) {
      case '+':
      case '-':
        left = 10;
        right = 11;
        return true;
      case '*':
      case '/':
        left = 20;
        right = 21;
        return true;
      case '^':
        left = 41;
        right = 40;
        return true;
      default:
        return false;
    }
  }

  ExprPtr parse_expr(int min_power) {
    ExprPtr lhs = parse_prefix();
    while (!at_end()) {
      const char op = peek();
      int left = 0, right = 0;
      if (!binding(op, left, right) || left < min_power) break;
      ++pos_;
      // The exponent may itself start with a unary minus: 2^-x.
      ExprPtr rhs = parse_expr(op == '^' ? kUnaryPower : right);
      Kind kind = Kind::add;
      switch (op) {
        case '+': kind = Kind::add; break;
        case '-': kind = Kind::sub; break;
        case '*': kind = Kind::mul; break;
        case '/': kind = Kind::div; break;
        default: kind = Kind::pow; break;
      }
      lhs = make(kind, {lhs, rhs});
    }
    return lhs;
  }

  ExprPtr parse_prefix() {
    if (at_end()) fail(kOperandStart, "unexpected end of input");
    const char c = peek();
    if (c == '-') {
      ++pos_;
      return make(Kind::neg, {parse_expr(kUnaryPower)});
    }
    if (c == '(') {
      ++pos_;
      ExprPtr inner = parse_expr(0);
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail(kOperandStart, std::string("unexpected character '") + c + "'");
  }

  ExprPtr parse_number() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) fail({"number"}, "malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return make(Kind::number, {}, value);
  }

  ExprPtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return make(Kind::variable);
    Kind kind;
    std::size_t arity = 1;
    if (name == "abs") {
      kind = Kind::abs;
    } else if (name == "exp") {
      kind = Kind::exp;
    } else if (name == "log") {
      kind = Kind::log;
    } else if (name == "min") {
      kind = Kind::min;
      arity = 2;
    } else if (name == "max") {
      kind = Kind::max;
      arity = 2;
    } else {
      pos_ = start;
      fail(kOperandStart, "unknown identifier '" + std::string(name) + "'");
    }
    expect('(');
    std::vector<ExprPtr> args;
    args.push_back(parse_expr(0));
    while (args.size() < arity) {
      expect(',');
      args.push_back(parse_expr(0));
    }
    expect(')');
    return make(kind, std::move(args));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

const char* function_name(Kind kind) {
  switch (kind) {
    case Kind::abs: return "abs";
    case Kind::exp: return "exp";
    case Kind::log: return "log";
    case Kind::min: return "min";
    case Kind::max: return "max";
    default: return "";
  }
}

char binary_symbol(Kind kind) {
  switch (kind) {
    case Kind::add: return '+';
    case Kind::sub: return '-';
    case Kind::mul: return '*';
    case Kind::div: return '/';
    default: return '^';
  }
}

}  // namespace

ExprPtr parse_expression(std::string_view text) { return Parser(text).parse(); }

std::string print_expression(const ExprNode& node) {
  switch (node.kind) {
    case Kind::number: return format_number(node.value);
    case Kind::variable: return "x";
    case Kind::neg: return "(-" + print_expression(*node.args[0]) + ")";
    case Kind::add:
    case Kind::sub:
    case Kind::mul:
    case Kind::div:
    case Kind::pow:
      return "(" + print_expression(*node.args[0]) + " " + binary_symbol(node.kind) + " " +
             print_expression(*node.args[1]) + ")";
    default: {
      std::string out = std::string(function_name(node.kind)) + "(";
      for (std::size_t i = 0; i < node.args.size(); ++i) {
        if (i) out += ", ";
        out += print_expression(*node.args[i]);
      }
      return out + ")";
    }
  }
}

double evaluate(const ExprNode& node, double x) {
  auto arg = [&](std::size_t i) { return evaluate(*node.args[i], x); };
  double result = 0.0;
  switch (node.kind) {
    case Kind::number: return node.value;
    case Kind::variable: return x;
    case Kind::neg: result = -arg(0); break;
    case Kind::add: result = arg(0) + arg(1); break;
    case Kind::sub: result = arg(0) - arg(1); break;
    case Kind::mul: result = arg(0) * arg(1); break;
    case Kind::div: {
      const double den = arg(1);
      if (den == 0.0) throw EvalError("division by zero at x = " + format_number(x));
      result = arg(0) / den;
      break;
    }
    case Kind::pow: {
      const double base = arg(0);
      const double expo = arg(1);
      if (base < 0.0 && std::floor(expo) != expo) throw EvalError("non-real power at x = " + format_number(x));
      if (base == 0.0 && expo < 0.0) throw EvalError("zero to a negative power at x = " + format_number(x));
      result = std::pow(base, expo);
      break;
    }
    case Kind::abs: result = std::abs(arg(0)); break;
    case Kind::exp: result = std::exp(arg(0)); break;
    case Kind::log: {
      const double v = arg(0);
      if (!(v > 0.0)) throw EvalError("log of nonpositive value at x = " + format_number(x));
      result = std::log(v);
      break;
    }
    case Kind::min: result = std::min(arg(0), arg(1)); break;
    case Kind::max: result = std::max(arg(0), arg(1)); break;
  }
  if (std::isnan(result)) throw EvalError("expression is undefined at x = " + format_number(x));
  return result;
}

bool structurally_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  if (a.kind == Kind::number && a.value != b.value) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!structurally_equal(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

}  // namespace stable_ergo
