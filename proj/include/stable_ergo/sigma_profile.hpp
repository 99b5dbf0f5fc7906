#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "stable_ergo/expression.hpp"

namespace stable_ergo {

/// Power-law growth of sigma at -infinity and +infinity: sigma(x) ~ c |x|^gamma.
/// +infinity marks super-polynomial growth, -infinity super-polynomial decay.
struct TailExponents {
  double minus = 0.0;
  double plus = 0.0;
};

/// The coefficient sigma > 0 of dY = sigma(Y-) dX. Immutable once built, so one
/// profile can be shared freely across worker threads.
class SigmaProfile {
 public:
  enum class Kind { polynomial, expression, tabulated };

  static constexpr double kDefaultPositivityFloor = 1e-300;

  /// sigma(x) = (1 + |x|)^gamma.
  static SigmaProfile polynomial(double gamma);
  static SigmaProfile expression(std::string_view text);
  /// Nodes must be strictly increasing in x. Between nodes log sigma is linear;
  /// outside, sigma continues as a power law with the declared exponents. An
  /// even table lists x >= 0 only (starting at 0) and is mirrored.
  static SigmaProfile tabulated(std::vector<double> xs, std::vector<double> sigmas, TailExponents tails,
                                bool even = false);

  Kind kind() const;

  /// sigma(x); throws NonPositiveSigma at or below the positivity floor and
  /// EvalError for expression domain faults.
  double operator()(double x) const;

  /// Speed-measure density sigma(x)^{-alpha}.
  double speed_density(double x, double alpha) const;

  /// Exact tail exponents for polynomial and tabulated profiles.
  std::optional<TailExponents> declared_tails() const;

  /// Leading tail coefficient c in sigma ~ c |x|^gamma when known exactly.
  std::optional<TailExponents> declared_tail_coefficients() const;

  bool is_even() const;

  double gamma() const;              // polynomial only
  const ExprNode& ast() const;       // expression only
  double scale() const { return scale_; }
  double positivity_floor() const { return floor_; }

  /// c * sigma; tail exponents unchanged.
  SigmaProfile scaled(double c) const;
  SigmaProfile with_positivity_floor(double floor) const;

  /// "poly:<gamma>", "expr:<text>" or "table:<n nodes>" (scale suffix when != 1).
  std::string describe() const;
  nlohmann::json to_json() const;

 private:
  struct Polynomial {
    double gamma;
  };
  struct Expression {
    ExprPtr ast;
    std::string text;
  };
  struct Table {
    std::vector<double> xs;
    std::vector<double> log_sigmas;
    TailExponents tails;
    bool even;
  };

  explicit SigmaProfile(std::variant<Polynomial, Expression, Table> impl) : impl_(std::move(impl)) {}
  double raw(double x) const;
  double table_eval(const Table& t, double x) const;

  std::variant<Polynomial, Expression, Table> impl_;
  double scale_ = 1.0;
  double floor_ = kDefaultPositivityFloor;
};

/// Parses the text of an expression profile.
inline ExprPtr parse_sigma(std::string_view text) { return parse_expression(text); }

/// Reads a profile JSON document:
///   {"kind":"polynomial","gamma":2.0}
///   {"kind":"expression","text":"(1+abs(x))^2"}
///   {"kind":"table","file":"sigma.csv","tail_exponents":[g_minus, g_plus], "even": false}
/// Relative table paths resolve against base_dir.
SigmaProfile profile_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// CSV with header row and columns x, sigma.
SigmaProfile load_table_csv(const std::filesystem::path& csv, TailExponents tails, bool even = false);

/// Shorthand "poly:<gamma>" | "expr:<text>" | "table:<path>". A .json path is a
/// profile document; any other table path is a CSV and needs tail exponents.
SigmaProfile parse_sigma_spec(std::string_view spec, std::optional<TailExponents> table_tails = std::nullopt);

}  // namespace stable_ergo
