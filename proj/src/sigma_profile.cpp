#include "stable_ergo/sigma_profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stable_ergo/errors.hpp"

namespace stable_ergo {

SigmaProfile SigmaProfile::polynomial(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("polynomial profile needs a finite gamma > 0");
  return SigmaProfile(Polynomial{gamma});
}

SigmaProfile SigmaProfile::expression(std::string_view text) {
  return SigmaProfile(Expression{parse_expression(text), std::string(text)});
}

SigmaProfile SigmaProfile::tabulated(std::vector<double> xs, std::vector<double> sigmas, TailExponents tails,
                                     bool even) {
  if (xs.size() != sigmas.size() || xs.size() < 2) throw DomainError("table needs at least two (x, sigma) nodes");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw DomainError("table x values must be strictly increasing");
  }
  if (even) {
    if (xs.front() != 0.0) throw DomainError("even table must start at x = 0");
  } else if (!(xs.front() < 0.0 && xs.back() > 0.0)) {
    throw DomainError("table must straddle x = 0 (or be declared even)");
  }
  if (!std::isfinite(tails.minus) || !std::isfinite(tails.plus)) throw DomainError("table tail exponents must be finite");
  std::vector<double> logs(sigmas.size());
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (!(sigmas[i] > 0.0)) throw NonPositiveSigma(xs[i], sigmas[i]);
    logs[i] = std::log(sigmas[i]);
  }
  return SigmaProfile(Table{std::move(xs), std::move(logs), tails, even});
}

SigmaProfile::Kind SigmaProfile::kind() const {
  if (std::holds_alternative<Polynomial>(impl_)) return Kind::polynomial;
  if (std::holds_alternative<Expression>(impl_)) return Kind::expression;
  return Kind::tabulated;
}

double SigmaProfile::table_eval(const Table& t, double x) const {
  const double ax = t.even ? std::abs(x) : x;
  const auto& xs = t.xs;
  if (ax >= xs.back()) return std::exp(t.log_sigmas.back() + t.tails.plus * std::log(ax / xs.back()));
  if (ax <= xs.front()) {
    // only reachable for non-even tables, where xs.front() < 0
    return std::exp(t.log_sigmas.front() + t.tails.minus * std::log(ax / xs.front()));
  }
  const auto it = std::upper_bound(xs.begin(), xs.end(), ax);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const double w = (ax - xs[lo]) / (xs[hi] - xs[lo]);
  return std::exp((1.0 - w) * t.log_sigmas[lo] + w * t.log_sigmas[hi]);
}

double SigmaProfile::raw(double x) const {
  return std::visit(
      [&](const auto& impl) -> double {
        using T = std::decay_t<decltype(impl)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          return std::pow(1.0 + std::abs(x), impl.gamma);
        } else if constexpr (std::is_same_v<T, Expression>) {
          return evaluate(*impl.ast, x);
        } else {
          return table_eval(impl, x);
        }
      },
      impl_);
}

double SigmaProfile::operator()(double x) const {
  const double v = scale_ * raw(x);
  if (!(v > floor_)) throw NonPositiveSigma(x, v);
  return v;
}

double SigmaProfile::speed_density(double x, double alpha) const {
  const double s = (*this)(x);
  if (std::isinf(s)) return 0.0;
  return std::pow(s, -alpha);
}

std::optional<TailExponents> SigmaProfile::declared_tails() const {
  if (const auto* p = std::get_if<Polynomial>(&impl_)) return TailExponents{p->gamma, p->gamma};
  if (const auto* t = std::get_if<Table>(&impl_)) return t->tails;
  return std::nullopt;
}

std::optional<TailExponents> SigmaProfile::declared_tail_coefficients() const {
  if (std::holds_alternative<Polynomial>(impl_)) return TailExponents{scale_, scale_};
  if (const auto* t = std::get_if<Table>(&impl_)) {
    // sigma(x) = sigma(x_end) (|x|/|x_end|)^gamma beyond the last node
    const double plus = scale_ * std::exp(t->log_sigmas.back()) / std::pow(std::abs(t->xs.back()), t->tails.plus);
    double minus = 0.0;
    if (t->even) {
      minus = scale_ * std::exp(t->log_sigmas.back()) / std::pow(std::abs(t->xs.back()), t->tails.minus);
    } else {
      minus = scale_ * std::exp(t->log_sigmas.front()) / std::pow(std::abs(t->xs.front()), t->tails.minus);
    }
    return TailExponents{minus, plus};
  }
  return std::nullopt;
}

bool SigmaProfile::is_even() const {
  if (std::holds_alternative<Polynomial>(impl_)) return true;
  if (const auto* t = std::get_if<Table>(&impl_)) return t->even;
  return false;
}

double SigmaProfile::gamma() const {
  if (const auto* p = std::get_if<Polynomial>(&impl_)) return p->gamma;
  throw DomainError("gamma() is only defined for polynomial profiles");
}

const ExprNode& SigmaProfile::ast() const {
  if (const auto* e = std::get_if<Expression>(&impl_)) return *e->ast;
  throw DomainError("ast() is only defined for expression profiles");
}

SigmaProfile SigmaProfile::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("profile scale must be a finite positive number");
  SigmaProfile out = *this;
  out.scale_ *= c;
  return out;
}

SigmaProfile SigmaProfile::with_positivity_floor(double floor) const {
  if (!(floor > 0.0)) throw DomainError("positivity floor must be positive");
  SigmaProfile out = *this;
  out.floor_ = floor;
  return out;
}

std::string SigmaProfile::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind()) {
    case Kind::polynomial: os << "poly:" << gamma(); break;
    case Kind::expression: os << "expr:" << std::get<Expression>(impl_).text; break;
    case Kind::tabulated: os << "table:" << std::get<Table>(impl_).xs.size() << " nodes"; break;
  }
  if (scale_ != 1.0) os << " scaled by " << scale_;
  return os.str();
}

nlohmann::json SigmaProfile::to_json() const {
  nlohmann::json doc;
  switch (kind()) {
    case Kind::polynomial:
      doc = {{"kind", "polynomial"}, {"gamma", gamma()}};
      break;
    case Kind::expression:
      doc = {{"kind", "expression"}, {"text", std::get<Expression>(impl_).text}};
      break;
    case Kind::tabulated: {
      const auto& t = std::get<Table>(impl_);
      nlohmann::json nodes = nlohmann::json::array();
      for (std::size_t i = 0; i < t.xs.size(); ++i) nodes.push_back({t.xs[i], std::exp(t.log_sigmas[i])});
      doc = {{"kind", "table"}, {"nodes", nodes}, {"tail_exponents", {t.tails.minus, t.tails.plus}}, {"even", t.even}};
      break;
    }
  }
  if (scale_ != 1.0) doc["scale"] = scale_;
  if (floor_ != kDefaultPositivityFloor) doc["positivity_floor"] = floor_;
  return doc;
}

SigmaProfile load_table_csv(const std::filesystem::path& csv, TailExponents tails, bool even) {
  std::ifstream in(csv);
  if (!in) throw DomainError("cannot open table file " + csv.string());
  std::string line;
  if (!std::getline(in, line)) throw DomainError("table file is empty: " + csv.string());
  std::vector<double> xs, sigmas;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("table line " + std::to_string(line_no) + " lacks a comma");
    double x = 0.0, s = 0.0;
    const char* b = line.data();
    auto r1 = std::from_chars(b, b + comma, x);
    std::size_t start = comma + 1;
    while (start < line.size() && line[start] == ' ') ++start;
    auto r2 = std::from_chars(b + start, b + line.size(), s);
    if (r1.ec != std::errc() || r2.ec != std::errc()) {
      throw DomainError("table line " + std::to_string(line_no) + " is not numeric");
    }
    xs.push_back(x);
    sigmas.push_back(s);
  }
  return SigmaProfile::tabulated(std::move(xs), std::move(sigmas), tails, even);
}

SigmaProfile profile_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  const std::string kind = doc.at("kind").get<std::string>();
  SigmaProfile profile = [&] {
    if (kind == "polynomial") return SigmaProfile::polynomial(doc.at("gamma").get<double>());
    if (kind == "expression") return SigmaProfile::expression(doc.at("text").get<std::string>());
    if (kind == "table") {
      const auto te = doc.at("tail_exponents");
      if (!te.is_array() || te.size() != 2) throw DomainError("tail_exponents must be [gamma_minus, gamma_plus]");
      const TailExponents tails{te[0].get<double>(), te[1].get<double>()};
      const bool even = doc.value("even", false);
      if (doc.contains("nodes")) {
        std::vector<double> xs, sigmas;
        for (const auto& node : doc.at("nodes")) {
          xs.push_back(node.at(0).get<double>());
          sigmas.push_back(node.at(1).get<double>());
        }
        return SigmaProfile::tabulated(std::move(xs), std::move(sigmas), tails, even);
      }
      std::filesystem::path file = doc.at("file").get<std::string>();
      if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
      return load_table_csv(file, tails, even);
    }
    throw DomainError("unknown profile kind '" + kind + "'");
  }();
  if (doc.contains("scale")) profile = profile.scaled(doc.at("scale").get<double>());
  if (doc.contains("positivity_floor")) profile = profile.with_positivity_floor(doc.at("positivity_floor").get<double>());
  return profile;
}

SigmaProfile parse_sigma_spec(std::string_view spec, std::optional<TailExponents> table_tails) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw DomainError("profile spec must look like poly:<g>, expr:<text> or table:<path>");
  const std::string_view head = spec.substr(0, colon);
  const std::string_view body = spec.substr(colon + 1);
  if (head == "poly") {
    double gamma = 0.0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), gamma);
    if (ec != std::errc() || ptr != body.data() + body.size()) throw DomainError("bad polynomial exponent '" + std::string(body) + "'");
    return SigmaProfile::polynomial(gamma);
  }
  if (head == "expr") return SigmaProfile::expression(body);
  if (head == "table") {
    const std::filesystem::path path{std::string(body)};
    if (path.extension() == ".json") {
      std::ifstream in(path);
      if (!in) throw DomainError("cannot open profile file " + path.string());
      return profile_from_json(nlohmann::json::parse(in), path.parent_path());
    }
    if (!table_tails) throw DomainError("a CSV table profile needs declared tail exponents");
    return load_table_csv(path, *table_tails);
  }
  throw DomainError("unknown profile kind '" + std::string(head) + "'");
}

}  // namespace stable_ergo
