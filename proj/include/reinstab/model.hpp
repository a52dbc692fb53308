#pragma once

/**
 * Plants, controllers and the JSON model document.
 *
 * Document layout (UTF-8 JSON, unknown fields rejected):
 *
 *     {
 *       "name": "optional label",
 *       "type": "linear" | "nonlinear",
 *       "n": 3,
 *       "A": [[...], ...],              // linear only, row-major
 *       "terms": [{"kind": ...}, ...],  // nonlinear only
 *       "b0": [...],
 *       "controller": {"kind": "airc" | "ptype" | "exponential" | "logistic", ...}
 *     }
 *
 * Species indices inside "terms" are 1-based (x_1 ... x_n) and the regulated
 * output is always x_n. Controller parameters:
 *   airc: mu, theta, eta, ki, kp      ptype: mu, theta, eta, kp
 *   exponential: mu, alpha, kp        logistic: r, k, beta
 */

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "reinstab/controllers.hpp"
#include "reinstab/errors.hpp"
#include "reinstab/matrixlab.hpp"

namespace reinstab {

struct LinearNetwork {
  Matrix a;
  Vector b0;
  [[nodiscard]] Eigen::Index dim() const { return a.rows(); }
};

enum class TermKind { Linear, HillRepression, HillActivation, MassAction2 };

constexpr const char* to_string(TermKind k) noexcept {
  switch (k) {
    case TermKind::Linear: return "linear";
    case TermKind::HillRepression: return "hill_repression";
    case TermKind::HillActivation: return "hill_activation";
    case TermKind::MassAction2: return "mass_action2";
  }
  return "unknown";
}

/**
 * One entry of the closed rate-term catalog. Every admissible term is
 * positivity-safe: it cannot push x_target negative when x_target = 0.
 * Indices are 0-based here.
 */
struct RateTerm {
  TermKind kind = TermKind::Linear;
  int target = 0;
  int source = 0;   ///< column (Linear), regulator (Hill), first factor (MassAction2)
  int source2 = 0;  ///< second factor (MassAction2 only)
  double coefficient = 0.0;  ///< rate constant or Hill amplitude
  double exponent = 1.0;     ///< Hill exponent
  int sign = 1;              ///< MassAction2 production (+1) or consumption (-1)

  static RateTerm linear(int row, int col, double c) {
    return {TermKind::Linear, row, col, 0, c, 1.0, 1};
  }
  static RateTerm hill_repression(int target, int regulator, double amplitude, double h = 1.0) {
    return {TermKind::HillRepression, target, regulator, 0, amplitude, h, 1};
  }
  static RateTerm hill_activation(int target, int regulator, double amplitude, double h = 1.0) {
    return {TermKind::HillActivation, target, regulator, 0, amplitude, h, 1};
  }
  static RateTerm mass_action2(int target, int j, int k, double c, int sign = 1) {
    return {TermKind::MassAction2, target, j, k, c, 1.0, sign};
  }

  /// Contribution to f_target. Hill regulators are clamped at zero so that
  /// solver round-off below zero stays finite.
  [[nodiscard]] double value(const Vector& x) const {
    switch (kind) {
      case TermKind::Linear: return coefficient * x(source);
      case TermKind::HillRepression: {
        const double p = std::pow(std::max(x(source), 0.0), exponent);
        return coefficient / (1.0 + p);
      }
      case TermKind::HillActivation: {
        const double p = std::pow(std::max(x(source), 0.0), exponent);
        return coefficient * p / (1.0 + p);
      }
      case TermKind::MassAction2: return sign * coefficient * x(source) * x(source2);
    }
    return 0.0;
  }

  /// Adds d(value)/dx into row `target` of jac.
  void add_gradient(const Vector& x, Matrix& jac) const {
    switch (kind) {
      case TermKind::Linear: jac(target, source) += coefficient; return;
      case TermKind::HillRepression:
      case TermKind::HillActivation: {
        const double xj = std::max(x(source), 0.0);
        const double p = std::pow(xj, exponent);
        const double dp = exponent * std::pow(xj, exponent - 1.0);
        const double denom = (1.0 + p) * (1.0 + p);
        const double d = coefficient * dp / denom;
        jac(target, source) += (kind == TermKind::HillRepression) ? -d : d;
        return;
      }
      case TermKind::MassAction2:
        jac(target, source) += sign * coefficient * x(source2);
        jac(target, source2) += sign * coefficient * x(source);
        return;
    }
  }
};

struct NonlinearNetwork {
  int n = 0;
  std::vector<RateTerm> terms;
  Vector b0;

  [[nodiscard]] Eigen::Index dim() const { return n; }

  /// f(x) without the positivity guard on x.
  [[nodiscard]] Vector rate_unchecked(const Vector& x) const {
    Vector f = Vector::Zero(n);
    for (const RateTerm& t : terms) f(t.target) += t.value(x);
    return f;
  }

  /// f(x); b0 is not included.
  [[nodiscard]] Vector rate(const Vector& x) const {
    if (x.size() != n) throw Error(ErrorCode::DimensionMismatch, "state dimension mismatch");
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x(i) < -1e-12) {
        throw Error(ErrorCode::NegativeState, "x[" + std::to_string(i) + "] = " + std::to_string(x(i)));
      }
    }
    return rate_unchecked(x);
  }

  [[nodiscard]] Matrix jacobian(const Vector& x) const {
    Matrix j = Matrix::Zero(n, n);
    for (const RateTerm& t : terms) t.add_gradient(x, j);
    return j;
  }

  /// Sum of the Linear terms as a matrix.
  [[nodiscard]] Matrix linear_part() const {
    Matrix a = Matrix::Zero(n, n);
    for (const RateTerm& t : terms) {
      if (t.kind == TermKind::Linear) a(t.target, t.source) += t.coefficient;
    }
    return a;
  }

  [[nodiscard]] bool is_linear() const {
    for (const RateTerm& t : terms) {
      if (t.kind != TermKind::Linear) return false;
    }
    return true;
  }
};

using Plant = std::variant<LinearNetwork, NonlinearNetwork>;

[[nodiscard]] inline Eigen::Index plant_dim(const Plant& p) {
  return std::visit([](const auto& net) { return net.dim(); }, p);
}

[[nodiscard]] inline const Vector& plant_b0(const Plant& p) {
  return std::visit([](const auto& net) -> const Vector& { return net.b0; }, p);
}

/// f(x) (without b0). Linear plants return A x.
[[nodiscard]] inline Vector plant_rate(const Plant& p, const Vector& x) {
  if (const auto* lin = std::get_if<LinearNetwork>(&p)) return lin->a * x;
  return std::get<NonlinearNetwork>(p).rate_unchecked(x);
}

[[nodiscard]] inline Matrix plant_jacobian(const Plant& p, const Vector& x) {
  if (const auto* lin = std::get_if<LinearNetwork>(&p)) return lin->a;
  return std::get<NonlinearNetwork>(p).jacobian(x);
}

struct Model {
  std::string name;
  Plant plant;
  ControllerSpec controller;
};

// ---------------------------------------------------------------------------
// Validation

inline void validate(const LinearNetwork& net, const std::string& base = "") {
  const Eigen::Index n = net.a.rows();
  if (n == 0 || net.a.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "A must be a nonempty square matrix", base + "/A");
  }
  if (net.b0.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "b0 must have n entries", base + "/b0");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::string path = base + "/A/" + std::to_string(i) + "/" + std::to_string(j);
      if (!std::isfinite(net.a(i, j))) throw Error(ErrorCode::SchemaViolation, "non-finite entry", path);
      if (i != j && net.a(i, j) < 0.0) {
        throw Error(ErrorCode::NonMetzler, "negative off-diagonal entry " + std::to_string(net.a(i, j)), path);
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(net.b0(i) >= 0.0) || !std::isfinite(net.b0(i))) {
      throw Error(ErrorCode::NegativeBasal, "basal rate must be nonnegative", base + "/b0/" + std::to_string(i));
    }
  }
}

inline void validate(const RateTerm& t, int n, const std::string& path) {
  auto in_range = [n](int i) { return i >= 0 && i < n; };
  if (!in_range(t.target) || !in_range(t.source) ||
      (t.kind == TermKind::MassAction2 && !in_range(t.source2))) {
    throw Error(ErrorCode::InvalidTerm, "species index out of range", path);
  }
  if (!std::isfinite(t.coefficient) || !std::isfinite(t.exponent)) {
    throw Error(ErrorCode::InvalidTerm, "non-finite parameter", path);
  }
  switch (t.kind) {
    case TermKind::Linear:
      if (t.target != t.source && t.coefficient < 0.0) {
        throw Error(ErrorCode::NonMetzler, "off-diagonal linear coefficient must be >= 0", path + "/coefficient");
      }
      if (t.target == t.source && t.coefficient > 0.0) {
        throw Error(ErrorCode::InvalidTerm, "diagonal linear coefficient must be <= 0", path + "/coefficient");
      }
      return;
    case TermKind::HillRepression:
    case TermKind::HillActivation:
      if (t.coefficient < 0.0) throw Error(ErrorCode::InvalidTerm, "amplitude must be >= 0", path + "/amplitude");
      if (t.exponent < 1.0) throw Error(ErrorCode::InvalidTerm, "Hill exponent must be >= 1", path + "/exponent");
      return;
    case TermKind::MassAction2:
      if (t.coefficient < 0.0) throw Error(ErrorCode::InvalidTerm, "coefficient must be >= 0", path + "/coefficient");
      if (t.sign != 1 && t.sign != -1) throw Error(ErrorCode::InvalidTerm, "sign must be +1 or -1", path + "/sign");
      if (t.sign < 0 && t.target != t.source && t.target != t.source2) {
        throw Error(ErrorCode::InvalidTerm, "consumption term must involve its target species", path);
      }
      return;
  }
}

inline void validate(const NonlinearNetwork& net) {
  if (net.n <= 0) throw Error(ErrorCode::DimensionMismatch, "n must be positive", "/n");
  if (net.b0.size() != net.n) throw Error(ErrorCode::DimensionMismatch, "b0 must have n entries", "/b0");
  for (std::size_t i = 0; i < net.terms.size(); ++i) {
    validate(net.terms[i], net.n, "/terms/" + std::to_string(i));
  }
  for (Eigen::Index i = 0; i < net.n; ++i) {
    if (!(net.b0(i) >= 0.0) || !std::isfinite(net.b0(i))) {
      throw Error(ErrorCode::NegativeBasal, "basal rate must be nonnegative", "/b0/" + std::to_string(i));
    }
  }
}

inline void validate(const ControllerSpec& c) {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::NonPositiveParameter, std::string(name) + " must be strictly positive",
                  std::string("/controller/") + name);
    }
  };
  struct Visitor {
    decltype(check)& ck;
    void operator()(const Airc& a) const {
      ck(a.mu, "mu"); ck(a.theta, "theta"); ck(a.eta, "eta"); ck(a.ki, "ki"); ck(a.kp, "kp");
    }
    void operator()(const PType& p) const {
      ck(p.mu, "mu"); ck(p.theta, "theta"); ck(p.eta, "eta"); ck(p.kp, "kp");
    }
    void operator()(const Exponential& e) const { ck(e.mu, "mu"); ck(e.alpha, "alpha"); ck(e.kp, "kp"); }
    void operator()(const Logistic& l) const { ck(l.r, "r"); ck(l.k, "k"); ck(l.beta, "beta"); }
  };
  std::visit(Visitor{check}, c);
}

// ---------------------------------------------------------------------------
// JSON document I/O

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!ok.count(item.key())) {
      throw Error(ErrorCode::SchemaViolation, "unknown field '" + item.key() + "'", path + "/" + item.key());
    }
  }
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) {
    throw Error(ErrorCode::SchemaViolation, std::string("missing field '") + key + "'", path + "/" + key);
  }
  return obj.at(key);
}

inline double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw Error(ErrorCode::SchemaViolation, "expected a number", path);
  return v.get<double>();
}

inline int index1(const json& v, int n, const std::string& path) {
  if (!v.is_number_integer()) throw Error(ErrorCode::SchemaViolation, "expected an integer index", path);
  const int i = v.get<int>();
  if (i < 1 || i > n) throw Error(ErrorCode::InvalidTerm, "species index must be in 1..n", path);
  return i - 1;
}

inline Vector vector_field(const json& v, const std::string& path) {
  if (!v.is_array()) throw Error(ErrorCode::SchemaViolation, "expected an array", path);
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = number(v[i], path + "/" + std::to_string(i));
  return out;
}

inline RateTerm parse_term(const json& t, int n, const std::string& path) {
  if (!t.is_object()) throw Error(ErrorCode::SchemaViolation, "term must be an object", path);
  const json& kind = require(t, "kind", path);
  if (!kind.is_string()) throw Error(ErrorCode::SchemaViolation, "kind must be a string", path + "/kind");
  const std::string k = kind.get<std::string>();
  if (k == "linear") {
    reject_unknown(t, {"kind", "row", "col", "coefficient"}, path);
    return RateTerm::linear(index1(require(t, "row", path), n, path + "/row"),
                            index1(require(t, "col", path), n, path + "/col"),
                            number(require(t, "coefficient", path), path + "/coefficient"));
  }
  if (k == "hill_repression" || k == "hill_activation") {
    reject_unknown(t, {"kind", "target", "regulator", "amplitude", "exponent"}, path);
    const int target = index1(require(t, "target", path), n, path + "/target");
    const int reg = index1(require(t, "regulator", path), n, path + "/regulator");
    const double amp = number(require(t, "amplitude", path), path + "/amplitude");
    const double h = t.contains("exponent") ? number(t.at("exponent"), path + "/exponent") : 1.0;
    return k == "hill_repression" ? RateTerm::hill_repression(target, reg, amp, h)
                                  : RateTerm::hill_activation(target, reg, amp, h);
  }
  if (k == "mass_action2") {
    reject_unknown(t, {"kind", "target", "factors", "coefficient", "sign"}, path);
    const int target = index1(require(t, "target", path), n, path + "/target");
    const json& f = require(t, "factors", path);
    if (!f.is_array() || f.size() != 2) {
      throw Error(ErrorCode::SchemaViolation, "factors must be a pair of indices", path + "/factors");
    }
    const int j = index1(f[0], n, path + "/factors/0");
    const int kk = index1(f[1], n, path + "/factors/1");
    const double c = number(require(t, "coefficient", path), path + "/coefficient");
    int sign = 1;
    if (t.contains("sign")) {
      if (!t.at("sign").is_number_integer()) throw Error(ErrorCode::SchemaViolation, "sign must be +1 or -1", path + "/sign");
      sign = t.at("sign").get<int>();
    }
    return RateTerm::mass_action2(target, j, kk, c, sign);
  }
  throw Error(ErrorCode::InvalidTerm, "unknown term kind '" + k + "'", path + "/kind");
}

inline ControllerSpec parse_controller(const json& c) {
  const std::string path = "/controller";
  if (!c.is_object()) throw Error(ErrorCode::SchemaViolation, "controller must be an object", path);
  const json& kind = require(c, "kind", path);
  if (!kind.is_string()) throw Error(ErrorCode::SchemaViolation, "kind must be a string", path + "/kind");
  const std::string k = kind.get<std::string>();
  auto num = [&](const char* key) { return number(require(c, key, path), path + "/" + key); };
  ControllerSpec spec;
  if (k == "airc") {
    reject_unknown(c, {"kind", "mu", "theta", "eta", "ki", "kp"}, path);
    spec = Airc{num("mu"), num("theta"), num("eta"), num("ki"), num("kp")};
  } else if (k == "ptype") {
    reject_unknown(c, {"kind", "mu", "theta", "eta", "kp"}, path);
    spec = PType{num("mu"), num("theta"), num("eta"), num("kp")};
  } else if (k == "exponential") {
    reject_unknown(c, {"kind", "mu", "alpha", "kp"}, path);
    spec = Exponential{num("mu"), num("alpha"), num("kp")};
  } else if (k == "logistic") {
    reject_unknown(c, {"kind", "r", "k", "beta"}, path);
    spec = Logistic{num("r"), num("k"), num("beta")};
  } else {
    throw Error(ErrorCode::SchemaViolation, "unknown controller kind '" + k + "'", path + "/kind");
  }
  validate(spec);
  return spec;
}

}  // namespace detail

/// Parse and fully validate a model document that is already JSON.
[[nodiscard]] inline Model model_from_json(const nlohmann::json& doc) {
  using detail::require;
  if (!doc.is_object()) throw Error(ErrorCode::SchemaViolation, "document must be a JSON object", "");
  detail::reject_unknown(doc, {"name", "type", "n", "A", "terms", "b0", "controller"}, "");
  Model m;
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) throw Error(ErrorCode::SchemaViolation, "name must be a string", "/name");
    m.name = doc.at("name").get<std::string>();
  }
  const nlohmann::json& type = require(doc, "type", "");
  const nlohmann::json& nval = require(doc, "n", "");
  if (!nval.is_number_integer() || nval.get<int>() <= 0) {
    throw Error(ErrorCode::SchemaViolation, "n must be a positive integer", "/n");
  }
  const int n = nval.get<int>();
  const Vector b0 = detail::vector_field(require(doc, "b0", ""), "/b0");
  if (b0.size() != n) throw Error(ErrorCode::DimensionMismatch, "b0 must have n entries", "/b0");

  if (type == "linear") {
    if (doc.contains("terms")) throw Error(ErrorCode::SchemaViolation, "'terms' is only valid for nonlinear models", "/terms");
    const nlohmann::json& a = require(doc, "A", "");
    if (!a.is_array() || static_cast<int>(a.size()) != n) {
      throw Error(ErrorCode::DimensionMismatch, "A must have n rows", "/A");
    }
    LinearNetwork net{Matrix(n, n), b0};
    for (int i = 0; i < n; ++i) {
      const std::string rp = "/A/" + std::to_string(i);
      if (!a[static_cast<std::size_t>(i)].is_array() || static_cast<int>(a[static_cast<std::size_t>(i)].size()) != n) {
        throw Error(ErrorCode::DimensionMismatch, "each row of A must have n entries", rp);
      }
      for (int j = 0; j < n; ++j) {
        net.a(i, j) = detail::number(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], rp + "/" + std::to_string(j));
      }
    }
    validate(net);
    m.plant = std::move(net);
  } else if (type == "nonlinear") {
    if (doc.contains("A")) throw Error(ErrorCode::SchemaViolation, "'A' is only valid for linear models", "/A");
    const nlohmann::json& terms = require(doc, "terms", "");
    if (!terms.is_array()) throw Error(ErrorCode::SchemaViolation, "terms must be an array", "/terms");
    NonlinearNetwork net;
    net.n = n;
    net.b0 = b0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      net.terms.push_back(detail::parse_term(terms[i], n, "/terms/" + std::to_string(i)));
    }
    validate(net);
    m.plant = std::move(net);
  } else {
    throw Error(ErrorCode::SchemaViolation, "type must be 'linear' or 'nonlinear'", "/type");
  }
  m.controller = detail::parse_controller(require(doc, "controller", ""));
  return m;
}

[[nodiscard]] inline nlohmann::json parse_json_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

[[nodiscard]] inline Model load_model(const std::string& text) { return model_from_json(parse_json_text(text)); }

[[nodiscard]] inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

[[nodiscard]] inline Model load_model_file(const std::string& path) { return model_from_json(read_json_file(path)); }

[[nodiscard]] inline nlohmann::json to_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

[[nodiscard]] inline nlohmann::json to_json(const Matrix& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

[[nodiscard]] inline nlohmann::json to_json(const ControllerSpec& c) {
  struct Visitor {
    nlohmann::json operator()(const Airc& a) const {
      return {{"kind", "airc"}, {"mu", a.mu}, {"theta", a.theta}, {"eta", a.eta}, {"ki", a.ki}, {"kp", a.kp}};
    }
    nlohmann::json operator()(const PType& p) const {
      return {{"kind", "ptype"}, {"mu", p.mu}, {"theta", p.theta}, {"eta", p.eta}, {"kp", p.kp}};
    }
    nlohmann::json operator()(const Exponential& e) const {
      return {{"kind", "exponential"}, {"mu", e.mu}, {"alpha", e.alpha}, {"kp", e.kp}};
    }
    nlohmann::json operator()(const Logistic& l) const {
      return {{"kind", "logistic"}, {"r", l.r}, {"k", l.k}, {"beta", l.beta}};
    }
  };
  return std::visit(Visitor{}, c);
}

[[nodiscard]] inline nlohmann::json to_json(const RateTerm& t) {
  switch (t.kind) {
    case TermKind::Linear:
      return {{"kind", "linear"}, {"row", t.target + 1}, {"col", t.source + 1}, {"coefficient", t.coefficient}};
    case TermKind::HillRepression:
    case TermKind::HillActivation:
      return {{"kind", to_string(t.kind)}, {"target", t.target + 1}, {"regulator", t.source + 1},
              {"amplitude", t.coefficient}, {"exponent", t.exponent}};
    case TermKind::MassAction2:
      return {{"kind", "mass_action2"}, {"target", t.target + 1}, {"factors", {t.source + 1, t.source2 + 1}},
              {"coefficient", t.coefficient}, {"sign", t.sign}};
  }
  return {};
}

/// Inverse of model_from_json.
[[nodiscard]] inline nlohmann::json serialize(const Model& m) {
  nlohmann::json doc;
  if (!m.name.empty()) doc["name"] = m.name;
  if (const auto* lin = std::get_if<LinearNetwork>(&m.plant)) {
    doc["type"] = "linear";
    doc["n"] = lin->dim();
    doc["A"] = to_json(lin->a);
    doc["b0"] = to_json(lin->b0);
  } else {
    const auto& nl = std::get<NonlinearNetwork>(m.plant);
    doc["type"] = "nonlinear";
    doc["n"] = nl.n;
    nlohmann::json terms = nlohmann::json::array();
    for (const RateTerm& t : nl.terms) terms.push_back(to_json(t));
    doc["terms"] = std::move(terms);
    doc["b0"] = to_json(nl.b0);
  }
  doc["controller"] = to_json(m.controller);
  return doc;
}

/**
 * Apply a `key=value` override to a raw document before validation.
 *
 * Keys: a controller parameter name ("kp", "eta", ...); "r", which sets the
 * set-point (theta = mu / r for antithetic controllers, mu for exponential,
 * r for logistic); or a JSON pointer such as "/A/0/2" or "/b0/1".
 */
inline void apply_override(nlohmann::json& doc, const std::string& key, double value) {
  if (!key.empty() && key[0] == '/') {
    const nlohmann::json::json_pointer ptr(key);
    if (!doc.contains(ptr) || !doc.at(ptr).is_number()) {
      throw Error(ErrorCode::InvalidArgument, "override target is not a scalar in the document", key);
    }
    doc[ptr] = value;
    return;
  }
  if (!doc.contains("controller") || !doc["controller"].is_object()) {
    throw Error(ErrorCode::InvalidArgument, "document has no controller to override", "/controller");
  }
  nlohmann::json& c = doc["controller"];
  if (key == "r") {
    const std::string kind = c.value("kind", "");
    if (kind == "airc" || kind == "ptype") {
      if (!(value > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "set-point must be positive", "/controller/theta");
      c["theta"] = c.at("mu").get<double>() / value;
    } else if (kind == "exponential") {
      c["mu"] = value;
    } else {
      c["r"] = value;
    }
    return;
  }
  if (!c.contains(key)) {
    throw Error(ErrorCode::InvalidArgument, "unknown override key '" + key + "'", "/controller/" + key);
  }
  c[key] = value;
}

}  // namespace reinstab
