#pragma once

#include <string>
#include <variant>

namespace reinstab {

/// Antithetic integral rein controller: n-type and p-type actuation.
struct Airc {
  double mu = 1.0;
  double theta = 1.0;
  double eta = 1.0;
  double ki = 1.0;
  double kp = 1.0;
  [[nodiscard]] double set_point() const { return mu / theta; }
};

/// p-type antithetic integral controller (the annihilation rate carries k_p).
struct PType {
  double mu = 1.0;
  double theta = 1.0;
  double eta = 1.0;
  double kp = 1.0;
  [[nodiscard]] double set_point() const { return mu / theta; }
};

/// Exponential integral controller, dz/dt = -alpha z (mu - x_n).
struct Exponential {
  double mu = 1.0;
  double alpha = 1.0;
  double kp = 1.0;
  [[nodiscard]] double set_point() const { return mu; }
};

/// Logistic integral controller with saturation level beta.
struct Logistic {
  double r = 1.0;
  double k = 1.0;
  double beta = 1.0;
  [[nodiscard]] double set_point() const { return r; }
};

using ControllerSpec = std::variant<Airc, PType, Exponential, Logistic>;

[[nodiscard]] inline double set_point(const ControllerSpec& c) {
  return std::visit([](const auto& v) { return v.set_point(); }, c);
}

[[nodiscard]] inline std::string controller_kind(const ControllerSpec& c) {
  struct Visitor {
    std::string operator()(const Airc&) const { return "airc"; }
    std::string operator()(const PType&) const { return "ptype"; }
    std::string operator()(const Exponential&) const { return "exponential"; }
    std::string operator()(const Logistic&) const { return "logistic"; }
  };
  return std::visit(Visitor{}, c);
}

/// Number of controller states appended to the plant state.
[[nodiscard]] inline int controller_states(const ControllerSpec& c) {
  return (std::holds_alternative<Airc>(c) || std::holds_alternative<PType>(c)) ? 2 : 1;
}

}  // namespace reinstab
