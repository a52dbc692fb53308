#pragma once

/**
 * Closed-loop equilibria and set-point admissibility for the four controller
 * architectures, plus the steady-state maps g(u), F(u) = e_n^T g(u) and
 * F^{-1} for nonlinear plants.
 *
 * Every returned Equilibrium carries the norm of the assembled closed-loop
 * vector field at the point, evaluated independently of the formulas that
 * produced it.
 */

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "reinstab/closed_loop.hpp"
#include "reinstab/controllers.hpp"
#include "reinstab/errors.hpp"
#include "reinstab/matrixlab.hpp"
#include "reinstab/model.hpp"

namespace reinstab {

enum class BranchLabel { Regulated, Positive, Zero, Saturating };

constexpr const char* to_string(BranchLabel b) noexcept {
  switch (b) {
    case BranchLabel::Regulated: return "Regulated";
    case BranchLabel::Positive: return "Positive";
    case BranchLabel::Zero: return "Zero";
    case BranchLabel::Saturating: return "Saturating";
  }
  return "Unknown";
}

struct Equilibrium {
  Vector x_star;
  Vector controller_state;  ///< (z1, z2) or (z)
  double u_star = 0.0;      ///< steady control effort on the output degradation channel
  double residual = 0.0;
  BranchLabel label = BranchLabel::Regulated;

  [[nodiscard]] Vector state() const {
    Vector s(x_star.size() + controller_state.size());
    s << x_star, controller_state;
    return s;
  }
  [[nodiscard]] double residual_bound() const { return 1e-8 * (1.0 + state().norm()); }
};

enum class Regime { StableCase, OutputUnstableCase, ExponentialCase, LogisticInterval, NonlinearNumeric, Unclassified };

constexpr const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::StableCase: return "StableCase";
    case Regime::OutputUnstableCase: return "OutputUnstableCase";
    case Regime::ExponentialCase: return "ExponentialCase";
    case Regime::LogisticInterval: return "LogisticInterval";
    case Regime::NonlinearNumeric: return "NonlinearNumeric";
    case Regime::Unclassified: return "Unclassified";
  }
  return "Unknown";
}

struct Admissibility {
  bool admissible = false;
  Regime regime = Regime::Unclassified;
  double lower = 0.0;  ///< open interval of admissible set-points
  double upper = std::numeric_limits<double>::infinity();
  bool stabilizing = true;  ///< output-unstable case: g0 < 0
  std::string reason;
};

[[nodiscard]] inline Equilibrium with_residual(Equilibrium eq, const ClosedLoop& loop) {
  eq.residual = loop.residual(eq.state());
  return eq;
}

/// Roots of a z^2 + b z + c without cancellation in the smaller one.
[[nodiscard]] inline std::pair<double, double> stable_quadratic_roots(double a, double b, double c) {
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) throw Error(ErrorCode::InvalidArgument, "quadratic has complex roots");
  const double sgn = (b >= 0.0) ? 1.0 : -1.0;
  const double q = -0.5 * (b + sgn * std::sqrt(disc));
  if (q == 0.0) return {0.0, 0.0};
  return {q / a, c / q};
}

[[nodiscard]] inline double positive_root(double a, double b, double c) {
  const auto [r1, r2] = stable_quadratic_roots(a, b, c);
  if (r1 > 0.0 && !(r2 > 0.0)) return r1;
  if (r2 > 0.0 && !(r1 > 0.0)) return r2;
  throw Error(ErrorCode::InvalidArgument, "quadratic does not have exactly one positive root");
}

// ---------------------------------------------------------------------------
// AIRC

struct AircEquilibrium {
  Equilibrium eq;
  StaticGains gains;
  std::array<double, 3> p1{};  ///< (eta g1 ki, (g0 - r) eta, -gn kp mu r), descending degree
  double z2_from_p2 = 0.0;
  double cross_check = 0.0;    ///< relative mismatch between the two characterizations
};

[[nodiscard]] inline AircEquilibrium airc_equilibrium(const LinearNetwork& net, const Airc& c) {
  const Eigen::Index n = net.dim();
  if (!is_hurwitz(net.a)) throw Error(ErrorCode::NotHurwitz, "AIRC equilibrium formula needs a Hurwitz A");
  AircEquilibrium out;
  out.gains = static_gains(net.a, net.b0);
  const StaticGains& g = out.gains;
  if (std::abs(g.g1) <= 1e-14 * (std::abs(g.gn) + std::abs(g.g0) + 1.0)) {
    throw Error(ErrorCode::PreconditionViolated, "g1 = -e_n^T A^{-1} e_1 vanishes");
  }
  const double r = c.set_point();
  out.p1 = {c.eta * g.g1 * c.ki, (g.g0 - r) * c.eta, -g.gn * c.kp * c.mu * r};
  const double z1 = positive_root(out.p1[0], out.p1[1], out.p1[2]);
  const double z2 = c.mu / (c.eta * z1);
  out.z2_from_p2 = positive_root(-c.eta * g.gn * c.kp * r, (g.g0 - r) * c.eta, g.g1 * c.ki * c.mu);
  out.cross_check = std::abs(out.z2_from_p2 - z2) / std::abs(z2);

  const LinearSolve lu(net.a);
  Vector rhs = net.b0;
  rhs(0) += c.ki * z1;
  rhs(n - 1) -= r * c.kp * z2;
  out.eq.x_star = -lu.solve(rhs);
  out.eq.controller_state = Vector(2);
  out.eq.controller_state << z1, z2;
  out.eq.u_star = c.kp * z2;
  out.eq.label = BranchLabel::Regulated;
  out.eq = with_residual(out.eq, ClosedLoop(net, c));
  return out;
}

enum class SwitchingRegime { NType, PType, Balanced };

constexpr const char* to_string(SwitchingRegime s) noexcept {
  switch (s) {
    case SwitchingRegime::NType: return "r>g0";
    case SwitchingRegime::PType: return "r<g0";
    case SwitchingRegime::Balanced: return "r=g0";
  }
  return "Unknown";
}

struct SwitchingRow {
  double eta = 0.0;
  double z1 = 0.0;
  double z2 = 0.0;
  double z1_predicted = 0.0;
  double z2_predicted = 0.0;
  double product = 0.0;  ///< eta z1 z2
  double residual = 0.0;
};

struct SwitchingTable {
  SwitchingRegime regime = SwitchingRegime::PType;
  double u_star = 0.0;
  double z1_limit = 0.0;
  double z2_limit = 0.0;
  StaticGains gains;
  std::vector<SwitchingRow> rows;
};

/**
 * AIRC equilibria along an eta grid together with the large-eta limits:
 * r > g0 -> (u_s / ki, 0) with u_s = (r - g0)/g1; r < g0 -> (0, u_s / kp),
 * u_s = (g0 - r)/(gn r); r = g0 -> both vanish like 1/sqrt(eta).
 */
[[nodiscard]] inline SwitchingTable airc_switching_limit(const LinearNetwork& net, const Airc& c,
                                                         const std::vector<double>& eta_grid) {
  for (std::size_t i = 0; i < eta_grid.size(); ++i) {
    if (!(eta_grid[i] > 0.0) || (i > 0 && !(eta_grid[i] > eta_grid[i - 1]))) {
      throw Error(ErrorCode::InvalidArgument, "eta grid must be positive and ascending");
    }
  }
  SwitchingTable t;
  t.gains = static_gains(net.a, net.b0);
  const double r = c.set_point();
  const double g0 = t.gains.g0;
  if (std::abs(r - g0) <= 1e-12 * std::max(std::abs(r), std::abs(g0))) {
    t.regime = SwitchingRegime::Balanced;
  } else if (r > g0) {
    t.regime = SwitchingRegime::NType;
    t.u_star = (r - g0) / t.gains.g1;
    t.z1_limit = t.u_star / c.ki;
  } else {
    t.regime = SwitchingRegime::PType;
    t.u_star = (g0 - r) / (t.gains.gn * r);
    t.z2_limit = t.u_star / c.kp;
  }
  for (double eta : eta_grid) {
    Airc ce = c;
    ce.eta = eta;
    const AircEquilibrium ae = airc_equilibrium(net, ce);
    SwitchingRow row;
    row.eta = eta;
    row.z1 = ae.eq.controller_state(0);
    row.z2 = ae.eq.controller_state(1);
    row.product = eta * row.z1 * row.z2;
    row.residual = ae.eq.residual;
    if (t.regime == SwitchingRegime::Balanced) {
      row.z1_predicted = std::sqrt(t.gains.gn * c.kp * c.mu * r / (eta * t.gains.g1 * c.ki));
      row.z2_predicted = std::sqrt(c.theta * t.gains.g1 * c.ki / (eta * t.gains.gn * c.kp));
    } else {
      row.z1_predicted = t.z1_limit;
      row.z2_predicted = t.z2_limit;
    }
    t.rows.push_back(row);
  }
  return t;
}

// ---------------------------------------------------------------------------
// p-type AIC

struct PTypeResult {
  Admissibility admissibility;
  std::optional<Equilibrium> eq;
  StaticGains gains;
  StabilityClass cls;
  double u_star = 0.0;
};

/// Regime from the structure of A and the sign of the candidate effort.
[[nodiscard]] inline Admissibility linear_admissibility(const StabilityClass& cls, const StaticGains& g, double r,
                                                        double u_star, const Vector& x_star) {
  Admissibility adm;
  adm.lower = 0.0;
  if (cls.tag == StabilityTag::MetzlerHurwitz) {
    adm.regime = Regime::StableCase;
    adm.upper = g.g0;
    adm.admissible = r > 0.0 && r < g.g0;
    if (!adm.admissible) adm.reason = "stable case requires 0 < r < g0 = " + std::to_string(g.g0);
  } else if (cls.tag == StabilityTag::MetzlerOutputUnstable) {
    adm.regime = Regime::OutputUnstableCase;
    adm.admissible = r > 0.0 && u_star > 0.0;
    adm.stabilizing = g.g0 < 0.0;
    if (!adm.admissible) adm.reason = "output-unstable case: u* = " + std::to_string(u_star) + " is not positive";
  } else {
    adm.regime = Regime::Unclassified;
    adm.admissible = r > 0.0 && u_star > 0.0 && (x_star.array() >= -1e-12).all();
    if (!adm.admissible) adm.reason = "no nonnegative equilibrium with positive control effort";
  }
  if (adm.admissible && !(u_star > 0.0)) {
    adm.admissible = false;
    adm.reason = "u* = " + std::to_string(u_star) + " is not positive";
  }
  return adm;
}

/// Non-throwing admissibility analysis for the p-type AIC on a linear plant.
[[nodiscard]] inline PTypeResult ptype_analysis(const LinearNetwork& net, const PType& c) {
  PTypeResult out;
  const Eigen::Index n = net.dim();
  out.cls = classify(net.a);
  out.gains = static_gains(net.a, net.b0);
  const double r = c.set_point();
  out.u_star = (out.gains.g0 - r) / (out.gains.gn * r);
  Vector x_star = Vector::Zero(n);
  if (std::isfinite(out.u_star)) {
    Vector rhs = net.b0;
    rhs(n - 1) -= r * out.u_star;
    x_star = -LinearSolve(net.a).solve(rhs);
  }
  out.admissibility = linear_admissibility(out.cls, out.gains, r, out.u_star, x_star);
  if (out.admissibility.admissible) {
    Equilibrium eq;
    eq.x_star = x_star;
    eq.controller_state = Vector(2);
    eq.controller_state << c.mu / (c.eta * out.u_star), out.u_star / c.kp;
    eq.u_star = out.u_star;
    eq.label = BranchLabel::Regulated;
    out.eq = with_residual(eq, ClosedLoop(net, c));
  }
  return out;
}

/// Equilibrium of the p-type loop; throws InadmissibleSetPoint when none exists.
[[nodiscard]] inline std::pair<Equilibrium, Admissibility> ptype_equilibrium(const LinearNetwork& net,
                                                                             const PType& c) {
  PTypeResult res = ptype_analysis(net, c);
  if (!res.eq) {
    throw Error(ErrorCode::InadmissibleSetPoint,
                res.admissibility.reason.empty() ? "set-point is not admissible" : res.admissibility.reason);
  }
  return {*res.eq, res.admissibility};
}

// ---------------------------------------------------------------------------
// Exponential and logistic controllers

struct BranchSet {
  std::vector<Equilibrium> branches;
  Admissibility positive;  ///< admissibility of the positive branch
  StaticGains gains;
  StabilityClass cls;

  [[nodiscard]] const Equilibrium* find(BranchLabel l) const {
    for (const Equilibrium& e : branches) {
      if (e.label == l) return &e;
    }
    return nullptr;
  }
};

[[nodiscard]] inline Equilibrium zero_branch(const LinearNetwork& net, const ControllerSpec& c) {
  Equilibrium eq;
  eq.x_star = -LinearSolve(net.a).solve(net.b0);
  eq.controller_state = Vector::Zero(1);
  eq.u_star = 0.0;
  eq.label = BranchLabel::Zero;
  return with_residual(eq, ClosedLoop(net, c));
}

/**
 * Positive branch: u* = kp z* = (g0 - mu)/(gn mu), x* = -A^{-1}(b0 - e_n mu u*)
 * (equivalently -Abar^{-1} b0). Zero branch: (-A^{-1} b0, 0).
 */
[[nodiscard]] inline BranchSet exponential_equilibria(const LinearNetwork& net, const Exponential& c) {
  BranchSet out;
  const Eigen::Index n = net.dim();
  out.cls = classify(net.a);
  out.gains = static_gains(net.a, net.b0);
  const double mu = c.mu;
  const double u_star = (out.gains.g0 - mu) / (out.gains.gn * mu);
  Vector rhs = net.b0;
  rhs(n - 1) -= mu * u_star;
  const Vector x_star = -LinearSolve(net.a).solve(rhs);
  out.positive = linear_admissibility(out.cls, out.gains, mu, u_star, x_star);
  if (out.positive.regime == Regime::StableCase) out.positive.regime = Regime::ExponentialCase;
  if (out.positive.admissible) {
    Equilibrium eq;
    eq.x_star = x_star;
    eq.controller_state = Vector::Constant(1, u_star / c.kp);
    eq.u_star = u_star;
    eq.label = BranchLabel::Positive;
    out.branches.push_back(with_residual(eq, ClosedLoop(net, c)));
  }
  out.branches.push_back(zero_branch(net, c));
  return out;
}

/**
 * Positive branch z* = (g0 - r)/(gn r) when 0 < z* < beta (the admissible
 * interval (g0/(1 + beta gn), g0) in the stable case); zero branch
 * (-A^{-1} b0, 0); saturating branch (-(A - e_n e_n^T beta)^{-1} b0, beta).
 */
[[nodiscard]] inline BranchSet logistic_equilibria(const LinearNetwork& net, const Logistic& c) {
  BranchSet out;
  const Eigen::Index n = net.dim();
  out.cls = classify(net.a);
  out.gains = static_gains(net.a, net.b0);
  const StaticGains& g = out.gains;
  const double r = c.r;
  const double z_star = (g.g0 - r) / (g.gn * r);
  Vector rhs = net.b0;
  rhs(n - 1) -= r * z_star;
  const Vector x_star = -LinearSolve(net.a).solve(rhs);

  Admissibility& adm = out.positive;
  adm.regime = Regime::LogisticInterval;
  adm.lower = g.g0 / (1.0 + c.beta * g.gn);
  adm.upper = g.g0;
  if (out.cls.tag == StabilityTag::MetzlerOutputUnstable) {
    adm.upper = std::numeric_limits<double>::infinity();
    adm.stabilizing = g.g0 < 0.0;
  }
  adm.admissible = r > 0.0 && z_star > 0.0 && z_star < c.beta && (x_star.array() >= -1e-12).all();
  if (!adm.admissible) {
    adm.reason = "z* = " + std::to_string(z_star) + " outside (0, beta); admissible interval (" +
                 std::to_string(adm.lower) + ", " + std::to_string(adm.upper) + ")";
  }
  if (adm.admissible) {
    Equilibrium eq;
    eq.x_star = x_star;
    eq.controller_state = Vector::Constant(1, z_star);
    eq.u_star = z_star;
    eq.label = BranchLabel::Positive;
    out.branches.push_back(with_residual(eq, ClosedLoop(net, c)));
  }
  out.branches.push_back(zero_branch(net, c));

  Matrix a_sat = net.a;
  a_sat(n - 1, n - 1) -= c.beta;
  Equilibrium sat;
  sat.x_star = -LinearSolve(a_sat).solve(net.b0);
  sat.controller_state = Vector::Constant(1, c.beta);
  sat.u_star = c.beta;
  sat.label = BranchLabel::Saturating;
  out.branches.push_back(with_residual(sat, ClosedLoop(net, c)));
  return out;
}

// ---------------------------------------------------------------------------
// Nonlinear plants

struct SteadyState {
  Vector x;
  int iterations = 0;
  double residual = 0.0;
  double condition = 1.0;
};

/**
 * Solve f(x) - e_n x_n u + b0 = 0 by damped, projected Newton, starting from
 * max(-Abar_lin^{-1} b0, 0.1) where Abar_lin is the linear part shifted by u.
 */
[[nodiscard]] inline SteadyState nonlinear_steady_state_detail(const NonlinearNetwork& net, double u,
                                                               int max_iterations = 200) {
  if (!(u >= 0.0)) throw Error(ErrorCode::InvalidArgument, "u must be nonnegative");
  const Eigen::Index n = net.n;
  auto field = [&](const Vector& x) {
    Vector f = net.rate_unchecked(x) + net.b0;
    f(n - 1) -= u * x(n - 1);
    return f;
  };
  auto jac = [&](const Vector& x) {
    Matrix j = net.jacobian(x);
    j(n - 1, n - 1) -= u;
    return j;
  };

  Vector x = Vector::Constant(n, 0.1);
  {
    Matrix a_lin = net.linear_part();
    a_lin(n - 1, n - 1) -= u;
    try {
      const LinearSolve lu(a_lin);
      x = (-lu.solve(net.b0)).cwiseMax(0.1);
    } catch (const Error&) {
      // singular linear part: keep the constant guess
    }
  }

  SteadyState out;
  Vector f = field(x);
  for (out.iterations = 0; out.iterations < max_iterations; ++out.iterations) {
    const double fn = f.norm();
    if (fn < 1e-10 * (1.0 + x.norm())) {
      const LinearSolve lu(jac(x));
      out.condition = lu.condition();
      if (lu.near_singular()) {
        throw Error(ErrorCode::AssumptionViolated,
                    "steady-state Jacobian is near singular (condition " + std::to_string(out.condition) + ")");
      }
      out.x = x;
      out.residual = fn;
      return out;
    }
    Vector dx;
    try {
      dx = LinearSolve(jac(x)).solve(-f);
    } catch (const Error&) {
      throw Error(ErrorCode::NoSteadyState, "singular Jacobian during Newton iteration");
    }
    double t = 1.0;
    Vector x_new;
    Vector f_new;
    for (;;) {
      x_new = (x + t * dx).cwiseMax(0.0);
      f_new = field(x_new);
      if (f_new.norm() < (1.0 - 1e-4 * t) * fn || t < 1e-10) break;
      t *= 0.5;
    }
    x = x_new;
    f = f_new;
  }
  throw Error(ErrorCode::NoSteadyState,
              "Newton did not converge in " + std::to_string(max_iterations) + " iterations at u = " + std::to_string(u));
}

/// g(u): the steady state for a constant control effort u >= 0.
[[nodiscard]] inline Vector nonlinear_steady_state(const NonlinearNetwork& net, double u) {
  return nonlinear_steady_state_detail(net, u).x;
}

struct FInverse {
  double u_star = 0.0;
  Vector x_star;
  double f_at_zero = 0.0;  ///< F(0), the open-loop output level
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int bisections = 0;
};

/**
 * u* = F^{-1}(r) with F(u) = e_n^T g(u). The bracket is grown by doubling u
 * from 1e-6 (capped at 1e9); monotonicity of F is checked on the bracket
 * samples; the root is refined by bisection to |F(u) - r| < 1e-10 (1 + r).
 */
[[nodiscard]] inline FInverse nonlinear_F_inverse(const NonlinearNetwork& net, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::InadmissibleSetPoint, "set-point must be positive");
  const Eigen::Index n = net.n;
  auto F = [&](double u) { return nonlinear_steady_state(net, u)(n - 1); };
  const double tol = 1e-10 * (1.0 + r);

  FInverse out;
  out.f_at_zero = F(0.0);
  const double s0 = out.f_at_zero - r;
  if (std::abs(s0) <= tol) {
    throw Error(ErrorCode::InadmissibleSetPoint, "r equals the open-loop output F(0); u* = 0 is not positive");
  }
  std::vector<std::pair<double, double>> samples{{0.0, out.f_at_zero}};
  double lo = 0.0, hi = 1e-6;
  double f_hi = F(hi);
  samples.emplace_back(hi, f_hi);
  while ((f_hi - r) * s0 > 0.0) {
    if (hi >= 1e9) {
      throw Error(ErrorCode::InadmissibleSetPoint,
                  "no u in [0, 1e9] reaches r = " + std::to_string(r) + " (F(0) = " + std::to_string(out.f_at_zero) + ")");
    }
    lo = hi;
    hi *= 2.0;
    f_hi = F(hi);
    samples.emplace_back(hi, f_hi);
  }
  // Strict monotonicity on the bracket samples.
  double direction = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double diff = samples[i].second - samples[i - 1].second;
    const double slack = 1e-12 * (1.0 + std::abs(samples[i].second));
    if (std::abs(diff) <= slack) continue;
    const double sgn = diff > 0.0 ? 1.0 : -1.0;
    if (direction == 0.0) {
      direction = sgn;
    } else if (sgn != direction) {
      throw Error(ErrorCode::AssumptionViolated, "F(u) is not monotonic near u = " + std::to_string(samples[i].first));
    }
  }

  out.bracket_lo = lo;
  out.bracket_hi = hi;
  double u = 0.5 * (lo + hi);
  for (out.bisections = 0; out.bisections < 200; ++out.bisections) {
    u = 0.5 * (lo + hi);
    const double fu = F(u) - r;
    if (std::abs(fu) < tol || hi - lo <= 1e-15 * hi) break;
    ((fu * s0 > 0.0) ? lo : hi) = u;
  }
  out.u_star = u;
  out.x_star = nonlinear_steady_state(net, u);
  return out;
}

struct NonlinearPTypeResult {
  Admissibility admissibility;
  std::optional<Equilibrium> eq;
  std::optional<FInverse> inverse;
};

/// Non-throwing p-type analysis on a nonlinear plant (steady-state solver
/// failures other than inadmissibility still propagate).
[[nodiscard]] inline NonlinearPTypeResult nonlinear_ptype_analysis(const NonlinearNetwork& net, const PType& c) {
  NonlinearPTypeResult out;
  out.admissibility.regime = Regime::NonlinearNumeric;
  try {
    out.inverse = nonlinear_F_inverse(net, c.set_point());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InadmissibleSetPoint) throw;
    out.admissibility.admissible = false;
    out.admissibility.reason = e.what();
    return out;
  }
  const double u = out.inverse->u_star;
  out.admissibility.admissible = u > 0.0;
  if (!out.admissibility.admissible) {
    out.admissibility.reason = "u* = " + std::to_string(u) + " is not positive";
    return out;
  }
  Equilibrium eq;
  eq.x_star = out.inverse->x_star;
  eq.controller_state = Vector(2);
  eq.controller_state << c.mu / (c.eta * u), u / c.kp;
  eq.u_star = u;
  eq.label = BranchLabel::Regulated;
  out.eq = with_residual(eq, ClosedLoop(net, c));
  return out;
}

[[nodiscard]] inline nlohmann::json to_json(const Equilibrium& e) {
  nlohmann::json j = {{"label", to_string(e.label)},
                      {"x_star", to_json(e.x_star)},
                      {"controller_state", to_json(e.controller_state)},
                      {"u_star", e.u_star},
                      {"residual", e.residual}};
  return j;
}

[[nodiscard]] inline nlohmann::json to_json(const Admissibility& a) {
  nlohmann::json j = {{"admissible", a.admissible},
                      {"regime", to_string(a.regime)},
                      {"lower", a.lower},
                      {"upper", std::isfinite(a.upper) ? nlohmann::json(a.upper) : nlohmann::json("inf")},
                      {"stabilizing", a.stabilizing}};
  if (!a.reason.empty()) j["reason"] = a.reason;
  return j;
}

[[nodiscard]] inline nlohmann::json to_json(const StaticGains& g) {
  return {{"g0", g.g0}, {"g1", g.g1}, {"gn", g.gn}, {"condition", g.condition}, {"near_singular", g.near_singular}};
}

}  // namespace reinstab
