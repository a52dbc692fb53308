#pragma once

// Closed-loop Jacobians at an equilibrium, assembled block by block.
// Every analytic form has a finite-difference twin through ClosedLoop.

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "reinstab/closed_loop.hpp"
#include "reinstab/equilibria.hpp"
#include "reinstab/errors.hpp"
#include "reinstab/matrixlab.hpp"
#include "reinstab/model.hpp"

namespace reinstab {

struct BlockSlice {
  std::string name;
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

struct ClosedLoopJacobian {
  Matrix matrix;
  std::vector<BlockSlice> blocks;
  std::string form;  ///< which closed loop produced it
  Eigen::Index plant_dim = 0;

  [[nodiscard]] Matrix block(const std::string& name) const {
    for (const BlockSlice& b : blocks) {
      if (b.name == name) return matrix.block(b.row, b.col, b.rows, b.cols);
    }
    throw Error(ErrorCode::InvalidArgument, "no block named " + name);
  }
  [[nodiscard]] Matrix plant_block() const { return matrix.topLeftCorner(plant_dim, plant_dim); }
  [[nodiscard]] double abscissa() const { return spectral_abscissa(matrix); }
};

namespace detail {

inline std::vector<BlockSlice> standard_blocks(Eigen::Index n, Eigen::Index m) {
  std::vector<BlockSlice> b{{"plant", 0, 0, n, n}, {"actuation", 0, n, n, m - n}, {"sensing", n, 0, m - n, n},
                            {"controller", n, n, m - n, m - n}};
  return b;
}

inline void require_positive_effort(double u) {
  if (!(u > 0.0)) throw Error(ErrorCode::PreconditionViolated, "Jacobian needs u* > 0");
}

}  // namespace detail

/**
 * The p-type matrix
 *   [ Abar      0          -e_n kp r  ]
 *   [ 0         -eta u*    -mu kp/u*  ]
 *   [ theta e_n^T  -eta u*  -mu kp/u* ]
 * from a plant block Abar = J - e_n e_n^T u*.
 */
[[nodiscard]] inline ClosedLoopJacobian ptype_matrix(const Matrix& a_bar, double r, double u, const PType& c) {
  detail::require_positive_effort(u);
  const Eigen::Index n = a_bar.rows();
  const Eigen::Index m = n + 2;
  ClosedLoopJacobian j;
  j.plant_dim = n;
  j.form = "ptype";
  j.matrix = Matrix::Zero(m, m);
  j.matrix.topLeftCorner(n, n) = a_bar;
  j.matrix(n - 1, n + 1) = -c.kp * r;
  j.matrix(n, n) = -c.eta * u;
  j.matrix(n, n + 1) = -c.mu * c.kp / u;
  j.matrix(n + 1, n - 1) = c.theta;
  j.matrix(n + 1, n) = -c.eta * u;
  j.matrix(n + 1, n + 1) = -c.mu * c.kp / u;
  j.blocks = detail::standard_blocks(n, m);
  return j;
}

/// Plant block J(x*) - e_n e_n^T u*, linear or nonlinear.
[[nodiscard]] inline Matrix shifted_plant_block(const Plant& plant, const Vector& x_star, double u) {
  Matrix a_bar = plant_jacobian(plant, x_star);
  const Eigen::Index n = a_bar.rows();
  a_bar(n - 1, n - 1) -= u;
  return a_bar;
}

[[nodiscard]] inline ClosedLoopJacobian jacobian_ptype(const Plant& plant, const PType& c, const Equilibrium& eq) {
  const Matrix a_bar = shifted_plant_block(plant, eq.x_star, eq.u_star);
  ClosedLoopJacobian j = ptype_matrix(a_bar, c.set_point(), eq.u_star, c);
  if (std::holds_alternative<NonlinearNetwork>(plant)) j.form = "ptype-nonlinear";
  return j;
}

/// Differentiation of the AIRC loop; the n-type arm adds e_1 ki in the z1 column.
[[nodiscard]] inline ClosedLoopJacobian jacobian_airc(const LinearNetwork& net, const Airc& c, const Equilibrium& eq) {
  const Eigen::Index n = net.dim();
  const Eigen::Index m = n + 2;
  const double z1 = eq.controller_state(0);
  const double z2 = eq.controller_state(1);
  const double xn = eq.x_star(n - 1);
  ClosedLoopJacobian j;
  j.plant_dim = n;
  j.form = "airc";
  j.matrix = Matrix::Zero(m, m);
  j.matrix.topLeftCorner(n, n) = net.a;
  j.matrix(n - 1, n - 1) -= c.kp * z2;
  j.matrix(0, n) += c.ki;
  j.matrix(n - 1, n + 1) = -c.kp * xn;
  j.matrix(n, n) = -c.eta * z2;
  j.matrix(n, n + 1) = -c.eta * z1;
  j.matrix(n + 1, n - 1) = c.theta;
  j.matrix(n + 1, n) = -c.eta * z2;
  j.matrix(n + 1, n + 1) = -c.eta * z1;
  j.blocks = detail::standard_blocks(n, m);
  return j;
}

/// [Abar, -e_n kp mu; alpha z* e_n^T, 0] on the positive branch.
[[nodiscard]] inline ClosedLoopJacobian jacobian_exponential(const LinearNetwork& net, const Exponential& c,
                                                             const Equilibrium& eq) {
  if (eq.label != BranchLabel::Positive) {
    throw Error(ErrorCode::PreconditionViolated, "analytic exponential Jacobian is for the positive branch only");
  }
  detail::require_positive_effort(eq.u_star);
  const Eigen::Index n = net.dim();
  ClosedLoopJacobian j;
  j.plant_dim = n;
  j.form = "exponential";
  j.matrix = Matrix::Zero(n + 1, n + 1);
  j.matrix.topLeftCorner(n, n) = shifted_plant_block(net, eq.x_star, eq.u_star);
  j.matrix(n - 1, n) = -c.kp * c.mu;
  j.matrix(n, n - 1) = c.alpha * eq.controller_state(0);
  j.blocks = detail::standard_blocks(n, n + 1);
  return j;
}

/// [Abar, -e_n r; (k/beta) z*(beta - z*) e_n^T, 0] on the positive branch.
[[nodiscard]] inline ClosedLoopJacobian jacobian_logistic(const LinearNetwork& net, const Logistic& c,
                                                          const Equilibrium& eq) {
  if (eq.label != BranchLabel::Positive) {
    throw Error(ErrorCode::PreconditionViolated, "analytic logistic Jacobian is for the positive branch only");
  }
  detail::require_positive_effort(eq.u_star);
  const Eigen::Index n = net.dim();
  const double z = eq.controller_state(0);
  ClosedLoopJacobian j;
  j.plant_dim = n;
  j.form = "logistic";
  j.matrix = Matrix::Zero(n + 1, n + 1);
  j.matrix.topLeftCorner(n, n) = shifted_plant_block(net, eq.x_star, z);
  j.matrix(n - 1, n) = -c.r;
  j.matrix(n, n - 1) = (c.k / c.beta) * z * (c.beta - z);
  j.blocks = detail::standard_blocks(n, n + 1);
  return j;
}

/// Integrator gain of the negative-feedback decomposition (exponential or logistic).
[[nodiscard]] inline double integrator_gain(const ClosedLoopJacobian& j) {
  const Eigen::Index n = j.plant_dim;
  return -j.matrix(n - 1, n) * j.matrix(n, n - 1);
}

[[nodiscard]] inline ClosedLoopJacobian jacobian_fd(const ClosedLoop& loop, const Equilibrium& eq) {
  ClosedLoopJacobian j;
  j.plant_dim = loop.plant_dim();
  j.form = "finite-difference";
  j.matrix = loop.fd_jacobian(eq.state());
  j.blocks = detail::standard_blocks(j.plant_dim, loop.dim());
  return j;
}

/// Analytic Jacobian when one exists for the pair, finite differences otherwise.
[[nodiscard]] inline ClosedLoopJacobian jacobian_at(const Plant& plant, const ControllerSpec& ctrl,
                                                    const Equilibrium& eq) {
  const auto* lin = std::get_if<LinearNetwork>(&plant);
  if (const auto* p = std::get_if<PType>(&ctrl)) return jacobian_ptype(plant, *p, eq);
  if (lin != nullptr) {
    if (const auto* a = std::get_if<Airc>(&ctrl)) return jacobian_airc(*lin, *a, eq);
    if (eq.label == BranchLabel::Positive) {
      if (const auto* e = std::get_if<Exponential>(&ctrl)) return jacobian_exponential(*lin, *e, eq);
      if (const auto* l = std::get_if<Logistic>(&ctrl)) return jacobian_logistic(*lin, *l, eq);
    }
  }
  return jacobian_fd(ClosedLoop(plant, ctrl), eq);
}

/// Largest entrywise mismatch between two Jacobians relative to max(1, |entry|).
[[nodiscard]] inline double relative_mismatch(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      const double scale = std::max({1.0, std::abs(a(i, k)), std::abs(b(i, k))});
      worst = std::max(worst, std::abs(a(i, k) - b(i, k)) / scale);
    }
  }
  return worst;
}

[[nodiscard]] inline nlohmann::json to_json(const ClosedLoopJacobian& j) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const BlockSlice& b : j.blocks) {
    blocks.push_back({{"name", b.name}, {"row", b.row}, {"col", b.col}, {"rows", b.rows}, {"cols", b.cols}});
  }
  return {{"form", j.form}, {"matrix", to_json(j.matrix)}, {"blocks", blocks}, {"spectral_abscissa", j.abscissa()}};
}

}  // namespace reinstab
