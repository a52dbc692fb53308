#pragma once

// Closed-loop vector fields. State layout: [x_1 .. x_n, controller states],
// with (z1, z2) for the antithetic controllers and z for the others.

#include <variant>

#include "reinstab/controllers.hpp"
#include "reinstab/model.hpp"

namespace reinstab {

class ClosedLoop {
 public:
  ClosedLoop(Plant plant, ControllerSpec controller)
      : plant_(std::move(plant)), controller_(std::move(controller)) {}

  explicit ClosedLoop(const Model& m) : ClosedLoop(m.plant, m.controller) {}

  [[nodiscard]] Eigen::Index plant_dim() const { return reinstab::plant_dim(plant_); }
  [[nodiscard]] Eigen::Index dim() const { return plant_dim() + controller_states(controller_); }
  [[nodiscard]] const Plant& plant() const { return plant_; }
  [[nodiscard]] const ControllerSpec& controller() const { return controller_; }

  /// d/dt of the full state.
  [[nodiscard]] Vector operator()(const Vector& s) const {
    const Eigen::Index n = plant_dim();
    const Vector x = s.head(n);
    const double xn = x(n - 1);
    Vector ds(dim());
    Vector dx = plant_rate(plant_, x) + plant_b0(plant_);

    if (const auto* c = std::get_if<Airc>(&controller_)) {
      const double z1 = s(n), z2 = s(n + 1);
      const double ann = c->eta * z1 * z2;
      dx(0) += c->ki * z1;
      dx(n - 1) -= xn * c->kp * z2;
      ds(n) = c->mu - ann;
      ds(n + 1) = c->theta * xn - ann;
    } else if (const auto* p = std::get_if<PType>(&controller_)) {
      const double z1 = s(n), z2 = s(n + 1);
      const double ann = p->kp * p->eta * z1 * z2;
      dx(n - 1) -= xn * p->kp * z2;
      ds(n) = p->mu - ann;
      ds(n + 1) = p->theta * xn - ann;
    } else if (const auto* e = std::get_if<Exponential>(&controller_)) {
      const double z = s(n);
      dx(n - 1) -= xn * e->kp * z;
      ds(n) = -e->alpha * z * (e->mu - xn);
    } else {
      const auto& l = std::get<Logistic>(controller_);
      const double z = s(n);
      dx(n - 1) -= xn * z;
      ds(n) = -(l.k / l.beta) * z * (l.beta - z) * (l.r - xn);
    }
    ds.head(n) = dx;
    return ds;
  }

  /// Central finite-difference Jacobian, step 1e-6 (1 + |s_j|).
  [[nodiscard]] Matrix fd_jacobian(const Vector& s) const {
    const Eigen::Index m = dim();
    Matrix j(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const double h = 1e-6 * (1.0 + std::abs(s(k)));
      Vector sp = s, sm = s;
      sp(k) += h;
      sm(k) -= h;
      j.col(k) = ((*this)(sp) - (*this)(sm)) / (2.0 * h);
    }
    return j;
  }

  /// ||F(s)||, the equilibrium residual.
  [[nodiscard]] double residual(const Vector& s) const { return (*this)(s).norm(); }

 private:
  Plant plant_;
  ControllerSpec controller_;
};

}  // namespace reinstab
