#pragma once

/**
 * Structural tests on small dense matrices from positive-systems theory:
 * Metzler structure, Hurwitz stability, output instability, static gains
 * and diagonal Lyapunov certificates.
 *
 * The output species is always the last coordinate. Indices are 0-based in
 * code; `e_n` means `basis(n, n - 1)`.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "reinstab/errors.hpp"

namespace reinstab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Dead zone on real parts of eigenvalues: |Re λ| below this is "marginal".
inline constexpr double kStabilityTolerance = 1e-9;
/// Condition number above which a linear solve is flagged NearSingular.
inline constexpr double kNearSingularCondition = 1e12;

[[nodiscard]] inline Vector basis(Eigen::Index n, Eigen::Index i) {
  Vector e = Vector::Zero(n);
  e(i) = 1.0;
  return e;
}

inline void require_square(const Matrix& m, const char* what = "matrix") {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be square");
  }
  if (!m.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " has non-finite entries");
  }
}

/// True iff every off-diagonal entry is >= -tol.
[[nodiscard]] inline bool is_metzler(const Matrix& m, double tol = 0.0) {
  require_square(m);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) < -tol) return false;
    }
  }
  return true;
}

[[nodiscard]] inline ComplexVector eigenvalues(const Matrix& m) {
  require_square(m);
  if (m.size() == 0) return ComplexVector(0);
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidArgument, "eigenvalue iteration did not converge");
  }
  return solver.eigenvalues();
}

/// Maximum real part over the spectrum; -inf for the empty matrix.
[[nodiscard]] inline double spectral_abscissa(const Matrix& m) {
  const ComplexVector ev = eigenvalues(m);
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) best = std::max(best, ev(i).real());
  return best;
}

[[nodiscard]] inline bool is_hurwitz(const Matrix& m, double tol = kStabilityTolerance) {
  return spectral_abscissa(m) < -tol;
}

/// Rightmost eigenvalue of a Metzler matrix (real by Perron-Frobenius).
[[nodiscard]] inline double perron_frobenius(const Matrix& m) {
  if (!is_metzler(m)) {
    throw Error(ErrorCode::NonMetzler, "Perron-Frobenius eigenvalue requested for a non-Metzler matrix");
  }
  return spectral_abscissa(m);
}

/// S^T M S: the leading (n-1)x(n-1) principal block.
[[nodiscard]] inline Matrix leading_block(const Matrix& m) {
  require_square(m);
  const Eigen::Index k = std::max<Eigen::Index>(m.rows() - 1, 0);
  return m.topLeftCorner(k, k);
}

enum class StabilityTag { MetzlerHurwitz, MetzlerOutputUnstable, MetzlerOther, NonMetzler };

constexpr const char* to_string(StabilityTag tag) noexcept {
  switch (tag) {
    case StabilityTag::MetzlerHurwitz: return "MetzlerHurwitz";
    case StabilityTag::MetzlerOutputUnstable: return "MetzlerOutputUnstable";
    case StabilityTag::MetzlerOther: return "MetzlerOther";
    case StabilityTag::NonMetzler: return "NonMetzler";
  }
  return "Unknown";
}

struct StabilityClass {
  StabilityTag tag = StabilityTag::NonMetzler;
  double spectral_abscissa = 0.0;
  /// Spectral abscissa inside the (-tol, tol) dead zone.
  bool marginal = false;
};

/**
 * Classify a square matrix. The empty leading block of a 1x1 matrix counts
 * as Hurwitz, so a positive scalar is output unstable.
 */
[[nodiscard]] inline StabilityClass classify(const Matrix& m) {
  StabilityClass out;
  out.spectral_abscissa = spectral_abscissa(m);
  out.marginal = std::abs(out.spectral_abscissa) < kStabilityTolerance;
  if (!is_metzler(m)) {
    out.tag = StabilityTag::NonMetzler;
    return out;
  }
  if (out.spectral_abscissa < -kStabilityTolerance) {
    out.tag = StabilityTag::MetzlerHurwitz;
    return out;
  }
  const Eigen::Index n = m.rows();
  const bool leading_stable = (n == 1) || is_hurwitz(leading_block(m));
  out.tag = (leading_stable && m(n - 1, n - 1) > 0.0) ? StabilityTag::MetzlerOutputUnstable
                                                      : StabilityTag::MetzlerOther;
  return out;
}

/// Partial-pivot LU with a reciprocal condition estimate. Throws
/// SingularDynamics on numerically singular input.
class LinearSolve {
 public:
  explicit LinearSolve(const Matrix& m) {
    require_square(m);
    if (m.rows() == 0) {
      condition_ = 1.0;
      return;
    }
    lu_.compute(m);
    const double rcond = lu_.rcond();
    const auto& u = lu_.matrixLU();
    double min_pivot = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < u.rows(); ++i) min_pivot = std::min(min_pivot, std::abs(u(i, i)));
    if (!(rcond > 1e-16) || !(min_pivot > 0.0)) {
      throw Error(ErrorCode::SingularDynamics, "matrix is numerically singular");
    }
    condition_ = 1.0 / rcond;
  }

  [[nodiscard]] Vector solve(const Vector& b) const {
    if (b.size() == 0) return b;
    return lu_.solve(b);
  }
  [[nodiscard]] Vector solve_transpose(const Vector& b) const {
    if (b.size() == 0) return b;
    return lu_.transpose().solve(b);
  }
  [[nodiscard]] double condition() const noexcept { return condition_; }
  [[nodiscard]] bool near_singular() const noexcept { return condition_ > kNearSingularCondition; }

 private:
  Eigen::PartialPivLU<Matrix> lu_;
  double condition_ = 1.0;
};

struct StaticGains {
  double g0 = 0.0;  ///< -e_n^T A^{-1} b0
  double g1 = 0.0;  ///< -e_n^T A^{-1} e_1
  double gn = 0.0;  ///< -e_n^T A^{-1} e_n
  double condition = 1.0;
  bool near_singular = false;
};

/// Steady-state output responses; one transposed solve gives all three.
[[nodiscard]] inline StaticGains static_gains(const Matrix& a, const Vector& b0) {
  require_square(a, "A");
  const Eigen::Index n = a.rows();
  if (n == 0 || b0.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "b0 must match the dimension of A");
  }
  const LinearSolve lu(a);
  // w^T = e_n^T A^{-1}  <=>  A^T w = e_n
  const Vector w = lu.solve_transpose(basis(n, n - 1));
  StaticGains g;
  g.g0 = -w.dot(b0);
  g.g1 = -w(0);
  g.gn = -w(n - 1);
  g.condition = lu.condition();
  g.near_singular = lu.near_singular();
  return g;
}

struct SignPatternReport {
  bool passed = true;
  Vector column;   ///< S^T M^{-1} e_n
  Vector row;      ///< e_n^T M^{-1} S
  double corner = 0.0;  ///< e_n^T M^{-1} e_n
  std::vector<std::string> offending;
};

/**
 * Check the inverse sign pattern of a Metzler, output-unstable, nonsingular
 * matrix: S^T M^{-1} e_n >= 0, e_n^T M^{-1} S >= 0, e_n^T M^{-1} e_n > 0.
 */
[[nodiscard]] inline SignPatternReport inverse_sign_pattern(const Matrix& m, double tol = 1e-12) {
  const StabilityClass cls = classify(m);
  if (cls.tag != StabilityTag::MetzlerOutputUnstable) {
    throw Error(ErrorCode::PreconditionViolated,
                std::string("inverse sign pattern needs a Metzler output-unstable matrix, got ") +
                    to_string(cls.tag));
  }
  const Eigen::Index n = m.rows();
  const LinearSolve lu(m);
  const Vector col = lu.solve(basis(n, n - 1));
  const Vector row = lu.solve_transpose(basis(n, n - 1));
  SignPatternReport rep;
  rep.column = col.head(n - 1);
  rep.row = row.head(n - 1);
  rep.corner = col(n - 1);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (col(i) < -tol) {
      rep.passed = false;
      rep.offending.push_back("(M^-1)[" + std::to_string(i) + "," + std::to_string(n - 1) +
                              "] = " + std::to_string(col(i)));
    }
    if (row(i) < -tol) {
      rep.passed = false;
      rep.offending.push_back("(M^-1)[" + std::to_string(n - 1) + "," + std::to_string(i) +
                              "] = " + std::to_string(row(i)));
    }
  }
  if (!(rep.corner > tol)) {
    rep.passed = false;
    rep.offending.push_back("(M^-1)[n,n] = " + std::to_string(rep.corner));
  }
  return rep;
}

struct DiagonalLyapunov {
  Vector diagonal;              ///< positive diagonal of D
  double max_eigenvalue = 0.0;  ///< of (M^T D + D M) / 2
  bool fallback_used = false;
  int trials = 0;
};

[[nodiscard]] inline double lyapunov_margin(const Matrix& m, const Vector& d) {
  const Matrix sym = 0.5 * (m.transpose() * d.asDiagonal() + d.asDiagonal() * m);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

/**
 * Positive diagonal D with M^T D + D M negative definite, for M Metzler and
 * Hurwitz. Primary construction: xi = -M^{-1} 1, zeta = -M^{-T} 1,
 * D = diag(zeta_i / xi_i). Falls back to a seeded random search.
 */
[[nodiscard]] inline DiagonalLyapunov diagonal_lyapunov(const Matrix& m, int max_trials = 2000,
                                                        std::uint64_t seed = 0x5eed) {
  const StabilityClass cls = classify(m);
  if (cls.tag == StabilityTag::NonMetzler) {
    throw Error(ErrorCode::NonMetzler, "diagonal Lyapunov construction needs a Metzler matrix");
  }
  if (cls.tag != StabilityTag::MetzlerHurwitz) {
    throw Error(ErrorCode::NotHurwitz, "diagonal Lyapunov construction needs a Hurwitz matrix");
  }
  const Eigen::Index n = m.rows();
  DiagonalLyapunov out;
  const LinearSolve lu(m);
  const Vector ones = Vector::Ones(n);
  const Vector xi = -lu.solve(ones);
  const Vector zeta = -lu.solve_transpose(ones);
  if ((xi.array() > 0.0).all() && (zeta.array() > 0.0).all()) {
    out.diagonal = zeta.cwiseQuotient(xi);
    out.max_eigenvalue = lyapunov_margin(m, out.diagonal);
    if (out.max_eigenvalue < 0.0) return out;
  }

  out.fallback_used = true;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
  for (out.trials = 1; out.trials <= max_trials; ++out.trials) {
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = std::pow(10.0, log_scale(rng));
    const double margin = lyapunov_margin(m, d);
    if (margin < 0.0) {
      out.diagonal = d;
      out.max_eigenvalue = margin;
      return out;
    }
  }
  throw Error(ErrorCode::NoCertificateFound, "no diagonal Lyapunov matrix found after " +
                                                 std::to_string(max_trials) + " trials");
}

}  // namespace reinstab
