#pragma once

/**
 * SISO rational transfer functions and their positive-realness hierarchy
 * (PR, WSPR, SPR, strong SPR).
 *
 * H(s) = gain * num(s) / den(s), coefficients ascending. Sign conditions on
 * the imaginary axis are decided from the even polynomial
 *
 *     q(x) = Re[ N(j w) D(-j w) ],   x = w^2,
 *
 * whose minimum over [0, inf) sits at x = 0, at a real critical point of q,
 * or at infinity. No frequency grid is involved.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "reinstab/controllers.hpp"
#include "reinstab/errors.hpp"
#include "reinstab/matrixlab.hpp"
#include "reinstab/polynomial.hpp"

namespace reinstab {

using poly::Complex;
using poly::Poly;

struct TransferFunction {
  Poly num{1.0};
  Poly den{1.0};
  double gain = 1.0;

  [[nodiscard]] int relative_degree() const { return poly::degree(den) - poly::degree(num); }

  [[nodiscard]] Complex operator()(Complex s) const {
    return gain * poly::eval<Complex>(num, s) / poly::eval<Complex>(den, s);
  }

  /// Monic numerator and denominator, leading ratio folded into the gain.
  [[nodiscard]] TransferFunction normalized() const {
    TransferFunction out;
    const Poly d = poly::trim(den);
    const Poly nn = poly::trim(num);
    const double ld = poly::leading(d);
    if (ld == 0.0) throw Error(ErrorCode::ImproperTransfer, "denominator is identically zero");
    out.den = poly::scale(d, 1.0 / ld);
    const double ln = poly::leading(nn);
    if (ln == 0.0) {
      out.num = {1.0};
      out.gain = 0.0;
    } else {
      out.num = poly::scale(nn, 1.0 / ln);
      out.gain = gain * ln / ld;
    }
    return out;
  }
};

[[nodiscard]] inline nlohmann::json to_json(const TransferFunction& h) {
  return {{"num", h.num}, {"den", h.den}, {"gain", h.gain}};
}

[[nodiscard]] inline TransferFunction transfer_from_json(const nlohmann::json& j) {
  TransferFunction h;
  h.num = j.at("num").get<Poly>();
  h.den = j.at("den").get<Poly>();
  h.gain = j.at("gain").get<double>();
  return h;
}

/// Characteristic polynomial det(sI - M), monic, via Faddeev-LeVerrier.
[[nodiscard]] inline Poly characteristic_polynomial(const Matrix& m) {
  require_square(m);
  const Eigen::Index n = m.rows();
  Poly c(static_cast<std::size_t>(n + 1), 0.0);
  c[static_cast<std::size_t>(n)] = 1.0;
  Matrix mk = Matrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = m * mk + c[static_cast<std::size_t>(n - k + 1)] * Matrix::Identity(n, n);
    c[static_cast<std::size_t>(n - k)] = -(m * mk).trace() / static_cast<double>(k);
  }
  return c;
}

/**
 * c^T (sI - M)^{-1} b + d. The Faddeev-LeVerrier recursion yields both the
 * characteristic polynomial and adj(sI - M) = sum_k M_k s^{n-k}.
 */
[[nodiscard]] inline TransferFunction tf_from_state_space(const Matrix& m, const Vector& b, const Vector& c,
                                                          double d = 0.0) {
  require_square(m);
  const Eigen::Index n = m.rows();
  if (b.size() != n || c.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "b and c must match the state dimension");
  }
  Poly den(static_cast<std::size_t>(n + 1), 0.0);
  Poly num(static_cast<std::size_t>(n + 1), 0.0);
  den[static_cast<std::size_t>(n)] = 1.0;
  Matrix mk = Matrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = m * mk + den[static_cast<std::size_t>(n - k + 1)] * Matrix::Identity(n, n);
    num[static_cast<std::size_t>(n - k)] = c.dot(mk * b);
    den[static_cast<std::size_t>(n - k)] = -(m * mk).trace() / static_cast<double>(k);
  }
  for (std::size_t i = 0; i < num.size(); ++i) num[i] += d * den[i];
  TransferFunction h;
  h.den = den;
  h.num = poly::trim(num);
  h.gain = 1.0;
  return h;
}

/// H(s) = e_n^T (sI - M)^{-1} e_n, unreduced.
[[nodiscard]] inline TransferFunction output_transfer(const Matrix& m) {
  require_square(m);
  const Eigen::Index n = m.rows();
  const Vector en = basis(n, n - 1);
  return tf_from_state_space(m, en, en, 0.0);
}

/// Zeros of e_n^T (sI - M)^{-1} e_n: the spectrum of the leading block.
[[nodiscard]] inline std::vector<Complex> transmission_zeros(const Matrix& m) {
  const ComplexVector ev = eigenvalues(leading_block(m));
  return {ev.data(), ev.data() + ev.size()};
}

/// Re H(j w).
[[nodiscard]] inline double re_on_axis(const TransferFunction& h, double omega) {
  const Complex jw{0.0, omega};
  const Complex d = poly::eval<Complex>(h.den, jw);
  double scale = 0.0;
  double wp = 1.0;
  for (double c : h.den) {
    scale += std::abs(c) * wp;
    wp *= std::abs(omega);
  }
  if (std::abs(d) <= 1e-14 * std::max(scale, 1e-300)) {
    throw Error(ErrorCode::EvaluationAtPole, "H has a pole at s = j" + std::to_string(omega));
  }
  const Complex n = poly::eval<Complex>(h.num, jw);
  return h.gain * (n * std::conj(d)).real() / std::norm(d);
}

/**
 * lim_{w->inf} w^2 Re H(j w) for relative degree one, from the leading
 * coefficients: K (N_{n-1} D_{n-1} - N_{n-2} D_n) with monic N, D.
 */
[[nodiscard]] inline double infinity_limit(const TransferFunction& h) {
  if (h.relative_degree() != 1) {
    throw Error(ErrorCode::RelativeDegreeNotOne,
                "relative degree is " + std::to_string(h.relative_degree()) + ", expected 1");
  }
  const TransferFunction t = h.normalized();
  const int n = poly::degree(t.den);
  const double d_nm1 = t.den[static_cast<std::size_t>(n - 1)];
  const double n_nm2 = (n >= 2) ? t.num[static_cast<std::size_t>(n - 2)] : 0.0;
  return t.gain * (d_nm1 - n_nm2);
}

enum class PRTag { NotPR, PR, WSPR, SPR, StrongSPR };

constexpr const char* to_string(PRTag t) noexcept {
  switch (t) {
    case PRTag::NotPR: return "NotPR";
    case PRTag::PR: return "PR";
    case PRTag::WSPR: return "WSPR";
    case PRTag::SPR: return "SPR";
    case PRTag::StrongSPR: return "StrongSPR";
  }
  return "Unknown";
}

struct PREvidence {
  TransferFunction reduced;            ///< after pole/zero cancellation
  std::vector<Complex> cancelled;      ///< cancelled common roots
  std::vector<Complex> poles;
  double max_pole_real = -std::numeric_limits<double>::infinity();
  bool poles_closed_lhp = false;       ///< PR (a)
  bool poles_open_lhp = false;         ///< WSPR (a)
  bool imaginary_poles_ok = true;      ///< PR (c): simple, nonnegative residue
  std::vector<Complex> imaginary_poles;
  std::vector<Complex> residues;
  Poly q;                              ///< Re[N(jw)D(-jw)] in x = w^2, gain folded in
  std::vector<double> q_nonnegative_roots;
  double q_min = 0.0;                  ///< min of q over the candidate points
  double q_min_omega = 0.0;            ///< witness frequency (inf if at infinity)
  bool re_nonnegative = false;         ///< PR (b)
  bool re_positive = false;            ///< WSPR (b)
  double h_infinity = 0.0;             ///< H(inf)
  double tail_limit = 0.0;             ///< lim w^2 Re H(jw)
  bool tail_ok = false;                ///< SPR (b)
  double delta = 0.0;                  ///< inf of Re H over [0, inf]
  double delta_omega = 0.0;
};

struct PRClass {
  PRTag tag = PRTag::NotPR;
  PREvidence evidence;
};

namespace detail {

/// Scale of the terms of q at x, used to make sign decisions relative.
inline double term_scale(const Poly& q, double x) {
  double s = 0.0;
  double xp = 1.0;
  for (double c : q) {
    s += std::abs(c) * xp;
    xp *= x;
  }
  return s;
}

inline constexpr double kCancelTolerance = 1e-8;
inline constexpr double kSignTolerance = 1e-10;

/// Remove common roots of num and den closer than kCancelTolerance.
inline TransferFunction cancel_common_roots(const TransferFunction& h, std::vector<Complex>& cancelled) {
  TransferFunction t = h;
  std::vector<Complex> zs = poly::roots(t.num);
  std::vector<Complex> ps = poly::roots(t.den);
  std::vector<bool> used(ps.size(), false);
  for (const Complex& z : zs) {
    if (z.imag() < 0.0) continue;  // handled with its conjugate
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (used[i] || ps[i].imag() < 0.0 || std::abs(z - ps[i]) >= kCancelTolerance) continue;
      used[i] = true;
      const Complex c = 0.5 * (z + ps[i]);
      Poly factor;
      if (c.imag() == 0.0 && z.imag() == 0.0 && ps[i].imag() == 0.0) {
        factor = {-c.real(), 1.0};
      } else {
        factor = {std::norm(c), -2.0 * c.real(), 1.0};
      }
      t.num = poly::divide(t.num, factor).first;
      t.den = poly::divide(t.den, factor).first;
      cancelled.push_back(c);
      if (factor.size() == 3) cancelled.push_back(std::conj(c));
      break;
    }
  }
  return t;
}

}  // namespace detail

/**
 * Positive-realness classification.
 *
 * Poles come from companion-matrix roots; sign conditions on the axis come
 * from q(x) evaluated at x = 0, at its nonnegative critical points and at its
 * nonnegative roots, plus the behavior as x -> inf. Residues at imaginary
 * poles use synthetic division. delta is the infimum of Re H over [0, inf],
 * taken over the critical points of q(x) / |D(j sqrt x)|^2.
 */
[[nodiscard]] inline PRClass classify_pr(const TransferFunction& h) {
  if (h.relative_degree() < 0) throw Error(ErrorCode::ImproperTransfer, "deg(num) > deg(den)");
  PRClass out;
  PREvidence& ev = out.evidence;

  TransferFunction t = h.normalized();
  if (t.gain != 0.0) t = detail::cancel_common_roots(t, ev.cancelled).normalized();
  ev.reduced = t;

  const Poly n_k = poly::scale(t.num, t.gain);
  const Poly& d = t.den;

  // (a) poles
  ev.poles = poly::roots(d);
  ev.poles_closed_lhp = true;
  ev.poles_open_lhp = true;
  for (const Complex& p : ev.poles) {
    ev.max_pole_real = std::max(ev.max_pole_real, p.real());
    const double axis_tol = kStabilityTolerance * (1.0 + std::abs(p));
    if (p.real() > axis_tol) ev.poles_closed_lhp = false;
    if (p.real() >= -axis_tol) {
      ev.poles_open_lhp = false;
      if (p.real() <= axis_tol && p.imag() >= 0.0) ev.imaginary_poles.push_back({0.0, p.imag()});
    }
  }

  // (c) imaginary-axis poles: simple with nonnegative real residue
  for (const Complex& p : ev.imaginary_poles) {
    int multiplicity = 0;
    for (const Complex& other : ev.poles) {
      if (std::abs(other - p) < 1e-6 * (1.0 + std::abs(p))) ++multiplicity;
    }
    const std::vector<Complex> dq = poly::deflate(d, p);
    const Complex res = poly::eval<Complex>(n_k, p) / poly::eval(dq, p);
    ev.residues.push_back(res);
    const double mag = std::abs(res);
    if (multiplicity > 1 || res.real() < -1e-9 * (1.0 + mag) || std::abs(res.imag()) > 1e-6 * (1.0 + mag)) {
      ev.imaginary_poles_ok = false;
    }
  }

  // (b) sign of Re H on the axis via q(x)
  ev.q = poly::even_part_on_axis(poly::multiply(n_k, poly::reflect(d)));
  ev.q_nonnegative_roots = poly::nonnegative_real_roots(ev.q);
  std::vector<double> candidates{0.0};
  for (double x : poly::nonnegative_real_roots(poly::derivative(ev.q))) candidates.push_back(x);
  for (double x : ev.q_nonnegative_roots) candidates.push_back(x);
  {
    // midpoints between consecutive roots catch sign changes at simple roots
    const auto& rs = ev.q_nonnegative_roots;
    for (std::size_t i = 0; i + 1 < rs.size(); ++i) candidates.push_back(0.5 * (rs[i] + rs[i + 1]));
    if (!rs.empty()) candidates.push_back(2.0 * rs.back() + 1.0);
  }
  ev.re_nonnegative = true;
  ev.re_positive = true;
  ev.q_min = std::numeric_limits<double>::infinity();
  for (double x : candidates) {
    const double v = poly::eval(ev.q, x);
    const double sc = detail::term_scale(ev.q, x);
    if (v < ev.q_min) {
      ev.q_min = v;
      ev.q_min_omega = std::sqrt(x);
    }
    if (v < -detail::kSignTolerance * sc) ev.re_nonnegative = false;
    if (!(v > detail::kSignTolerance * sc)) ev.re_positive = false;
  }
  const int dq = poly::degree(ev.q);
  if (dq >= 1 && poly::leading(ev.q) < 0.0) {
    ev.re_nonnegative = false;
    ev.re_positive = false;
    ev.q_min = -std::numeric_limits<double>::infinity();
    ev.q_min_omega = std::numeric_limits<double>::infinity();
  }
  if (dq < 0) ev.re_positive = false;  // Re H identically zero

  // Behavior at infinity
  const Poly dd = poly::even_part_on_axis(poly::multiply(d, poly::reflect(d)));  // |D(j sqrt x)|^2
  const int deg_dd = poly::degree(dd);
  ev.h_infinity = (t.relative_degree() == 0) ? t.gain : 0.0;
  if (dq < 0) {
    ev.tail_limit = 0.0;
  } else if (dq + 1 == deg_dd) {
    ev.tail_limit = poly::leading(ev.q) / poly::leading(dd);
  } else if (dq + 1 > deg_dd) {
    ev.tail_limit = poly::leading(ev.q) > 0 ? std::numeric_limits<double>::infinity()
                                            : -std::numeric_limits<double>::infinity();
  } else {
    ev.tail_limit = 0.0;
  }
  ev.tail_ok = ev.h_infinity > 0.0 || ev.tail_limit > 0.0;

  // Infimum of Re H over [0, inf]: critical points of q / dd plus endpoints.
  {
    const double at_inf = (dq == deg_dd && dq >= 0) ? poly::leading(ev.q) / poly::leading(dd) : 0.0;
    ev.delta = at_inf;
    ev.delta_omega = std::numeric_limits<double>::infinity();
    const Poly crit = poly::add(poly::multiply(poly::derivative(ev.q), dd),
                                poly::scale(poly::multiply(ev.q, poly::derivative(dd)), -1.0));
    std::vector<double> xs{0.0};
    for (double x : poly::nonnegative_real_roots(crit)) xs.push_back(x);
    for (double x : xs) {
      const double den_x = poly::eval(dd, x);
      if (!(den_x > 0.0)) continue;
      const double val = poly::eval(ev.q, x) / den_x;
      if (val < ev.delta) {
        ev.delta = val;
        ev.delta_omega = std::sqrt(x);
      }
    }
  }

  const bool pr = ev.poles_closed_lhp && ev.imaginary_poles_ok && ev.re_nonnegative;
  const bool wspr = ev.poles_open_lhp && ev.re_positive;
  if (wspr) {
    if (ev.delta > detail::kSignTolerance) {
      out.tag = PRTag::StrongSPR;
    } else if (ev.tail_ok) {
      out.tag = PRTag::SPR;
    } else {
      out.tag = PRTag::WSPR;
    }
  } else {
    out.tag = pr ? PRTag::PR : PRTag::NotPR;
  }
  return out;
}

[[nodiscard]] inline nlohmann::json to_json(const std::vector<Complex>& zs) {
  nlohmann::json out = nlohmann::json::array();
  for (const Complex& z : zs) out.push_back({z.real(), z.imag()});
  return out;
}

/// JSON-safe number: non-finite values become strings.
[[nodiscard]] inline nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

[[nodiscard]] inline nlohmann::json to_json(const PRClass& c) {
  const PREvidence& e = c.evidence;
  return {
      {"tag", to_string(c.tag)},
      {"reduced", to_json(e.reduced)},
      {"cancelled", to_json(e.cancelled)},
      {"poles", to_json(e.poles)},
      {"max_pole_real", json_number(e.max_pole_real)},
      {"conditions",
       {{"poles_closed_lhp", e.poles_closed_lhp},
        {"poles_open_lhp", e.poles_open_lhp},
        {"imaginary_poles_simple_nonneg_residue", e.imaginary_poles_ok},
        {"re_nonnegative", e.re_nonnegative},
        {"re_positive", e.re_positive},
        {"tail_ok", e.tail_ok}}},
      {"residues", to_json(e.residues)},
      {"q", e.q},
      {"q_nonnegative_roots", e.q_nonnegative_roots},
      {"q_min", json_number(e.q_min)},
      {"q_min_omega", json_number(e.q_min_omega)},
      {"h_infinity", json_number(e.h_infinity)},
      {"tail_limit", json_number(e.tail_limit)},
      {"delta", json_number(e.delta)},
      {"delta_omega", json_number(e.delta_omega)},
  };
}

/// Sum of two transfer functions over the common denominator.
[[nodiscard]] inline TransferFunction add(const TransferFunction& a, const TransferFunction& b) {
  TransferFunction out;
  out.num = poly::add(poly::scale(poly::multiply(a.num, b.den), a.gain),
                      poly::scale(poly::multiply(b.num, a.den), b.gain));
  out.den = poly::multiply(a.den, b.den);
  out.gain = 1.0;
  return out.normalized();
}

struct LoopTransfer {
  TransferFunction g_eta;   ///< theta r H_n(s) + G(s)
  TransferFunction h_n;     ///< e_n^T (sI - Abar)^{-1} e_n
  TransferFunction g;       ///< mu s / (u* (s + eta u*))
  double u_star = 0.0;
  Matrix a_bar;
};

/**
 * Loop transfer seen by the integrator k_p / s in the p-type closed loop:
 * G_eta(s) = theta r H_n(s) + mu s / (u* (s + eta u*)), with
 * u* = (g0 - r) / (gn r) and H_n built on Abar = A - e_n e_n^T u*.
 * theta r = mu; with theta = 1 this is r H_n(s) + G(s).
 */
[[nodiscard]] inline LoopTransfer loop_transfer(const Matrix& a, const Vector& b0, const PType& ctrl) {
  const StaticGains gains = static_gains(a, b0);
  const double r = ctrl.set_point();
  const double u_star = (gains.g0 - r) / (gains.gn * r);
  if (!(u_star > 0.0) || !std::isfinite(u_star)) {
    throw Error(ErrorCode::InadmissibleSetPoint,
                "u* = " + std::to_string(u_star) + " is not positive (g0 = " + std::to_string(gains.g0) + ")");
  }
  const Eigen::Index n = a.rows();
  LoopTransfer out;
  out.u_star = u_star;
  out.a_bar = a;
  out.a_bar(n - 1, n - 1) -= u_star;
  out.h_n = output_transfer(out.a_bar);
  out.g.num = {0.0, ctrl.mu};
  out.g.den = {ctrl.eta * u_star * u_star, u_star};
  out.g.gain = 1.0;
  TransferFunction scaled_h = out.h_n;
  scaled_h.gain *= ctrl.theta * r;
  out.g_eta = add(scaled_h, out.g);
  return out;
}

struct LmiReport {
  bool feasible = false;
  Matrix p;
  double equality_residual = 0.0;  ///< ||P b - c||
  double epsilon = 0.0;            ///< largest feasible eps found by bisection
  double max_eigenvalue = 0.0;     ///< of M^T P + P M + 2 eps c c^T at the reported eps
};

/**
 * One-sided check of the WSPR sufficient condition P b = c,
 * M^T P + P M + 2 eps c c^T < 0 with a diagonal P built from the diagonal
 * Lyapunov certificate of a Metzler-Hurwitz M. Throws NoCertificateFound if
 * the construction does not apply; that is not a proof of infeasibility.
 */
[[nodiscard]] inline LmiReport wspr_lmi_check(const Matrix& m, const Vector& b, const Vector& c) {
  const StabilityClass cls = classify(m);
  if (cls.tag == StabilityTag::NonMetzler) throw Error(ErrorCode::NonMetzler, "LMI construction needs a Metzler matrix");
  if (cls.tag != StabilityTag::MetzlerHurwitz) throw Error(ErrorCode::NotHurwitz, "LMI construction needs a Hurwitz matrix");
  const Eigen::Index n = m.rows();
  if (b.size() != n || c.size() != n) throw Error(ErrorCode::DimensionMismatch, "b and c must match M");

  const DiagonalLyapunov dl = diagonal_lyapunov(m);
  // Diagonal P with P b = c: each nonzero b_i pins p_i = c_i / b_i; the
  // Lyapunov diagonal is rescaled to agree with the pinned entries.
  double kappa = std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (b(i) == 0.0) {
      if (c(i) != 0.0) throw Error(ErrorCode::NoCertificateFound, "P b = c has no diagonal solution");
      continue;
    }
    const double want = c(i) / b(i);
    const double k = want / dl.diagonal(i);
    if (!(k > 0.0)) throw Error(ErrorCode::NoCertificateFound, "P b = c needs a nonpositive diagonal entry");
    if (std::isnan(kappa)) {
      kappa = k;
    } else if (std::abs(k - kappa) > 1e-10 * std::abs(kappa)) {
      throw Error(ErrorCode::NoCertificateFound, "diagonal Lyapunov scaling incompatible with P b = c");
    }
  }
  if (std::isnan(kappa)) throw Error(ErrorCode::NoCertificateFound, "b is zero");

  LmiReport rep;
  rep.p = (kappa * dl.diagonal).asDiagonal();
  rep.equality_residual = (rep.p * b - c).norm();
  const Matrix base = m.transpose() * rep.p + rep.p * m;
  const Matrix cc = c * c.transpose();
  auto margin = [&](double eps) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(base + 2.0 * eps * cc, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
  };
  if (!(margin(0.0) < 0.0) || rep.equality_residual > 1e-10) {
    throw Error(ErrorCode::NoCertificateFound, "diagonal construction does not satisfy the LMI");
  }
  double lo = 0.0;
  double hi = 1.0;
  while (margin(hi) < 0.0 && hi < 1e12) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 100 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (margin(mid) < 0.0 ? lo : hi) = mid;
  }
  // lo is feasible; with lo == 0 fall back to a strictly positive feasible eps
  if (lo == 0.0) {
    lo = hi;
    while (!(margin(lo) < 0.0) && lo > 1e-300) lo *= 0.5;
  }
  rep.epsilon = lo;
  rep.max_eigenvalue = margin(lo);
  rep.feasible = rep.epsilon > 0.0 && rep.max_eigenvalue < 0.0;
  if (!rep.feasible) throw Error(ErrorCode::NoCertificateFound, "no positive epsilon found");
  return rep;
}

}  // namespace reinstab
