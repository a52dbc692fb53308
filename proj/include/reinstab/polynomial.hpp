#pragma once

// Dense real polynomials stored as ascending coefficient lists:
// p(s) = c[0] + c[1] s + ... + c[d] s^d.

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace reinstab::poly {

using Poly = std::vector<double>;
using Complex = std::complex<double>;

/// Drops trailing (leading-degree) coefficients that are exactly zero.
[[nodiscard]] inline Poly trim(Poly p) {
  while (p.size() > 1 && p.back() == 0.0) p.pop_back();
  if (p.empty()) p.push_back(0.0);
  return p;
}

[[nodiscard]] inline bool is_zero(const Poly& p) {
  return std::all_of(p.begin(), p.end(), [](double c) { return c == 0.0; });
}

/// Degree; -1 for the zero polynomial.
[[nodiscard]] inline int degree(const Poly& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) {
    if (p[static_cast<std::size_t>(i)] != 0.0) return i;
  }
  return -1;
}

[[nodiscard]] inline double leading(const Poly& p) {
  const int d = degree(p);
  return d < 0 ? 0.0 : p[static_cast<std::size_t>(d)];
}

template <typename T>
[[nodiscard]] T eval(const Poly& p, T s) {
  T acc{0.0};
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * s + T{*it};
  return acc;
}

[[nodiscard]] inline Poly add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return trim(std::move(out));
}

[[nodiscard]] inline Poly scale(Poly p, double k) {
  for (double& c : p) c *= k;
  return trim(std::move(p));
}

[[nodiscard]] inline Poly multiply(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {0.0};
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return trim(std::move(out));
}

[[nodiscard]] inline Poly derivative(const Poly& p) {
  if (p.size() <= 1) return {0.0};
  Poly out(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = static_cast<double>(i) * p[i];
  return trim(std::move(out));
}

/// p(-s).
[[nodiscard]] inline Poly reflect(Poly p) {
  for (std::size_t i = 1; i < p.size(); i += 2) p[i] = -p[i];
  return p;
}

/// Even part of p evaluated on the imaginary axis, as a polynomial in
/// x = w^2: Re p(j w) = sum_m (-1)^m p[2m] x^m.
[[nodiscard]] inline Poly even_part_on_axis(const Poly& p) {
  Poly q;
  for (std::size_t k = 0; k < p.size(); k += 2) {
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    q.push_back(sign * p[k]);
  }
  return trim(std::move(q));
}

/// Quotient and remainder of a / b.
[[nodiscard]] inline std::pair<Poly, Poly> divide(const Poly& a, const Poly& b) {
  const int db = degree(b);
  Poly r = trim(a);
  const int da = degree(r);
  if (db < 0) return {{0.0}, r};
  if (da < db) return {{0.0}, r};
  Poly q(static_cast<std::size_t>(da - db + 1), 0.0);
  const double lead = b[static_cast<std::size_t>(db)];
  for (int k = da - db; k >= 0; --k) {
    const double c = r[static_cast<std::size_t>(k + db)] / lead;
    q[static_cast<std::size_t>(k)] = c;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(k + j)] -= c * b[static_cast<std::size_t>(j)];
    r[static_cast<std::size_t>(k + db)] = 0.0;
  }
  r.resize(static_cast<std::size_t>(std::max(db, 1)));
  return {trim(std::move(q)), trim(std::move(r))};
}

/// Synthetic division of p by (s - root) over the complex numbers; the
/// remainder p(root) is discarded.
[[nodiscard]] inline std::vector<Complex> deflate(const Poly& p, Complex root) {
  const int d = degree(p);
  if (d <= 0) return {Complex{0.0}};
  std::vector<Complex> q(static_cast<std::size_t>(d));
  Complex carry = p[static_cast<std::size_t>(d)];
  for (int k = d - 1; k >= 0; --k) {
    q[static_cast<std::size_t>(k)] = carry;
    carry = carry * root + p[static_cast<std::size_t>(k)];
  }
  return q;
}

[[nodiscard]] inline Complex eval(const std::vector<Complex>& p, Complex s) {
  Complex acc{0.0};
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * s + *it;
  return acc;
}

/// Roots from the eigenvalues of the companion matrix, each polished by a
/// few Newton steps on p.
[[nodiscard]] inline std::vector<Complex> roots(const Poly& p) {
  const int d = degree(p);
  if (d <= 0) return {};
  // Zero roots are split off exactly so the companion matrix stays regular.
  int zeros = 0;
  while (zeros < d && p[static_cast<std::size_t>(zeros)] == 0.0) ++zeros;
  std::vector<Complex> out(static_cast<std::size_t>(zeros), Complex{0.0});
  const int m = d - zeros;
  if (m == 0) return out;
  const double lead = p[static_cast<std::size_t>(d)];
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) comp(i, m - 1) = -p[static_cast<std::size_t>(i + zeros)] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  const Poly dp = derivative(p);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    Complex z = es.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      const Complex f = eval<Complex>(p, z);
      const Complex g = eval<Complex>(dp, z);
      if (std::abs(g) == 0.0) break;
      const Complex step = f / g;
      const Complex next = z - step;
      if (!(std::abs(eval<Complex>(p, next)) < std::abs(f))) break;
      z = next;
    }
    // Real polynomials have conjugate-symmetric roots; snap tiny imaginary parts.
    if (std::abs(z.imag()) <= 1e-12 * (1.0 + std::abs(z.real()))) z = {z.real(), 0.0};
    out.push_back(z);
  }
  return out;
}

/// Real nonnegative roots (imaginary part below a relative tolerance), sorted.
[[nodiscard]] inline std::vector<double> nonnegative_real_roots(const Poly& p, double imag_tol = 1e-7) {
  std::vector<double> out;
  for (const Complex& z : roots(p)) {
    if (std::abs(z.imag()) <= imag_tol * (1.0 + std::abs(z.real())) && z.real() >= 0.0) {
      out.push_back(z.real());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Monic real polynomial with the given conjugate-closed roots.
[[nodiscard]] inline Poly from_roots(const std::vector<Complex>& rs) {
  std::vector<Complex> acc{Complex{1.0}};
  for (const Complex& z : rs) {
    std::vector<Complex> next(acc.size() + 1, Complex{0.0});
    for (std::size_t i = 0; i < acc.size(); ++i) {
      next[i + 1] += acc[i];
      next[i] -= z * acc[i];
    }
    acc = std::move(next);
  }
  Poly out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = acc[i].real();
  return out;
}

}  // namespace reinstab::poly
