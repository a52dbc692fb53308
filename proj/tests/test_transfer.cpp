#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "reinstab/transfer.hpp"

namespace rs = reinstab;
using rs::Complex;
using rs::Matrix;
using rs::Poly;
using rs::PRTag;
using rs::TransferFunction;
using rs::Vector;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

TransferFunction tf(Poly num, Poly den, double gain = 1.0) {
  TransferFunction h;
  h.num = std::move(num);
  h.den = std::move(den);
  h.gain = gain;
  return h;
}

/// Coefficients of the monic normalized function, gain folded into num.
void expect_same_function(const TransferFunction& a, const TransferFunction& b, double tol = 1e-10) {
  for (double w : {0.0, 0.3, 1.0, 2.7, 10.0}) {
    const Complex s{0.1, w};
    const Complex va = a(s);
    const Complex vb = b(s);
    EXPECT_NEAR(std::abs(va - vb), 0.0, tol * (1.0 + std::abs(vb))) << "s = " << s;
  }
}

/// Direct resolvent evaluation c^T (sI - M)^{-1} b + d.
Complex resolvent(const Matrix& m, const Vector& b, const Vector& c, double d, Complex s) {
  const Eigen::Index n = m.rows();
  const Eigen::MatrixXcd si = s * Eigen::MatrixXcd::Identity(n, n) - m.cast<Complex>();
  const Eigen::VectorXcd x = si.partialPivLu().solve(b.cast<Complex>());
  return c.cast<Complex>().dot(x) + d;
}

std::vector<double> sorted_real(const std::vector<Complex>& zs) {
  std::vector<double> out;
  for (const Complex& z : zs) out.push_back(z.real());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(TfFromStateSpace, SpecExamples) {
  const Matrix m1 = Matrix::Constant(1, 1, -1.0);
  const Vector one = Vector::Ones(1);
  expect_same_function(rs::tf_from_state_space(m1, one, one, 0.0), tf({1.0}, {1.0, 1.0}));
  expect_same_function(rs::tf_from_state_space(m1, one, one, 1.0), tf({2.0, 1.0}, {1.0, 1.0}));

  const Matrix m2 = mat2(-1, 0, 1, -2);
  const Vector e2 = rs::basis(2, 1);
  const TransferFunction h = rs::tf_from_state_space(m2, e2, e2, 0.0);
  // Unreduced form (s+1)/((s+1)(s+2)).
  EXPECT_EQ(rs::poly::degree(h.den), 2);
  const TransferFunction hn = h.normalized();
  EXPECT_NEAR(hn.den[0], 2.0, 1e-12);
  EXPECT_NEAR(hn.den[1], 3.0, 1e-12);
  EXPECT_NEAR(hn.num[0], 1.0, 1e-12);
  EXPECT_NEAR(hn.gain, 1.0, 1e-12);
}

TEST(TfFromStateSpace, MatchesResolventOnRandomSystems) {
  rs::testing::Gen g(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = g.integer(1, 7);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = g.uniform(-2.0, 2.0);
    Vector b(n), c(n);
    for (int i = 0; i < n; ++i) {
      b(i) = g.uniform(-1.0, 1.0);
      c(i) = g.uniform(-1.0, 1.0);
    }
    const double d = g.uniform(-1.0, 1.0);
    const TransferFunction h = rs::tf_from_state_space(m, b, c, d);
    for (int k = 0; k < 4; ++k) {
      const Complex s{g.uniform(3.0, 6.0), g.uniform(-5.0, 5.0)};
      const Complex want = resolvent(m, b, c, d, s);
      EXPECT_NEAR(std::abs(h(s) - want), 0.0, 1e-8 * (1.0 + std::abs(want)));
    }
  }
}

TEST(CharacteristicPolynomial, MatchesEigenvalues) {
  rs::testing::Gen g(22);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix m = g.metzler_hurwitz(1, 8);
    const Poly p = rs::characteristic_polynomial(m);
    const rs::ComplexVector ev = rs::eigenvalues(m);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      const Complex v = rs::poly::eval<Complex>(p, ev(i));
      double scale = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) scale += std::abs(p[k]) * std::pow(std::abs(ev(i)), double(k));
      EXPECT_LT(std::abs(v), 1e-9 * scale);
    }
  }
}

TEST(OutputTransfer, SpecExamples) {
  const TransferFunction h1 = rs::output_transfer(Matrix::Constant(1, 1, -3.0));
  expect_same_function(h1, tf({1.0}, {3.0, 1.0}));

  const TransferFunction h2 = rs::output_transfer(mat2(-2, 1, 1, -2));
  expect_same_function(h2, tf({2.0, 1.0}, {3.0, 4.0, 1.0}));

  const TransferFunction h3 = rs::output_transfer(mat2(-1, 0, 1, -2));
  const std::vector<Complex> num_roots = rs::poly::roots(h3.num);
  ASSERT_EQ(num_roots.size(), 1u);
  EXPECT_NEAR(num_roots[0].real(), -1.0, 1e-12);
}

TEST(TransmissionZeros, SpecExamples) {
  const auto z1 = rs::transmission_zeros(mat2(-2, 1, 1, -2));
  ASSERT_EQ(z1.size(), 1u);
  EXPECT_NEAR(z1[0].real(), -2.0, 1e-12);
  const auto z2 = rs::transmission_zeros(mat2(-1, 0, 1, 0.5));
  ASSERT_EQ(z2.size(), 1u);
  EXPECT_NEAR(z2[0].real(), -1.0, 1e-12);
  EXPECT_TRUE(rs::transmission_zeros(Matrix::Constant(1, 1, -1.0)).empty());
}

TEST(TransmissionZeros, MatchNumeratorRoots) {
  rs::testing::Gen g(23);
  for (int trial = 0; trial < 300; ++trial) {
    const Matrix m = g.metzler_hurwitz(2, 6);
    const std::vector<Complex> zeros = rs::transmission_zeros(m);
    for (const Complex& z : zeros) EXPECT_LT(z.real(), 0.0);
    const std::vector<Complex> roots = rs::poly::roots(rs::output_transfer(m).num);
    ASSERT_EQ(zeros.size(), roots.size());
    // Multiset match: every zero has a numerator root nearby and vice versa.
    std::vector<bool> used(roots.size(), false);
    for (const Complex& z : zeros) {
      std::size_t best = roots.size();
      double dist = 1e300;
      for (std::size_t k = 0; k < roots.size(); ++k) {
        if (!used[k] && std::abs(roots[k] - z) < dist) {
          dist = std::abs(roots[k] - z);
          best = k;
        }
      }
      ASSERT_LT(best, roots.size());
      used[best] = true;
      EXPECT_LT(dist, 1e-6 * (1.0 + std::abs(z))) << m;
    }
  }
}

TEST(ReOnAxis, SpecExamples) {
  const TransferFunction h = tf({1.0}, {1.0, 1.0});
  EXPECT_NEAR(rs::re_on_axis(h, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(rs::re_on_axis(h, 1.0), 0.5, 1e-15);
  try {
    (void)rs::re_on_axis(tf({1.0}, {0.0, 1.0}), 0.0);
    FAIL() << "expected EvaluationAtPole";
  } catch (const rs::Error& e) {
    EXPECT_EQ(e.code(), rs::ErrorCode::EvaluationAtPole);
  }
}

TEST(InfinityLimit, SpecExamples) {
  const TransferFunction h = tf({2.0, 1.0}, {3.0, 4.0, 1.0});
  EXPECT_NEAR(rs::infinity_limit(h), 2.0, 1e-12);
  const double w = 1e6;
  EXPECT_NEAR(w * w * rs::re_on_axis(h, w), 2.0, 2e-3);
  EXPECT_NEAR(rs::infinity_limit(tf({1.0}, {1.0, 1.0})), 1.0, 1e-15);
  try {
    (void)rs::infinity_limit(tf({1.0}, {1.0, 0.0, 1.0}));
    FAIL() << "expected RelativeDegreeNotOne";
  } catch (const rs::Error& e) {
    EXPECT_EQ(e.code(), rs::ErrorCode::RelativeDegreeNotOne);
  }
}

TEST(InfinityLimit, EqualsNegativeCornerForOutputTransfer) {
  rs::testing::Gen g(24);
  for (int trial = 0; trial < 300; ++trial) {
    const Matrix m = g.metzler_hurwitz(1, 8);
    const Eigen::Index n = m.rows();
    const double lim = rs::infinity_limit(rs::output_transfer(m));
    EXPECT_NEAR(lim, -m(n - 1, n - 1), 1e-8 * std::abs(m(n - 1, n - 1)));
  }
}

TEST(InfinityLimit, AgreesWithAxisEvaluation) {
  rs::testing::Gen g(25);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = g.integer(1, 5);
    std::vector<Complex> poles, zeros;
    for (int i = 0; i < n; ++i) poles.emplace_back(-g.uniform(0.1, 100.0), 0.0);
    for (int i = 0; i + 1 < n; ++i) zeros.emplace_back(-g.uniform(0.1, 100.0), 0.0);
    const TransferFunction h = tf(rs::poly::from_roots(zeros), rs::poly::from_roots(poles), g.uniform(0.5, 2.0));
    const double lim = rs::infinity_limit(h);
    double sum = 0.0;
    for (const Complex& z : zeros) sum += z.real();
    for (const Complex& p : poles) sum -= p.real();
    EXPECT_NEAR(lim, h.gain * sum, 1e-9 * std::max(1.0, std::abs(h.gain * sum)));
    const double w = 1e6;
    EXPECT_NEAR(w * w * rs::re_on_axis(h, w), lim, 1e-3 * std::max(1.0, std::abs(lim)));
  }
}

TEST(ClassifyPr, IntegratorIsPositiveReal) {
  const rs::PRClass c = rs::classify_pr(tf({2.5}, {0.0, 1.0}));
  EXPECT_EQ(c.tag, PRTag::PR);
  ASSERT_EQ(c.evidence.residues.size(), 1u);
  EXPECT_NEAR(c.evidence.residues[0].real(), 2.5, 1e-12);
  EXPECT_EQ(rs::classify_pr(tf({-1.0}, {0.0, 1.0})).tag, PRTag::NotPR);
  EXPECT_EQ(rs::classify_pr(tf({1.0}, {0.0, 0.0, 1.0})).tag, PRTag::NotPR);
}

TEST(ClassifyPr, OutputTransferIsSpr) {
  EXPECT_EQ(rs::classify_pr(rs::output_transfer(mat2(-2, 1, 1, -2))).tag, PRTag::SPR);
  // Independent grid sweep.
  const TransferFunction h = rs::output_transfer(mat2(-2, 1, 1, -2));
  for (int k = -60; k <= 60; ++k) EXPECT_GT(rs::re_on_axis(h, std::pow(10.0, k / 10.0)), 0.0);
}

TEST(ClassifyPr, ControllerFilterIsPositiveReal) {
  const double mu = 1.7, u = 0.6, eta = 2.0;
  const TransferFunction g = tf({0.0, mu}, {eta * u * u, u});
  const rs::PRClass c = rs::classify_pr(g);
  EXPECT_EQ(c.tag, PRTag::PR);
  EXPECT_NEAR(c.evidence.h_infinity, mu / u, 1e-12);
  for (double w : {0.1, 1.0, 10.0}) {
    EXPECT_NEAR(rs::re_on_axis(g, w), mu * w * w / (u * (w * w + eta * eta * u * u)), 1e-12);
  }
}

TEST(ClassifyPr, StrongSprReportsDelta) {
  // (s + 2)/(s + 1): Re ranges from 2 at w = 0 down to 1 at infinity.
  const rs::PRClass c = rs::classify_pr(tf({2.0, 1.0}, {1.0, 1.0}));
  EXPECT_EQ(c.tag, PRTag::StrongSPR);
  EXPECT_NEAR(c.evidence.delta, 1.0, 1e-9);
}

TEST(ClassifyPr, NegativeRealPartDetected) {
  // (s - 1)/((s + 1)(s + 2)): Re at w = 0 is -1/2.
  EXPECT_EQ(rs::classify_pr(tf({-1.0, 1.0}, {2.0, 3.0, 1.0})).tag, PRTag::NotPR);
  // Relative degree two: Re negative at high frequency.
  EXPECT_EQ(rs::classify_pr(tf({1.0}, {1.0, 2.0, 1.0})).tag, PRTag::NotPR);
  // Unstable pole.
  EXPECT_EQ(rs::classify_pr(tf({1.0}, {-1.0, 1.0})).tag, PRTag::NotPR);
}

TEST(ClassifyPr, ImproperThrows) {
  try {
    (void)rs::classify_pr(tf({0.0, 0.0, 1.0}, {1.0, 1.0}));
    FAIL() << "expected ImproperTransfer";
  } catch (const rs::Error& e) {
    EXPECT_EQ(e.code(), rs::ErrorCode::ImproperTransfer);
  }
}

TEST(ClassifyPr, CancelsCommonRoots) {
  const rs::PRClass c = rs::classify_pr(rs::output_transfer(mat2(-1, 0, 1, -2)));
  EXPECT_EQ(c.evidence.cancelled.size(), 1u);
  EXPECT_EQ(rs::poly::degree(c.evidence.reduced.den), 1);
  EXPECT_EQ(c.tag, PRTag::SPR);
}

TEST(ClassifyPrProperty, MetzlerHurwitzOutputTransferIsSpr) {
  rs::testing::Gen g(26);
  for (int trial = 0; trial < 500; ++trial) {
    const Matrix m = g.metzler_hurwitz(2, 8);
    const rs::PRClass c = rs::classify_pr(rs::output_transfer(m));
    EXPECT_EQ(c.tag, PRTag::SPR) << m;
  }
}

TEST(ClassifyPrProperty, PositiveScalingPreservesTag) {
  rs::testing::Gen g(27);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = g.integer(1, 4);
    std::vector<Complex> poles, zeros;
    for (int i = 0; i < n; ++i) poles.emplace_back(-g.uniform(0.1, 5.0), 0.0);
    const int nz = g.integer(0, n);
    for (int i = 0; i < nz; ++i) zeros.emplace_back(g.uniform(-5.0, 1.0), 0.0);
    const TransferFunction h = tf(rs::poly::from_roots(zeros), rs::poly::from_roots(poles));
    TransferFunction scaled = h;
    scaled.gain *= g.log_uniform(1e-2, 1e2);
    EXPECT_EQ(rs::classify_pr(h).tag, rs::classify_pr(scaled).tag);
  }
}

TEST(ClassifyPrProperty, GridNegativeImpliesPolynomialNegative) {
  rs::testing::Gen g(28);
  int negatives = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = g.integer(1, 5);
    std::vector<Complex> poles;
    for (int i = 0; i < n; ++i) {
      if (i + 1 < n && g.coin(0.3)) {
        const double re = -g.uniform(0.05, 5.0), im = g.uniform(0.1, 5.0);
        poles.emplace_back(re, im);
        poles.emplace_back(re, -im);
        ++i;
      } else {
        poles.emplace_back(-g.uniform(0.05, 5.0), 0.0);
      }
    }
    Poly num(static_cast<std::size_t>(g.integer(1, n + 1)));
    for (double& c : num) c = g.uniform(-1.0, 2.0);
    const TransferFunction h = tf(num, rs::poly::from_roots(poles));
    bool grid_negative = false;
    for (int k = 0; k < 4096 && !grid_negative; ++k) {
      const double w = std::pow(10.0, -6.0 + 12.0 * k / 4095.0);
      grid_negative = rs::re_on_axis(h, w) < -1e-9;
    }
    const rs::PRClass c = rs::classify_pr(h);
    if (grid_negative) {
      ++negatives;
      EXPECT_FALSE(c.evidence.re_nonnegative) << rs::to_json(h).dump();
    }
  }
  EXPECT_GT(negatives, 50);
}

TEST(LoopTransfer, ScalarClosedForm) {
  rs::LinearNetwork net{Matrix::Constant(1, 1, -1.0), Vector::Constant(1, 2.0)};
  rs::PType c;
  c.eta = 3.0;
  const rs::LoopTransfer lt = rs::loop_transfer(net.a, net.b0, c);
  EXPECT_NEAR(lt.u_star, 1.0, 1e-12);
  EXPECT_NEAR(lt.a_bar(0, 0), -2.0, 1e-12);
  for (double w : {0.0, 0.5, 2.0, 20.0}) {
    const Complex s{0.2, w};
    const Complex want = 1.0 / (s + 2.0) + s / (s + c.eta);
    EXPECT_NEAR(std::abs(lt.g_eta(s) - want), 0.0, 1e-12);
  }
  EXPECT_EQ(rs::classify_pr(lt.g_eta).tag, PRTag::StrongSPR);
}

TEST(LoopTransfer, EndpointValues) {
  rs::testing::Gen g(29);
  for (int trial = 0; trial < 100; ++trial) {
    const rs::testing::PTypeInstance inst = rs::testing::stable_ptype_instance(g);
    const rs::LoopTransfer lt = rs::loop_transfer(inst.net.a, inst.net.b0, inst.ctrl);
    const double r = inst.ctrl.set_point();
    const double hn0 = lt.h_n(Complex{0.0, 0.0}).real();
    EXPECT_NEAR(lt.g_eta(Complex{0.0, 0.0}).real(), inst.ctrl.theta * r * hn0, 1e-9 * (1.0 + inst.ctrl.mu * hn0));
    EXPECT_GT(hn0, 0.0);
    const rs::PRClass c = rs::classify_pr(lt.g_eta);
    EXPECT_NEAR(c.evidence.h_infinity, inst.ctrl.mu / lt.u_star, 1e-8 * inst.ctrl.mu / lt.u_star);
    EXPECT_TRUE(c.tag == PRTag::SPR || c.tag == PRTag::StrongSPR);
  }
}

TEST(LoopTransfer, InadmissibleSetPoint) {
  const rs::LinearNetwork net = rs::testing::cascade();
  rs::PType c;
  c.theta = 1.0 / 3.0;  // r = 3 > g0 = 2
  try {
    (void)rs::loop_transfer(net.a, net.b0, c);
    FAIL() << "expected InadmissibleSetPoint";
  } catch (const rs::Error& e) {
    EXPECT_EQ(e.code(), rs::ErrorCode::InadmissibleSetPoint);
  }
}

TEST(WsprLmi, SpecExamples) {
  const Vector e2 = rs::basis(2, 1);
  const rs::LmiReport r1 = rs::wspr_lmi_check(-Matrix::Identity(2, 2), e2, e2);
  EXPECT_TRUE(r1.feasible);
  EXPECT_TRUE(r1.p.isApprox(Matrix::Identity(2, 2), 1e-12));
  EXPECT_NEAR(r1.epsilon, 1.0, 1e-9);
  EXPECT_LT(r1.max_eigenvalue, 0.0);

  const rs::LmiReport r2 = rs::wspr_lmi_check(mat2(-2, 1, 1, -2), e2, e2);
  EXPECT_TRUE(r2.feasible);
  EXPECT_LT(r2.equality_residual, 1e-10);
  EXPECT_GT(r2.epsilon, 0.0);

  EXPECT_THROW((void)rs::wspr_lmi_check(mat2(-1, 2, 2, -1), e2, e2), rs::Error);
}

TEST(WsprLmiProperty, MetzlerHurwitzAlwaysFeasible) {
  rs::testing::Gen g(30);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix m = g.metzler_hurwitz(1, 8);
    const Vector en = rs::basis(m.rows(), m.rows() - 1);
    const rs::LmiReport rep = rs::wspr_lmi_check(m, en, en);
    EXPECT_TRUE(rep.feasible);
    EXPECT_LT(rep.equality_residual, 1e-10);
  }
}

TEST(TransferJson, RoundTrip) {
  const TransferFunction h = tf({2.0, 1.0}, {3.0, 4.0, 1.0}, 0.5);
  const TransferFunction back = rs::transfer_from_json(rs::to_json(h));
  EXPECT_EQ(back.num, h.num);
  EXPECT_EQ(back.den, h.den);
  EXPECT_EQ(back.gain, h.gain);
}
