#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "generators.hpp"
#include "reinstab/model.hpp"

namespace rs = reinstab;
using nlohmann::json;
using rs::Matrix;
using rs::Vector;

namespace {

const std::string kModels = REINSTAB_MODELS_DIR;

json example1_doc() { return rs::read_json_file(kModels + "/example1.json"); }

rs::ErrorCode load_error(const json& doc, std::string* path = nullptr) {
  try {
    (void)rs::model_from_json(doc);
  } catch (const rs::Error& e) {
    if (path) *path = e.path();
    return e.code();
  }
  ADD_FAILURE() << "document was accepted: " << doc.dump();
  return rs::ErrorCode::InvalidArgument;
}

/// Random catalog network: linear backbone plus Hill and mass-action terms.
rs::NonlinearNetwork random_network(rs::testing::Gen& g) {
  rs::NonlinearNetwork net;
  net.n = g.integer(1, 5);
  net.b0 = g.basal(net.n);
  for (int i = 0; i < net.n; ++i) {
    net.terms.push_back(rs::RateTerm::linear(i, i, -g.uniform(0.1, 2.0)));
    for (int j = 0; j < net.n; ++j) {
      if (i != j && g.coin(0.3)) net.terms.push_back(rs::RateTerm::linear(i, j, g.uniform(0.0, 1.0)));
    }
  }
  const int extra = g.integer(1, 4);
  for (int k = 0; k < extra; ++k) {
    const int target = g.integer(0, net.n - 1);
    const int src = g.integer(0, net.n - 1);
    switch (g.integer(0, 3)) {
      case 0: net.terms.push_back(rs::RateTerm::hill_repression(target, src, g.uniform(0.1, 2.0), g.uniform(1.0, 4.0))); break;
      case 1: net.terms.push_back(rs::RateTerm::hill_activation(target, src, g.uniform(0.1, 2.0), g.uniform(1.0, 4.0))); break;
      case 2: net.terms.push_back(rs::RateTerm::mass_action2(target, src, g.integer(0, net.n - 1), g.uniform(0.0, 1.0))); break;
      default: net.terms.push_back(rs::RateTerm::mass_action2(target, target, src, g.uniform(0.0, 1.0), -1)); break;
    }
  }
  return net;
}

}  // namespace

TEST(LoadModel, GeneExpressionFixture) {
  const rs::Model m = rs::model_from_json(example1_doc());
  ASSERT_TRUE(std::holds_alternative<rs::LinearNetwork>(m.plant));
  const auto& net = std::get<rs::LinearNetwork>(m.plant);
  EXPECT_EQ(net.dim(), 3);
  EXPECT_DOUBLE_EQ(net.a(0, 2), 0.5);
  ASSERT_TRUE(std::holds_alternative<rs::PType>(m.controller));
}

TEST(LoadModel, SelfRepressionFixture) {
  const rs::Model m = rs::load_model_file(kModels + "/feedback_nonlinear.json");
  ASSERT_TRUE(std::holds_alternative<rs::NonlinearNetwork>(m.plant));
  const auto& net = std::get<rs::NonlinearNetwork>(m.plant);
  int hill = 0;
  for (const rs::RateTerm& t : net.terms) hill += t.kind == rs::TermKind::HillRepression;
  EXPECT_EQ(hill, 1);
  EXPECT_EQ(net.terms[1].target, 0);
  EXPECT_EQ(net.terms[1].source, 1);
}

TEST(LoadModel, AllFixturesLoad) {
  for (const char* f : {"example1", "example2", "airc_example", "exponential_example", "logistic_example",
                        "feedback_nonlinear"}) {
    EXPECT_NO_THROW((void)rs::load_model_file(kModels + "/" + f + ".json")) << f;
  }
}

TEST(LoadModel, NegativeOffDiagonalIsNonMetzler) {
  json doc = example1_doc();
  doc["A"][0][1] = -0.1;
  std::string path;
  EXPECT_EQ(load_error(doc, &path), rs::ErrorCode::NonMetzler);
  EXPECT_EQ(path, "/A/0/1");
}

TEST(LoadModel, DistinctErrorCodes) {
  json neg_b0 = example1_doc();
  neg_b0["b0"][2] = -1.0;
  std::string path;
  EXPECT_EQ(load_error(neg_b0, &path), rs::ErrorCode::NegativeBasal);
  EXPECT_EQ(path, "/b0/2");

  json zero_kp = example1_doc();
  zero_kp["controller"]["kp"] = 0.0;
  EXPECT_EQ(load_error(zero_kp, &path), rs::ErrorCode::NonPositiveParameter);
  EXPECT_EQ(path, "/controller/kp");

  json unknown = example1_doc();
  unknown["extra"] = 1;
  EXPECT_EQ(load_error(unknown), rs::ErrorCode::SchemaViolation);

  json unknown_ctrl = example1_doc();
  unknown_ctrl["controller"]["ki"] = 1.0;
  EXPECT_EQ(load_error(unknown_ctrl, &path), rs::ErrorCode::SchemaViolation);

  json bad_dim = example1_doc();
  bad_dim["n"] = 2;
  EXPECT_EQ(load_error(bad_dim), rs::ErrorCode::DimensionMismatch);

  json bad_kind = example1_doc();
  bad_kind["controller"]["kind"] = "pid";
  EXPECT_EQ(load_error(bad_kind), rs::ErrorCode::SchemaViolation);

  try {
    (void)rs::load_model("{\"type\": ");
    FAIL() << "expected ParseError";
  } catch (const rs::Error& e) {
    EXPECT_EQ(e.code(), rs::ErrorCode::ParseError);
  }
}

TEST(LoadModel, TermValidation) {
  json doc = rs::read_json_file(kModels + "/feedback_nonlinear.json");
  json bad_index = doc;
  bad_index["terms"][0]["row"] = 3;
  EXPECT_EQ(load_error(bad_index), rs::ErrorCode::InvalidTerm);

  json pos_degradation = doc;
  pos_degradation["terms"][0]["coefficient"] = 1.0;
  EXPECT_EQ(load_error(pos_degradation), rs::ErrorCode::InvalidTerm);

  json low_exponent = doc;
  low_exponent["terms"][1]["exponent"] = 0.5;
  EXPECT_EQ(load_error(low_exponent), rs::ErrorCode::InvalidTerm);

  json consumption = doc;
  consumption["terms"].push_back({{"kind", "mass_action2"}, {"target", 1}, {"factors", {2, 2}}, {"coefficient", 1.0}, {"sign", -1}});
  EXPECT_EQ(load_error(consumption), rs::ErrorCode::InvalidTerm);

  json unknown_kind = doc;
  unknown_kind["terms"][0]["kind"] = "michaelis";
  EXPECT_EQ(load_error(unknown_kind), rs::ErrorCode::InvalidTerm);
}

TEST(Serialize, RoundTripsFixtures) {
  for (const char* f : {"example1", "example2", "airc_example", "exponential_example", "logistic_example",
                        "feedback_nonlinear"}) {
    const rs::Model m = rs::load_model_file(kModels + "/" + f + ".json");
    const json once = rs::serialize(m);
    const json twice = rs::serialize(rs::model_from_json(once));
    EXPECT_EQ(once, twice) << f;
  }
}

TEST(Serialize, RoundTripsRandomNetworks) {
  rs::testing::Gen g(41);
  for (int trial = 0; trial < 100; ++trial) {
    rs::Model m;
    m.plant = random_network(g);
    m.controller = rs::Logistic{g.uniform(0.1, 3.0), g.uniform(0.1, 3.0), g.uniform(0.1, 3.0)};
    const json doc = rs::serialize(m);
    EXPECT_EQ(rs::serialize(rs::model_from_json(doc)), doc);
  }
}

TEST(ApplyOverride, SetPointAndPointers) {
  json doc = example1_doc();
  rs::apply_override(doc, "r", 4.0);
  EXPECT_DOUBLE_EQ(doc["controller"]["theta"].get<double>(), 0.25);
  rs::apply_override(doc, "kp", 2.0);
  EXPECT_DOUBLE_EQ(doc["controller"]["kp"].get<double>(), 2.0);
  rs::apply_override(doc, "/A/0/2", 1.5);
  EXPECT_DOUBLE_EQ(doc["A"][0][2].get<double>(), 1.5);
  EXPECT_THROW(rs::apply_override(doc, "ki", 1.0), rs::Error);
  EXPECT_THROW(rs::apply_override(doc, "/A/9/9", 1.0), rs::Error);
}

TEST(Rate, SelfRepressionHandValue) {
  const rs::NonlinearNetwork net = rs::testing::self_repression();
  const Vector f = net.rate(Vector::Ones(2));
  EXPECT_NEAR(f(0), -0.5, 1e-15);
  EXPECT_NEAR(f(1), 0.0, 1e-15);
  Vector neg = Vector::Ones(2);
  neg(0) = -1e-6;
  try {
    (void)net.rate(neg);
    FAIL() << "expected NegativeState";
  } catch (const rs::Error& e) {
    EXPECT_EQ(e.code(), rs::ErrorCode::NegativeState);
  }
}

TEST(Rate, LinearOnlyNetworkIsMatrixProduct) {
  rs::testing::Gen g(42);
  for (int trial = 0; trial < 50; ++trial) {
    const rs::LinearNetwork lin{g.metzler_hurwitz(1, 6), Vector()};
    rs::LinearNetwork with_b0 = lin;
    with_b0.b0 = g.basal(static_cast<int>(lin.a.rows()));
    const rs::NonlinearNetwork net = rs::testing::as_nonlinear(with_b0);
    Vector x(lin.a.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = g.uniform(0.0, 3.0);
    EXPECT_LT((net.rate(x) - lin.a * x).norm(), 1e-12);
    EXPECT_TRUE(net.jacobian(x).isApprox(lin.a, 1e-14));
    EXPECT_TRUE(net.is_linear());
  }
}

TEST(Jacobian, SelfRepressionAtSetPoint) {
  const double gamma = 1.3, k = 0.7, alpha = 2.0, r = 1.5;
  const rs::NonlinearNetwork net = rs::testing::self_repression(gamma, k, alpha, 1.0);
  Vector x(2);
  x << 0.4, r;
  Matrix want(2, 2);
  want << -gamma, -alpha / ((1 + r) * (1 + r)), k, -gamma;
  EXPECT_TRUE(net.jacobian(x).isApprox(want, 1e-14));
}

TEST(Jacobian, HillDerivativeAtOne) {
  rs::NonlinearNetwork net;
  net.n = 2;
  net.b0 = Vector::Zero(2);
  const double alpha = 3.0;
  net.terms = {rs::RateTerm::hill_repression(0, 1, alpha, 1.0)};
  EXPECT_NEAR(net.jacobian(Vector::Ones(2))(0, 1), -alpha / 4.0, 1e-15);
}

TEST(JacobianProperty, MatchesCentralDifferences) {
  rs::testing::Gen g(43);
  for (int model = 0; model < 10; ++model) {
    const rs::NonlinearNetwork net = random_network(g);
    for (int trial = 0; trial < 1000; ++trial) {
      Vector x(net.n);
      for (int i = 0; i < net.n; ++i) x(i) = g.uniform(0.05, 5.0);
      const Matrix j = net.jacobian(x);
      for (int c = 0; c < net.n; ++c) {
        const double h = 1e-6 * (1.0 + std::abs(x(c)));
        Vector xp = x, xm = x;
        xp(c) += h;
        xm(c) -= h;
        const Vector col = (net.rate(xp) - net.rate(xm)) / (2.0 * h);
        for (int r = 0; r < net.n; ++r) {
          EXPECT_NEAR(j(r, c), col(r), 1e-5 * std::max(1.0, std::abs(col(r))));
        }
      }
    }
  }
}

TEST(PositivityProperty, BoundaryRatesAreNonnegative) {
  rs::testing::Gen g(44);
  for (int model = 0; model < 20; ++model) {
    const rs::NonlinearNetwork net = random_network(g);
    for (int trial = 0; trial < 1000; ++trial) {
      Vector x(net.n);
      for (int i = 0; i < net.n; ++i) x(i) = g.coin(0.2) ? 0.0 : g.uniform(0.0, 5.0);
      const int zero = g.integer(0, net.n - 1);
      x(zero) = 0.0;
      const Vector f = net.rate(x) + net.b0;
      for (int i = 0; i < net.n; ++i) {
        if (x(i) == 0.0) EXPECT_GE(f(i), -1e-12);
      }
    }
  }
}
