#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pathlet/error.hpp"
#include "pathlet/mlp.hpp"

namespace pathlet {
namespace {

TEST(Huber, QuadraticInsideLinearOutside) {
  EXPECT_DOUBLE_EQ(huber(0.5), 0.125);
  EXPECT_DOUBLE_EQ(huber(-0.5), 0.125);
  EXPECT_DOUBLE_EQ(huber(2.0), 1.5);
  EXPECT_DOUBLE_EQ(huber(-3.0), 2.5);
  EXPECT_DOUBLE_EQ(huber(1.0), 0.5);
  EXPECT_DOUBLE_EQ(huber_derivative(0.3), 0.3);
  EXPECT_DOUBLE_EQ(huber_derivative(4.0), 1.0);
  EXPECT_DOUBLE_EQ(huber_derivative(-4.0), -1.0);
}

TEST(Mlp, ShapesAndGlorotRange) {
  std::mt19937_64 rng(1);
  Mlp net({4, 128, 64, 32, 9}, 0.2, rng);
  EXPECT_EQ(net.input_dim(), 4);
  EXPECT_EQ(net.output_dim(), 9);
  EXPECT_EQ(net.parameter_count(),
            4u * 128 + 128 + 128u * 64 + 64 + 64u * 32 + 32 + 32u * 9 + 9);
  const double limit = std::sqrt(6.0 / (4 + 128));
  EXPECT_LE(net.layers()[0].weight.cwiseAbs().maxCoeff(), limit);
  EXPECT_GT(net.layers()[0].weight.cwiseAbs().maxCoeff(), 0.5 * limit);
  EXPECT_EQ(net.layers()[0].bias.squaredNorm(), 0.0);
}

TEST(Mlp, ForwardRejectsWrongInputSize) {
  std::mt19937_64 rng(1);
  Mlp net({3, 4, 2}, 0.0, rng);
  try {
    net.forward(Eigen::VectorXd::Zero(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
  }
}

TEST(Mlp, BatchForwardMatchesSingleForward) {
  std::mt19937_64 rng(2);
  Mlp net({3, 8, 5, 2}, 0.2, rng);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(3, 6);
  const Eigen::MatrixXd batch = net.forward_batch(x);
  for (int c = 0; c < 6; ++c) {
    const Eigen::VectorXd single = net.forward(Eigen::VectorXd(x.col(c)));
    EXPECT_NEAR((batch.col(c) - single).norm(), 0.0, 1e-12);
  }
}

TEST(Mlp, InvertedDropoutOnlyInTraining) {
  std::mt19937_64 rng(3);
  Mlp net({2, 64, 1}, 0.5, rng);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(2, 1);
  Mlp::ForwardCache cache;
  const Eigen::MatrixXd no_drop = net.forward_train(x, cache, nullptr);
  EXPECT_NEAR((no_drop - net.forward_batch(x)).norm(), 0.0, 1e-12);
  std::mt19937_64 drop_rng(4);
  net.forward_train(x, cache, &drop_rng);
  const auto& mask = cache.drop_masks.front();
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    const double m = mask.data()[i];
    EXPECT_TRUE(m == 0.0 || m == 2.0) << m;
  }
}

TEST(Mlp, AnalyticGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  Mlp net({3, 6, 5, 2}, 0.0, rng);
  for (auto& layer : net.layers()) layer.bias.setRandom();
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(3, 4);
  const Eigen::MatrixXd target = 2.0 * Eigen::MatrixXd::Random(2, 4);
  auto loss = [&](const Mlp& m) {
    const Eigen::MatrixXd out = m.forward_batch(x);
    return 0.5 * (out - target).squaredNorm();
  };
  Mlp::ForwardCache cache;
  const Eigen::MatrixXd out = net.forward_train(x, cache, nullptr);
  const auto analytic = Mlp::flatten(net.backward(cache, out - target));
  const auto numeric = testing::finite_difference_gradient(net, loss);
  EXPECT_LT(testing::max_relative_error(analytic, numeric), 1e-4);
}

TEST(Mlp, FlatParametersRoundTrip) {
  std::mt19937_64 rng(6);
  Mlp a({3, 4, 2}, 0.0, rng);
  Mlp b = Mlp::zeros({3, 4, 2}, 0.0);
  b.set_flat_parameters(a.flat_parameters());
  EXPECT_EQ(a.flat_parameters(), b.flat_parameters());
}

TEST(Adam, FirstStepMovesEachParameterByLearningRate) {
  Mlp net = Mlp::zeros({2, 2}, 0.0);
  Adam adam(net, 0.01);
  Mlp::Gradients g;
  g.weight.push_back((Eigen::MatrixXd(2, 2) << 1, -2, 3, 0.5).finished());
  g.bias.push_back(Eigen::VectorXd::Constant(2, -1.0));
  adam.step(net, g);
  EXPECT_EQ(adam.steps(), 1);
  // Bias-corrected first step is lr * sign(g) up to epsilon.
  EXPECT_NEAR(net.layers()[0].weight(0, 0), -0.01, 1e-8);
  EXPECT_NEAR(net.layers()[0].weight(0, 1), 0.01, 1e-8);
  EXPECT_NEAR(net.layers()[0].bias(1), 0.01, 1e-8);
}

}  // namespace
}  // namespace pathlet
