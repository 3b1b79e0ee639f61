#include <gtest/gtest.h>

#include "mptd/benchmarks.hpp"
#include "mptd/error.hpp"

namespace {

using mptd::BenchmarkId;
using mptd::Matrix;
using mptd::Vector;

TEST(Benchmarks, BairdBehaviourAndFeatures) {
  const auto env = mptd::make_benchmark(BenchmarkId::baird);
  EXPECT_EQ(env.mdp.n_states, 7);
  EXPECT_EQ(env.dim(), 8);
  EXPECT_DOUBLE_EQ(env.mdp.gamma, 0.99);
  for (int s = 0; s < 7; ++s) {
    EXPECT_DOUBLE_EQ(env.behavior.prob(s, 1), 1.0 / 7.0);
    EXPECT_DOUBLE_EQ(env.target.prob(s, 1), 1.0);
  }
  Vector phi0 = Vector::Zero(8);
  phi0[0] = 2.0;
  phi0[7] = 1.0;
  EXPECT_EQ(env.features.row(0), phi0);
  Vector phi6 = Vector::Zero(8);
  phi6[6] = 1.0;
  phi6[7] = 2.0;
  EXPECT_EQ(env.features.row(6), phi6);
  Vector theta0 = Vector::Ones(8);
  theta0[6] = 10.0;
  EXPECT_EQ(env.initial_theta, theta0);
}

TEST(Benchmarks, RandomWalkPolicies) {
  const auto env = mptd::make_benchmark("random_walk");
  EXPECT_DOUBLE_EQ(env.mdp.gamma, 0.99);
  EXPECT_EQ(env.dim(), 5);
  for (int s = 1; s <= 5; ++s) {
    EXPECT_DOUBLE_EQ(env.behavior.prob(s, 0), 0.5);
    EXPECT_DOUBLE_EQ(env.behavior.prob(s, 1), 0.5);
    EXPECT_DOUBLE_EQ(env.target.prob(s, 0), 0.4);
    EXPECT_DOUBLE_EQ(env.target.prob(s, 1), 0.6);
  }
  EXPECT_EQ(env.mdp.terminal_states, (std::vector<int>{0, 6}));
  EXPECT_DOUBLE_EQ(env.mdp.start_distribution[3], 1.0);
}

TEST(Benchmarks, TwoStateShape) {
  const auto env = mptd::make_benchmark(BenchmarkId::two_state);
  EXPECT_EQ(env.mdp.n_states, 2);
  EXPECT_EQ(env.dim(), 1);
  EXPECT_DOUBLE_EQ(env.features.phi(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(env.features.phi(1, 0), 2.0);
  EXPECT_TRUE(mptd::true_values(env.mdp, env.target).isZero());
}

TEST(Benchmarks, BoyanChainStructure) {
  const auto env = mptd::make_benchmark(BenchmarkId::boyan_chain);
  EXPECT_EQ(env.mdp.n_states, 13);
  EXPECT_EQ(env.dim(), 4);
  EXPECT_DOUBLE_EQ(env.mdp.gamma, 0.9);
  EXPECT_TRUE(env.mdp.terminal_states.empty());
  // Anchors at states 13, 9, 5, 1 carry unit features.
  EXPECT_EQ(env.features.row(12), Vector::Unit(4, 0));
  EXPECT_EQ(env.features.row(8), Vector::Unit(4, 1));
  EXPECT_EQ(env.features.row(4), Vector::Unit(4, 2));
  EXPECT_EQ(env.features.row(0), Vector::Unit(4, 3));
  for (int s = 0; s < 13; ++s) EXPECT_NEAR(env.features.row(s).sum(), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(env.mdp.reward[0](5, 4), -3.0);
  EXPECT_DOUBLE_EQ(env.mdp.reward[1](5, 3), -3.0);
  EXPECT_DOUBLE_EQ(env.mdp.reward[0](1, 0), -2.0);
  EXPECT_DOUBLE_EQ(env.mdp.transition[0](0, 12), 1.0);
}

TEST(Benchmarks, UnknownNameIsUsageError) {
  EXPECT_THROW(mptd::make_benchmark("mountain_car"), mptd::UsageError);
  EXPECT_THROW(mptd::parse_benchmark(""), mptd::UsageError);
}

TEST(Benchmarks, ConstructionIsDeterministic) {
  for (auto id : mptd::all_benchmarks()) {
    const auto a = mptd::make_benchmark(id);
    const auto b = mptd::make_benchmark(id);
    EXPECT_EQ(a.features.phi, b.features.phi);
    for (int k = 0; k < a.mdp.n_actions; ++k) {
      EXPECT_EQ(a.mdp.transition[k], b.mdp.transition[k]);
      EXPECT_EQ(a.mdp.reward[k], b.mdp.reward[k]);
    }
  }
}

TEST(Benchmarks, ImportanceRatioConsistency) {
  for (auto id : mptd::all_benchmarks()) {
    const auto env = mptd::make_benchmark(id);
    for (int s = 0; s < env.mdp.n_states; ++s) {
      if (env.mdp.is_terminal(s)) continue;
      double total = 0.0;
      for (int a = 0; a < env.mdp.n_actions; ++a) {
        if (env.behavior.prob(s, a) > 0.0) {
          total += env.behavior.prob(s, a) * env.target.prob(s, a) / env.behavior.prob(s, a);
        }
      }
      EXPECT_NEAR(total, 1.0, 1e-15) << mptd::to_string(id) << " s=" << s;
    }
  }
}

TEST(Benchmarks, NamesRoundTrip) {
  for (auto id : mptd::all_benchmarks()) {
    EXPECT_EQ(mptd::parse_benchmark(mptd::to_string(id)), id);
  }
}

}  // namespace
