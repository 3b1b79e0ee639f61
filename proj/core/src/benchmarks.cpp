#include "mptd/benchmarks.hpp"

#include <algorithm>

#include "mptd/error.hpp"

namespace mptd {

namespace {

// Two-action MDP skeleton with all-zero tables.
MdpSpec blank_mdp(int n_states, double gamma) {
  MdpSpec mdp;
  mdp.n_states = n_states;
  mdp.n_actions = 2;
  mdp.gamma = gamma;
  mdp.transition.assign(2, Matrix::Zero(n_states, n_states));
  mdp.reward.assign(2, Matrix::Zero(n_states, n_states));
  mdp.start_distribution = Vector::Zero(n_states);
  return mdp;
}

PolicySpec constant_policy(int n_states, double p0, double p1) {
  PolicySpec policy;
  policy.probs.resize(n_states, 2);
  policy.probs.col(0).setConstant(p0);
  policy.probs.col(1).setConstant(p1);
  return policy;
}

constexpr int kDashed = 0;
constexpr int kSolid = 1;

BenchmarkEnv two_state() {
  BenchmarkEnv env;
  env.name = "two_state";
  env.mdp = blank_mdp(2, 0.9);
  for (int s = 0; s < 2; ++s) {
    env.mdp.transition[kDashed](s, 0) = 1.0;
    env.mdp.transition[kSolid](s, 1) = 1.0;
  }
  env.mdp.start_distribution << 0.5, 0.5;
  env.target = constant_policy(2, 0.0, 1.0);
  env.behavior = constant_policy(2, 0.5, 0.5);
  env.features.phi.resize(2, 1);
  env.features.phi << 1.0, 2.0;
  env.initial_theta = Vector::Constant(1, 10.0);
  return env;
}

BenchmarkEnv baird() {
  constexpr int n = 7;
  BenchmarkEnv env;
  env.name = "baird";
  env.mdp = blank_mdp(n, 0.99);
  for (int s = 0; s < n; ++s) {
    for (int s2 = 0; s2 < 6; ++s2) env.mdp.transition[kDashed](s, s2) = 1.0 / 6.0;
    env.mdp.transition[kSolid](s, 6) = 1.0;
  }
  env.mdp.start_distribution.setConstant(1.0 / n);
  env.target = constant_policy(n, 0.0, 1.0);
  env.behavior = constant_policy(n, 6.0 / 7.0, 1.0 / 7.0);
  env.features.phi = Matrix::Zero(n, 8);
  for (int i = 0; i < 6; ++i) {
    env.features.phi(i, i) = 2.0;
    env.features.phi(i, 7) = 1.0;
  }
  env.features.phi(6, 6) = 1.0;
  env.features.phi(6, 7) = 2.0;
  env.initial_theta = Vector::Ones(8);
  env.initial_theta[6] = 10.0;
  return env;
}

BenchmarkEnv random_walk() {
  // Index 0 and 6 are terminal; 1..5 form the walk, 3 is the centre.
  constexpr int n = 7;
  constexpr int kLeft = 0;
  constexpr int kRight = 1;
  BenchmarkEnv env;
  env.name = "random_walk";
  env.mdp = blank_mdp(n, 0.99);
  for (int s = 1; s <= 5; ++s) {
    env.mdp.transition[kLeft](s, s - 1) = 1.0;
    env.mdp.transition[kRight](s, s + 1) = 1.0;
  }
  env.mdp.reward[kRight](5, 6) = 1.0;
  for (int t : {0, 6}) {
    env.mdp.transition[kLeft](t, t) = 1.0;
    env.mdp.transition[kRight](t, t) = 1.0;
  }
  env.mdp.terminal_states = {0, 6};
  env.mdp.start_distribution[3] = 1.0;
  env.target = constant_policy(n, 0.4, 0.6);
  env.behavior = constant_policy(n, 0.5, 0.5);
  env.features.phi = Matrix::Zero(n, 5);
  env.features.phi.block(1, 0, 5, 5).setIdentity();
  env.initial_theta = Vector::Zero(5);
  return env;
}

BenchmarkEnv boyan_chain() {
  // State k (1..13) lives at index k - 1; the walk starts at 13.
  constexpr int n = 13;
  constexpr int kOne = 0;
  constexpr int kTwo = 1;
  BenchmarkEnv env;
  env.name = "boyan_chain";
  env.mdp = blank_mdp(n, 0.9);
  for (int k = 3; k <= 13; ++k) {
    const int s = k - 1;
    env.mdp.transition[kOne](s, s - 1) = 1.0;
    env.mdp.transition[kTwo](s, s - 2) = 1.0;
    env.mdp.reward[kOne](s, s - 1) = -3.0;
    env.mdp.reward[kTwo](s, s - 2) = -3.0;
  }
  for (int a : {kOne, kTwo}) {
    env.mdp.transition[a](1, 0) = 1.0;
    env.mdp.reward[a](1, 0) = -2.0;
    env.mdp.transition[a](0, n - 1) = 1.0;
  }
  env.mdp.start_distribution[n - 1] = 1.0;
  env.target = constant_policy(n, 0.4, 0.6);
  env.behavior = constant_policy(n, 0.5, 0.5);

  // Piecewise-linear interpolation between anchors at states 13, 9, 5, 1.
  env.features.phi = Matrix::Zero(n, 4);
  for (int k = 1; k <= 13; ++k) {
    const int segment = std::min((13 - k) / 4, 2);
    const int hi = 13 - 4 * segment;
    const double w = static_cast<double>(k - (hi - 4)) / 4.0;
    env.features.phi(k - 1, segment) = w;
    env.features.phi(k - 1, segment + 1) = 1.0 - w;
  }
  env.initial_theta = Vector::Zero(4);
  return env;
}

}  // namespace

BenchmarkEnv make_benchmark(BenchmarkId id) {
  BenchmarkEnv env;
  switch (id) {
    case BenchmarkId::two_state: env = two_state(); break;
    case BenchmarkId::baird: env = baird(); break;
    case BenchmarkId::random_walk: env = random_walk(); break;
    case BenchmarkId::boyan_chain: env = boyan_chain(); break;
  }
  env.validate();
  return env;
}

BenchmarkEnv make_benchmark(const std::string& name) {
  return make_benchmark(parse_benchmark(name));
}

}  // namespace mptd
