#pragma once

#include "mptd/algorithms.hpp"
#include "mptd/mdp.hpp"

namespace fixture {

using mptd::Matrix;
using mptd::Vector;

// n states, one action, deterministic successor table, one feature per state.
inline mptd::BenchmarkEnv chain_env(const std::vector<int>& next,
                                    const std::vector<double>& reward, double gamma,
                                    std::vector<int> terminals = {}) {
  const int n = static_cast<int>(next.size());
  mptd::BenchmarkEnv env;
  env.name = "chain";
  env.mdp.n_states = n;
  env.mdp.n_actions = 1;
  env.mdp.transition.assign(1, Matrix::Zero(n, n));
  env.mdp.reward.assign(1, Matrix::Zero(n, n));
  for (int s = 0; s < n; ++s) {
    env.mdp.transition[0](s, next[s]) = 1.0;
    env.mdp.reward[0](s, next[s]) = reward[s];
  }
  env.mdp.gamma = gamma;
  env.mdp.terminal_states = std::move(terminals);
  env.mdp.start_distribution = Vector::Zero(n);
  env.mdp.start_distribution[0] = 1.0;
  env.target.probs = Matrix::Ones(n, 1);
  env.behavior.probs = Matrix::Ones(n, 1);
  env.features.phi = Matrix::Identity(n, n);
  env.initial_theta = Vector::Zero(n);
  return env;
}

// A single-sample transition with scalar features.
inline mptd::Transition scalar_transition(double phi, double phi_next, double rho,
                                          double r) {
  mptd::Transition t;
  t.s = 0;
  t.a = 0;
  t.s_next = 0;
  t.r = r;
  t.rho = rho;
  t.phi = Vector::Constant(1, phi);
  t.phi_next = Vector::Constant(1, phi_next);
  t.terminal = false;
  return t;
}

inline mptd::AgentState scalar_state(double theta, double aux) {
  mptd::AgentState st = mptd::AgentState::initial(Vector::Constant(1, theta));
  st.aux = Vector::Constant(1, aux);
  return st;
}

}  // namespace fixture
