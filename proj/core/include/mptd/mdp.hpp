#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mptd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kProbabilityTolerance = 1e-12;

/// Finite MDP: P(s'|s,a), r(s,a,s'), discount, start distribution, terminals.
///
/// transition[a](s, s') and reward[a](s, s') are indexed by action first so
/// each action is one dense n x n block.
struct MdpSpec {
  int n_states = 0;
  int n_actions = 0;
  std::vector<Matrix> transition;
  std::vector<Matrix> reward;
  double gamma = 1.0;
  Vector start_distribution;
  std::vector<int> terminal_states;

  bool is_terminal(int s) const;

  /// Throws StructuralError when any invariant is violated.
  void validate() const;
};

/// Row s holds nu(.|s).
struct PolicySpec {
  Matrix probs;

  double prob(int s, int a) const { return probs(s, a); }
  void validate(int n_states, int n_actions) const;
};

struct FeatureMap {
  Matrix phi;  // n_states x d

  int dim() const { return static_cast<int>(phi.cols()); }
  auto row(int s) const { return phi.row(s).transpose(); }
  void validate(int n_states) const;
};

enum class BenchmarkId { two_state, baird, random_walk, boyan_chain };

std::string to_string(BenchmarkId id);
BenchmarkId parse_benchmark(const std::string& name);
const std::vector<BenchmarkId>& all_benchmarks();

struct BenchmarkEnv {
  std::string name;
  MdpSpec mdp;
  PolicySpec target;
  PolicySpec behavior;
  FeatureMap features;
  // Starting parameter vector theta_0 for every algorithm on this env.
  Vector initial_theta;

  int dim() const { return features.dim(); }

  /// Checks MDP/policy/feature invariants plus the coverage condition
  /// (pi(a|s) > 0 implies mu(a|s) > 0) and irreducibility of the restart chain.
  void validate() const;
};

struct Transition {
  int s = 0;
  int a = 0;
  double r = 0.0;
  int s_next = 0;
  double rho = 0.0;
  Vector phi;
  Vector phi_next;  // zero when terminal
  bool terminal = false;
};

/// 64-bit Mersenne twister; its output sequence is fixed by the standard, and
/// the categorical draws below avoid std distributions, so trajectories are
/// reproducible across standard libraries.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

/// Index i with probability probs[i] (inverse-CDF draw).
int sample_categorical(const Eigen::Ref<const Vector>& probs, Rng& rng);

/// [P_nu]_{ss'} = sum_a nu(a|s) P(s'|s,a); terminal rows are replaced by the
/// start distribution (restart convention).
Matrix induced_transition_matrix(const MdpSpec& mdp, const PolicySpec& policy);

/// Same sum, but substochastic: terminal rows and all mass flowing into
/// terminal states are deleted. This is the operator used for A_pi, A_mu
/// and for the episodic Bellman equation.
Matrix substochastic_transition_matrix(const MdpSpec& mdp,
                                       const PolicySpec& policy);

/// Stationary distribution of a row-stochastic irreducible matrix.
/// Throws NumericError if the chain is detected to be reducible.
Vector stationary_distribution(const Matrix& P);

/// Behaviour on-data state weighting: stationary distribution of the
/// restart chain of mu, restricted to non-terminal states and renormalised.
Vector behavior_state_distribution(const BenchmarkEnv& env);

/// Expected one-step reward under a policy; zero at terminal states.
Vector expected_reward(const MdpSpec& mdp, const PolicySpec& policy);

/// v_pi = (I - gamma P_pi)^{-1} r_pi on non-terminal states, 0 on terminals.
Vector true_values(const MdpSpec& mdp, const PolicySpec& target);

/// sqrt(sum_s d(s) (theta^T phi(s) - v(s))^2) over non-terminal states.
/// Non-finite theta yields a non-finite result.
double rmsve(const Eigen::Ref<const Vector>& theta, const BenchmarkEnv& env,
             const Eigen::Ref<const Vector>& d_mu,
             const Eigen::Ref<const Vector>& v_pi);

/// a ~ mu(.|s), s' ~ P(.|s,a). Precondition: s is non-terminal.
Transition sample_transition(const BenchmarkEnv& env, int s, Rng& rng);

/// The state the trajectory continues from after t: s_next, or a fresh draw
/// from the start distribution if s_next is terminal.
int continuation_state(const BenchmarkEnv& env, const Transition& t, Rng& rng);

/// Draws the first trajectory state from the start distribution.
int initial_state(const BenchmarkEnv& env, Rng& rng);

/// Precomputed evaluation data: on-data weighting and true values.
struct EvaluationTarget {
  Vector d_mu;
  Vector v_pi;

  static EvaluationTarget for_env(const BenchmarkEnv& env);
};

}  // namespace mptd
