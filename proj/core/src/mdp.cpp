#include "mptd/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mptd/error.hpp"

namespace mptd {

namespace {

void check_distribution(const Eigen::Ref<const Vector>& p, const std::string& what) {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || p[i] < 0.0) {
      throw StructuralError(what + ": negative or non-finite probability");
    }
  }
  if (std::abs(p.sum() - 1.0) > kProbabilityTolerance) {
    std::ostringstream msg;
    msg << what << ": probabilities sum to " << p.sum() << ", not 1";
    throw StructuralError(msg.str());
  }
}

}  // namespace

bool MdpSpec::is_terminal(int s) const {
  return std::find(terminal_states.begin(), terminal_states.end(), s) !=
         terminal_states.end();
}

void MdpSpec::validate() const {
  if (n_states <= 0 || n_actions <= 0) {
    throw StructuralError("MDP needs at least one state and one action");
  }
  if (static_cast<int>(transition.size()) != n_actions ||
      static_cast<int>(reward.size()) != n_actions) {
    throw StructuralError("transition/reward must hold one block per action");
  }
  for (int a = 0; a < n_actions; ++a) {
    if (transition[a].rows() != n_states || transition[a].cols() != n_states ||
        reward[a].rows() != n_states || reward[a].cols() != n_states) {
      throw StructuralError("transition/reward block has wrong shape");
    }
    if (!reward[a].allFinite()) {
      throw StructuralError("reward contains non-finite entries");
    }
    for (int s = 0; s < n_states; ++s) {
      check_distribution(transition[a].row(s).transpose(),
                         "transition row (s=" + std::to_string(s) +
                             ", a=" + std::to_string(a) + ")");
    }
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw StructuralError("discount must lie in (0, 1]");
  }
  if (start_distribution.size() != n_states) {
    throw StructuralError("start distribution has wrong length");
  }
  check_distribution(start_distribution, "start distribution");
  for (int t : terminal_states) {
    if (t < 0 || t >= n_states) {
      throw StructuralError("terminal state index out of range");
    }
    if (start_distribution[t] > 0.0) {
      throw StructuralError("start distribution puts mass on a terminal state");
    }
  }
}

void PolicySpec::validate(int n_states, int n_actions) const {
  if (probs.rows() != n_states || probs.cols() != n_actions) {
    throw StructuralError("policy table has wrong shape");
  }
  for (int s = 0; s < n_states; ++s) {
    check_distribution(probs.row(s).transpose(), "policy row " + std::to_string(s));
  }
}

void FeatureMap::validate(int n_states) const {
  if (phi.rows() != n_states || phi.cols() <= 0) {
    throw StructuralError("feature matrix has wrong shape");
  }
  if (!phi.allFinite()) {
    throw StructuralError("feature matrix contains non-finite entries");
  }
}

std::string to_string(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::two_state: return "two_state";
    case BenchmarkId::baird: return "baird";
    case BenchmarkId::random_walk: return "random_walk";
    case BenchmarkId::boyan_chain: return "boyan_chain";
  }
  return "unknown";
}

BenchmarkId parse_benchmark(const std::string& name) {
  for (BenchmarkId id : all_benchmarks()) {
    if (to_string(id) == name) return id;
  }
  throw UsageError("unknown benchmark '" + name +
                   "' (expected two_state, baird, random_walk, boyan_chain)");
}

const std::vector<BenchmarkId>& all_benchmarks() {
  static const std::vector<BenchmarkId> ids = {
      BenchmarkId::two_state, BenchmarkId::baird, BenchmarkId::random_walk,
      BenchmarkId::boyan_chain};
  return ids;
}

void BenchmarkEnv::validate() const {
  mdp.validate();
  target.validate(mdp.n_states, mdp.n_actions);
  behavior.validate(mdp.n_states, mdp.n_actions);
  features.validate(mdp.n_states);
  if (initial_theta.size() != features.dim() || !initial_theta.allFinite()) {
    throw StructuralError("initial theta must be a finite vector of feature dimension");
  }
  for (int s = 0; s < mdp.n_states; ++s) {
    if (mdp.is_terminal(s)) continue;
    for (int a = 0; a < mdp.n_actions; ++a) {
      if (target.prob(s, a) > 0.0 && behavior.prob(s, a) <= 0.0) {
        throw StructuralError("behaviour policy does not cover the target policy");
      }
    }
  }
  // Throws on a reducible restart chain.
  stationary_distribution(induced_transition_matrix(mdp, behavior));
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int sample_categorical(const Eigen::Ref<const Vector>& probs, Rng& rng) {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  int last_positive = 0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cumulative += probs[i];
    last_positive = static_cast<int>(i);
    if (u < cumulative) return last_positive;
  }
  // Rounding left u above the accumulated mass.
  return last_positive;
}

Matrix induced_transition_matrix(const MdpSpec& mdp, const PolicySpec& policy) {
  if (policy.probs.rows() != mdp.n_states || policy.probs.cols() != mdp.n_actions ||
      static_cast<int>(mdp.transition.size()) != mdp.n_actions) {
    throw StructuralError("policy and MDP shapes disagree");
  }
  Matrix P = Matrix::Zero(mdp.n_states, mdp.n_states);
  for (int a = 0; a < mdp.n_actions; ++a) {
    P += policy.probs.col(a).asDiagonal() * mdp.transition[a];
  }
  for (int t : mdp.terminal_states) {
    P.row(t) = mdp.start_distribution.transpose();
  }
  return P;
}

Matrix substochastic_transition_matrix(const MdpSpec& mdp,
                                       const PolicySpec& policy) {
  Matrix P = induced_transition_matrix(mdp, policy);
  for (int t : mdp.terminal_states) {
    P.row(t).setZero();
    P.col(t).setZero();
  }
  return P;
}

Vector stationary_distribution(const Matrix& P) {
  const Eigen::Index n = P.rows();
  if (n == 0 || P.cols() != n) {
    throw StructuralError("stationary distribution needs a non-empty square matrix");
  }
  // Solve d^T (P - I) = 0 together with 1^T d = 1.
  Matrix system(n + 1, n);
  system.topRows(n) = P.transpose() - Matrix::Identity(n, n);
  system.row(n).setOnes();
  Vector rhs = Vector::Zero(n + 1);
  rhs[n] = 1.0;

  Eigen::ColPivHouseholderQR<Matrix> qr(system);
  qr.setThreshold(1e-10);
  if (qr.rank() < n) {
    throw NumericError("chain is reducible: stationary distribution is not unique");
  }
  Vector d = qr.solve(rhs);
  const double residual = (P.transpose() * d - d).cwiseAbs().maxCoeff();
  if (!d.allFinite() || residual > 1e-10) {
    throw NumericError("stationary distribution solve did not converge");
  }
  if (d.minCoeff() <= 1e-12) {
    throw NumericError("chain is reducible: stationary distribution has zero entries");
  }
  return d / d.sum();
}

Vector behavior_state_distribution(const BenchmarkEnv& env) {
  Vector d = stationary_distribution(induced_transition_matrix(env.mdp, env.behavior));
  for (int t : env.mdp.terminal_states) d[t] = 0.0;
  return d / d.sum();
}

Vector expected_reward(const MdpSpec& mdp, const PolicySpec& policy) {
  Vector r = Vector::Zero(mdp.n_states);
  for (int a = 0; a < mdp.n_actions; ++a) {
    r += policy.probs.col(a).cwiseProduct(
        mdp.transition[a].cwiseProduct(mdp.reward[a]).rowwise().sum());
  }
  for (int t : mdp.terminal_states) r[t] = 0.0;
  return r;
}

Vector true_values(const MdpSpec& mdp, const PolicySpec& target) {
  const int n = mdp.n_states;
  const Matrix P = substochastic_transition_matrix(mdp, target);
  const Vector r = expected_reward(mdp, target);
  const Matrix system = Matrix::Identity(n, n) - mdp.gamma * P;
  Eigen::FullPivLU<Matrix> lu(system);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw NumericError("target-policy Bellman system is singular");
  }
  Vector v = lu.solve(r);
  for (int t : mdp.terminal_states) v[t] = 0.0;
  return v;
}

double rmsve(const Eigen::Ref<const Vector>& theta, const BenchmarkEnv& env,
             const Eigen::Ref<const Vector>& d_mu,
             const Eigen::Ref<const Vector>& v_pi) {
  const Matrix& phi = env.features.phi;
  if (theta.size() != phi.cols() || d_mu.size() != phi.rows() ||
      v_pi.size() != phi.rows()) {
    throw StructuralError("rmsve: shape mismatch");
  }
  double total = 0.0;
  for (Eigen::Index s = 0; s < phi.rows(); ++s) {
    if (env.mdp.is_terminal(static_cast<int>(s))) continue;
    const double err = phi.row(s).dot(theta) - v_pi[s];
    total += d_mu[s] * err * err;
  }
  return std::sqrt(total);
}

Transition sample_transition(const BenchmarkEnv& env, int s, Rng& rng) {
  Transition t;
  t.s = s;
  t.a = sample_categorical(env.behavior.probs.row(s).transpose(), rng);
  t.s_next = sample_categorical(env.mdp.transition[t.a].row(s).transpose(), rng);
  t.r = env.mdp.reward[t.a](s, t.s_next);
  t.rho = env.target.prob(s, t.a) / env.behavior.prob(s, t.a);
  t.phi = env.features.row(s);
  t.terminal = env.mdp.is_terminal(t.s_next);
  if (t.terminal) {
    t.phi_next = Vector::Zero(env.dim());
  } else {
    t.phi_next = env.features.row(t.s_next);
  }
  return t;
}

int continuation_state(const BenchmarkEnv& env, const Transition& t, Rng& rng) {
  if (!t.terminal) return t.s_next;
  return initial_state(env, rng);
}

int initial_state(const BenchmarkEnv& env, Rng& rng) {
  return sample_categorical(env.mdp.start_distribution, rng);
}

EvaluationTarget EvaluationTarget::for_env(const BenchmarkEnv& env) {
  return EvaluationTarget{behavior_state_distribution(env),
                          true_values(env.mdp, env.target)};
}

}  // namespace mptd
