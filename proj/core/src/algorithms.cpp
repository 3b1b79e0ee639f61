#include "mptd/algorithms.hpp"

#include "mptd/error.hpp"

namespace mptd {

namespace {

double td_error(const Vector& theta, const Transition& t, double gamma) {
  return t.r + gamma * theta.dot(t.phi_next) - theta.dot(t.phi);
}

// Sampled saddle-operator direction (d theta, d y) at the point (theta, y).
struct Direction {
  Vector theta;
  Vector aux;
};

// Shared primal part: rho (phi - gamma phi') (phi^T y).
Vector primal_direction(const Vector& y, const Transition& t, double gamma) {
  return (t.rho * t.phi.dot(y)) * (t.phi - gamma * t.phi_next);
}

// Covariance metric C: dual part (rho delta - phi^T y) phi.
Direction covariance_direction(const Vector& theta, const Vector& y,
                               const Transition& t, double gamma) {
  const double delta = td_error(theta, t, gamma);
  return {primal_direction(y, t, gamma), (t.rho * delta - t.phi.dot(y)) * t.phi};
}

// Behaviour-induced metric H: adds the symmetrised gamma phi' terms.
Direction hybrid_direction(const Vector& theta, const Vector& y,
                           const Transition& t, double gamma) {
  const double delta = td_error(theta, t, gamma);
  const double phi_y = t.phi.dot(y);
  const double phi_next_y = t.phi_next.dot(y);
  Vector dy = (t.rho * delta - phi_y + 0.5 * gamma * phi_next_y) * t.phi +
              (0.5 * gamma * phi_y) * t.phi_next;
  return {primal_direction(y, t, gamma), std::move(dy)};
}

template <typename DirectionFn>
AgentState mirror_prox(const AgentState& st, const Transition& t, double gamma,
                       double alpha, DirectionFn direction) {
  const Direction first = direction(st.theta, st.aux, t, gamma);
  const Vector theta_m = st.theta + alpha * first.theta;
  const Vector y_m = st.aux + alpha * first.aux;
  const Direction second = direction(theta_m, y_m, t, gamma);
  AgentState out = st;
  out.theta = st.theta + alpha * second.theta;
  out.aux = st.aux + alpha * second.aux;
  return out;
}

}  // namespace

AgentState AgentState::initial(const Vector& theta0) {
  AgentState st;
  st.theta = theta0;
  st.aux = Vector::Zero(theta0.size());
  st.followon = 0.0;
  st.prev_rho = 0.0;
  return st;
}

std::string to_string(Algorithm alg) {
  switch (alg) {
    case Algorithm::td: return "td";
    case Algorithm::gtd2: return "gtd2";
    case Algorithm::tdc: return "tdc";
    case Algorithm::tdrc: return "tdrc";
    case Algorithm::gtd2_mp: return "gtd2_mp";
    case Algorithm::htd: return "htd";
    case Algorithm::etd: return "etd";
    case Algorithm::sthtd: return "sthtd";
    case Algorithm::sthtd_mp: return "sthtd_mp";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm alg : all_algorithms()) {
    if (to_string(alg) == name) return alg;
  }
  throw UsageError("unknown algorithm '" + name + "'");
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> algs = {
      Algorithm::td,      Algorithm::gtd2, Algorithm::tdc,
      Algorithm::tdrc,    Algorithm::gtd2_mp, Algorithm::htd,
      Algorithm::etd,     Algorithm::sthtd, Algorithm::sthtd_mp};
  return algs;
}

bool uses_beta(Algorithm alg) {
  return alg == Algorithm::gtd2 || alg == Algorithm::tdc || alg == Algorithm::htd;
}

AgentState td_step(const AgentState& st, const Transition& t, double gamma,
                   const StepSizes& ss) {
  AgentState out = st;
  out.theta += (ss.alpha * t.rho * td_error(st.theta, t, gamma)) * t.phi;
  return out;
}

AgentState gtd2_step(const AgentState& st, const Transition& t, double gamma,
                     const StepSizes& ss) {
  const Direction dir = covariance_direction(st.theta, st.aux, t, gamma);
  AgentState out = st;
  out.theta += ss.alpha * dir.theta;
  out.aux += ss.beta * dir.aux;
  return out;
}

AgentState tdc_step(const AgentState& st, const Transition& t, double gamma,
                    const StepSizes& ss) {
  const double delta = td_error(st.theta, t, gamma);
  const double phi_y = t.phi.dot(st.aux);
  AgentState out = st;
  out.theta += (ss.alpha * t.rho * delta) * t.phi;
  out.theta -= (ss.alpha * gamma * t.rho * phi_y) * t.phi_next;
  out.aux += ss.beta * ((t.rho * delta - phi_y) * t.phi);
  return out;
}

AgentState tdrc_step(const AgentState& st, const Transition& t, double gamma,
                     const StepSizes& ss) {
  const double delta = td_error(st.theta, t, gamma);
  const double phi_y = t.phi.dot(st.aux);
  AgentState out = st;
  out.theta += (ss.alpha * t.rho * delta) * t.phi;
  out.theta -= (ss.alpha * gamma * t.rho * phi_y) * t.phi_next;
  out.aux += ss.alpha * ((t.rho * delta - phi_y) * t.phi - ss.reg * st.aux);
  return out;
}

AgentState gtd2_mp_step(const AgentState& st, const Transition& t, double gamma,
                        const StepSizes& ss) {
  return mirror_prox(st, t, gamma, ss.alpha, covariance_direction);
}

AgentState htd_step(const AgentState& st, const Transition& t, double gamma,
                    const StepSizes& ss) {
  const double delta = td_error(st.theta, t, gamma);
  const double phi_w = t.phi.dot(st.aux);
  const Vector td_dir = t.phi - gamma * t.phi_next;
  AgentState out = st;
  // Written so that rho = 1 leaves exactly the TD increment.
  out.theta += (ss.alpha * t.rho * delta) * t.phi;
  out.theta += (ss.alpha * (1.0 - t.rho) * phi_w) * td_dir;
  out.aux += ss.beta * (t.rho * delta * t.phi - phi_w * td_dir);
  return out;
}

AgentState etd_step(const AgentState& st, const Transition& t, double gamma,
                    const StepSizes& ss) {
  AgentState out = st;
  out.followon = gamma * st.prev_rho * st.followon + 1.0;
  out.theta +=
      (ss.alpha * out.followon * t.rho * td_error(st.theta, t, gamma)) * t.phi;
  out.prev_rho = t.terminal ? 0.0 : t.rho;
  return out;
}

AgentState sthtd_step(const AgentState& st, const Transition& t, double gamma,
                      const StepSizes& ss) {
  const Direction dir = hybrid_direction(st.theta, st.aux, t, gamma);
  AgentState out = st;
  out.theta += ss.alpha * dir.theta;
  out.aux += ss.alpha * dir.aux;
  return out;
}

AgentState sthtd_mp_step(const AgentState& st, const Transition& t, double gamma,
                         const StepSizes& ss) {
  return mirror_prox(st, t, gamma, ss.alpha, hybrid_direction);
}

AgentState step(Algorithm alg, const AgentState& st, const Transition& t,
                double gamma, const StepSizes& ss) {
  switch (alg) {
    case Algorithm::td: return td_step(st, t, gamma, ss);
    case Algorithm::gtd2: return gtd2_step(st, t, gamma, ss);
    case Algorithm::tdc: return tdc_step(st, t, gamma, ss);
    case Algorithm::tdrc: return tdrc_step(st, t, gamma, ss);
    case Algorithm::gtd2_mp: return gtd2_mp_step(st, t, gamma, ss);
    case Algorithm::htd: return htd_step(st, t, gamma, ss);
    case Algorithm::etd: return etd_step(st, t, gamma, ss);
    case Algorithm::sthtd: return sthtd_step(st, t, gamma, ss);
    case Algorithm::sthtd_mp: return sthtd_mp_step(st, t, gamma, ss);
  }
  return st;
}

Vector project_ball(const Eigen::Ref<const Vector>& v, double radius) {
  const double norm = v.norm();
  if (norm <= radius) return v;
  return v * (radius / norm);
}

AgentState projected_sthtd_step(const AgentState& st, const Transition& t,
                                double gamma, const StepSizes& ss,
                                const ProjectionSpec& proj) {
  AgentState out = sthtd_step(st, t, gamma, ss);
  out.theta = project_ball(out.theta, proj.radius_theta);
  out.aux = project_ball(out.aux, proj.radius_aux);
  return out;
}

AgentState projected_sthtd_mp_step(const AgentState& st, const Transition& t,
                                   double gamma, const StepSizes& ss,
                                   const ProjectionSpec& proj) {
  const Direction first = hybrid_direction(st.theta, st.aux, t, gamma);
  const Vector theta_m = project_ball(st.theta + ss.alpha * first.theta, proj.radius_theta);
  const Vector y_m = project_ball(st.aux + ss.alpha * first.aux, proj.radius_aux);
  const Direction second = hybrid_direction(theta_m, y_m, t, gamma);
  AgentState out = st;
  out.theta = project_ball(st.theta + ss.alpha * second.theta, proj.radius_theta);
  out.aux = project_ball(st.aux + ss.alpha * second.aux, proj.radius_aux);
  return out;
}

}  // namespace mptd
