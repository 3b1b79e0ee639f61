#pragma once

#include <string>
#include <vector>

#include "mptd/mdp.hpp"

namespace mptd {

/// Learnable state shared by every algorithm. `aux` is the auxiliary
/// variable y (or the correction weight w); `followon` and `prev_rho` are
/// only touched by ETD.
struct AgentState {
  Vector theta;
  Vector aux;
  double followon = 0.0;
  double prev_rho = 0.0;

  static AgentState initial(const Vector& theta0);
};

/// alpha: primary step size. beta: auxiliary step size for two-rate methods
/// (GTD2, TDC, HTD), ignored elsewhere. reg: TDRC regulariser.
struct StepSizes {
  double alpha = 0.0;
  double beta = 0.0;
  double reg = 1.0;
};

/// Euclidean ball radii for the projected variants.
struct ProjectionSpec {
  double radius_theta = 1.0;
  double radius_aux = 1.0;
};

enum class Algorithm { td, gtd2, tdc, tdrc, gtd2_mp, htd, etd, sthtd, sthtd_mp };

std::string to_string(Algorithm alg);
Algorithm parse_algorithm(const std::string& name);
const std::vector<Algorithm>& all_algorithms();

/// True for methods tuned with a separate auxiliary step size.
bool uses_beta(Algorithm alg);

// Single-sample updates. Each is a pure function of its arguments; gamma is
// the environment discount. Non-finite values propagate without raising.
AgentState td_step(const AgentState& st, const Transition& t, double gamma,
                   const StepSizes& ss);
AgentState gtd2_step(const AgentState& st, const Transition& t, double gamma,
                     const StepSizes& ss);
AgentState tdc_step(const AgentState& st, const Transition& t, double gamma,
                    const StepSizes& ss);
/// TDC with beta = alpha and an L2 pull of `reg` on the correction weights.
AgentState tdrc_step(const AgentState& st, const Transition& t, double gamma,
                     const StepSizes& ss);
AgentState gtd2_mp_step(const AgentState& st, const Transition& t, double gamma,
                        const StepSizes& ss);
AgentState htd_step(const AgentState& st, const Transition& t, double gamma,
                    const StepSizes& ss);
/// ETD(0) with unit interest. The follow-on trace restarts after a
/// terminal transition.
AgentState etd_step(const AgentState& st, const Transition& t, double gamma,
                    const StepSizes& ss);
/// Single-timescale hybrid TD with the behaviour-induced metric.
AgentState sthtd_step(const AgentState& st, const Transition& t, double gamma,
                      const StepSizes& ss);
/// Mirror-Prox version: predict with one sthtd_step, then correct from the
/// current point using the operator evaluated at the prediction.
AgentState sthtd_mp_step(const AgentState& st, const Transition& t, double gamma,
                         const StepSizes& ss);

AgentState step(Algorithm alg, const AgentState& st, const Transition& t,
                double gamma, const StepSizes& ss);

/// v if ||v|| <= radius, else v scaled onto the sphere.
Vector project_ball(const Eigen::Ref<const Vector>& v, double radius);

AgentState projected_sthtd_step(const AgentState& st, const Transition& t,
                                double gamma, const StepSizes& ss,
                                const ProjectionSpec& proj);
/// The prediction point is projected before the correction is evaluated.
AgentState projected_sthtd_mp_step(const AgentState& st, const Transition& t,
                                   double gamma, const StepSizes& ss,
                                   const ProjectionSpec& proj);

}  // namespace mptd
