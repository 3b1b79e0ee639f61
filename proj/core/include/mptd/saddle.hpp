#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mptd/algorithms.hpp"
#include "mptd/mdp.hpp"
#include "mptd/spectral.hpp"

namespace mptd {

/// Exact expected-update matrices of one benchmark.
///
///   A_pi = Phi^T D_mu (I - gamma P_pi) Phi     b = Phi^T D_mu r_pi
///   A_mu = Phi^T D_mu (I - gamma P_mu) Phi     H = sym(A_mu)
///   C    = Phi^T D_mu Phi
///
/// P_pi and P_mu are the substochastic (episodic) transition matrices and
/// D_mu = diag(d_mu) is the behaviour on-data weighting.
struct MeanMatrices {
  Matrix A_pi;
  Matrix A_mu;
  Vector b;
  Matrix C;
  Matrix H;
  Vector d_mu;
  Matrix D_mu;
  Matrix P_pi;
  Matrix P_mu;
  Matrix Phi;
  Vector r_pi;
  double gamma = 0.0;

  int dim() const { return static_cast<int>(A_pi.rows()); }
};

MeanMatrices build_mean_matrices(const BenchmarkEnv& env);

/// Auxiliary metric: feature covariance C (GTD2-MP) or behaviour-induced H
/// (STHTD-MP).
enum class Metric { C, H };

std::string to_string(Metric m);
const Matrix& metric_matrix(const MeanMatrices& mm, Metric m);

struct MetricPdReport {
  double lambda_min_H = 0.0;
  double lambda_min_C = 0.0;
  double lower_bound = 0.0;  // (1 - gamma) lambda_min(C)
  int feature_rank = 0;
  bool full_column_rank = false;
  // lambda_min(H) >= (1 - gamma) lambda_min(C) - 1e-10; only meaningful
  // when full_column_rank holds.
  bool bound_holds = false;
};

MetricPdReport check_metric_pd(const MeanMatrices& mm);

/// G = [[0, A_pi^T], [-A_pi, -H]], h = [0; b], z* = (A_pi^{-1} b, 0).
struct JointSystem {
  Matrix G;
  Vector h;
  std::optional<Vector> z_star;  // absent when A_pi is singular

  bool singular() const { return !z_star.has_value(); }
};

JointSystem joint_mean_system(const MeanMatrices& mm);

/// Eigen statistics of B_M = A_pi^T M^{-1} A_pi.
struct KeyMatrixReport {
  Metric metric = Metric::C;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double condition_number = 0.0;  // +inf when singular
  double quadratic_factor = 0.0;  // (kappa - 1) / (kappa + 1); 1 when singular
  bool singular_flag = false;
};

Matrix key_matrix_of(const MeanMatrices& mm, Metric metric);
KeyMatrixReport key_matrix(const MeanMatrices& mm, Metric metric);

struct KeyConditionVerdict {
  bool holds = false;
  bool singular = false;
};

/// lambda_min(B_H) > lambda_min(B_C) and kappa(B_H) <= kappa(B_C), neither
/// singular.
KeyConditionVerdict check_key_condition(const KeyMatrixReport& rc,
                                        const KeyMatrixReport& rh);

/// K_M = [[0, -A_pi^T], [A_pi, M]].
Matrix operator_matrix(const MeanMatrices& mm, Metric metric);

/// R_M(alpha) = I - alpha K + alpha^2 K^2.
Matrix mp_error_matrix(const Matrix& K, double alpha);

/// q_M(alpha) = rho(R_M(alpha)).
double mp_contraction(const Matrix& K, double alpha);
double mp_contraction(const MeanMatrices& mm, Metric metric, double alpha);

struct GridOptimum {
  double alpha_best = 0.0;
  double q_best = 0.0;
};

/// argmin of q over the grid; ties go to the smaller alpha.
GridOptimum best_contraction(const MeanMatrices& mm, Metric metric,
                             const std::vector<double>& grid);

/// The common step-size grid: 50 log-spaced points in [1e-3, 1].
std::vector<double> default_contraction_grid();

/// min Re(lambda) over eigenvalues of K_M.
double hurwitz_margin(const Matrix& K);
double hurwitz_margin(const MeanMatrices& mm, Metric metric);

/// ||K_M||_2.
double operator_norm(const MeanMatrices& mm, Metric metric);

struct RateReport {
  Metric metric = Metric::C;
  double alpha = 0.0;  // tuned step size, NaN if unknown
  double q = 0.0;      // q at the tuned step size, NaN if unknown
  double alpha_best = 0.0;
  double q_best = 0.0;
  double hurwitz_margin = 0.0;
  double operator_norm = 0.0;
};

RateReport rate_report(const MeanMatrices& mm, Metric metric,
                       const std::vector<double>& grid,
                       std::optional<double> tuned_alpha = std::nullopt);

/// ||z_t - z*|| for the mean STHTD recursion z <- z + alpha (G z + h),
/// t = 0..steps. Throws NumericError if the system has no fixed point.
std::vector<double> mean_recursion_trace(const JointSystem& js, double alpha,
                                         const Vector& z0, int steps);

/// ||z_t - z*|| for the deterministic Mirror-Prox recursion
/// z <- z - alpha F(z - alpha F(z)), F(z) = K_M z - [0; b].
std::vector<double> mp_mean_recursion_trace(const MeanMatrices& mm, Metric metric,
                                            double alpha, const Vector& z0,
                                            int steps);

/// log ||R^t e0|| for t = 0..steps, accumulated with per-step renormalisation
/// so fast-contracting cases never underflow.
std::vector<double> mp_error_log_trace(const Matrix& K, double alpha,
                                       const Vector& e0, int steps);

/// Least-squares slope of series[burn_in..] against the step index.
double log_linear_slope(const std::vector<double>& log_series, int burn_in);

/// Primal-dual gap of L(theta, y) = <b - A_pi theta, y> - 1/2 ||y||_M^2 over
/// the balls ||theta|| <= R_theta, ||y|| <= R_y. The dual max is exact (a
/// trust-region solve by bisection on the shift); the primal min is closed
/// form. Throws NumericError if the metric is not positive definite.
double ergodic_gap(const Eigen::Ref<const Vector>& theta_bar,
                   const Eigen::Ref<const Vector>& y_bar, const MeanMatrices& mm,
                   Metric metric, const ProjectionSpec& proj);

/// Same gap for explicit (A, b, M); used by the benchmark-free toy checks.
double saddle_gap(const Eigen::Ref<const Vector>& theta_bar,
                  const Eigen::Ref<const Vector>& y_bar, const Matrix& A,
                  const Vector& b, const Matrix& M, const ProjectionSpec& proj);

}  // namespace mptd
