#include "mptd/saddle.hpp"

#include <cmath>
#include <limits>

#include "mptd/error.hpp"

namespace mptd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Matrix bellman_matrix(const Matrix& Phi, const Matrix& D, const Matrix& P,
                      double gamma) {
  const Eigen::Index n = P.rows();
  return Phi.transpose() * D * (Matrix::Identity(n, n) - gamma * P) * Phi;
}

}  // namespace

MeanMatrices build_mean_matrices(const BenchmarkEnv& env) {
  MeanMatrices mm;
  mm.gamma = env.mdp.gamma;
  mm.Phi = env.features.phi;
  mm.d_mu = behavior_state_distribution(env);
  mm.D_mu = mm.d_mu.asDiagonal();
  mm.P_pi = substochastic_transition_matrix(env.mdp, env.target);
  mm.P_mu = substochastic_transition_matrix(env.mdp, env.behavior);
  mm.r_pi = expected_reward(env.mdp, env.target);

  mm.A_pi = bellman_matrix(mm.Phi, mm.D_mu, mm.P_pi, mm.gamma);
  mm.A_mu = bellman_matrix(mm.Phi, mm.D_mu, mm.P_mu, mm.gamma);
  mm.b = mm.Phi.transpose() * mm.D_mu * mm.r_pi;
  mm.C = symmetric_part(mm.Phi.transpose() * mm.D_mu * mm.Phi);
  mm.H = symmetric_part(mm.A_mu);
  return mm;
}

std::string to_string(Metric m) { return m == Metric::C ? "C" : "H"; }

const Matrix& metric_matrix(const MeanMatrices& mm, Metric m) {
  return m == Metric::C ? mm.C : mm.H;
}

MetricPdReport check_metric_pd(const MeanMatrices& mm) {
  MetricPdReport report;
  report.lambda_min_H = symmetric_eigenvalues(mm.H)[0];
  report.lambda_min_C = symmetric_eigenvalues(mm.C)[0];
  report.lower_bound = (1.0 - mm.gamma) * report.lambda_min_C;
  report.feature_rank = numerical_rank(mm.Phi);
  report.full_column_rank = report.feature_rank == mm.Phi.cols();
  report.bound_holds = report.lambda_min_H >= report.lower_bound - 1e-10;
  return report;
}

JointSystem joint_mean_system(const MeanMatrices& mm) {
  const int d = mm.dim();
  JointSystem js;
  js.G = Matrix::Zero(2 * d, 2 * d);
  js.G.topRightCorner(d, d) = mm.A_pi.transpose();
  js.G.bottomLeftCorner(d, d) = -mm.A_pi;
  js.G.bottomRightCorner(d, d) = -mm.H;
  js.h = Vector::Zero(2 * d);
  js.h.tail(d) = mm.b;
  if (!is_numerically_singular(mm.A_pi)) {
    Vector z = Vector::Zero(2 * d);
    z.head(d) = mm.A_pi.fullPivLu().solve(mm.b);
    js.z_star = z;
  }
  return js;
}

Matrix key_matrix_of(const MeanMatrices& mm, Metric metric) {
  const Matrix& M = metric_matrix(mm, metric);
  Matrix M_inv_A;
  if (is_numerically_singular(M)) {
    M_inv_A = M.completeOrthogonalDecomposition().pseudoInverse() * mm.A_pi;
  } else {
    M_inv_A = M.llt().solve(mm.A_pi);
  }
  return symmetric_part(mm.A_pi.transpose() * M_inv_A);
}

KeyMatrixReport key_matrix(const MeanMatrices& mm, Metric metric) {
  KeyMatrixReport report;
  report.metric = metric;
  const Matrix B = key_matrix_of(mm, metric);
  const Vector ev = symmetric_eigenvalues(B);
  report.lambda_min = ev[0];
  report.lambda_max = ev[ev.size() - 1];
  report.singular_flag = is_numerically_singular(metric_matrix(mm, metric)) ||
                         is_numerically_singular(mm.A_pi) ||
                         !(report.lambda_min > kSingularityThreshold * report.lambda_max);
  if (report.singular_flag) {
    report.condition_number = kInf;
    report.quadratic_factor = 1.0;
  } else {
    report.condition_number = report.lambda_max / report.lambda_min;
    report.quadratic_factor =
        (report.condition_number - 1.0) / (report.condition_number + 1.0);
  }
  return report;
}

KeyConditionVerdict check_key_condition(const KeyMatrixReport& rc,
                                        const KeyMatrixReport& rh) {
  KeyConditionVerdict verdict;
  verdict.singular = rc.singular_flag || rh.singular_flag;
  verdict.holds = !verdict.singular && rh.lambda_min > rc.lambda_min &&
                  rh.condition_number <= rc.condition_number;
  return verdict;
}

Matrix operator_matrix(const MeanMatrices& mm, Metric metric) {
  const int d = mm.dim();
  Matrix K = Matrix::Zero(2 * d, 2 * d);
  K.topRightCorner(d, d) = -mm.A_pi.transpose();
  K.bottomLeftCorner(d, d) = mm.A_pi;
  K.bottomRightCorner(d, d) = metric_matrix(mm, metric);
  return K;
}

Matrix mp_error_matrix(const Matrix& K, double alpha) {
  const Eigen::Index n = K.rows();
  return Matrix::Identity(n, n) - alpha * K + (alpha * alpha) * (K * K);
}

double mp_contraction(const Matrix& K, double alpha) {
  if (alpha == 0.0) return 1.0;
  return spectral_radius(mp_error_matrix(K, alpha));
}

double mp_contraction(const MeanMatrices& mm, Metric metric, double alpha) {
  return mp_contraction(operator_matrix(mm, metric), alpha);
}

GridOptimum best_contraction(const MeanMatrices& mm, Metric metric,
                             const std::vector<double>& grid) {
  if (grid.empty()) throw UsageError("best_contraction needs a non-empty grid");
  const Matrix K = operator_matrix(mm, metric);
  GridOptimum best{grid.front(), mp_contraction(K, grid.front())};
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double q = mp_contraction(K, grid[i]);
    if (q < best.q_best || (q == best.q_best && grid[i] < best.alpha_best)) {
      best = {grid[i], q};
    }
  }
  return best;
}

std::vector<double> default_contraction_grid() { return log_grid(1e-3, 1.0, 50); }

double hurwitz_margin(const Matrix& K) { return eigenvalues(K).real().minCoeff(); }

double hurwitz_margin(const MeanMatrices& mm, Metric metric) {
  return hurwitz_margin(operator_matrix(mm, metric));
}

double operator_norm(const MeanMatrices& mm, Metric metric) {
  return largest_singular_value(operator_matrix(mm, metric));
}

RateReport rate_report(const MeanMatrices& mm, Metric metric,
                       const std::vector<double>& grid,
                       std::optional<double> tuned_alpha) {
  RateReport report;
  report.metric = metric;
  const GridOptimum best = best_contraction(mm, metric, grid);
  report.alpha_best = best.alpha_best;
  report.q_best = best.q_best;
  report.hurwitz_margin = hurwitz_margin(mm, metric);
  report.operator_norm = operator_norm(mm, metric);
  if (tuned_alpha) {
    report.alpha = *tuned_alpha;
    report.q = mp_contraction(mm, metric, *tuned_alpha);
  } else {
    report.alpha = kNaN;
    report.q = kNaN;
  }
  return report;
}

std::vector<double> mean_recursion_trace(const JointSystem& js, double alpha,
                                         const Vector& z0, int steps) {
  if (js.singular()) throw NumericError("mean recursion has no unique fixed point");
  if (z0.size() != js.G.rows()) throw StructuralError("z0 has wrong dimension");
  const Vector& z_star = *js.z_star;
  std::vector<double> errors;
  errors.reserve(static_cast<std::size_t>(steps) + 1);
  Vector z = z0;
  errors.push_back((z - z_star).norm());
  for (int t = 0; t < steps; ++t) {
    z += alpha * (js.G * z + js.h);
    errors.push_back((z - z_star).norm());
  }
  return errors;
}

std::vector<double> mp_mean_recursion_trace(const MeanMatrices& mm, Metric metric,
                                            double alpha, const Vector& z0,
                                            int steps) {
  const JointSystem js = joint_mean_system(mm);
  if (js.singular()) throw NumericError("mean recursion has no unique fixed point");
  const Matrix K = operator_matrix(mm, metric);
  if (z0.size() != K.rows()) throw StructuralError("z0 has wrong dimension");
  Vector c = Vector::Zero(K.rows());
  c.tail(mm.dim()) = mm.b;
  const Vector& z_star = *js.z_star;
  auto F = [&](const Vector& z) -> Vector { return K * z - c; };

  std::vector<double> errors;
  errors.reserve(static_cast<std::size_t>(steps) + 1);
  Vector z = z0;
  errors.push_back((z - z_star).norm());
  for (int t = 0; t < steps; ++t) {
    const Vector z_m = z - alpha * F(z);
    z -= alpha * F(z_m);
    errors.push_back((z - z_star).norm());
  }
  return errors;
}

std::vector<double> mp_error_log_trace(const Matrix& K, double alpha,
                                       const Vector& e0, int steps) {
  if (e0.size() != K.rows()) throw StructuralError("e0 has wrong dimension");
  const double n0 = e0.norm();
  if (n0 == 0.0) {
    return std::vector<double>(static_cast<std::size_t>(steps) + 1,
                               -std::numeric_limits<double>::infinity());
  }
  const Matrix R = mp_error_matrix(K, alpha);
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(steps) + 1);
  double log_norm = std::log(n0);
  logs.push_back(log_norm);
  Vector e = e0 / n0;
  for (int t = 0; t < steps; ++t) {
    e = R * e;
    const double n = e.norm();
    if (n == 0.0) {
      logs.resize(static_cast<std::size_t>(steps) + 1,
                  -std::numeric_limits<double>::infinity());
      return logs;
    }
    log_norm += std::log(n);
    e /= n;
    logs.push_back(log_norm);
  }
  return logs;
}

double log_linear_slope(const std::vector<double>& log_series, int burn_in) {
  const auto n_total = static_cast<int>(log_series.size());
  if (burn_in < 0 || n_total - burn_in < 2) {
    throw UsageError("log_linear_slope needs at least two points after burn-in");
  }
  const int n = n_total - burn_in;
  double mean_t = 0.0;
  double mean_y = 0.0;
  for (int i = burn_in; i < n_total; ++i) {
    mean_t += i;
    mean_y += log_series[i];
  }
  mean_t /= n;
  mean_y /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (int i = burn_in; i < n_total; ++i) {
    sxy += (i - mean_t) * (log_series[i] - mean_y);
    sxx += (i - mean_t) * (i - mean_t);
  }
  return sxy / sxx;
}

double saddle_gap(const Eigen::Ref<const Vector>& theta_bar,
                  const Eigen::Ref<const Vector>& y_bar, const Matrix& A,
                  const Vector& b, const Matrix& M, const ProjectionSpec& proj) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetric_part(M));
  if (eig.info() != Eigen::Success) throw NumericError("metric eigensolve failed");
  const Vector lambda = eig.eigenvalues();
  if (!(lambda[0] > 0.0) || lambda[0] <= kSingularityThreshold * lambda[lambda.size() - 1]) {
    throw NumericError("gap metric is not positive definite");
  }
  const Matrix& Q = eig.eigenvectors();

  // max over the dual ball: maximise <g, y> - 1/2 y^T M y, ||y|| <= R_y.
  const Vector g = b - A * theta_bar;
  const Vector g_rot = Q.transpose() * g;
  auto shifted_solution = [&](double shift) -> Vector {
    return (g_rot.array() / (lambda.array() + shift)).matrix();
  };
  Vector y_rot = shifted_solution(0.0);
  if (y_rot.norm() > proj.radius_aux) {
    // ||y(shift)|| decreases monotonically; hi makes it <= R_y.
    double lo = 0.0;
    double hi = g.norm() / proj.radius_aux;
    for (int iter = 0; iter < 400; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double norm = shifted_solution(mid).norm();
      if (norm > proj.radius_aux) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (std::abs(norm - proj.radius_aux) <= 1e-10 * proj.radius_aux ||
          hi - lo <= std::numeric_limits<double>::epsilon() * hi) {
        break;
      }
    }
    // hi is on the feasible side of the boundary.
    y_rot = shifted_solution(hi);
  }
  const double dual_max =
      g_rot.dot(y_rot) - 0.5 * y_rot.dot(lambda.cwiseProduct(y_rot));

  // min over the primal ball is closed form.
  const double primal_min = b.dot(y_bar) - 0.5 * y_bar.dot(M * y_bar) -
                            proj.radius_theta * (A.transpose() * y_bar).norm();
  return dual_max - primal_min;
}

double ergodic_gap(const Eigen::Ref<const Vector>& theta_bar,
                   const Eigen::Ref<const Vector>& y_bar, const MeanMatrices& mm,
                   Metric metric, const ProjectionSpec& proj) {
  if (theta_bar.size() != mm.dim() || y_bar.size() != mm.dim()) {
    throw StructuralError("ergodic_gap: dimension mismatch");
  }
  return saddle_gap(theta_bar, y_bar, mm.A_pi, mm.b, metric_matrix(mm, metric), proj);
}

}  // namespace mptd
