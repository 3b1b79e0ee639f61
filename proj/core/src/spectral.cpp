#include "mptd/spectral.hpp"

#include <cmath>

#include "mptd/error.hpp"

namespace mptd {

Matrix symmetric_part(const Matrix& A) {
  if (A.rows() != A.cols()) throw StructuralError("symmetric_part needs a square matrix");
  Matrix S = 0.5 * (A + A.transpose());
  // Make the result exactly symmetric regardless of rounding order.
  for (Eigen::Index i = 0; i < S.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < S.cols(); ++j) S(j, i) = S(i, j);
  }
  return S;
}

ComplexVector eigenvalues(const Matrix& A) {
  if (A.rows() != A.cols()) throw StructuralError("eigenvalues need a square matrix");
  Eigen::EigenSolver<Matrix> solver(A, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigenvalue iteration did not converge");
  }
  return solver.eigenvalues();
}

double spectral_radius(const Matrix& A) {
  return eigenvalues(A).cwiseAbs().maxCoeff();
}

Vector symmetric_eigenvalues(const Matrix& A) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric_part(A),
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("symmetric eigenvalue iteration did not converge");
  }
  return solver.eigenvalues();
}

Vector singular_values(const Matrix& A) {
  Eigen::JacobiSVD<Matrix> svd(A);
  return svd.singularValues();
}

double largest_singular_value(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  return singular_values(A)[0];
}

bool is_numerically_singular(const Matrix& A, double rel_tol) {
  return numerical_rank(A, rel_tol) < std::min(A.rows(), A.cols());
}

int numerical_rank(const Matrix& A, double rel_tol) {
  if (A.size() == 0) return 0;
  const Vector sv = singular_values(A);
  if (sv[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] >= rel_tol * sv[0]) ++rank;
  }
  return rank;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n <= 0 || !(lo > 0.0) || !(hi >= lo)) {
    throw UsageError("log_grid needs n > 0 and 0 < lo <= hi");
  }
  std::vector<double> grid(n);
  if (n == 1) {
    grid[0] = lo;
    return grid;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < n; ++i) {
    grid[i] = std::pow(10.0, a + (b - a) * i / (n - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

}  // namespace mptd
