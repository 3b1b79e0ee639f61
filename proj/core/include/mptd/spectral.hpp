#pragma once

#include <complex>
#include <vector>

#include "mptd/mdp.hpp"

namespace mptd {

using ComplexVector = Eigen::VectorXcd;

/// Relative threshold on sigma_min / sigma_max below which a matrix is
/// treated as singular.
inline constexpr double kSingularityThreshold = 1e-10;

/// (A + A^T) / 2.
Matrix symmetric_part(const Matrix& A);

/// Eigenvalues of a general real matrix (complex Schur based).
ComplexVector eigenvalues(const Matrix& A);

/// max |lambda| over eigenvalues. R_M(alpha) is non-normal, so this is not
/// the same as the largest singular value.
double spectral_radius(const Matrix& A);

/// Ascending eigenvalues of the symmetric part of A.
Vector symmetric_eigenvalues(const Matrix& A);

/// Descending singular values.
Vector singular_values(const Matrix& A);

double largest_singular_value(const Matrix& A);

/// sigma_min < kSingularityThreshold * sigma_max (or the matrix is zero).
bool is_numerically_singular(const Matrix& A,
                             double rel_tol = kSingularityThreshold);

/// Numerical rank with the same relative threshold.
int numerical_rank(const Matrix& A, double rel_tol = kSingularityThreshold);

/// n points spaced evenly in log10 between lo and hi (inclusive).
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace mptd
