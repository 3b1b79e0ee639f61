#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mptd/error.hpp"
#include "mptd/spectral.hpp"
#include "oracles.hpp"

namespace {

using mptd::Matrix;
using mptd::Vector;

Matrix random_matrix(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return m;
}

TEST(SymmetricPart, Examples) {
  Matrix A(2, 2);
  A << 1, 2, 0, 1;
  Matrix expected(2, 2);
  expected << 1, 1, 1, 1;
  EXPECT_EQ(mptd::symmetric_part(A), expected);

  const Matrix S = mptd::symmetric_part(random_matrix(5, 1));
  EXPECT_EQ(mptd::symmetric_part(S), S);

  const Matrix R = random_matrix(4, 2);
  EXPECT_TRUE(mptd::symmetric_part(R - R.transpose()).isZero());
}

TEST(SymmetricPart, ExactlySymmetricAndSameQuadraticForm) {
  const Matrix A = random_matrix(6, 3);
  const Matrix H = mptd::symmetric_part(A);
  EXPECT_EQ(H, H.transpose());
  const Vector x = Vector::LinSpaced(6, -1, 2);
  EXPECT_NEAR(x.dot(H * x), x.dot(A * x), 1e-12);
}

TEST(Eigen, SpectralRadiusOfRotation) {
  Matrix R(2, 2);
  R << 0, -2, 2, 0;
  EXPECT_NEAR(mptd::spectral_radius(R), 2.0, 1e-14);
  EXPECT_NEAR(oracle::power_iteration_radius(R, 50), 2.0, 1e-12);
}

TEST(Eigen, SpectralRadiusMatchesPowerIteration) {
  for (unsigned seed = 10; seed < 20; ++seed) {
    Matrix A = random_matrix(6, seed);
    // A dominant real eigenvalue separated from the rest.
    A += 8.0 * Vector::Ones(6) * Vector::Ones(6).transpose() / 6.0;
    EXPECT_NEAR(mptd::spectral_radius(A), oracle::power_iteration_radius(A), 1e-6);
  }
}

TEST(Eigen, NonNormalRadiusBelowNorm) {
  Matrix J(2, 2);
  J << 0.5, 10, 0, 0.5;
  EXPECT_NEAR(mptd::spectral_radius(J), 0.5, 1e-14);
  EXPECT_GT(mptd::largest_singular_value(J), 10.0);
}

TEST(Eigen, SymmetricEigenvaluesAscending) {
  Matrix D = Vector(Eigen::Vector3d(3, -1, 2)).asDiagonal();
  const Vector ev = mptd::symmetric_eigenvalues(D);
  EXPECT_DOUBLE_EQ(ev[0], -1);
  EXPECT_DOUBLE_EQ(ev[1], 2);
  EXPECT_DOUBLE_EQ(ev[2], 3);
}

TEST(Singular, NormMatchesEigenOfGram) {
  for (unsigned seed = 30; seed < 35; ++seed) {
    const Matrix K = random_matrix(7, seed);
    const Matrix gram = K.transpose() * K;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    EXPECT_NEAR(mptd::largest_singular_value(K), std::sqrt(es.eigenvalues().maxCoeff()), 1e-10);
  }
  EXPECT_DOUBLE_EQ(mptd::largest_singular_value(Matrix::Identity(4, 4)), 1.0);
}

TEST(Singular, RankAndThreshold) {
  Matrix A = Matrix::Identity(3, 3);
  EXPECT_FALSE(mptd::is_numerically_singular(A));
  EXPECT_EQ(mptd::numerical_rank(A), 3);
  A(2, 2) = 1e-11;
  EXPECT_TRUE(mptd::is_numerically_singular(A));
  EXPECT_EQ(mptd::numerical_rank(A), 2);
  A(2, 2) = 1e-9;
  EXPECT_FALSE(mptd::is_numerically_singular(A));
  EXPECT_TRUE(mptd::is_numerically_singular(Matrix::Zero(2, 2)));
  EXPECT_EQ(mptd::numerical_rank(Matrix::Zero(2, 2)), 0);
}

TEST(LogGrid, EndpointsAndSpacing) {
  const auto g = mptd::log_grid(1e-3, 1.0, 50);
  ASSERT_EQ(g.size(), 50u);
  EXPECT_DOUBLE_EQ(g.front(), 1e-3);
  EXPECT_DOUBLE_EQ(g.back(), 1.0);
  for (std::size_t i = 1; i < g.size(); ++i) {
    EXPECT_NEAR(std::log10(g[i]) - std::log10(g[i - 1]), 3.0 / 49.0, 1e-12);
  }
  EXPECT_EQ(mptd::log_grid(0.5, 0.5, 1), std::vector<double>{0.5});
}

TEST(LogGrid, RejectsBadArguments) {
  EXPECT_THROW(mptd::log_grid(0.0, 1.0, 5), mptd::UsageError);
  EXPECT_THROW(mptd::log_grid(1e-3, 1.0, 0), mptd::UsageError);
}

}  // namespace
