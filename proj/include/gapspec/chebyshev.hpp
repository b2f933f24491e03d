#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace gapspec {

/// Chebyshev collocation grid on [-L, L]: nodes, differentiation matrix,
/// and Clenshaw-Curtis quadrature weights.
struct ChebGrid {
  int N = 0;               ///< polynomial degree; the grid has N+1 nodes
  double halfwidth = 0.0;  ///< L
  Eigen::VectorXd nodes;   ///< L*cos(j*pi/N), j = 0..N, strictly decreasing
  Eigen::MatrixXd diff;    ///< collocation derivative, acts on samples at nodes
  Eigen::VectorXd weights; ///< quadrature weights, sum to 2L
};

namespace detail {

inline Eigen::VectorXd clencurt_weights(int N) {
  const double pi = std::acos(-1.0);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(N + 1);
  Eigen::VectorXd theta(N + 1);
  for (int j = 0; j <= N; ++j) theta(j) = pi * j / N;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(N - 1);
  if (N % 2 == 0) {
    w(0) = 1.0 / (double(N) * N - 1.0);
    w(N) = w(0);
    for (int k = 1; k < N / 2; ++k)
      for (int j = 1; j < N; ++j)
        v(j - 1) -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
    for (int j = 1; j < N; ++j)
      v(j - 1) -= std::cos(double(N) * theta(j)) / (double(N) * N - 1.0);
  } else {
    w(0) = 1.0 / (double(N) * N);
    w(N) = w(0);
    for (int k = 1; k <= (N - 1) / 2; ++k)
      for (int j = 1; j < N; ++j)
        v(j - 1) -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
  }
  for (int j = 1; j < N; ++j) w(j) = 2.0 * v(j - 1) / N;
  return w;
}

} // namespace detail

/// Builds the collocation grid. The diagonal of the derivative matrix uses
/// the negative-sum trick so each row sums to zero exactly; the nodes use a
/// sine form so the grid is symmetric about 0 to the last bit.
inline ChebGrid build_grid(int N, double L) {
  if (N < 8) throw std::invalid_argument("build_grid: N must be >= 8");
  if (!(L > 0.0)) throw std::invalid_argument("build_grid: halfwidth must be > 0");
  const double pi = std::acos(-1.0);

  ChebGrid g;
  g.N = N;
  g.halfwidth = L;

  Eigen::VectorXd x(N + 1), c(N + 1);
  for (int j = 0; j <= N; ++j) {
    x(j) = std::sin(pi * (N - 2.0 * j) / (2.0 * N));
    double cj = (j == 0 || j == N) ? 2.0 : 1.0;
    c(j) = (j % 2 == 0) ? cj : -cj;
  }

  Eigen::MatrixXd D(N + 1, N + 1);
  for (int i = 0; i <= N; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j <= N; ++j) {
      if (i == j) continue;
      D(i, j) = (c(i) / c(j)) / (x(i) - x(j));
      rowsum += D(i, j);
    }
    D(i, i) = -rowsum;
  }

  g.nodes = L * x;
  g.diff = D / L;
  g.weights = L * detail::clencurt_weights(N);
  return g;
}

/// Derivative of a sample vector taken at the grid nodes.
inline Eigen::VectorXcd spectral_derivative(const ChebGrid& grid,
                                            const Eigen::VectorXcd& samples) {
  if (samples.size() != grid.N + 1)
    throw std::invalid_argument("spectral_derivative: sample length mismatch");
  return grid.diff * samples;
}

inline Eigen::VectorXd spectral_derivative(const ChebGrid& grid,
                                           const Eigen::VectorXd& samples) {
  if (samples.size() != grid.N + 1)
    throw std::invalid_argument("spectral_derivative: sample length mismatch");
  return grid.diff * samples;
}

/// Clenshaw-Curtis integral of a sample vector over [-L, L].
inline double integrate(const ChebGrid& grid, const Eigen::VectorXd& samples) {
  if (samples.size() != grid.N + 1)
    throw std::invalid_argument("integrate: sample length mismatch");
  return grid.weights.dot(samples);
}

inline std::complex<double> integrate(const ChebGrid& grid,
                                      const Eigen::VectorXcd& samples) {
  if (samples.size() != grid.N + 1)
    throw std::invalid_argument("integrate: sample length mismatch");
  return {grid.weights.dot(samples.real()), grid.weights.dot(samples.imag())};
}

} // namespace gapspec
