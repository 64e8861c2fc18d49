#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>

namespace oscmod {

using Complex = std::complex<double>;

/// Largest singular value.
double op_norm(const Eigen::MatrixXcd& a);

/// Number of singular values above rel_tol times the largest one.
int numerical_rank(const Eigen::MatrixXcd& a, double rel_tol = 1e-8);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Symmetric square root / inverse square root of a positive definite matrix.
Eigen::MatrixXd sqrt_spd(const Eigen::MatrixXd& g);
Eigen::MatrixXd inv_sqrt_spd(const Eigen::MatrixXd& g);

/// Deterministic random source.  Streams derived from the same seed are
/// reproducible across platforms: the generator is the fully specified
/// mt19937_64 and the gaussian transform is hand-rolled Box-Muller rather
/// than the implementation-defined std::normal_distribution.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent child stream; stable under reordering of sibling draws.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

  double uniform();                      // [0,1)
  double uniform(double lo, double hi);  // [lo,hi)
  double gaussian();
  Complex cgaussian();

  Eigen::VectorXd gaussian_vector(int n);
  Eigen::VectorXcd cgaussian_vector(int n);
  Eigen::MatrixXcd cgaussian_matrix(int rows, int cols);

  /// Random symmetric positive definite matrix with spectrum bounded away
  /// from zero.
  Eigen::MatrixXd spd_matrix(int n);

  /// Gaussian direction normalized to unit Euclidean length.
  Eigen::VectorXd unit_vector(int n);

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace oscmod
