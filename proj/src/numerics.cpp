#include "oscmod/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oscmod {

double op_norm(const Eigen::MatrixXcd& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues()(0);
}

int numerical_rank(const Eigen::MatrixXcd& a, double rel_tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = rel_tol * sv(0);
  int r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return r;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

Eigen::MatrixXd spd_power(const Eigen::MatrixXd& g, double p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("spd_power: matrix is not positive definite");
  Eigen::VectorXd d = es.eigenvalues().array().pow(p);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Eigen::MatrixXd sqrt_spd(const Eigen::MatrixXd& g) { return spd_power(g, 0.5); }
Eigen::MatrixXd inv_sqrt_spd(const Eigen::MatrixXd& g) { return spd_power(g, -0.5); }

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over seed + stream
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0,1], keeps log finite
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

Complex Rng::cgaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return {re, im};
}

Eigen::VectorXd Rng::gaussian_vector(int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = gaussian();
  return v;
}

Eigen::VectorXcd Rng::cgaussian_vector(int n) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = cgaussian();
  return v;
}

Eigen::MatrixXcd Rng::cgaussian_matrix(int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = cgaussian();
  return m;
}

Eigen::MatrixXd Rng::spd_matrix(int n) {
  Eigen::MatrixXd a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = gaussian();
  return a * a.transpose() / n + 0.5 * Eigen::MatrixXd::Identity(n, n);
}

Eigen::VectorXd Rng::unit_vector(int n) {
  Eigen::VectorXd v = gaussian_vector(n);
  double norm = v.norm();
  while (norm < 1e-8) {  // astronomically unlikely, but keep it total
    v = gaussian_vector(n);
    norm = v.norm();
  }
  return v / norm;
}

}  // namespace oscmod
