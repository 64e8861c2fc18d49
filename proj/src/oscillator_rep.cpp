#include "oscmod/oscillator_rep.hpp"

#include <cmath>
#include <stdexcept>

namespace oscmod {

SpElement::SpElement(Eigen::MatrixXd s, double tol) : s_(std::move(s)) {
  if (s_.rows() != s_.cols() || s_.rows() < 2 || s_.rows() % 2 != 0)
    throw std::invalid_argument("SpElement: matrix must be square of even size");
  const Eigen::MatrixXd j = symplectic_form(static_cast<int>(s_.rows()));
  const double scale = std::max(1.0, s_.cwiseAbs().maxCoeff());
  const double defect =
      (s_.transpose() * j + j * s_).cwiseAbs().maxCoeff();
  if (defect > tol * scale)
    throw std::invalid_argument("SpElement: S^T J + J S != 0");
}

Eigen::MatrixXd SpElement::symplectic_form(int dim2n) {
  const int n = dim2n / 2;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(dim2n, dim2n);
  j.block(0, n, n, n) = Eigen::MatrixXd::Identity(n, n);
  j.block(n, 0, n, n) = -Eigen::MatrixXd::Identity(n, n);
  return j;
}

SpElement SpElement::random(Rng& rng, int dim2n) {
  // Block parametrization [[A, B], [C, -A^T]] with B, C symmetric.
  const int n = dim2n / 2;
  Eigen::MatrixXd a(n, n), b(n, n), c(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      a(i, j) = rng.gaussian();
      b(i, j) = rng.gaussian();
      c(i, j) = rng.gaussian();
    }
  b = 0.5 * (b + b.transpose()).eval();
  c = 0.5 * (c + c.transpose()).eval();
  Eigen::MatrixXd s(dim2n, dim2n);
  s.block(0, 0, n, n) = a;
  s.block(0, n, n, n) = b;
  s.block(n, 0, n, n) = c;
  s.block(n, n, n, n) = -a.transpose();
  return SpElement(std::move(s));
}

SpElement sp_bracket(const SpElement& a, const SpElement& b) {
  return SpElement(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

int LadderSet::h_dim() const {
  int d = 1;
  for (int i = 0; i < n_dof; ++i) d *= cutoff;
  return d;
}

std::vector<int> LadderSet::interior_indices() const {
  std::vector<int> out;
  const int top = cutoff - 3;
  for (int flat = 0; flat < h_dim(); ++flat) {
    int rest = flat;
    bool interior = true;
    for (int a = 0; a < n_dof; ++a) {
      if (rest % cutoff > top) interior = false;
      rest /= cutoff;
    }
    if (interior) out.push_back(flat);
  }
  return out;
}

LadderSet ladder_matrices(int n_dof, int cutoff) {
  if (cutoff < 2) throw std::invalid_argument("ladder_matrices: cutoff must be >= 2");
  if (n_dof < 1) throw std::invalid_argument("ladder_matrices: n_dof must be >= 1");

  // Single-dof ladders: x h_j = sqrt((j+1)/2) h_{j+1} + sqrt(j/2) h_{j-1},
  // d/dx h_j = -sqrt((j+1)/2) h_{j+1} + sqrt(j/2) h_{j-1}.
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(cutoff, cutoff);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(cutoff, cutoff);
  for (int j = 0; j + 1 < cutoff; ++j) {
    const double up = std::sqrt((j + 1) / 2.0);
    x(j + 1, j) = up;
    x(j, j + 1) = up;
    d(j + 1, j) = -up;
    d(j, j + 1) = up;
  }

  LadderSet set;
  set.n_dof = n_dof;
  set.cutoff = cutoff;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(cutoff, cutoff);
  for (int a = 0; a < n_dof; ++a) {
    Eigen::MatrixXcd xa = (a == 0) ? x : id;
    Eigen::MatrixXcd da = (a == 0) ? d : id;
    for (int b = 1; b < n_dof; ++b) {
      xa = kron(xa, (b == a) ? x : id);
      da = kron(da, (b == a) ? d : id);
    }
    set.position.push_back(std::move(xa));
    set.derivative.push_back(std::move(da));
  }
  return set;
}

Eigen::MatrixXcd interior_compress(const Eigen::MatrixXcd& m,
                                   const LadderSet& ladders) {
  const auto idx = ladders.interior_indices();
  Eigen::MatrixXcd out(idx.size(), idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) out(r, c) = m(idx[r], idx[c]);
  return out;
}

double interior_norm(const Eigen::MatrixXcd& m, const LadderSet& ladders) {
  return op_norm(interior_compress(m, ladders));
}

AlgebraElement quantize(const SpElement& s, const LadderSet& ladders) {
  const int dim2n = s.dim2n();
  if (dim2n != 2 * ladders.n_dof)
    throw std::invalid_argument("quantize: sp dimension does not match ladders");
  const int n = ladders.n_dof;
  const int hdim = ladders.h_dim();

  // omega(Sz, z) = z^T Q z with Q = S^T J symmetric; substitute
  // z = (X_1..X_n, P_1..P_n), P_a = -i D_a.  Summing Q_ab Z_a Z_b over all
  // ordered pairs is already the symmetric ordering.
  const Eigen::MatrixXd q =
      s.matrix().transpose() * SpElement::symplectic_form(dim2n);
  std::vector<Eigen::MatrixXcd> z;
  z.reserve(dim2n);
  for (int a = 0; a < n; ++a) z.push_back(ladders.position[a]);
  for (int a = 0; a < n; ++a)
    z.push_back(Complex(0, -1) * ladders.derivative[a]);

  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(hdim, hdim);
  for (int a = 0; a < dim2n; ++a)
    for (int b = 0; b < dim2n; ++b) {
      if (q(a, b) == 0.0) continue;
      op += q(a, b) * (z[a] * z[b]);
    }
  return AlgebraElement(Complex(0, -0.5) * op);
}

double commutator_defect(const SpElement& s1, const SpElement& s2,
                         const LadderSet& ladders) {
  const AlgebraElement r1 = quantize(s1, ladders);
  const AlgebraElement r2 = quantize(s2, ladders);
  const AlgebraElement rb = quantize(sp_bracket(s1, s2), ladders);
  const Eigen::MatrixXcd defect = r1.matrix() * r2.matrix() -
                                  r2.matrix() * r1.matrix() - rb.matrix();
  return interior_norm(defect, ladders);
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> parity_projectors(
    const LadderSet& ladders) {
  const int hdim = ladders.h_dim();
  Eigen::MatrixXcd even = Eigen::MatrixXcd::Zero(hdim, hdim);
  Eigen::MatrixXcd odd = Eigen::MatrixXcd::Zero(hdim, hdim);
  for (int flat = 0; flat < hdim; ++flat) {
    int total = 0;
    int rest = flat;
    for (int a = 0; a < ladders.n_dof; ++a) {
      total += rest % ladders.cutoff;
      rest /= ladders.cutoff;
    }
    if (total % 2 == 0)
      even(flat, flat) = 1.0;
    else
      odd(flat, flat) = 1.0;
  }
  return {even, odd};
}

}  // namespace oscmod
