#pragma once

#include <utility>
#include <vector>

#include "oscmod/cstar_algebra.hpp"
#include "oscmod/numerics.hpp"

namespace oscmod {

/// Element of sp(2n,R): S^T J + J S = 0 with J the standard symplectic
/// matrix in (q_1..q_n, p_1..p_n) coordinates.
class SpElement {
public:
  explicit SpElement(Eigen::MatrixXd s, double tol = 1e-12);

  static Eigen::MatrixXd symplectic_form(int dim2n);
  static SpElement random(Rng& rng, int dim2n);

  int dim2n() const { return static_cast<int>(s_.rows()); }
  const Eigen::MatrixXd& matrix() const { return s_; }

private:
  Eigen::MatrixXd s_;
};

SpElement sp_bracket(const SpElement& a, const SpElement& b);

/// Position and differentiation matrices in the tensor-product Hermite basis
/// of H_N, one pair per degree of freedom.
struct LadderSet {
  int n_dof = 0;
  int cutoff = 0;
  std::vector<Eigen::MatrixXcd> position;    // X_a, hermitian
  std::vector<Eigen::MatrixXcd> derivative;  // D_a, anti-hermitian

  int h_dim() const;
  /// Flat Hermite indices with every per-dof index at most cutoff-3; the
  /// block on which quadratic-operator identities hold exactly.
  std::vector<int> interior_indices() const;
};

LadderSet ladder_matrices(int n_dof, int cutoff);

/// Principal submatrix on the interior indices.
Eigen::MatrixXcd interior_compress(const Eigen::MatrixXcd& m,
                                   const LadderSet& ladders);
double interior_norm(const Eigen::MatrixXcd& m, const LadderSet& ladders);

/// Infinitesimal oscillator action: S -> -(i/2) Weyl(omega(Sz,z)) with the
/// quadratic evaluated in (X_1..X_n, -iD_1..-iD_n).  Normalized so that
/// commutators represent the sp bracket on the interior block.
AlgebraElement quantize(const SpElement& s, const LadderSet& ladders);

/// Interior-block norm of [rho(S1), rho(S2)] - rho([S1,S2]).
double commutator_defect(const SpElement& s1, const SpElement& s2,
                         const LadderSet& ladders);

/// Projectors onto even and odd total Hermite parity.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> parity_projectors(
    const LadderSet& ladders);

}  // namespace oscmod
