#pragma once

#include <filesystem>
#include <string>

#include "oscmod/numerics.hpp"

namespace oscmod {

/// Element of the truncated oscillator space H_N: tensor-product Hermite
/// coefficients, N per degree of freedom.
class HVector {
public:
  HVector(int n_dof, int cutoff);
  HVector(int n_dof, int cutoff, Eigen::VectorXcd coeffs);
  static HVector basis(int n_dof, int cutoff, int flat_index);

  int n_dof() const { return n_dof_; }
  int cutoff() const { return cutoff_; }
  int dim() const { return static_cast<int>(coeffs_.size()); }
  Eigen::VectorXcd& coeffs() { return coeffs_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }

private:
  int n_dof_;
  int cutoff_;
  Eigen::VectorXcd coeffs_;
};

/// Scalar product on H, conjugate-linear in the first slot.
Complex h_inner(const HVector& k, const HVector& l);
double h_norm(const HVector& k);

/// Element of A_N = End(H_N).
class AlgebraElement {
public:
  explicit AlgebraElement(Eigen::MatrixXcd m);
  static AlgebraElement identity(int dim);
  static AlgebraElement zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return m_; }

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);

private:
  Eigen::MatrixXcd m_;
};

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(Complex s, AlgebraElement a);

/// Adjoint of endomorphisms; the star of the algebra.
AlgebraElement star(const AlgebraElement& a);

/// Supremum norm of the endomorphism = largest singular value.
double op_norm(const AlgebraElement& a);

/// k (x) l*: the map m -> (l,m)_H k.  Linear in k, conjugate-linear in l.
AlgebraElement rank_one(const HVector& k, const HVector& l);

HVector apply(const AlgebraElement& a, const HVector& v);

struct PositivityWitness {
  bool positive = false;
  double hermitian_defect = 0.0;  // |a - a*|
  double min_eigenvalue = 0.0;    // of the hermitian part
  double norm = 0.0;              // |a|, the scale of the test
};

/// a >= 0 in the order of the algebra: hermitian up to tol*|a| and the
/// spectrum of the hermitian part above -tol*|a|.
PositivityWitness is_positive(const AlgebraElement& a, double tol);

/// Ascending real eigenvalues; throws when the hermitian defect exceeds
/// rel_tol * |a|.
Eigen::VectorXd hermitian_spectrum(const AlgebraElement& a,
                                   double rel_tol = 1e-10);

/// JSON matrix exchange format: dims header plus row-major [re,im] pairs.
std::string matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const std::string& text);
void save_matrix_json(const Eigen::MatrixXcd& m, const std::filesystem::path& path);
Eigen::MatrixXcd load_matrix_json(const std::filesystem::path& path);

}  // namespace oscmod
