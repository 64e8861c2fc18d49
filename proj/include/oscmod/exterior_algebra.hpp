#pragma once

#include <initializer_list>
#include <vector>

#include "oscmod/combinatorics.hpp"
#include "oscmod/numerics.hpp"

namespace oscmod {

/// Strictly increasing tuple of generator indices in {1,...,2n}.
class FormBasisIndex {
public:
  FormBasisIndex(int dim2n, std::vector<int> indices);
  static FormBasisIndex from_mask(int dim2n, std::uint32_t m);

  int dim2n() const { return dim2n_; }
  int degree() const { return static_cast<int>(indices_.size()); }
  const std::vector<int>& indices() const { return indices_; }
  std::uint32_t mask() const;

private:
  int dim2n_;
  std::vector<int> indices_;
};

/// Complex k-form on R^{2n}: one coefficient per degree-k basis index, in the
/// FormBasis ordering.
class Form {
public:
  Form(int dim2n, int degree);  // zero form
  static Form basis_form(int dim2n, std::initializer_list<int> indices);

  int dim2n() const { return basis_.dim2n(); }
  int degree() const { return degree_; }
  const FormBasis& basis() const { return basis_; }

  Complex operator[](int rank) const { return coeffs_(rank); }
  Eigen::VectorXcd& coeffs() { return coeffs_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }

  Form& operator+=(const Form& o);

private:
  FormBasis basis_;
  int degree_;
  Eigen::VectorXcd coeffs_;
};

Form operator+(Form a, const Form& b);
Form operator-(const Form& a, const Form& b);
Form operator*(Complex s, Form f);

/// Positive definite scalar product on V = R^{2n}; the inverse acts on V*.
class Metric {
public:
  explicit Metric(Eigen::MatrixXd g);
  static Metric identity(int dim2n);

  int dim2n() const { return static_cast<int>(g_.rows()); }
  const Eigen::MatrixXd& matrix() const { return g_; }
  const Eigen::MatrixXd& inverse() const { return inv_; }

private:
  Eigen::MatrixXd g_;
  Eigen::MatrixXd inv_;
};

struct Covector {
  Eigen::VectorXd components;
};

struct Vector {
  Eigen::VectorXd components;
};

/// Graded-anticommutative product with shuffle signs.  Degrees beyond 2n
/// collapse to the canonical degree-0 zero form.
Form wedge(const Form& a, const Form& b);

/// Contraction by a vector; antiderivation of degree -1.
Form interior(const Vector& v, const Form& a);

/// The g-dual vector of a covector, xi(v) = g(xi^g, v).
Vector sharp(const Covector& xi, const Metric& g);

/// Gram-determinant extension of g^{-1} to degree-k forms; sesquilinear,
/// conjugate-linear in the second slot.  Forms of different degree are
/// orthogonal.
Complex form_metric(const Metric& g, const Form& a, const Form& b);

/// Gram matrix of the degree-k basis forms under form_metric.
Eigen::MatrixXd degree_gram(const Metric& g, int k);
/// Block-diagonal Gram over all degrees, in the stacked FormBasis order.
Eigen::MatrixXd full_gram(const Metric& g);

/// Matrix of alpha -> xi ^ alpha from degree k to k+1, canonical bases.
Eigen::MatrixXcd ext_matrix(const Covector& xi, int k);
/// Matrix of alpha -> iota_v alpha from degree k to k-1.
Eigen::MatrixXcd interior_matrix(const Vector& v, int k);
/// Degree-raising map assembled over the whole exterior algebra.
Eigen::MatrixXcd full_ext_matrix(const Covector& xi);
Eigen::MatrixXcd full_interior_matrix(const Vector& v);

struct CartanReport {
  int dim2n = 0;
  std::vector<int> ranks;     // rank(ext_k), k = 0..2n-1
  std::vector<int> expected;  // C(2n-1,k)
  bool exact = false;
  double cartan_identity_residual = 0.0;
};

/// Numerical ranks of the multiplication complex and the exactness verdict;
/// the verdict is false for xi = 0.
CartanReport cartan_report(const Covector& xi, const Metric& g,
                           double rank_tol = 1e-8);

}  // namespace oscmod
