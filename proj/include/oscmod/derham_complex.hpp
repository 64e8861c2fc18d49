#pragma once

#include <optional>
#include <vector>

#include "oscmod/exterior_algebra.hpp"
#include "oscmod/hilbert_module.hpp"
#include "oscmod/oscillator_rep.hpp"

namespace oscmod {

/// Flat 2n-torus with unit volume, Fourier modes |m|_inf <= M, a constant
/// tangent metric and constant symplectic form, and the Hermite-truncated
/// oscillator fiber H_N with n = dim2n/2 degrees of freedom.
class TorusModel {
public:
  TorusModel(int dim2n, int fourier_cutoff, int hermite_cutoff,
             Metric metric, std::optional<Eigen::MatrixXd> sympl = {});
  static TorusModel standard(int dim2n, int fourier_cutoff, int hermite_cutoff);

  int dim2n() const { return dim2n_; }
  int fourier_cutoff() const { return fourier_cutoff_; }
  int hermite_cutoff() const { return hermite_cutoff_; }
  int n_dof() const { return dim2n_ / 2; }
  int h_dim() const;
  const Metric& metric() const { return metric_; }
  const Eigen::MatrixXd& symplectic() const { return sympl_; }

  int mode_count() const;
  /// All modes in [-M,M]^{2n}, lexicographic, fixed for the whole assembly.
  const std::vector<Eigen::VectorXi>& modes() const { return modes_; }

  int degree_dim(int k) const;
  int section_dim(int k) const;  // mode_count * C(2n,k) * N^n

private:
  int dim2n_, fourier_cutoff_, hermite_cutoff_;
  Metric metric_;
  Eigen::MatrixXd sympl_;
  std::vector<Eigen::VectorXi> modes_;
};

/// Constant-coefficient flat connection on the trivialized bundle.
class ConnectionSpec {
public:
  enum class Variant { Trivial, LineTwist, RepTwist };

  static ConnectionSpec trivial();
  static ConnectionSpec line_twist(Eigen::VectorXd c);
  /// Requires pairwise commuting generators so the curvature term vanishes.
  static ConnectionSpec rep_twist(std::vector<SpElement> generators,
                                  double tol = 1e-12);

  Variant variant() const { return variant_; }
  const Eigen::VectorXd& line_coeffs() const { return line_coeffs_; }
  const std::vector<SpElement>& generators() const { return generators_; }

  /// The fiberwise A-action commutes with the connection term only for the
  /// trivial and line variants.
  bool a_linear() const { return variant_ != Variant::RepTwist; }

private:
  ConnectionSpec() = default;
  Variant variant_ = Variant::Trivial;
  Eigen::VectorXd line_coeffs_;
  std::vector<SpElement> generators_;
};

/// Connection coefficient operators C_a on H_N, one per coordinate direction.
std::vector<Eigen::MatrixXcd> connection_operators(const ConnectionSpec& spec,
                                                   const TorusModel& model);

/// Norm of the Gamma ^ Gamma curvature term, measured on the Hermite
/// interior block for quantized generators; zero for trivial and line twists.
double curvature_norm(const ConnectionSpec& spec, const LadderSet& ladders);

/// Fourier-truncated section of degree-k bundle-valued forms.  Coefficients
/// are stored mode-major, then form index, then Hermite index.
class FourierSection {
public:
  FourierSection(const TorusModel& model, int degree);

  int degree() const { return degree_; }
  int dim() const { return static_cast<int>(coeffs_.size()); }
  Eigen::VectorXcd& coeffs() { return coeffs_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }

  int index(int mode_idx, int form_rank, int hermite) const;
  /// The C(2n,k) x N^n coefficient block of one mode.
  Eigen::MatrixXcd mode_block(int mode_idx) const;
  void set_mode_block(int mode_idx, const Eigen::MatrixXcd& block);

private:
  int degree_, form_dim_, h_dim_;
  Eigen::VectorXcd coeffs_;
};

/// One mode block of the exterior covariant derivative on degree k:
/// sum_a ext_{dx^a} (x) (2 pi i m_a Id + C_a).  Real-valued modes are
/// accepted so the symbol can be extracted by differencing.
Eigen::MatrixXcd d_mode_block(int k, const Eigen::VectorXd& mode,
                              const std::vector<Eigen::MatrixXcd>& conn_ops,
                              const TorusModel& model);

/// Full block-diagonal matrix of the plain exterior derivative (trivial
/// connection) on degree k.
Eigen::MatrixXcd exterior_derivative(int k, const TorusModel& model);

/// Full block-diagonal matrix of d^nabla on degree k.
Eigen::MatrixXcd d_nabla(int k, const ConnectionSpec& spec,
                         const TorusModel& model);

/// A-valued product of equal-degree sections; Fourier modes are orthonormal
/// at unit torus volume.
AlgebraElement section_a_product(const FourierSection& s,
                                 const FourierSection& t,
                                 const TorusModel& model);

/// Sobolev-style Gram matrix on degree-k sections: weight (1+4 pi^2 |m|^2)^t
/// per mode, tensored with the degree-k form Gram and the Hermite identity.
Eigen::MatrixXd sobolev_gram(int t, int k, const ConnectionSpec& spec,
                             const TorusModel& model);
double sobolev_norm(const FourierSection& s, int t, const TorusModel& model);

/// Assembled complex: per degree, per mode, the derivative, its Gram
/// adjoint, and the Laplacian block.
struct ComplexAssembly {
  TorusModel model;
  ConnectionSpec spec;
  int sobolev_index = 0;

  // indexed [degree k][mode]
  std::vector<std::vector<Eigen::MatrixXcd>> d;
  std::vector<std::vector<Eigen::MatrixXcd>> d_adjoint;
  std::vector<std::vector<Eigen::MatrixXcd>> laplacian;

  Eigen::MatrixXcd full_d(int k) const;
  Eigen::MatrixXcd full_adjoint(int k) const;
  Eigen::MatrixXcd full_laplacian(int k) const;

  /// Max hermiticity defect of the Laplacians under the Gram form.
  double laplacian_hermiticity_defect() const;
};

ComplexAssembly assemble_complex(const ConnectionSpec& spec,
                                 const TorusModel& model,
                                 int sobolev_index = 0);

/// Norm of d_{k+1} d_k, maximized over degrees and modes.  For rep twists
/// the Hermite factor is compressed to the interior block first; quadratic
/// twists are exact only two levels below the cutoff.
double complex_defect(const ComplexAssembly& assembly);

struct HarmonicReport {
  int degree = 0;
  int complex_dim = 0;     // eigenvalues below threshold
  int a_rank = -1;         // complex_dim / N^n when the kernel is A-invariant
  bool product_form = false;
  double gap = 0.0;        // smallest eigenvalue above threshold
  bool stable = false;     // counts agree at threshold x10 and /10
};

HarmonicReport harmonic_rank(const ComplexAssembly& assembly, int k,
                             double tol_rel = 1e-8);

/// dim Ker d_k - rank d_{k-1}; zero outside [0,2n].
int cohomology_rank(const ComplexAssembly& assembly, int k,
                    double rank_tol = 1e-8);

struct SymbolReport {
  int samples = 0;
  int zero_flagged = 0;      // xi = 0 samples, excluded from the verdict
  bool rank_law_ok = true;   // rank sigma_k = C(2n-1,k) N^n for xi != 0
  double complex_defect = 0.0;
  double adjoint_residual = 0.0;
  double extraction_residual = 0.0;
  bool a_elliptic = false;
};

/// Fiberwise exactness of the symbol sequence sigma_k = ext_xi (x) Id,
/// the adjoint identity against iota (x) Id, and agreement of the extracted
/// mode-linear part of d^nabla with the symbol.
SymbolReport symbol_report(const ConnectionSpec& spec, const TorusModel& model,
                           const std::vector<Covector>& xi_samples,
                           double tol_rank = 1e-8);

}  // namespace oscmod
