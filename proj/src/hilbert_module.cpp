#include "oscmod/hilbert_module.hpp"

#include <cmath>
#include <stdexcept>

namespace oscmod {

namespace {

double rel_residual(const Eigen::MatrixXcd& lhs, const Eigen::MatrixXcd& rhs) {
  const double scale = std::max(op_norm(lhs), op_norm(rhs));
  if (scale == 0.0) return 0.0;
  return op_norm(Eigen::MatrixXcd(lhs - rhs)) / scale;
}

}  // namespace

ModuleElement::ModuleElement(int dim2n, int n_dof, int cutoff)
    : dim2n_(dim2n), n_dof_(n_dof), cutoff_(cutoff) {
  FormBasis fb(dim2n);
  const HVector probe(n_dof, cutoff);
  comps_ = Eigen::MatrixXcd::Zero(fb.total_dim(), probe.dim());
}

ModuleElement ModuleElement::homogeneous(const Form& alpha, const HVector& k) {
  ModuleElement u(alpha.dim2n(), k.n_dof(), k.cutoff());
  const FormBasis& fb = alpha.basis();
  const int off = fb.degree_offset(alpha.degree());
  for (int i = 0; i < fb.degree_dim(alpha.degree()); ++i)
    u.comps_.row(off + i) = alpha[i] * k.coeffs().transpose();
  return u;
}

HVector ModuleElement::component(int full_rank) const {
  return HVector(n_dof_, cutoff_, comps_.row(full_rank).transpose());
}

ModuleElement& ModuleElement::operator+=(const ModuleElement& o) {
  if (o.dim2n_ != dim2n_ || o.h_dim() != h_dim())
    throw std::invalid_argument("ModuleElement: shape mismatch");
  comps_ += o.comps_;
  return *this;
}

ModuleElement& ModuleElement::operator-=(const ModuleElement& o) {
  if (o.dim2n_ != dim2n_ || o.h_dim() != h_dim())
    throw std::invalid_argument("ModuleElement: shape mismatch");
  comps_ -= o.comps_;
  return *this;
}

ModuleElement operator+(ModuleElement a, const ModuleElement& b) { return a += b; }
ModuleElement operator-(ModuleElement a, const ModuleElement& b) { return a -= b; }

ModuleElement operator*(Complex s, ModuleElement u) {
  u.components() *= s;
  return u;
}

ModuleElement a_action(const AlgebraElement& a, const ModuleElement& u) {
  if (a.dim() != u.h_dim())
    throw std::invalid_argument("a_action: dimension mismatch");
  ModuleElement out = u;
  out.components() = u.components() * a.matrix().transpose();
  return out;
}

AlgebraElement a_product(const ModuleElement& u, const ModuleElement& v,
                         const Metric& g) {
  if (u.dim2n() != v.dim2n() || u.h_dim() != v.h_dim() ||
      u.dim2n() != g.dim2n())
    throw std::invalid_argument("a_product: dimension mismatch");
  const Eigen::MatrixXd gram = full_gram(g);
  return AlgebraElement(u.components().transpose() * gram *
                        v.components().conjugate());
}

double module_norm(const ModuleElement& u, const Metric& g) {
  return std::sqrt(op_norm(a_product(u, u, g)));
}

std::vector<ModuleElement> generators(int dim2n, int n_dof, int cutoff) {
  FormBasis fb(dim2n);
  std::vector<ModuleElement> out;
  out.reserve(fb.total_dim());
  for (int i = 0; i < fb.total_dim(); ++i) {
    ModuleElement u(dim2n, n_dof, cutoff);
    u.components()(i, 0) = 1.0;  // U_i (x) e_0
    out.push_back(std::move(u));
  }
  return out;
}

GenerationResult generation_solve(const ModuleElement& u) {
  GenerationResult res;
  const HVector e0 = HVector::basis(u.n_dof(), u.cutoff(), 0);
  ModuleElement recon(u.dim2n(), u.n_dof(), u.cutoff());
  for (int i = 0; i < u.form_dim(); ++i) {
    const AlgebraElement a = rank_one(u.component(i), e0);
    recon.components().row(i) = (a.matrix() * e0.coeffs()).transpose();
    res.coefficients.push_back(a);
  }
  res.residual = module_norm(recon - u, Metric::identity(u.dim2n()));
  return res;
}

ModuleMorphism::ModuleMorphism(Eigen::MatrixXcd form_part)
    : form_part_(std::move(form_part)) {
  if (form_part_.rows() != form_part_.cols())
    throw std::invalid_argument("ModuleMorphism: form part must be square");
}

ModuleMorphism ModuleMorphism::identity(int dim2n) {
  FormBasis fb(dim2n);
  return ModuleMorphism(
      Eigen::MatrixXcd::Identity(fb.total_dim(), fb.total_dim()));
}

ModuleElement apply(const ModuleMorphism& b, const ModuleElement& u) {
  if (b.form_dim() != u.form_dim())
    throw std::invalid_argument("apply: morphism/element shape mismatch");
  ModuleElement out = u;
  out.components() = b.form_part() * u.components();
  return out;
}

ModuleMorphism morphism_adjoint(const ModuleMorphism& b, const Metric& g) {
  const Eigen::MatrixXd gram = full_gram(g);
  if (gram.rows() != b.form_dim())
    throw std::invalid_argument("morphism_adjoint: dimension mismatch");
  // (Bu,v) = (u,B*v) with the sesquilinear Gram pairing forces
  // B* = G^{-1} B^dagger G.
  const Eigen::MatrixXcd gc = gram.cast<Complex>();
  return ModuleMorphism(gc.lu().solve(b.form_part().adjoint() * gc));
}

SplitReport mishchenko_split(const ModuleMorphism& b, const Metric& g,
                             int n_dof, int cutoff, double tol,
                             std::uint64_t seed, int probes) {
  const Eigen::MatrixXd gram = full_gram(g);
  const int fdim = b.form_dim();
  if (gram.rows() != fdim)
    throw std::invalid_argument("mishchenko_split: dimension mismatch");

  // Whiten so the Gram pairing becomes the standard one; there the adjoint
  // is the conjugate transpose and the SVD hands us both summands.
  const Eigen::MatrixXd w = sqrt_spd(gram);
  const Eigen::MatrixXd winv = inv_sqrt_spd(gram);
  const Eigen::MatrixXcd bw = w * b.form_part() * winv;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(bw, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  if (sv.size() > 0 && sv(0) > 0.0)
    while (rank < sv.size() && sv(rank) > tol * sv(0)) ++rank;

  SplitReport rep;
  rep.coimage_basis = winv * svd.matrixV().leftCols(rank);
  rep.kernel_basis = winv * svd.matrixV().rightCols(fdim - rank);
  rep.dims_add = (rank + (fdim - rank)) == fdim;

  const double bnorm = op_norm(b.form_part());
  rep.kernel_defect =
      bnorm == 0.0
          ? 0.0
          : op_norm(Eigen::MatrixXcd(b.form_part() * rep.kernel_basis)) / bnorm;

  // Probe with random module elements: project onto the two summands in
  // whitened coordinates, re-sum, and measure the module-norm defect.
  Rng rng(seed);
  const Eigen::MatrixXcd vker = svd.matrixV().rightCols(fdim - rank);
  const Eigen::MatrixXcd vim = svd.matrixV().leftCols(rank);
  const int hdim = HVector(n_dof, cutoff).dim();
  double worst = 0.0;
  double worst_orth = 0.0;
  for (int p = 0; p < probes; ++p) {
    const Eigen::MatrixXcd comps = rng.cgaussian_matrix(fdim, hdim);
    const Eigen::MatrixXcd tilde = w * comps;
    const Eigen::MatrixXcd ker_part = vker * (vker.adjoint() * tilde);
    const Eigen::MatrixXcd im_part = vim * (vim.adjoint() * tilde);
    const Eigen::MatrixXcd defect = tilde - ker_part - im_part;
    const double scale = op_norm(tilde);
    if (scale > 0.0) worst = std::max(worst, op_norm(defect) / scale);

    // A-orthogonality of the two summands under the Gram pairing.
    const Eigen::MatrixXcd uk = winv * ker_part;
    const Eigen::MatrixXcd ui = winv * im_part;
    const Eigen::MatrixXcd cross = uk.transpose() * gram * ui.conjugate();
    const double denom = op_norm(uk.transpose() * gram * uk.conjugate()) +
                         op_norm(ui.transpose() * gram * ui.conjugate());
    if (denom > 0.0)
      worst_orth = std::max(worst_orth, op_norm(cross) / denom);
  }
  rep.reconstruction_residual = worst;
  rep.orthogonality_defect = worst_orth;
  return rep;
}

namespace {

ModuleElement random_element(Rng& rng, int dim2n, int n_dof, int cutoff) {
  ModuleElement u(dim2n, n_dof, cutoff);
  u.components() = rng.cgaussian_matrix(u.form_dim(), u.h_dim());
  return u;
}

}  // namespace

AxiomReport axiom_suite(std::uint64_t seed, int samples, const Metric& g,
                        int n_dof, int cutoff) {
  if (samples < 1) throw std::invalid_argument("axiom_suite: samples must be >= 1");
  const int dim2n = g.dim2n();
  AxiomReport rep;
  rep.samples = samples;
  rep.identities = {
      {"a_compat_first_slot", 0.0},   // (a.u, v) = a (u,v)
      {"a_compat_second_slot", 0.0},  // (u, a.v) = (u,v) a*
      {"scalar_linearity", 0.0},      // (r.u, v) = r (u,v)
      {"hermitian_symmetry", 0.0},    // (u,v)* = (v,u)
      {"positivity", 0.0},            // (u,u) >= 0
      {"nondegeneracy", 0.0},         // (u,u) = 0 iff u = 0
  };

  const int hdim = HVector(n_dof, cutoff).dim();
  const Eigen::MatrixXd gram = full_gram(g);
  const double gram_min = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram)
                              .eigenvalues()
                              .minCoeff();

  for (int s = 0; s < samples; ++s) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(s)));
    const ModuleElement u = random_element(rng, dim2n, n_dof, cutoff);
    const ModuleElement v = random_element(rng, dim2n, n_dof, cutoff);
    const AlgebraElement a(rng.cgaussian_matrix(hdim, hdim));
    const Complex r = rng.cgaussian();

    const AlgebraElement uv = a_product(u, v, g);
    auto& ids = rep.identities;

    ids[0].max_residual = std::max(
        ids[0].max_residual,
        rel_residual(a_product(a_action(a, u), v, g).matrix(),
                     (a * uv).matrix()));
    ids[1].max_residual = std::max(
        ids[1].max_residual,
        rel_residual(a_product(u, a_action(a, v), g).matrix(),
                     (uv * star(a)).matrix()));
    ids[2].max_residual =
        std::max(ids[2].max_residual,
                 rel_residual(a_product(r * u, v, g).matrix(),
                              (r * uv).matrix()));
    ids[3].max_residual =
        std::max(ids[3].max_residual,
                 rel_residual(star(uv).matrix(), a_product(v, u, g).matrix()));

    const AlgebraElement uu = a_product(u, u, g);
    const PositivityWitness w = is_positive(uu, 1e-10);
    const double scale = std::max(w.norm, 1e-300);
    ids[4].max_residual =
        std::max(ids[4].max_residual,
                 std::max(w.hermitian_defect, std::max(0.0, -w.min_eigenvalue)) /
                     scale);

    // (u,u) dominates gram_min * C C^dagger, so the norm cannot collapse
    // while coefficients survive.
    const double lower = gram_min * u.components().squaredNorm() /
                         std::min(u.form_dim(), hdim);
    if (lower > 0.0)
      ids[5].max_residual =
          std::max(ids[5].max_residual,
                   std::max(0.0, (lower - op_norm(uu)) / lower));

    const double cs =
        op_norm(uv) - module_norm(u, g) * module_norm(v, g);
    rep.cauchy_schwarz_excess =
        std::max(rep.cauchy_schwarz_excess,
                 cs / std::max(module_norm(u, g) * module_norm(v, g), 1e-300));

    rep.generation_residual =
        std::max(rep.generation_residual, generation_solve(u).residual);
  }

  // The zero element closes the nondegeneracy check.
  const ModuleElement zero(dim2n, n_dof, cutoff);
  if (module_norm(zero, g) != 0.0) rep.identities[5].max_residual = 1.0;

  return rep;
}

}  // namespace oscmod
