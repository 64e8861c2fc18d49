#include "oscmod/derham_complex.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oscmod {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::MatrixXd kron_real(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Principal submatrix keeping only the listed Hermite indices in a
/// (form (x) Hermite)-indexed matrix.
Eigen::MatrixXcd compress_hermite(const Eigen::MatrixXcd& m, int h_dim,
                                  const std::vector<int>& keep) {
  const int rows_f = static_cast<int>(m.rows()) / h_dim;
  const int cols_f = static_cast<int>(m.cols()) / h_dim;
  const int kk = static_cast<int>(keep.size());
  Eigen::MatrixXcd out(rows_f * kk, cols_f * kk);
  for (int fr = 0; fr < rows_f; ++fr)
    for (int fc = 0; fc < cols_f; ++fc)
      for (int r = 0; r < kk; ++r)
        for (int c = 0; c < kk; ++c)
          out(fr * kk + r, fc * kk + c) = m(fr * h_dim + keep[r], fc * h_dim + keep[c]);
  return out;
}

double sobolev_weight(const Eigen::VectorXi& mode, int t) {
  const double m2 = mode.cast<double>().squaredNorm();
  return std::pow(1.0 + kTwoPi * kTwoPi * m2, t);
}

}  // namespace

TorusModel::TorusModel(int dim2n, int fourier_cutoff, int hermite_cutoff,
                       Metric metric, std::optional<Eigen::MatrixXd> sympl)
    : dim2n_(dim2n),
      fourier_cutoff_(fourier_cutoff),
      hermite_cutoff_(hermite_cutoff),
      metric_(std::move(metric)) {
  if (dim2n < 2 || dim2n % 2 != 0)
    throw std::invalid_argument("TorusModel: dim2n must be even and positive");
  if (fourier_cutoff < 0)
    throw std::invalid_argument("TorusModel: fourier_cutoff must be >= 0");
  if (hermite_cutoff < 1)
    throw std::invalid_argument("TorusModel: hermite_cutoff must be >= 1");
  if (metric_.dim2n() != dim2n)
    throw std::invalid_argument("TorusModel: metric dimension mismatch");

  sympl_ = sympl ? *sympl : SpElement::symplectic_form(dim2n);
  if (sympl_.rows() != dim2n || sympl_.cols() != dim2n)
    throw std::invalid_argument("TorusModel: symplectic matrix dimension mismatch");
  if ((sympl_ + sympl_.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, sympl_.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("TorusModel: symplectic matrix must be antisymmetric");
  if (std::abs(sympl_.determinant()) < 1e-12)
    throw std::invalid_argument("TorusModel: symplectic matrix must be nondegenerate");

  // Modes in lexicographic order over [-M,M]^{2n}.
  Eigen::VectorXi m = Eigen::VectorXi::Constant(dim2n, -fourier_cutoff);
  while (true) {
    modes_.push_back(m);
    int i = dim2n - 1;
    while (i >= 0 && m(i) == fourier_cutoff) {
      m(i) = -fourier_cutoff;
      --i;
    }
    if (i < 0) break;
    ++m(i);
  }
}

TorusModel TorusModel::standard(int dim2n, int fourier_cutoff,
                                int hermite_cutoff) {
  return TorusModel(dim2n, fourier_cutoff, hermite_cutoff,
                    Metric::identity(dim2n));
}

int TorusModel::h_dim() const {
  int d = 1;
  for (int i = 0; i < n_dof(); ++i) d *= hermite_cutoff_;
  return d;
}

int TorusModel::mode_count() const { return static_cast<int>(modes_.size()); }

int TorusModel::degree_dim(int k) const {
  return static_cast<int>(binomial(dim2n_, k));
}

int TorusModel::section_dim(int k) const {
  return mode_count() * degree_dim(k) * h_dim();
}

ConnectionSpec ConnectionSpec::trivial() { return ConnectionSpec(); }

ConnectionSpec ConnectionSpec::line_twist(Eigen::VectorXd c) {
  ConnectionSpec spec;
  spec.variant_ = Variant::LineTwist;
  spec.line_coeffs_ = std::move(c);
  return spec;
}

ConnectionSpec ConnectionSpec::rep_twist(std::vector<SpElement> generators,
                                         double tol) {
  if (generators.empty())
    throw std::invalid_argument("ConnectionSpec: rep_twist needs generators");
  double scale = 0.0;
  for (const auto& g : generators)
    scale = std::max(scale, g.matrix().cwiseAbs().maxCoeff());
  for (std::size_t a = 0; a < generators.size(); ++a)
    for (std::size_t b = a + 1; b < generators.size(); ++b) {
      const Eigen::MatrixXd comm =
          generators[a].matrix() * generators[b].matrix() -
          generators[b].matrix() * generators[a].matrix();
      if (comm.cwiseAbs().maxCoeff() > tol * std::max(1.0, scale * scale))
        throw std::invalid_argument(
            "ConnectionSpec: rep_twist generators must commute");
    }
  ConnectionSpec spec;
  spec.variant_ = Variant::RepTwist;
  spec.generators_ = std::move(generators);
  return spec;
}

std::vector<Eigen::MatrixXcd> connection_operators(const ConnectionSpec& spec,
                                                   const TorusModel& model) {
  const int h = model.h_dim();
  std::vector<Eigen::MatrixXcd> ops;
  switch (spec.variant()) {
    case ConnectionSpec::Variant::Trivial:
      ops.assign(model.dim2n(), Eigen::MatrixXcd::Zero(h, h));
      break;
    case ConnectionSpec::Variant::LineTwist: {
      if (spec.line_coeffs().size() != model.dim2n())
        throw std::invalid_argument("connection_operators: line coefficient count");
      for (int a = 0; a < model.dim2n(); ++a)
        ops.push_back(Complex(0, spec.line_coeffs()(a)) *
                      Eigen::MatrixXcd::Identity(h, h));
      break;
    }
    case ConnectionSpec::Variant::RepTwist: {
      if (static_cast<int>(spec.generators().size()) != model.dim2n())
        throw std::invalid_argument("connection_operators: generator count");
      const LadderSet ladders =
          ladder_matrices(model.n_dof(), model.hermite_cutoff());
      for (const auto& g : spec.generators()) {
        if (g.dim2n() != model.dim2n())
          throw std::invalid_argument("connection_operators: generator dimension");
        ops.push_back(quantize(g, ladders).matrix());
      }
      break;
    }
  }
  return ops;
}

double curvature_norm(const ConnectionSpec& spec, const LadderSet& ladders) {
  if (spec.variant() != ConnectionSpec::Variant::RepTwist) return 0.0;
  double worst = 0.0;
  std::vector<Eigen::MatrixXcd> q;
  for (const auto& g : spec.generators())
    q.push_back(quantize(g, ladders).matrix());
  for (std::size_t a = 0; a < q.size(); ++a)
    for (std::size_t b = a + 1; b < q.size(); ++b)
      worst = std::max(
          worst, interior_norm(q[a] * q[b] - q[b] * q[a], ladders));
  return worst;
}

FourierSection::FourierSection(const TorusModel& model, int degree)
    : degree_(degree),
      form_dim_(model.degree_dim(degree)),
      h_dim_(model.h_dim()) {
  if (degree < 0 || degree > model.dim2n())
    throw std::invalid_argument("FourierSection: degree out of range");
  coeffs_ = Eigen::VectorXcd::Zero(model.section_dim(degree));
}

int FourierSection::index(int mode_idx, int form_rank, int hermite) const {
  return (mode_idx * form_dim_ + form_rank) * h_dim_ + hermite;
}

Eigen::MatrixXcd FourierSection::mode_block(int mode_idx) const {
  Eigen::MatrixXcd block(form_dim_, h_dim_);
  for (int i = 0; i < form_dim_; ++i)
    for (int j = 0; j < h_dim_; ++j) block(i, j) = coeffs_(index(mode_idx, i, j));
  return block;
}

void FourierSection::set_mode_block(int mode_idx, const Eigen::MatrixXcd& block) {
  for (int i = 0; i < form_dim_; ++i)
    for (int j = 0; j < h_dim_; ++j) coeffs_(index(mode_idx, i, j)) = block(i, j);
}

Eigen::MatrixXcd d_mode_block(int k, const Eigen::VectorXd& mode,
                              const std::vector<Eigen::MatrixXcd>& conn_ops,
                              const TorusModel& model) {
  const int h = model.h_dim();
  const int rows = model.degree_dim(k + 1) * h;
  const int cols = model.degree_dim(k) * h;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows, cols);
  if (rows == 0 || cols == 0) return out;
  for (int a = 0; a < model.dim2n(); ++a) {
    Covector dxa{Eigen::VectorXd::Zero(model.dim2n())};
    dxa.components(a) = 1.0;
    const Eigen::MatrixXcd ext = ext_matrix(dxa, k);
    Eigen::MatrixXcd coeff =
        Complex(0, kTwoPi * mode(a)) * Eigen::MatrixXcd::Identity(h, h) +
        conn_ops[a];
    out += kron(ext, coeff);
  }
  return out;
}

namespace {

Eigen::MatrixXcd block_diagonal(const std::vector<Eigen::MatrixXcd>& blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows, cols);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd exterior_derivative(int k, const TorusModel& model) {
  return d_nabla(k, ConnectionSpec::trivial(), model);
}

Eigen::MatrixXcd d_nabla(int k, const ConnectionSpec& spec,
                         const TorusModel& model) {
  const auto ops = connection_operators(spec, model);
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(model.mode_count());
  for (const auto& m : model.modes())
    blocks.push_back(d_mode_block(k, m.cast<double>(), ops, model));
  return block_diagonal(blocks);
}

AlgebraElement section_a_product(const FourierSection& s,
                                 const FourierSection& t,
                                 const TorusModel& model) {
  if (s.degree() != t.degree() || s.dim() != t.dim())
    throw std::invalid_argument("section_a_product: shape mismatch");
  const Eigen::MatrixXd gram = degree_gram(model.metric(), s.degree());
  const int h = model.h_dim();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(h, h);
  for (int mi = 0; mi < model.mode_count(); ++mi)
    acc += s.mode_block(mi).transpose() * gram * t.mode_block(mi).conjugate();
  return AlgebraElement(std::move(acc));
}

Eigen::MatrixXd sobolev_gram(int t, int k, const ConnectionSpec& /*spec*/,
                             const TorusModel& model) {
  const Eigen::MatrixXd gk = degree_gram(model.metric(), k);
  const Eigen::MatrixXd cell = kron_real(
      gk, Eigen::MatrixXd::Identity(model.h_dim(), model.h_dim()));
  const int b = static_cast<int>(cell.rows());
  Eigen::MatrixXd out =
      Eigen::MatrixXd::Zero(model.section_dim(k), model.section_dim(k));
  for (int mi = 0; mi < model.mode_count(); ++mi)
    out.block(mi * b, mi * b, b, b) = sobolev_weight(model.modes()[mi], t) * cell;
  return out;
}

double sobolev_norm(const FourierSection& s, int t, const TorusModel& model) {
  const Eigen::MatrixXd gram = degree_gram(model.metric(), s.degree());
  double acc = 0.0;
  for (int mi = 0; mi < model.mode_count(); ++mi) {
    const Eigen::MatrixXcd block = s.mode_block(mi);
    acc += sobolev_weight(model.modes()[mi], t) *
           (block.adjoint() * gram * block).trace().real();
  }
  return std::sqrt(std::max(0.0, acc));
}

Eigen::MatrixXcd ComplexAssembly::full_d(int k) const { return block_diagonal(d[k]); }
Eigen::MatrixXcd ComplexAssembly::full_adjoint(int k) const {
  return block_diagonal(d_adjoint[k]);
}
Eigen::MatrixXcd ComplexAssembly::full_laplacian(int k) const {
  return block_diagonal(laplacian[k]);
}

double ComplexAssembly::laplacian_hermiticity_defect() const {
  double worst = 0.0;
  for (int k = 0; k <= model.dim2n(); ++k) {
    const Eigen::MatrixXd gk = kron_real(
        degree_gram(model.metric(), k),
        Eigen::MatrixXd::Identity(model.h_dim(), model.h_dim()));
    for (const auto& block : laplacian[k]) {
      const Eigen::MatrixXcd gl = gk * block;
      const double scale = op_norm(gl);
      if (scale == 0.0) continue;
      worst = std::max(worst,
                       op_norm(Eigen::MatrixXcd(gl - gl.adjoint())) / scale);
    }
  }
  return worst;
}

ComplexAssembly assemble_complex(const ConnectionSpec& spec,
                                 const TorusModel& model, int sobolev_index) {
  ComplexAssembly out{model, spec, sobolev_index, {}, {}, {}};
  const int dim2n = model.dim2n();
  const int h = model.h_dim();
  const auto ops = connection_operators(spec, model);
  const Eigen::MatrixXd ih = Eigen::MatrixXd::Identity(h, h);

  std::vector<Eigen::MatrixXd> gram(dim2n + 2), gram_inv(dim2n + 2);
  for (int k = 0; k <= dim2n; ++k) {
    const Eigen::MatrixXd gk = degree_gram(model.metric(), k);
    gram[k] = kron_real(gk, ih);
    gram_inv[k] = kron_real(gk.inverse().eval(), ih);
  }
  gram[dim2n + 1] = Eigen::MatrixXd();  // empty top shell
  gram_inv[dim2n + 1] = Eigen::MatrixXd();

  out.d.resize(dim2n + 1);
  out.d_adjoint.resize(dim2n + 1);
  out.laplacian.resize(dim2n + 1);

  // The Sobolev mode weight is shared by the two degrees of every adjoint
  // pair, so it cancels block by block; the stored index is metadata.
  for (int k = 0; k <= dim2n; ++k) {
    for (const auto& m : model.modes()) {
      Eigen::MatrixXcd dk = d_mode_block(k, m.cast<double>(), ops, model);
      Eigen::MatrixXcd adj;
      if (k < dim2n)
        adj = gram_inv[k] * dk.adjoint() * gram[k + 1];
      else
        adj = Eigen::MatrixXcd::Zero(model.degree_dim(k) * h, 0);
      out.d[k].push_back(std::move(dk));
      out.d_adjoint[k].push_back(std::move(adj));
    }
  }
  for (int k = 0; k <= dim2n; ++k) {
    for (int mi = 0; mi < model.mode_count(); ++mi) {
      const int dimk = model.degree_dim(k) * h;
      Eigen::MatrixXcd lap = Eigen::MatrixXcd::Zero(dimk, dimk);
      if (k > 0) lap += out.d[k - 1][mi] * out.d_adjoint[k - 1][mi];
      if (k < dim2n) lap += out.d_adjoint[k][mi] * out.d[k][mi];
      out.laplacian[k].push_back(std::move(lap));
    }
  }
  return out;
}

double complex_defect(const ComplexAssembly& assembly) {
  const TorusModel& model = assembly.model;
  const bool compress =
      assembly.spec.variant() == ConnectionSpec::Variant::RepTwist;
  std::vector<int> keep;
  if (compress)
    keep = ladder_matrices(model.n_dof(), model.hermite_cutoff())
               .interior_indices();
  double worst = 0.0;
  for (int k = 0; k + 1 <= model.dim2n(); ++k) {
    for (int mi = 0; mi < model.mode_count(); ++mi) {
      Eigen::MatrixXcd прod =
          assembly.d[k + 1][mi] * assembly.d[k][mi];
      const double scale =
          std::max(1.0, op_norm(assembly.d[k + 1][mi]) *
                            op_norm(assembly.d[k][mi]));
      if (compress) прod = compress_hermite(прod, model.h_dim(), keep);
      worst = std::max(worst, op_norm(прod) / scale);
    }
  }
  return worst;
}

HarmonicReport harmonic_rank(const ComplexAssembly& assembly, int k,
                             double tol_rel) {
  const TorusModel& model = assembly.model;
  const int h = model.h_dim();
  const Eigen::MatrixXd gk = degree_gram(model.metric(), k);
  const Eigen::MatrixXd ih = Eigen::MatrixXd::Identity(h, h);
  const Eigen::MatrixXd w = kron_real(sqrt_spd(gk), ih);
  const Eigen::MatrixXd winv = kron_real(inv_sqrt_spd(gk), ih);

  struct ModeSpectral {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
  };
  std::vector<ModeSpectral> spectral;
  double lam_max = 0.0;
  for (const auto& block : assembly.laplacian[k]) {
    const Eigen::MatrixXcd white = w * block * winv;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(white);
    spectral.push_back({es.eigenvalues(), es.eigenvectors()});
    if (es.eigenvalues().size() > 0)
      lam_max = std::max(lam_max, es.eigenvalues().maxCoeff());
  }

  HarmonicReport rep;
  rep.degree = k;
  const double thr = tol_rel * lam_max;
  auto count_below = [&](double cut) {
    int c = 0;
    for (const auto& s : spectral)
      for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
        if (s.eigenvalues(i) < cut) ++c;
    return c;
  };
  rep.complex_dim = count_below(thr);
  rep.stable = lam_max == 0.0 ||
               (count_below(thr * 10) == rep.complex_dim &&
                count_below(thr / 10) == rep.complex_dim);

  double gap = 0.0;
  bool found = false;
  for (const auto& s : spectral)
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
      if (s.eigenvalues(i) >= thr && (!found || s.eigenvalues(i) < gap)) {
        gap = s.eigenvalues(i);
        found = true;
      }
  rep.gap = found ? gap : 0.0;

  // A-invariance of the harmonic space: the kernel projector commutes with
  // Id (x) a, checked against a matrix-unit basis of End(H_N) mode by mode.
  bool product = true;
  for (const auto& s : spectral) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
      if (s.eigenvalues(i) < thr) keep.push_back(i);
    if (keep.empty()) continue;
    Eigen::MatrixXcd u(s.eigenvectors.rows(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
      u.col(i) = s.eigenvectors.col(keep[i]);
    const Eigen::MatrixXcd proj = u * u.adjoint();
    const int forms = static_cast<int>(proj.rows()) / h;
    for (int p = 0; p < h && product; ++p)
      for (int q = 0; q < h && product; ++q) {
        Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(h, h);
        unit(p, q) = 1.0;
        const Eigen::MatrixXcd lifted =
            kron(Eigen::MatrixXcd::Identity(forms, forms), unit);
        if (op_norm(Eigen::MatrixXcd(proj * lifted - lifted * proj)) > 1e-8)
          product = false;
      }
  }
  rep.product_form = product;
  rep.a_rank = (product && rep.complex_dim % h == 0) ? rep.complex_dim / h : -1;
  return rep;
}

int cohomology_rank(const ComplexAssembly& assembly, int k, double rank_tol) {
  const TorusModel& model = assembly.model;
  if (k < 0 || k > model.dim2n()) return 0;

  // Rank of a block-diagonal operator with one global relative threshold.
  auto block_rank = [&](const std::vector<Eigen::MatrixXcd>& blocks) {
    std::vector<Eigen::VectorXd> svs;
    double smax = 0.0;
    for (const auto& b : blocks) {
      if (b.rows() == 0 || b.cols() == 0) continue;
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b);
      svs.push_back(svd.singularValues());
      if (svs.back().size() > 0) smax = std::max(smax, svs.back()(0));
    }
    if (smax == 0.0) return 0;
    int rank = 0;
    for (const auto& sv : svs)
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rank_tol * smax) ++rank;
    return rank;
  };

  const int dim_k = model.section_dim(k);
  const int ker = dim_k - block_rank(assembly.d[k]);
  const int im = (k > 0) ? block_rank(assembly.d[k - 1]) : 0;
  return ker - im;
}

SymbolReport symbol_report(const ConnectionSpec& spec, const TorusModel& model,
                           const std::vector<Covector>& xi_samples,
                           double tol_rank) {
  SymbolReport rep;
  const int dim2n = model.dim2n();
  const int h = model.h_dim();
  const Eigen::MatrixXcd ih = Eigen::MatrixXcd::Identity(h, h);
  const auto ops = connection_operators(spec, model);
  const Metric& g = model.metric();

  std::vector<Eigen::MatrixXd> gram(dim2n + 1), gram_inv(dim2n + 1);
  for (int k = 0; k <= dim2n; ++k) {
    gram[k] = degree_gram(g, k);
    gram_inv[k] = gram[k].inverse();
  }

  for (const auto& xi : xi_samples) {
    ++rep.samples;
    if (xi.components.norm() == 0.0) {
      // The symbol sequence degenerates on the zero section; flagged and
      // left out of the exactness verdict.
      ++rep.zero_flagged;
      continue;
    }
    const Vector xs = sharp(xi, g);
    std::vector<Eigen::MatrixXcd> sigma(dim2n + 1);
    for (int k = 0; k <= dim2n; ++k) sigma[k] = kron(ext_matrix(xi, k), ih);

    for (int k = 0; k < dim2n; ++k) {
      // Exactness rank law.
      if (numerical_rank(sigma[k], tol_rank) !=
          static_cast<int>(binomial(dim2n - 1, k)) * h)
        rep.rank_law_ok = false;

      // Complex property of consecutive symbols.
      const double ns = op_norm(sigma[k + 1]) * op_norm(sigma[k]);
      if (ns > 0.0)
        rep.complex_defect =
            std::max(rep.complex_defect,
                     op_norm(Eigen::MatrixXcd(sigma[k + 1] * sigma[k])) / ns);

      // (sigma_k)* = iota_{xi^g} (x) Id under the fiberwise pairing.
      const Eigen::MatrixXcd adj = kron(
          (gram_inv[k] * ext_matrix(xi, k).adjoint() * gram[k + 1]).eval(), ih);
      const Eigen::MatrixXcd target = kron(interior_matrix(xs, k + 1), ih);
      const double scale = std::max(op_norm(adj), op_norm(target));
      if (scale > 0.0)
        rep.adjoint_residual =
            std::max(rep.adjoint_residual,
                     op_norm(Eigen::MatrixXcd(adj - target)) / scale);

      // The mode-linear part of the assembled operator is the symbol.
      const Eigen::MatrixXcd extracted =
          (d_mode_block(k, xi.components, ops, model) -
           d_mode_block(k, Eigen::VectorXd::Zero(dim2n), ops, model)) /
          Complex(0, kTwoPi);
      const double sscale = op_norm(sigma[k]);
      if (sscale > 0.0)
        rep.extraction_residual = std::max(
            rep.extraction_residual,
            op_norm(Eigen::MatrixXcd(extracted - sigma[k])) / sscale);
    }
  }

  rep.a_elliptic = rep.rank_law_ok && (rep.samples > rep.zero_flagged) &&
                   rep.complex_defect < 1e-10 && rep.adjoint_residual < 1e-10 &&
                   rep.extraction_residual < 1e-10;
  return rep;
}

}  // namespace oscmod
