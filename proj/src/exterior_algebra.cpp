#include "oscmod/exterior_algebra.hpp"

#include <bit>
#include <stdexcept>

namespace oscmod {

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

FormBasis::FormBasis(int dim2n) : dim2n_(dim2n) {
  if (dim2n < 2 || dim2n % 2 != 0 || dim2n > 20)
    throw std::invalid_argument("FormBasis: dim2n must be a small even positive integer");
  masks_.resize(dim2n + 1);
  offsets_.resize(dim2n + 2, 0);
  by_mask_.resize(std::size_t{1} << dim2n);

  // Degree-k sets in lexicographic tuple order: standard next-combination walk.
  for (int k = 0; k <= dim2n; ++k) {
    std::vector<int> c(k);
    for (int i = 0; i < k; ++i) c[i] = i;
    while (true) {
      std::uint32_t m = 0;
      for (int i = 0; i < k; ++i) m |= (1u << c[i]);
      masks_[k].push_back(m);
      int i = k - 1;
      while (i >= 0 && c[i] == dim2n - k + i) --i;
      if (i < 0) break;
      ++c[i];
      for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    }
  }
  for (int k = 0; k <= dim2n; ++k) {
    offsets_[k + 1] = offsets_[k] + static_cast<int>(masks_[k].size());
    for (int r = 0; r < static_cast<int>(masks_[k].size()); ++r)
      by_mask_[masks_[k][r]] = Slot{r, offsets_[k] + r};
  }
}

int FormBasis::degree_dim(int k) const {
  if (k < 0 || k > dim2n_) return 0;
  return static_cast<int>(masks_[k].size());
}

int FormBasis::degree_offset(int k) const { return offsets_[k]; }

int FormBasis::degree(std::uint32_t m) { return std::popcount(m); }

int FormBasis::wedge_sign(std::uint32_t a, std::uint32_t b) {
  if (a & b) return 0;
  int swaps = 0;
  std::uint32_t rest = b;
  while (rest) {
    const int i = std::countr_zero(rest);
    rest &= rest - 1;
    swaps += std::popcount(a >> (i + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

FormBasisIndex::FormBasisIndex(int dim2n, std::vector<int> idx)
    : dim2n_(dim2n), indices_(std::move(idx)) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 1 || indices_[i] > dim2n_)
      throw std::invalid_argument("FormBasisIndex: index out of range");
    if (i > 0 && indices_[i] <= indices_[i - 1])
      throw std::invalid_argument("FormBasisIndex: indices must be strictly increasing");
  }
}

std::uint32_t FormBasisIndex::mask() const {
  std::uint32_t m = 0;
  for (int i : indices_) m |= (1u << (i - 1));
  return m;
}

FormBasisIndex FormBasisIndex::from_mask(int dim2n, std::uint32_t m) {
  std::vector<int> idx;
  for (int i = 0; i < dim2n; ++i)
    if (m & (1u << i)) idx.push_back(i + 1);
  return FormBasisIndex(dim2n, std::move(idx));
}

Form::Form(int dim2n, int degree)
    : basis_(dim2n), degree_(degree) {
  if (degree < 0 || degree > dim2n)
    throw std::invalid_argument("Form: degree out of [0, 2n]");
  coeffs_ = Eigen::VectorXcd::Zero(basis_.degree_dim(degree));
}

Form Form::basis_form(int dim2n, std::initializer_list<int> indices) {
  FormBasisIndex bi(dim2n, std::vector<int>(indices));
  Form f(dim2n, static_cast<int>(indices.size()));
  f.coeffs_(f.basis_.rank_in_degree(bi.mask())) = 1.0;
  return f;
}

Form& Form::operator+=(const Form& o) {
  if (o.dim2n() != dim2n() || o.degree() != degree())
    throw std::invalid_argument("Form::operator+=: mismatched shapes");
  coeffs_ += o.coeffs_;
  return *this;
}

Form operator+(Form a, const Form& b) { return a += b; }

Form operator*(Complex s, Form f) {
  f.coeffs() *= s;
  return f;
}

Form operator-(const Form& a, const Form& b) { return a + (-1.0) * b; }

Metric::Metric(Eigen::MatrixXd g) : g_(std::move(g)) {
  if (g_.rows() != g_.cols() || g_.rows() < 2)
    throw std::invalid_argument("Metric: matrix must be square");
  const double scale = g_.cwiseAbs().maxCoeff();
  if ((g_ - g_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("Metric: matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g_);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("Metric: matrix must be positive definite");
  inv_ = es.operatorInverseSqrt() * es.operatorInverseSqrt();
}

Metric Metric::identity(int dim2n) {
  return Metric(Eigen::MatrixXd::Identity(dim2n, dim2n));
}

Vector sharp(const Covector& xi, const Metric& g) {
  if (xi.components.size() != g.dim2n())
    throw std::invalid_argument("sharp: dimension mismatch");
  // xi(v) = g(xi^g, v) for all v, so xi^g solves g x = xi.
  return Vector{g.inverse() * xi.components};
}

Form wedge(const Form& a, const Form& b) {
  if (a.dim2n() != b.dim2n())
    throw std::invalid_argument("wedge: dimension mismatch");
  const int dim2n = a.dim2n();
  const int kc = a.degree() + b.degree();
  if (kc > dim2n) return Form(dim2n, 0);  // top degree exceeded: canonical zero

  const FormBasis& fb = a.basis();
  Form out(dim2n, kc);
  const auto& am = fb.masks(a.degree());
  const auto& bm = fb.masks(b.degree());
  for (int i = 0; i < static_cast<int>(am.size()); ++i) {
    const Complex ca = a[i];
    if (ca == 0.0) continue;
    for (int j = 0; j < static_cast<int>(bm.size()); ++j) {
      const int s = FormBasis::wedge_sign(am[i], bm[j]);
      if (s == 0) continue;
      out.coeffs()(fb.rank_in_degree(am[i] | bm[j])) +=
          static_cast<double>(s) * ca * b[j];
    }
  }
  return out;
}

Form interior(const Vector& v, const Form& a) {
  if (v.components.size() != a.dim2n())
    throw std::invalid_argument("interior: dimension mismatch");
  const int k = a.degree();
  if (k == 0) return Form(a.dim2n(), 0);

  const FormBasis& fb = a.basis();
  Form out(a.dim2n(), k - 1);
  const auto& masks = fb.masks(k);
  for (int col = 0; col < static_cast<int>(masks.size()); ++col) {
    const Complex c = a[col];
    if (c == 0.0) continue;
    std::uint32_t m = masks[col];
    int pos = 0;  // slot of the contracted generator, alternating sign
    std::uint32_t rest = m;
    while (rest) {
      const int i = std::countr_zero(rest);
      rest &= rest - 1;
      const double s = (pos & 1) ? -1.0 : 1.0;
      out.coeffs()(fb.rank_in_degree(m & ~(1u << i))) +=
          s * v.components(i) * c;
      ++pos;
    }
  }
  return out;
}

Eigen::MatrixXd degree_gram(const Metric& g, int k) {
  FormBasis fb(g.dim2n());
  const auto& masks = fb.masks(k);
  const int d = static_cast<int>(masks.size());
  const Eigen::MatrixXd& ginv = g.inverse();
  Eigen::MatrixXd out(d, d);
  std::vector<int> left, right;
  for (int i = 0; i < d; ++i) {
    left.clear();
    for (int b = 0; b < g.dim2n(); ++b)
      if (masks[i] & (1u << b)) left.push_back(b);
    for (int j = 0; j < d; ++j) {
      right.clear();
      for (int b = 0; b < g.dim2n(); ++b)
        if (masks[j] & (1u << b)) right.push_back(b);
      Eigen::MatrixXd sub(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) sub(r, c) = ginv(left[r], right[c]);
      out(i, j) = (k == 0) ? 1.0 : sub.determinant();
    }
  }
  return out;
}

Eigen::MatrixXd full_gram(const Metric& g) {
  FormBasis fb(g.dim2n());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(fb.total_dim(), fb.total_dim());
  for (int k = 0; k <= g.dim2n(); ++k) {
    const int off = fb.degree_offset(k);
    const int d = fb.degree_dim(k);
    out.block(off, off, d, d) = degree_gram(g, k);
  }
  return out;
}

Complex form_metric(const Metric& g, const Form& a, const Form& b) {
  if (a.dim2n() != b.dim2n() || a.dim2n() != g.dim2n())
    throw std::invalid_argument("form_metric: dimension mismatch");
  if (a.degree() != b.degree()) return 0.0;  // mixed degrees are orthogonal
  const Eigen::MatrixXd gk = degree_gram(g, a.degree());
  return (a.coeffs().transpose() * gk * b.coeffs().conjugate())(0);
}

Eigen::MatrixXcd ext_matrix(const Covector& xi, int k) {
  const int dim2n = static_cast<int>(xi.components.size());
  FormBasis fb(dim2n);
  if (k < 0 || k > dim2n)
    throw std::invalid_argument("ext_matrix: degree out of range");
  const int rows = (k + 1 <= dim2n) ? fb.degree_dim(k + 1) : 0;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows, fb.degree_dim(k));
  if (rows == 0) return out;
  const auto& masks = fb.masks(k);
  for (int col = 0; col < static_cast<int>(masks.size()); ++col) {
    for (int a = 0; a < dim2n; ++a) {
      const std::uint32_t bit = 1u << a;
      if (masks[col] & bit) continue;
      const int s = FormBasis::wedge_sign(bit, masks[col]);
      out(fb.rank_in_degree(masks[col] | bit), col) +=
          static_cast<double>(s) * xi.components(a);
    }
  }
  return out;
}

Eigen::MatrixXcd interior_matrix(const Vector& v, int k) {
  const int dim2n = static_cast<int>(v.components.size());
  FormBasis fb(dim2n);
  if (k < 0 || k > dim2n)
    throw std::invalid_argument("interior_matrix: degree out of range");
  const int rows = (k >= 1) ? fb.degree_dim(k - 1) : 0;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows, fb.degree_dim(k));
  if (rows == 0) return out;
  const auto& masks = fb.masks(k);
  for (int col = 0; col < static_cast<int>(masks.size()); ++col) {
    std::uint32_t m = masks[col];
    int pos = 0;
    std::uint32_t rest = m;
    while (rest) {
      const int i = std::countr_zero(rest);
      rest &= rest - 1;
      const double s = (pos & 1) ? -1.0 : 1.0;
      out(fb.rank_in_degree(m & ~(1u << i)), col) += s * v.components(i);
      ++pos;
    }
  }
  return out;
}

Eigen::MatrixXcd full_ext_matrix(const Covector& xi) {
  const int dim2n = static_cast<int>(xi.components.size());
  FormBasis fb(dim2n);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(fb.total_dim(), fb.total_dim());
  for (int k = 0; k < dim2n; ++k)
    out.block(fb.degree_offset(k + 1), fb.degree_offset(k),
              fb.degree_dim(k + 1), fb.degree_dim(k)) = ext_matrix(xi, k);
  return out;
}

Eigen::MatrixXcd full_interior_matrix(const Vector& v) {
  const int dim2n = static_cast<int>(v.components.size());
  FormBasis fb(dim2n);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(fb.total_dim(), fb.total_dim());
  for (int k = 1; k <= dim2n; ++k)
    out.block(fb.degree_offset(k - 1), fb.degree_offset(k),
              fb.degree_dim(k - 1), fb.degree_dim(k)) = interior_matrix(v, k);
  return out;
}

CartanReport cartan_report(const Covector& xi, const Metric& g,
                           double rank_tol) {
  const int dim2n = static_cast<int>(xi.components.size());
  if (dim2n != g.dim2n())
    throw std::invalid_argument("cartan_report: dimension mismatch");

  CartanReport rep;
  rep.dim2n = dim2n;
  std::vector<Eigen::MatrixXcd> ext(dim2n);
  for (int k = 0; k < dim2n; ++k) {
    ext[k] = ext_matrix(xi, k);
    rep.ranks.push_back(numerical_rank(ext[k], rank_tol));
    rep.expected.push_back(static_cast<int>(binomial(dim2n - 1, k)));
  }

  // Exactness of the multiplication complex: kernel and image dimensions
  // meet at every degree, rank(ext_k) + rank(ext_{k-1}) = C(2n,k).
  rep.exact = true;
  FormBasis fb(dim2n);
  for (int k = 0; k <= dim2n; ++k) {
    const int rk = (k < dim2n) ? rep.ranks[k] : 0;
    const int rk1 = (k > 0) ? rep.ranks[k - 1] : 0;
    if (rk + rk1 != fb.degree_dim(k)) rep.exact = false;
  }

  // iota_{xi^g} ext_xi + ext_xi iota_{xi^g} = g^{-1}(xi,xi) Id on each degree.
  const Vector xs = sharp(xi, g);
  const double c = (xi.components.transpose() * g.inverse() * xi.components)(0);
  double worst = 0.0;
  if (c > 0.0) {
    for (int k = 0; k <= dim2n; ++k) {
      const int d = fb.degree_dim(k);
      Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Zero(d, d);
      if (k < dim2n) lhs += interior_matrix(xs, k + 1) * ext[k];
      if (k > 0) lhs += ext[k - 1] * interior_matrix(xs, k);
      lhs -= c * Eigen::MatrixXcd::Identity(d, d);
      worst = std::max(worst, op_norm(lhs) / c);
    }
  }
  rep.cartan_identity_residual = worst;
  return rep;
}

}  // namespace oscmod
