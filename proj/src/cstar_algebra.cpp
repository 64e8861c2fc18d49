#include "oscmod/cstar_algebra.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace oscmod {

namespace {

int pow_int(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

HVector::HVector(int n_dof, int cutoff) : n_dof_(n_dof), cutoff_(cutoff) {
  if (n_dof < 1 || cutoff < 1)
    throw std::invalid_argument("HVector: n_dof and cutoff must be positive");
  coeffs_ = Eigen::VectorXcd::Zero(pow_int(cutoff, n_dof));
}

HVector::HVector(int n_dof, int cutoff, Eigen::VectorXcd coeffs)
    : n_dof_(n_dof), cutoff_(cutoff), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != pow_int(cutoff, n_dof))
    throw std::invalid_argument("HVector: coefficient length must be N^n_dof");
}

HVector HVector::basis(int n_dof, int cutoff, int flat_index) {
  HVector v(n_dof, cutoff);
  v.coeffs_(flat_index) = 1.0;
  return v;
}

Complex h_inner(const HVector& k, const HVector& l) {
  if (k.dim() != l.dim()) throw std::invalid_argument("h_inner: dimension mismatch");
  return k.coeffs().dot(l.coeffs());  // conjugates the first argument
}

double h_norm(const HVector& k) { return k.coeffs().norm(); }

AlgebraElement::AlgebraElement(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols())
    throw std::invalid_argument("AlgebraElement: matrix must be square");
  if (!m_.allFinite())
    throw std::invalid_argument("AlgebraElement: entries must be finite");
}

AlgebraElement AlgebraElement::identity(int dim) {
  return AlgebraElement(Eigen::MatrixXcd::Identity(dim, dim));
}

AlgebraElement AlgebraElement::zero(int dim) {
  return AlgebraElement(Eigen::MatrixXcd::Zero(dim, dim));
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  if (o.dim() != dim()) throw std::invalid_argument("AlgebraElement: dimension mismatch");
  m_ += o.m_;
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  if (o.dim() != dim()) throw std::invalid_argument("AlgebraElement: dimension mismatch");
  m_ -= o.m_;
  return *this;
}

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("AlgebraElement: dimension mismatch");
  return AlgebraElement(a.matrix() * b.matrix());
}

AlgebraElement operator*(Complex s, AlgebraElement a) {
  return AlgebraElement(s * a.matrix());
}

AlgebraElement star(const AlgebraElement& a) {
  return AlgebraElement(a.matrix().adjoint());
}

double op_norm(const AlgebraElement& a) { return op_norm(a.matrix()); }

AlgebraElement rank_one(const HVector& k, const HVector& l) {
  if (k.dim() != l.dim())
    throw std::invalid_argument("rank_one: dimension mismatch");
  return AlgebraElement(k.coeffs() * l.coeffs().adjoint());
}

HVector apply(const AlgebraElement& a, const HVector& v) {
  if (a.dim() != v.dim()) throw std::invalid_argument("apply: dimension mismatch");
  return HVector(v.n_dof(), v.cutoff(), a.matrix() * v.coeffs());
}

PositivityWitness is_positive(const AlgebraElement& a, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("is_positive: tol must be positive");
  PositivityWitness w;
  w.norm = op_norm(a);
  w.hermitian_defect = op_norm(Eigen::MatrixXcd(a.matrix() - a.matrix().adjoint()));
  Eigen::MatrixXcd herm = 0.5 * (a.matrix() + a.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm,
                                                     Eigen::EigenvaluesOnly);
  w.min_eigenvalue = es.eigenvalues().minCoeff();
  w.positive = w.hermitian_defect <= tol * w.norm &&
               w.min_eigenvalue >= -tol * w.norm;
  return w;
}

Eigen::VectorXd hermitian_spectrum(const AlgebraElement& a, double rel_tol) {
  const double scale = op_norm(a);
  const double defect =
      op_norm(Eigen::MatrixXcd(a.matrix() - a.matrix().adjoint()));
  if (defect > rel_tol * std::max(scale, 1e-300))
    throw std::invalid_argument("hermitian_spectrum: input is not hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix(),
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues();  // ascending
}

std::string matrix_to_json(const Eigen::MatrixXcd& m) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  nlohmann::ordered_json data = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      data.push_back({m(r, c).real(), m(r, c).imag()});
  j["data"] = std::move(data);
  return j.dump();
}

Eigen::MatrixXcd matrix_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw std::invalid_argument("matrix_from_json: data length != rows*cols");
  Eigen::MatrixXcd m(rows, cols);
  Eigen::Index i = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c, ++i)
      m(r, c) = Complex(data[i][0].get<double>(), data[i][1].get<double>());
  return m;
}

void save_matrix_json(const Eigen::MatrixXcd& m,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_matrix_json: cannot open " + path.string());
  out << matrix_to_json(m) << '\n';
  if (!out) throw std::runtime_error("save_matrix_json: write failed for " + path.string());
}

Eigen::MatrixXcd load_matrix_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_matrix_json: cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return matrix_from_json(text);
}

}  // namespace oscmod
