#include "kq/numcore.hpp"

#include <algorithm>
#include <cmath>

namespace kq {

bool all_finite(const Mat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

double hermiticity_residual(const Mat& m) {
  return (m - m.adjoint()).norm() / (1.0 + m.norm());
}

bool is_hermitian(const Mat& m, double tol) {
  return m.rows() == m.cols() && hermiticity_residual(m) <= tol;
}

double mat_min_eigenvalue(const Mat& m) {
  if (m.rows() != m.cols()) throw InvalidMatrix("mat_min_eigenvalue: matrix not square");
  if (!all_finite(m)) throw InvalidMatrix("mat_min_eigenvalue: non-finite entries");
  Mat sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Mat hermitian_sqrt(const Mat& m, double floor_tol) {
  if (!all_finite(m)) throw InvalidMatrix("hermitian_sqrt: non-finite entries");
  Mat sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  const double scale = floor_tol * (1.0 + sym.norm());
  Eigen::VectorXd roots = es.eigenvalues();
  for (Eigen::Index i = 0; i < roots.size(); ++i)
    roots(i) = roots(i) > scale ? std::sqrt(roots(i)) : 0.0;
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

// -----------------------------------------------------------------------------

TruncatedSeries TruncatedSeries::scalar(int min_index, std::vector<Complex> coeffs) {
  std::vector<Mat> mats;
  mats.reserve(coeffs.size());
  for (Complex c : coeffs) {
    Mat m(1, 1);
    m(0, 0) = c;
    mats.push_back(std::move(m));
  }
  return TruncatedSeries(Mode::Scalar, 1, min_index, std::move(mats));
}

TruncatedSeries TruncatedSeries::matrix(int min_index, std::vector<Mat> coeffs) {
  if (coeffs.empty()) throw Error("TruncatedSeries: empty coefficient list");
  const int dim = static_cast<int>(coeffs.front().rows());
  for (const Mat& c : coeffs)
    if (c.rows() != dim || c.cols() != dim)
      throw InvalidMatrix("TruncatedSeries: inconsistent coefficient dimensions");
  return TruncatedSeries(Mode::Matrix, dim, min_index, std::move(coeffs));
}

TruncatedSeries TruncatedSeries::zero_like(const TruncatedSeries& s, int lo, int hi) {
  std::vector<Mat> mats(static_cast<size_t>(hi - lo + 1), Mat::Zero(s.dim_, s.dim_));
  return TruncatedSeries(s.mode_, s.dim_, lo, std::move(mats));
}

Mat TruncatedSeries::coeff(int n) const {
  if (n < min_index() || n > max_index()) return Mat::Zero(dim_, dim_);
  return coeffs_[static_cast<size_t>(n - min_index_)];
}

Complex TruncatedSeries::scalar_coeff(int n) const {
  if (mode_ != Mode::Scalar) throw ModeError("scalar_coeff on matrix-mode series");
  if (n < min_index() || n > max_index()) return Complex(0.0, 0.0);
  return coeffs_[static_cast<size_t>(n - min_index_)](0, 0);
}

void TruncatedSeries::set_coeff(int n, const Mat& value) {
  if (n < min_index() || n > max_index()) throw Error("set_coeff: index outside window");
  if (value.rows() != dim_ || value.cols() != dim_)
    throw InvalidMatrix("set_coeff: dimension mismatch");
  coeffs_[static_cast<size_t>(n - min_index_)] = value;
}

double TruncatedSeries::norm1() const {
  double s = 0.0;
  for (const Mat& c : coeffs_) s += c.norm();
  return s;
}

TruncatedSeries TruncatedSeries::truncated(int lo, int hi) const {
  if (lo > hi) throw Error("truncated: empty window");
  std::vector<Mat> mats;
  mats.reserve(static_cast<size_t>(hi - lo + 1));
  for (int n = lo; n <= hi; ++n) mats.push_back(coeff(n));
  return TruncatedSeries(mode_, dim_, lo, std::move(mats));
}

TruncatedSeries TruncatedSeries::z_ddz() const {
  std::vector<Mat> mats;
  mats.reserve(coeffs_.size());
  for (int n = min_index(); n <= max_index(); ++n)
    mats.push_back(static_cast<double>(n) * coeff(n));
  return TruncatedSeries(mode_, dim_, min_index_, std::move(mats));
}

Complex TruncatedSeries::eval_scalar(Complex z) const {
  if (mode_ != Mode::Scalar) throw ModeError("eval_scalar on matrix-mode series");
  Complex acc(0.0, 0.0);
  for (int n = min_index(); n <= max_index(); ++n)
    acc += scalar_coeff(n) * std::pow(z, n);
  return acc;
}

namespace {

void check_same_mode(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.mode() != b.mode() || a.dim() != b.dim())
    throw ModeError("series operation: scalar/matrix mode or dimension mismatch");
}

}  // namespace

TruncatedSeries series_multiply(const TruncatedSeries& a, const TruncatedSeries& b) {
  check_same_mode(a, b);
  const int lo = a.min_index() + b.min_index();
  const int hi = a.max_index() + b.max_index();
  TruncatedSeries out = TruncatedSeries::zero_like(a, lo, hi);
  for (int n = lo; n <= hi; ++n) {
    Mat acc = Mat::Zero(a.dim(), a.dim());
    const int k_lo = std::max(a.min_index(), n - b.max_index());
    const int k_hi = std::min(a.max_index(), n - b.min_index());
    for (int k = k_lo; k <= k_hi; ++k) acc += a.coeff(k) * b.coeff(n - k);
    out.set_coeff(n, acc);
  }
  return out;
}

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b) {
  check_same_mode(a, b);
  const int lo = std::min(a.min_index(), b.min_index());
  const int hi = std::max(a.max_index(), b.max_index());
  TruncatedSeries out = TruncatedSeries::zero_like(a, lo, hi);
  for (int n = lo; n <= hi; ++n) out.set_coeff(n, a.coeff(n) + b.coeff(n));
  return out;
}

TruncatedSeries series_scale(const TruncatedSeries& a, Complex factor) {
  TruncatedSeries out = TruncatedSeries::zero_like(a, a.min_index(), a.max_index());
  for (int n = a.min_index(); n <= a.max_index(); ++n) out.set_coeff(n, factor * a.coeff(n));
  return out;
}

TruncatedSeries series_exp(const TruncatedSeries& s, double tail_tol) {
  if (!s.is_scalar() && s.dim() > 1)
    throw ModeError("series_exp: matrix mode not supported");
  const double budget = s.norm1();
  TruncatedSeries one = TruncatedSeries::scalar(0, {Complex(1.0, 0.0)});
  TruncatedSeries acc = one;
  TruncatedSeries power = one;
  double factorial = 1.0;
  const double scale = std::exp(budget);
  for (int j = 1; j <= 512; ++j) {
    power = series_multiply(power, s);
    factorial *= j;
    acc = series_add(acc, series_scale(power, Complex(1.0 / factorial, 0.0)));
    if (std::pow(budget, j) / factorial < tail_tol * scale && j > 4) break;
    if (j == 512) throw DivergenceError("series_exp: term bound did not converge");
  }
  return acc;
}

// -----------------------------------------------------------------------------

MatrixMeasure::MatrixMeasure(std::vector<MeasureAtom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) return;
  dim_ = static_cast<int>(atoms_.front().weight.rows());
  std::sort(atoms_.begin(), atoms_.end(),
            [](const MeasureAtom& a, const MeasureAtom& b) { return a.lambda < b.lambda; });
  for (size_t k = 0; k < atoms_.size(); ++k) {
    const Mat& w = atoms_[k].weight;
    if (w.rows() != dim_ || w.cols() != dim_)
      throw InvalidMatrix("MatrixMeasure: inconsistent weight dimensions");
    if (!all_finite(w) || !std::isfinite(atoms_[k].lambda))
      throw InvalidMatrix("MatrixMeasure: non-finite atom");
    if (!is_hermitian(w)) throw InvalidMatrix("MatrixMeasure: weight not Hermitian");
    if (mat_min_eigenvalue(w) < -psd_tol * (1.0 + w.norm()))
      throw InvalidMatrix("MatrixMeasure: weight not PSD");
    if (k > 0 && !(atoms_[k - 1].lambda < atoms_[k].lambda))
      throw Error("MatrixMeasure: atom locations must be strictly increasing");
  }
}

Mat measure_integrate(const MatrixMeasure& mu, const std::function<Complex(double)>& f) {
  if (mu.empty()) throw EmptyMeasure("measure_integrate: empty measure");
  Mat acc = Mat::Zero(mu.dim(), mu.dim());
  for (const MeasureAtom& atom : mu.atoms()) acc += f(atom.lambda) * atom.weight;
  return acc;
}

}  // namespace kq
