#include "kq/spectral.hpp"

#include <cmath>

namespace kq {

namespace {

const Complex kI(0.0, 1.0);

}  // namespace

Mat moments(const MatrixMeasure& mu, int n) {
  if (n < 0) throw Error("moments: negative order");
  return measure_integrate(mu, [n](double lambda) {
    return Complex(std::pow(lambda, n), 0.0);
  });
}

InvariantSeries series_from_measure(const MatrixMeasure& mu, const FlowSpec& f, int n_max) {
  if (mu.empty()) throw EmptyMeasure("series_from_measure: empty measure");
  if (std::abs(f.b) == 0.0)
    throw DegenerateRecurrence(
        "series_from_measure: b = 0; supply the diagonal coefficients directly");
  validate_flow(f);

  const PolyFamily fam = build_recurrence(f, n_max);
  InvariantSeries s;
  s.flow = f;
  s.dim = mu.dim();
  s.coeffs.reserve(static_cast<size_t>(n_max) + 1);
  const Complex ib_bar = kI * std::conj(f.b);
  for (int n = 0; n <= n_max; ++n) {
    Mat c = Mat::Zero(mu.dim(), mu.dim());
    const Complex scale = std::pow(ib_bar, -n);
    for (const MeasureAtom& atom : mu.atoms())
      c += scale * fam.eval(n, atom.lambda) * atom.weight;
    s.herm_residual = std::max(s.herm_residual, hermiticity_residual(c));
    s.coeffs.push_back(std::move(c));
  }
  return s;
}

BochnerResult bochner_reconstruct(const MatrixMeasure& mu, const FlowSpec& f, Complex v,
                                  Complex z, int n_terms) {
  if (mu.empty()) throw EmptyMeasure("bochner_reconstruct: empty measure");
  BochnerResult out;
  out.reconstructed = Mat::Zero(mu.dim(), mu.dim());
  for (const MeasureAtom& atom : mu.atoms())
    out.reconstructed += kernel_lambda(f, v, z, atom.lambda, n_terms).value * atom.weight;
  const InvariantSeries s = series_from_measure(mu, f, n_terms);
  out.series_value = kernel_eval(s, v, z);
  out.residual =
      (out.reconstructed - out.series_value).norm() / (1.0 + out.series_value.norm());
  return out;
}

Mat fhat_tridiagonal(const FlowSpec& f, int n_max) {
  if (n_max < 2) throw Error("fhat_tridiagonal: n_max >= 2 required");
  Mat t = Mat::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    t(n, n) = f.a * static_cast<double>(n);
    if (n >= 1) t(n - 1, n) = f.c * static_cast<double>(n - 1);
    if (n + 1 <= n_max) t(n + 1, n) = f.b * static_cast<double>(n + 1);
  }
  return t;
}

double PolyTable::eval(int n, double lambda) const {
  const auto& p = polys.at(static_cast<size_t>(n));
  double acc = 0.0;
  for (size_t k = p.size(); k-- > 0;) acc = acc * lambda + p[k];
  return acc;
}

namespace {

void require_scalar(const MatrixMeasure& mu, const char* who) {
  if (mu.empty()) throw EmptyMeasure(std::string(who) + ": empty measure");
  if (mu.dim() != 1) throw Error(std::string(who) + ": scalar measure required");
}

// Inner product of scalar polynomials given by monomial coefficients.
double poly_inner(const MatrixMeasure& mu, const std::vector<double>& p,
                  const std::vector<double>& q) {
  double acc = 0.0;
  for (const MeasureAtom& atom : mu.atoms()) {
    double pv = 0.0, qv = 0.0;
    for (size_t k = p.size(); k-- > 0;) pv = pv * atom.lambda + p[k];
    for (size_t k = q.size(); k-- > 0;) qv = qv * atom.lambda + q[k];
    acc += pv * qv * atom.weight(0, 0).real();
  }
  return acc;
}

std::vector<double> axpy(std::vector<double> p, double factor, const std::vector<double>& q) {
  if (q.size() > p.size()) p.resize(q.size(), 0.0);
  for (size_t k = 0; k < q.size(); ++k) p[k] += factor * q[k];
  return p;
}

}  // namespace

PolyTable orthonormal_polys(const MatrixMeasure& mu, int n_max) {
  require_scalar(mu, "orthonormal_polys");
  if (n_max + 1 > static_cast<int>(mu.atoms().size()))
    throw DegreeExceedsSupport("orthonormal_polys: degree exceeds atom count - 1");

  // Modified Gram-Schmidt on the monomials, two passes per vector.
  PolyTable table;
  for (int n = 0; n <= n_max; ++n) {
    std::vector<double> p(static_cast<size_t>(n) + 1, 0.0);
    p[static_cast<size_t>(n)] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < n; ++j)
        p = axpy(std::move(p), -poly_inner(mu, p, table.polys[static_cast<size_t>(j)]),
                 table.polys[static_cast<size_t>(j)]);
    const double norm2 = poly_inner(mu, p, p);
    if (!(norm2 > 0.0))
      throw DegreeExceedsSupport("orthonormal_polys: monomials dependent on the support");
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& coeff : p) coeff *= inv;
    if (p.back() < 0.0)
      for (double& coeff : p) coeff = -coeff;
    table.polys.push_back(std::move(p));
  }
  return table;
}

Mat JacobiMatrix::dense() const {
  const int n = static_cast<int>(diag.size());
  Mat j = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    j(i, i) = diag[static_cast<size_t>(i)];
    if (i + 1 < n) {
      j(i, i + 1) = offdiag[static_cast<size_t>(i)];
      j(i + 1, i) = offdiag[static_cast<size_t>(i)];
    }
  }
  return j;
}

Eigen::VectorXd JacobiMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

JacobiMatrix jacobi_matrix(const MatrixMeasure& mu, int size) {
  require_scalar(mu, "jacobi_matrix");
  if (size < 1) throw Error("jacobi_matrix: size >= 1 required");
  // a_n needs P_n, b_n needs P_{n+1}; the last off-diagonal entry is b_{size-2}.
  const PolyTable table = orthonormal_polys(mu, size - 1);
  JacobiMatrix j;
  for (int n = 0; n < size; ++n) {
    std::vector<double> lambda_pn(table.polys[static_cast<size_t>(n)].size() + 1, 0.0);
    for (size_t k = 0; k < table.polys[static_cast<size_t>(n)].size(); ++k)
      lambda_pn[k + 1] = table.polys[static_cast<size_t>(n)][k];
    j.diag.push_back(poly_inner(mu, lambda_pn, table.polys[static_cast<size_t>(n)]));
    if (n + 1 < size)
      j.offdiag.push_back(poly_inner(mu, lambda_pn, table.polys[static_cast<size_t>(n + 1)]));
  }
  return j;
}

Mat l2_inner(const MatrixMeasure& mu, const L2Vec& gamma, const L2Vec& delta) {
  if (gamma.size() != mu.atoms().size() || delta.size() != mu.atoms().size())
    throw Error("l2_inner: vector length must match the atom count");
  Mat acc = Mat::Zero(mu.dim(), mu.dim());
  for (size_t k = 0; k < gamma.size(); ++k)
    acc += gamma[k].adjoint() * mu.atoms()[k].weight * delta[k];
  return acc;
}

L2Vec l2_poly_vector(const MatrixMeasure& mu, const PolyFamily& fam, int n) {
  L2Vec vec;
  vec.reserve(mu.atoms().size());
  for (const MeasureAtom& atom : mu.atoms())
    vec.push_back(fam.eval(n, atom.lambda) * Mat::Identity(mu.dim(), mu.dim()));
  return vec;
}

Mat l2_gram_block(const MatrixMeasure& mu, const PolyFamily& fam, int m, int n) {
  return l2_inner(mu, l2_poly_vector(mu, fam, m), l2_poly_vector(mu, fam, n));
}

int l2_rank(const MatrixMeasure& mu, const PolyFamily& fam, int n_max) {
  const int atoms = static_cast<int>(mu.atoms().size());
  Mat values(atoms, n_max + 1);
  for (int k = 0; k < atoms; ++k)
    for (int n = 0; n <= n_max; ++n)
      values(k, n) = fam.eval(n, mu.atoms()[static_cast<size_t>(k)].lambda);
  Eigen::ColPivHouseholderQR<Mat> qr(values);
  qr.setThreshold(1e-10);
  return static_cast<int>(qr.rank());
}

}  // namespace kq
