#include "kq/gram.hpp"

#include <cmath>
#include <numbers>

namespace kq {

namespace {

const Complex kI(0.0, 1.0);

double binom(int p, int q) {
  // Falling-factorial convention: C(p, 0) = 1 for every p (the l = 0 corner
  // of the disc band needs C(-1, 0) = 1), C(p, q) = 0 for q < 0 or q > p.
  if (q == 0) return 1.0;
  if (q < 0 || p < 0 || q > p) return 0.0;
  double acc = 1.0;
  for (int j = 1; j <= q; ++j) acc = acc * (p - q + j) / j;
  return acc;
}

double real_pow(double x, int k) {
  // 0^0 = 1 by the band conventions.
  if (k == 0) return 1.0;
  return std::pow(x, k);
}

Complex i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

Complex beta_plane(const FlowSpec& f, int m, int n, int l) {
  // (i conj b)^{n-m} C(m, l-n) C(l, m) omega^{m+n-l} |b|^{2(l-n)}
  const double b1 = binom(m, l - n);
  const double b2 = binom(l, m);
  if (b1 == 0.0 || b2 == 0.0) return {0.0, 0.0};
  const Complex ib_bar = kI * std::conj(f.b);
  return std::pow(ib_bar, n - m) * b1 * b2 * real_pow(f.omega(), m + n - l) *
         real_pow(std::norm(f.b), l - n);
}

Complex beta_disc(const FlowSpec& f, int m, int n, int l) {
  // i^{n-m} sum_j C(l-1+j, l-1) C(l, 2l+2j-n-m) C(2l+2j-n-m, j+l-n)
  //         (2 omega)^{n+m-l-2j} b^{j+l-n} conj(b)^{j+l-m}
  // with out-of-range binomials zero.  C(l-1+j, l-1) is evaluated as
  // C(l-1+j, j) so the l = 0, j = 0 corner comes out 1.
  Complex acc(0.0, 0.0);
  const double two_omega = 2.0 * f.omega();
  for (int j = 0; j <= m; ++j) {
    const int mid = 2 * l + 2 * j - n - m;
    const double b1 = binom(l - 1 + j, j);
    const double b2 = binom(l, mid);
    const double b3 = binom(mid, j + l - n);
    if (b1 == 0.0 || b2 == 0.0 || b3 == 0.0) continue;
    acc += b1 * b2 * b3 * real_pow(two_omega, n + m - l - 2 * j) *
           std::pow(f.b, j + l - n) * std::pow(std::conj(f.b), j + l - m);
  }
  return i_pow(n - m) * acc;
}

}  // namespace

Complex beta_coeff(const FlowSpec& f, int m, int n, int l) {
  if (std::abs(f.b) == 0.0)
    throw DegenerateRecurrence("beta_coeff: b = 0 (diagonal case has no band)");
  if (m < 0 || n < 0) throw Error("beta_coeff: negative index");
  if (m > n) return std::conj(beta_coeff(f, n, m, l));
  switch (f.domain.kind) {
    case DomainKind::Plane:
      if (l < n || l > n + m) return {0.0, 0.0};
      return beta_plane(f, m, n, l);
    case DomainKind::Disc:
      if (l < n - m || l > n + m) return {0.0, 0.0};
      return beta_disc(f, m, n, l);
    default:
      throw CaseError("beta_coeff: punctured domains have b = 0");
  }
}

namespace {

Mat band_block(const std::vector<Mat>& c, const FlowSpec& f, int m, int n, int dim) {
  if (m > n) {
    return band_block(c, f, n, m, dim).adjoint();
  }
  Mat acc = Mat::Zero(dim, dim);
  const int lo = f.domain.kind == DomainKind::Disc ? n - m : n;
  for (int l = lo; l <= n + m; ++l) {
    const Complex beta = beta_coeff(f, m, n, l);
    if (beta != Complex(0.0, 0.0)) acc += beta * c[static_cast<size_t>(l)];
  }
  return acc;
}

GramTable build_table(const std::vector<Mat>& c, const FlowSpec& f, int n_max, bool parallel) {
  validate_flow(f);
  if (c.empty()) throw Error("gram_from_series: empty coefficient list");
  const int dim = static_cast<int>(c.front().rows());
  for (const Mat& coeff : c)
    if (coeff.rows() != dim || coeff.cols() != dim)
      throw InvalidMatrix("gram_from_series: inconsistent coefficient dimensions");

  GramTable g;
  g.flow = f;
  g.n_max = n_max;
  g.dim = dim;
  g.blocks.assign(static_cast<size_t>(n_max + 1) * (n_max + 1), Mat::Zero(dim, dim));

  if (std::abs(f.b) == 0.0) {
    if (static_cast<int>(c.size()) < n_max + 1)
      throw Error("gram_from_series: need C up to index n_max for b = 0");
    for (int n = 0; n <= n_max; ++n) {
      const Mat& cn = c[static_cast<size_t>(n)];
      if (mat_min_eigenvalue(cn) < -psd_tol * (1.0 + cn.norm()))
        throw NotPositive("gram_from_series: b = 0 requires PSD C_n");
      g.block(n, n) = cn;
    }
    return g;
  }

  if (static_cast<int>(c.size()) < 2 * n_max + 1)
    throw Error("gram_from_series: need C up to index 2*n_max");

  const int count = (n_max + 1) * (n_max + 1);
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (int idx = 0; idx < count; ++idx) {
      const int m = idx / (n_max + 1);
      const int n = idx % (n_max + 1);
      g.blocks[static_cast<size_t>(idx)] = band_block(c, f, m, n, dim);
    }
  } else {
    for (int idx = 0; idx < count; ++idx) {
      const int m = idx / (n_max + 1);
      const int n = idx % (n_max + 1);
      g.blocks[static_cast<size_t>(idx)] = band_block(c, f, m, n, dim);
    }
  }
  return g;
}

}  // namespace

GramTable gram_from_series(const std::vector<Mat>& c, const FlowSpec& f, int n_max) {
  return build_table(c, f, n_max, true);
}

GramTable gram_from_series_serial(const std::vector<Mat>& c, const FlowSpec& f, int n_max) {
  return build_table(c, f, n_max, false);
}

DifferenceEqReport verify_difference_eq(const GramTable& g) {
  const FlowSpec& f = g.flow;
  const int n_top = g.n_max - 1;
  DifferenceEqReport rep;
  rep.residual = Eigen::MatrixXd::Zero(n_top + 1, n_top + 1);
  for (int m = 0; m <= n_top; ++m) {
    for (int n = 0; n <= n_top; ++n) {
      Mat acc = (f.a * static_cast<double>(n) + std::conj(f.a) * static_cast<double>(m)) *
                g.block(m, n);
      if (m >= 1) acc += std::conj(f.c) * static_cast<double>(m - 1) * g.block(m - 1, n);
      if (n >= 1) acc += f.c * static_cast<double>(n - 1) * g.block(m, n - 1);
      acc += f.b * static_cast<double>(n + 1) * g.block(m, n + 1);
      acc += std::conj(f.b) * static_cast<double>(m + 1) * g.block(m + 1, n);
      rep.residual(m, n) = acc.norm();
      rep.max_residual = std::max(rep.max_residual, rep.residual(m, n));
    }
  }
  return rep;
}

SummabilityReport gram_summability(const GramTable& g, int m) {
  if (m < 0 || m > g.n_max) throw Error("gram_summability: row out of range");
  SummabilityReport rep;
  double acc = 0.0;
  for (int n = 0; n <= g.n_max; ++n) {
    const double norm = g.block(m, n).norm();
    acc += norm * norm;
    rep.partial_sums.push_back(acc);
    if (n >= 1) rep.roots.push_back(std::pow(norm, 1.0 / n));
  }
  return rep;
}

Complex beta_oracle(const FlowSpec& f, int m, int n, int l, int samples, double radius) {
  // Trapezoid rule on |v| = |z| = radius is spectrally exact for the Taylor
  // coefficients of I(conj v, z)^l up to aliasing at order `samples`.
  const double step = 2.0 * std::numbers::pi / samples;
  Complex acc(0.0, 0.0);
  for (int j = 0; j < samples; ++j) {
    const Complex v = std::polar(radius, step * j);
    Complex inner(0.0, 0.0);
    for (int k = 0; k < samples; ++k) {
      const Complex z = std::polar(radius, step * k);
      const Complex value = std::pow(invariant_polarized(f, v, z), l);
      inner += value * std::polar(1.0, -step * k * n);
    }
    acc += inner * std::polar(1.0, step * j * m);
  }
  acc /= static_cast<double>(samples) * samples;
  return acc / (std::pow(radius, m) * std::pow(radius, n));
}

}  // namespace kq
