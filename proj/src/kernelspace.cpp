#include "kq/kernelspace.hpp"

#include <cmath>

namespace kq {

namespace {

void check_series(const InvariantSeries& s) {
  if (s.coeffs.empty()) throw Error("InvariantSeries: empty coefficient list");
  for (const Mat& c : s.coeffs)
    if (c.rows() != s.dim || c.cols() != s.dim)
      throw InvalidMatrix("InvariantSeries: coefficient dimension mismatch");
}

Mat eval_series_at(const InvariantSeries& s, Complex arg) {
  // Horner would keep no divergence signal; accumulate terms with the
  // block-growth guard instead.
  Mat acc = Mat::Zero(s.dim, s.dim);
  Complex arg_pow(1.0, 0.0);
  constexpr int block = 8;
  double prev_block_max = 0.0, block_max = 0.0;
  int growing = 0;
  for (int n = 0; n <= s.n_max(); ++n) {
    const Mat term = s.coeffs[static_cast<size_t>(n)] * arg_pow;
    acc += term;
    arg_pow *= arg;
    block_max = std::max(block_max, term.norm());
    if ((n + 1) % block == 0) {
      if (n + 1 > block && block_max > prev_block_max &&
          block_max > 1e-14 * (1.0 + acc.norm())) {
        if (++growing >= 5) throw DivergenceError("kernel_eval: series diverging");
      } else {
        growing = 0;
      }
      prev_block_max = block_max;
      block_max = 0.0;
    }
  }
  if (!all_finite(acc)) throw DivergenceError("kernel_eval: non-finite partial sum");
  return acc;
}

}  // namespace

Mat kernel_eval(const InvariantSeries& s, Complex v, Complex z) {
  check_series(s);
  return eval_series_at(s, invariant_polarized(s.flow, v, z));
}

Mat gram_matrix(const InvariantSeries& s, std::span<const Complex> points,
                std::span<const Eigen::VectorXcd> vectors) {
  if (points.size() != vectors.size())
    throw Error("gram_matrix: point/vector count mismatch");
  const int J = static_cast<int>(points.size());
  Mat g(J, J);
  for (int i = 0; i < J; ++i)
    for (int j = 0; j < J; ++j)
      g(i, j) = vectors[static_cast<size_t>(i)].dot(
          kernel_eval(s, points[static_cast<size_t>(i)], points[static_cast<size_t>(j)]) *
          vectors[static_cast<size_t>(j)]);
  return g;
}

double flow_invariance_residual(const InvariantSeries& s, double t,
                                std::span<const std::pair<Complex, Complex>> samples) {
  double worst = 0.0;
  for (const auto& [v, z] : samples) {
    const Mat before = kernel_eval(s, v, z);
    const Mat after = kernel_eval(s, evolve(s.flow, t, v), evolve(s.flow, t, z));
    worst = std::max(worst, (after - before).norm());
  }
  return worst;
}

Mat connection_form(const InvariantSeries& s, Complex z) {
  check_series(s);
  const Complex invariant = invariant_polarized(s.flow, z, z);
  const Complex d_invariant = invariant_dz(s.flow, z, z);
  Mat k = Mat::Zero(s.dim, s.dim);
  Mat dk = Mat::Zero(s.dim, s.dim);
  Complex pow_n(1.0, 0.0);    // I^n
  Complex pow_prev(1.0, 0.0); // I^{n-1}
  for (int n = 0; n <= s.n_max(); ++n) {
    k += s.coeffs[static_cast<size_t>(n)] * pow_n;
    if (n >= 1) {
      dk += static_cast<double>(n) * s.coeffs[static_cast<size_t>(n)] * pow_prev;
      pow_prev *= invariant;
    }
    pow_n *= invariant;
  }
  Eigen::FullPivLU<Mat> lu(k);
  if (!lu.isInvertible()) throw SingularKernel("connection_form: K(conj z, z) singular");
  return lu.solve(dk * d_invariant);
}

HamiltonianSeries solve_hamiltonian(const InvariantSeries& s) {
  check_series(s);
  const InvariantSpec inv = invariant(s.flow);
  const int n_max = s.n_max();
  Eigen::FullPivLU<Mat> lu(s.coeffs[0]);
  if (!lu.isInvertible()) throw SingularKernel("solve_hamiltonian: C_0 singular");

  // nu(I) Phi' = Phi Psi, coefficient of I^k:
  //   i [alpha (k-1) C_{k-1} + beta k C_k + gamma (k+1) C_{k+1}] = sum_l C_l Q_{k-l}
  const Complex i(0.0, 1.0);
  HamiltonianSeries psi;
  psi.coeffs.resize(static_cast<size_t>(n_max) + 1, Mat::Zero(s.dim, s.dim));
  for (int k = 0; k <= n_max; ++k) {
    Mat rhs = Mat::Zero(s.dim, s.dim);
    if (k >= 1) rhs += inv.alpha * static_cast<double>(k - 1) * s.coeffs[static_cast<size_t>(k - 1)];
    rhs += inv.beta * static_cast<double>(k) * s.coeffs[static_cast<size_t>(k)];
    if (k + 1 <= n_max)
      rhs += inv.gamma * static_cast<double>(k + 1) * s.coeffs[static_cast<size_t>(k + 1)];
    rhs *= i;
    for (int l = 1; l <= k; ++l)
      rhs -= s.coeffs[static_cast<size_t>(l)] * psi.coeffs[static_cast<size_t>(k - l)];
    psi.coeffs[static_cast<size_t>(k)] = lu.solve(rhs);
  }
  return psi;
}

HamiltonianResidual hamiltonian_residual(const InvariantSeries& s, const HamiltonianSeries& psi,
                                         std::span<const Complex> samples) {
  check_series(s);
  const InvariantSpec inv = invariant(s.flow);
  const int n_max = s.n_max();
  const int n_psi = static_cast<int>(psi.coeffs.size()) - 1;
  HamiltonianResidual out;

  // Per-degree residual of nu(I) Phi' - Phi Psi for degrees where every term
  // is retained (k + 1 <= n_max on the nu side, k <= n_max on the product side).
  const Complex i(0.0, 1.0);
  for (int k = 0; k + 1 <= n_max; ++k) {
    Mat lhs = Mat::Zero(s.dim, s.dim);
    if (k >= 1) lhs += inv.alpha * static_cast<double>(k - 1) * s.coeffs[static_cast<size_t>(k - 1)];
    lhs += inv.beta * static_cast<double>(k) * s.coeffs[static_cast<size_t>(k)];
    lhs += inv.gamma * static_cast<double>(k + 1) * s.coeffs[static_cast<size_t>(k + 1)];
    lhs *= i;
    Mat rhs = Mat::Zero(s.dim, s.dim);
    for (int l = 0; l <= k; ++l)
      if (k - l <= n_psi)
        rhs += s.coeffs[static_cast<size_t>(l)] * psi.coeffs[static_cast<size_t>(k - l)];
    out.per_degree = std::max(out.per_degree, (lhs - rhs).norm());
  }

  // Pointwise residual |K Psi(I) - w dK/dz| on the diagonal.
  for (Complex z : samples) {
    const Complex invariant_z = invariant_polarized(s.flow, z, z);
    const Complex d_invariant = invariant_dz(s.flow, z, z);
    Mat k_val = Mat::Zero(s.dim, s.dim);
    Mat dk_val = Mat::Zero(s.dim, s.dim);
    Mat psi_val = Mat::Zero(s.dim, s.dim);
    Complex pow_n(1.0, 0.0), pow_prev(1.0, 0.0);
    for (int n = 0; n <= n_max; ++n) {
      k_val += s.coeffs[static_cast<size_t>(n)] * pow_n;
      if (n >= 1) {
        dk_val += static_cast<double>(n) * s.coeffs[static_cast<size_t>(n)] * pow_prev;
        pow_prev *= invariant_z;
      }
      if (n <= n_psi) psi_val += psi.coeffs[static_cast<size_t>(n)] * pow_n;
      pow_n *= invariant_z;
    }
    const Mat residual = k_val * psi_val - s.flow.w(z) * d_invariant * dk_val;
    out.pointwise = std::max(out.pointwise, residual.norm());
  }
  return out;
}

double compatibility_residual(const InvariantSeries& s, const HamiltonianSeries& psi) {
  check_series(s);
  const int n_max = std::min(s.n_max(), static_cast<int>(psi.coeffs.size()) - 1);
  double worst = 0.0;
  for (int k = 0; k <= n_max; ++k) {
    Mat acc = Mat::Zero(s.dim, s.dim);
    for (int l = 0; l <= k; ++l) {
      const Mat& q = psi.coeffs[static_cast<size_t>(k - l)];
      acc += s.coeffs[static_cast<size_t>(l)] * q + q.adjoint() * s.coeffs[static_cast<size_t>(l)];
    }
    worst = std::max(worst, acc.norm());
  }
  return worst;
}

Mat normalized_kernel(const InvariantSeries& s, Complex v, Complex z) {
  const Mat kvv = kernel_eval(s, v, v);
  const Mat kzz = kernel_eval(s, z, z);
  const Mat kvz = kernel_eval(s, v, z);
  const Mat root_v = hermitian_sqrt(kvv);
  const Mat root_z = hermitian_sqrt(kzz);
  Eigen::FullPivLU<Mat> lu_v(root_v);
  Eigen::FullPivLU<Mat> lu_z(root_z);
  if (!lu_v.isInvertible() || !lu_z.isInvertible())
    throw SingularKernel("normalized_kernel: diagonal kernel singular");
  return lu_v.solve(kvz) * lu_z.inverse();
}

GaugeResult gauge_trivialize(const TruncatedSeries& phi, const FlowSpec& f, int out_window) {
  if (!phi.is_scalar())
    throw UnsupportedGaugeCase("gauge_trivialize: scalar phi required");
  if (std::abs(f.b) != 0.0 || std::abs(f.c) != 0.0)
    throw UnsupportedGaugeCase("gauge_trivialize: requires b = c = 0");
  if (std::abs(f.a) == 0.0)
    throw UnsupportedGaugeCase("gauge_trivialize: requires a != 0");

  const Complex phi0 = phi.scalar_coeff(0);

  // psi_n = p_n / n for n != 0; z psi' = phi - phi0.
  std::vector<Complex> psi_coeffs;
  for (int n = phi.min_index(); n <= phi.max_index(); ++n)
    psi_coeffs.push_back(n == 0 ? Complex(0.0, 0.0)
                                : phi.scalar_coeff(n) / static_cast<double>(n));
  TruncatedSeries psi = TruncatedSeries::scalar(phi.min_index(), std::move(psi_coeffs));

  TruncatedSeries g_full = series_exp(series_scale(psi, 1.0 / f.a));

  // Keep degrees that are fully informed for the residual identity and
  // within the requested output window.  For pure power series nothing below
  // degree 0 was discarded, so every degree is informed from below.
  int lo, hi;
  if (phi.min_index() >= 0) {
    lo = 0;
    hi = std::min(g_full.max_index(), out_window);
  } else {
    lo = std::max(g_full.min_index() + std::max(phi.max_index(), 0), -out_window);
    hi = std::min(g_full.max_index() + std::min(phi.min_index(), 0), out_window);
  }
  TruncatedSeries g = g_full.truncated(lo, hi);

  GaugeResult out{g, phi0, 0.0};
  out.residual = gauge_residual(g_full, phi, phi0, f);
  return out;
}

double gauge_residual(const TruncatedSeries& g, const TruncatedSeries& phi, Complex phi0,
                      const FlowSpec& f) {
  // w g' = a z g' has the same degree window as g.
  TruncatedSeries lhs = series_scale(g.z_ddz(), f.a);
  TruncatedSeries phi_shift = series_add(phi, TruncatedSeries::scalar(0, {-phi0}));
  TruncatedSeries rhs = series_multiply(phi_shift, g);

  int lo = g.min_index() + std::max(phi.max_index(), 0);
  int hi = g.max_index() + std::min(phi.min_index(), 0);
  if (phi.min_index() >= 0 && g.min_index() >= 0) lo = 0;
  double worst = 0.0;
  for (int n = lo; n <= hi; ++n)
    worst = std::max(worst, std::abs(lhs.scalar_coeff(n) - rhs.scalar_coeff(n)));
  return worst;
}

}  // namespace kq
