#pragma once

// Matrix-valued positive kernels K(conj v, z) = Phi(I(conj v, z)) assembled
// from invariant series, the local quantization checks (positivity, flow
// invariance, connection form, Hamiltonian ODE), the normalized
// transition-amplitude kernel, and the gauge trivialization for b = 0 flows.

#include "kq/flows.hpp"
#include "kq/numcore.hpp"

#include <span>
#include <utility>

namespace kq {

struct InvariantSeries {
  FlowSpec flow;
  int dim = 1;
  std::vector<Mat> coeffs;          // C_n, n = 0..n_max, Hermitian
  double herm_residual = 0.0;       // reported by series_from_measure

  int n_max() const { return static_cast<int>(coeffs.size()) - 1; }
};

// Psi(I) = sum Q_n I^n; the local Hamiltonian in the invariant variable.
struct HamiltonianSeries {
  std::vector<Mat> coeffs;
};

// sum_n C_n I(conj v, z)^n with a divergence guard on growing partial sums.
Mat kernel_eval(const InvariantSeries& s, Complex v, Complex z);

// G_ij = <v_i, K(conj z_i, z_j) v_j>.
Mat gram_matrix(const InvariantSeries& s, std::span<const Complex> points,
                std::span<const Eigen::VectorXcd> vectors);

// max over sample pairs of ||K(conj sigma_t v, sigma_t z) - K(conj v, z)||.
double flow_invariance_residual(const InvariantSeries& s, double t,
                                std::span<const std::pair<Complex, Complex>> samples);

// theta(z) = K(conj z, z)^{-1} d/dz K(conj z, z), series-differentiated.
Mat connection_form(const InvariantSeries& s, Complex z);

// Solves nu(I) Phi' = Phi Psi for Psi degree by degree (C_0 must be
// invertible).
HamiltonianSeries solve_hamiltonian(const InvariantSeries& s);

struct HamiltonianResidual {
  double pointwise = 0.0;   // max |K Psi(I) - w dK/dz| over samples
  double per_degree = 0.0;  // max coefficient norm of nu(I) Phi' - Phi Psi
};

HamiltonianResidual hamiltonian_residual(const InvariantSeries& s, const HamiltonianSeries& psi,
                                         std::span<const Complex> samples);

// Per-degree norm of sum_l (C_l Q_{k-l} + Q_{k-l}^dag C_l).
double compatibility_residual(const InvariantSeries& s, const HamiltonianSeries& psi);

// A = K(conj v, v)^{-1/2} K(conj v, z) K(conj z, z)^{-1/2} with Hermitian PSD
// square roots.
Mat normalized_kernel(const InvariantSeries& s, Complex v, Complex z);

struct GaugeResult {
  TruncatedSeries g;   // exp(psi(z)/a) on the returned window
  Complex phi0;        // constant part p_0 of phi
  double residual;     // max coefficient norm of w g' - (phi - phi0) g
};

// Gauge trivialization for w(z) = a z with a != 0 and scalar phi: psi_n =
// p_n / n for n != 0, g = exp(psi/a).  The returned window is chosen so the
// defining identity holds at every retained degree.
GaugeResult gauge_trivialize(const TruncatedSeries& phi, const FlowSpec& f,
                             int out_window = 16);

// Residual of w g' - (phi - phi0) g over the degrees of g that are fully
// informed by the retained windows.
double gauge_residual(const TruncatedSeries& g, const TruncatedSeries& phi, Complex phi0,
                      const FlowSpec& f);

}  // namespace kq
