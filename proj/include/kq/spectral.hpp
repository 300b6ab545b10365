#pragma once

// The quantum side: matrix-valued spectral measures and their moments, series
// coefficients reconstructed from a measure, the truncated tridiagonal
// generator on coefficient space, orthonormal polynomials with the Jacobi
// matrix (dim V = 1), and the Bochner-type kernel reconstruction.

#include "kq/flows.hpp"
#include "kq/kernelspace.hpp"
#include "kq/numcore.hpp"
#include "kq/polyfam.hpp"

namespace kq {

// mu_n = sum_k lambda_k^n W_k.
Mat moments(const MatrixMeasure& mu, int n);

// C_n = sum_k (i conj b)^{-n} K_n(i lambda_k) W_k; requires b != 0 (for b = 0
// the diagonal coefficients are supplied directly by the caller).  The
// Hermiticity residual of the worst coefficient is recorded on the result,
// not enforced.
InvariantSeries series_from_measure(const MatrixMeasure& mu, const FlowSpec& f, int n_max);

struct BochnerResult {
  Mat reconstructed;  // sum_k K(conj v, z; lambda_k) W_k
  Mat series_value;   // kernel_eval of series_from_measure at (v, z)
  double residual;    // relative difference
};

BochnerResult bochner_reconstruct(const MatrixMeasure& mu, const FlowSpec& f, Complex v,
                                  Complex z, int n_terms);

// Matrix of i*F_hat in the Gamma basis, (n_max+1)^2: column n carries
// c(n-1) at row n-1, a*n at row n, b(n+1) at row n+1; the coupling out of the
// last row is dropped by the truncation.
Mat fhat_tridiagonal(const FlowSpec& f, int n_max);

// Monomial coefficient tables; polys[n][k] is the lambda^k coefficient of P_n.
struct PolyTable {
  std::vector<std::vector<double>> polys;

  double eval(int n, double lambda) const;
};

// Gram-Schmidt orthonormalization of 1, lambda, lambda^2, ... in L^2(mu) for
// a scalar measure; requires at least n_max+1 atoms (DegreeExceedsSupport).
// Leading coefficients are positive.
PolyTable orthonormal_polys(const MatrixMeasure& mu, int n_max);

struct JacobiMatrix {
  std::vector<double> diag;     // a_n = <lambda P_n, P_n>
  std::vector<double> offdiag;  // b_n = <lambda P_n, P_{n+1}> > 0

  Mat dense() const;
  Eigen::VectorXd eigenvalues() const;
};

JacobiMatrix jacobi_matrix(const MatrixMeasure& mu, int size);

// L^2(mu) model helpers.  Vectors are one B(V) block per atom; the inner
// product is sum_k gamma_k^dag W_k delta_k.
using L2Vec = std::vector<Mat>;

Mat l2_inner(const MatrixMeasure& mu, const L2Vec& gamma, const L2Vec& delta);

// The function lambda -> K_n(i lambda) 1_V sampled on the atoms.
L2Vec l2_poly_vector(const MatrixMeasure& mu, const PolyFamily& fam, int n);

// <K_m(i .), K_n(i .)>_mu; equals the beta-built Gram block.
Mat l2_gram_block(const MatrixMeasure& mu, const PolyFamily& fam, int m, int n);

// Rank of the atom-evaluation matrix [K_n(i lambda_k)] for n = 0..n_max.
int l2_rank(const MatrixMeasure& mu, const PolyFamily& fam, int n_max);

}  // namespace kq
