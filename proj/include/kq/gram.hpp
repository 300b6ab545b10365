#pragma once

// Gram blocks Gamma_m^* Gamma_n of the coherent-state Laurent coefficients,
// built from the invariant-series coefficients C_l through the banded beta
// coefficients, plus the two-variable difference-equation verifier and the
// row-summability diagnostic.

#include "kq/flows.hpp"
#include "kq/numcore.hpp"

namespace kq {

// Printed band coefficients.  Zero outside the band (Plane: l in [n, n+m],
// Disc: l in [n-m, n+m], for m <= n); for m > n the value is the conjugate of
// the index-swapped coefficient.  Requires b != 0.
Complex beta_coeff(const FlowSpec& f, int m, int n, int l);

struct GramTable {
  FlowSpec flow;
  int n_max = 0;
  int dim = 0;
  std::vector<Mat> blocks;  // (n_max+1)^2 blocks, row-major over (m, n)

  const Mat& block(int m, int n) const {
    return blocks[static_cast<size_t>(m) * (n_max + 1) + static_cast<size_t>(n)];
  }
  Mat& block(int m, int n) {
    return blocks[static_cast<size_t>(m) * (n_max + 1) + static_cast<size_t>(n)];
  }
};

// Gamma_m^* Gamma_n = sum_l beta^l_{mn} C_l for m <= n, and the adjoint of the
// mirrored block for m > n.  For b != 0 the C list must reach index 2*n_max.
// For b = 0 the table is diagonal with blocks C_n, each required PSD
// (NotPositive otherwise).  The default build parallelizes over (m, n) pairs;
// the serial variant computes identical blocks and is kept for testing.
GramTable gram_from_series(const std::vector<Mat>& c, const FlowSpec& f, int n_max);
GramTable gram_from_series_serial(const std::vector<Mat>& c, const FlowSpec& f, int n_max);

struct DifferenceEqReport {
  Eigen::MatrixXd residual;  // per (m, n), m, n <= n_max - 1
  double max_residual = 0.0;
};

// Residual of
//   conj(c)(m-1) B[m-1,n] + c(n-1) B[m,n-1] + (a n + conj(a) m) B[m,n]
//   + b(n+1) B[m,n+1] + conj(b)(m+1) B[m+1,n]
// over 0 <= m, n <= n_max-1 (rows touching the truncation edge excluded).
DifferenceEqReport verify_difference_eq(const GramTable& g);

struct SummabilityReport {
  std::vector<double> partial_sums;  // partial sums of ||B[m,n]||^2 over n
  std::vector<double> roots;         // ||B[m,n]||^(1/n) for n >= 1
};

SummabilityReport gram_summability(const GramTable& g, int m);

// Independent oracle: coefficient of conj(v)^m z^n in I(conj v, z)^l,
// extracted by trapezoid sampling on circles |v| = |z| = radius.
Complex beta_oracle(const FlowSpec& f, int m, int n, int l, int samples = 64,
                    double radius = 0.35);

}  // namespace kq
