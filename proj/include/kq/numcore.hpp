#pragma once

// Foundational value types shared by all modules: complex scalars, Hermitian
// matrices, truncated (Laurent) series in scalar or matrix mode, and finitely
// atomic PSD-matrix-weighted measures on the real line.

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kq {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;

// Tolerances are relative to the matrix norm scale (1 + ||M||).
inline constexpr double herm_tol = 1e-10;
inline constexpr double psd_tol = 1e-10;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidMatrix : Error { using Error::Error; };
struct ModeError : Error { using Error::Error; };
struct EmptyMeasure : Error { using Error::Error; };
struct InvalidFlow : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct OverflowError : Error { using Error::Error; };
struct NotQuantizable : Error { using Error::Error; };
struct DegenerateRecurrence : Error { using Error::Error; };
struct ClosedFormUnavailable : Error { using Error::Error; };
struct CaseError : Error { using Error::Error; };
struct DivergenceError : Error { using Error::Error; };
struct NotPositive : Error { using Error::Error; };
struct SingularKernel : Error { using Error::Error; };
struct UnsupportedGaugeCase : Error { using Error::Error; };
struct DegreeExceedsSupport : Error { using Error::Error; };

bool all_finite(const Mat& m);
bool is_hermitian(const Mat& m, double tol = herm_tol);
double hermiticity_residual(const Mat& m);

// Smallest eigenvalue of the symmetrized matrix (M + M^dag)/2.
double mat_min_eigenvalue(const Mat& m);

// Hermitian PSD square root via eigendecomposition; eigenvalues below
// `floor_tol` times the norm scale are clamped to zero.
Mat hermitian_sqrt(const Mat& m, double floor_tol = psd_tol);

// -----------------------------------------------------------------------------
// Truncated (Laurent) series.  Coefficients run over the integer window
// [min_index, max_index]; scalar and matrix mode never mix in one series.

class TruncatedSeries {
 public:
  enum class Mode { Scalar, Matrix };

  static TruncatedSeries scalar(int min_index, std::vector<Complex> coeffs);
  static TruncatedSeries matrix(int min_index, std::vector<Mat> coeffs);
  static TruncatedSeries zero_like(const TruncatedSeries& s, int min_index, int max_index);

  Mode mode() const { return mode_; }
  bool is_scalar() const { return mode_ == Mode::Scalar; }
  int dim() const { return dim_; }
  int min_index() const { return min_index_; }
  int max_index() const { return min_index_ + static_cast<int>(coeffs_.size()) - 1; }
  int size() const { return static_cast<int>(coeffs_.size()); }

  // Coefficient at power n; zero outside the retained window.
  Mat coeff(int n) const;
  Complex scalar_coeff(int n) const;
  void set_coeff(int n, const Mat& value);

  // Sum of |coeff| over the window (Frobenius norms in matrix mode).
  double norm1() const;

  TruncatedSeries truncated(int lo, int hi) const;

  // z d/dz: multiplies coefficient n by n, window unchanged.
  TruncatedSeries z_ddz() const;

  Complex eval_scalar(Complex z) const;

 private:
  TruncatedSeries(Mode mode, int dim, int min_index, std::vector<Mat> coeffs)
      : mode_(mode), dim_(dim), min_index_(min_index), coeffs_(std::move(coeffs)) {}

  Mode mode_;
  int dim_;
  int min_index_;
  std::vector<Mat> coeffs_;
};

// Cauchy product over the retained windows.  The result window is
// [minA+minB, maxA+maxB]; coefficients up to min(maxA+minB, maxB+minA) are
// exact when the inputs are truncations of longer series.
TruncatedSeries series_multiply(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_scale(const TruncatedSeries& a, Complex factor);

// exp of a series, summed as sum_j s^j / j! with exact polynomial products
// until the term bound drops below `tail_tol` relative to exp(norm1).
TruncatedSeries series_exp(const TruncatedSeries& s, double tail_tol = 1e-24);

// -----------------------------------------------------------------------------
// Finitely atomic PSD-matrix-weighted measure on the real line.

struct MeasureAtom {
  double lambda;
  Mat weight;
};

class MatrixMeasure {
 public:
  MatrixMeasure() = default;
  // Atoms are sorted by lambda; duplicates, non-Hermitian or non-PSD weights
  // are rejected.
  explicit MatrixMeasure(std::vector<MeasureAtom> atoms);

  bool empty() const { return atoms_.empty(); }
  int dim() const { return dim_; }
  const std::vector<MeasureAtom>& atoms() const { return atoms_; }

 private:
  std::vector<MeasureAtom> atoms_;
  int dim_ = 0;
};

// sum_k f(lambda_k) W_k.  Not necessarily Hermitian when f is complex-valued.
Mat measure_integrate(const MatrixMeasure& mu, const std::function<Complex(double)>& f);

}  // namespace kq
