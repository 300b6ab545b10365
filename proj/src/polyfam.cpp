#include "kq/polyfam.hpp"

#include <cmath>

namespace kq {

namespace {

const Complex kI(0.0, 1.0);

// K_n values at fixed lambda by the three-term recurrence; cheaper and
// stabler than expanding the coefficient table when only values are needed.
class RecurrenceEvaluator {
 public:
  RecurrenceEvaluator(const FlowSpec& f, double lambda)
      : a_(f.a), b_(f.b), c_(f.c), x_(kI * lambda) {}

  // Value of K_n; must be called with n = 0, 1, 2, ... in order.
  Complex next() {
    if (n_ == 0) { ++n_; return curr_; }
    const double n = static_cast<double>(n_ - 1);
    const Complex val = (x_ * curr_ - n * a_ * curr_ - (n - 1.0) * c_ * prev_) / ((n + 1.0) * b_);
    prev_ = curr_;
    curr_ = val;
    ++n_;
    return val;
  }

 private:
  Complex a_, b_, c_, x_;
  Complex prev_{0.0, 0.0};
  Complex curr_{1.0, 0.0};
  int n_ = 0;
};

void require_b_nonzero(const FlowSpec& f, const char* who) {
  if (std::abs(f.b) == 0.0)
    throw DegenerateRecurrence(std::string(who) + ": b = 0 (diagonal case, no recurrence)");
}

// Pochhammer symbol (x)_n for complex x.
Complex pochhammer(Complex x, int n) {
  Complex acc(1.0, 0.0);
  for (int j = 0; j < n; ++j) acc *= x + static_cast<double>(j);
  return acc;
}

double binom(int p, int q) {
  if (q < 0 || q > p) return 0.0;
  double acc = 1.0;
  for (int j = 1; j <= q; ++j) acc = acc * (p - q + j) / j;
  return acc;
}

}  // namespace

Complex PolyFamily::eval(int n, double lambda) const {
  if (n < 0 || n > n_max) throw Error("PolyFamily::eval: degree out of range");
  const Complex x = kI * lambda;
  Complex acc(0.0, 0.0);
  for (int l = n; l >= 0; --l) acc = acc * x + coeff[static_cast<size_t>(n)][static_cast<size_t>(l)];
  return acc;
}

PolyFamily build_recurrence(const FlowSpec& f, int n_max) {
  validate_flow(f);
  require_b_nonzero(f, "build_recurrence");
  PolyFamily fam;
  fam.flow = f;
  fam.n_max = n_max;
  fam.coeff.resize(static_cast<size_t>(n_max) + 1);
  fam.coeff[0] = {Complex(1.0, 0.0)};
  if (n_max == 0) return fam;
  fam.coeff[1] = {Complex(0.0, 0.0), 1.0 / f.b};
  for (int n = 1; n < n_max; ++n) {
    const auto& kn = fam.coeff[static_cast<size_t>(n)];
    const auto& km = fam.coeff[static_cast<size_t>(n - 1)];
    std::vector<Complex> next(static_cast<size_t>(n) + 2, Complex(0.0, 0.0));
    const Complex inv = 1.0 / ((n + 1.0) * f.b);
    for (int l = 0; l <= n; ++l) next[static_cast<size_t>(l) + 1] += inv * kn[static_cast<size_t>(l)];
    for (int l = 0; l <= n; ++l) next[static_cast<size_t>(l)] -= inv * static_cast<double>(n) * f.a * kn[static_cast<size_t>(l)];
    for (int l = 0; l <= n - 1; ++l)
      next[static_cast<size_t>(l)] -= inv * (n - 1.0) * f.c * km[static_cast<size_t>(l)];
    fam.coeff[static_cast<size_t>(n) + 1] = std::move(next);
  }
  return fam;
}

ClosedFamily closed_family(const FlowSpec& f) {
  validate_flow(f);
  require_b_nonzero(f, "closed_family");
  const double omega = f.omega();
  if (f.domain.kind == DomainKind::Plane)
    return omega == 0.0 ? ClosedFamily::ExponentialPlane : ClosedFamily::PochhammerPlane;
  if (f.domain.kind == DomainKind::Disc) {
    const double disc = std::norm(f.b) - omega * omega;
    const double scale = std::norm(f.b) + omega * omega;
    if (std::abs(disc) <= 1e-12 * scale) return ClosedFamily::LaguerreDisc;
    if (omega == 0.0)
      throw ClosedFormUnavailable("closed_family: disc with omega = 0 has no printed family");
    return ClosedFamily::MeixnerPollaczekDisc;
  }
  throw CaseError("closed_family: no closed family for punctured domains");
}

Complex family_constant(const FlowSpec& f) {
  switch (closed_family(f)) {
    case ClosedFamily::PochhammerPlane: return kI / f.omega();
    default: return Complex(1.0, 0.0);
  }
}

Complex closed_form(const FlowSpec& f, int n, double lambda) {
  if (n < 0) throw CaseError("closed_form: negative degree");
  double log_nfact = std::lgamma(n + 1.0);
  switch (closed_family(f)) {
    case ClosedFamily::ExponentialPlane:
      return std::pow(kI * lambda / f.b, n) / std::exp(log_nfact);
    case ClosedFamily::PochhammerPlane: {
      const double omega = f.omega();
      const Complex pref = std::pow(-kI * omega, n - 1) / (std::exp(log_nfact) * std::pow(f.b, n));
      return pref * pochhammer(Complex(-lambda / omega, 0.0), n);
    }
    case ClosedFamily::LaguerreDisc: {
      // L_n^{(-1)}(x) = sum_{k>=1} (-1)^k C(n-1, k-1) x^k / k!
      const double omega = f.omega();
      const double x = lambda / omega;
      if (n == 0) return std::pow(f.omega() / (kI * f.b), 0);
      double acc = 0.0;
      double term_pow = 1.0;
      for (int k = 1; k <= n; ++k) {
        term_pow *= x / k;
        acc += ((k % 2) ? -1.0 : 1.0) * binom(n - 1, k - 1) * term_pow;
      }
      return std::pow(omega / (kI * f.b), n) * acc;
    }
    case ClosedFamily::MeixnerPollaczekDisc: {
      // mu -> 0 limit of (2mu)_n / n! 2F1(-n, mu - i lambda/A; 2mu; 1 - e^{-2i phi})
      // with A = (2 omega/|omega|) sqrt(|b|^2 - omega^2), cos phi = |omega|/|b|.
      // Consistency with the three-term recurrence forces cot phi = 2 omega / A,
      // which fixes the sign of A relative to phi.  A and phi go imaginary for
      // |b| < |omega|; complex arithmetic covers both subcases.
      const double omega = f.omega();
      const Complex A = (2.0 * omega / std::abs(omega)) *
                        std::sqrt(Complex(std::norm(f.b) - omega * omega, 0.0));
      const Complex phi = std::acos(Complex(std::abs(omega) / std::abs(f.b), 0.0));
      const Complex s = 1.0 - std::exp(-2.0 * kI * phi);
      const Complex p = -kI * lambda / A;
      if (n == 0) return Complex(1.0, 0.0);
      // Degenerate-limit sum; term_k = (-n)_k (p)_k (n-1)!/(k-1)! s^k / (k! n!)
      // accumulated through the ratio term_{k+1}/term_k = (k-n)(p+k)s/(k(k+1)).
      Complex sum(0.0, 0.0);
      Complex term = -p * s;
      for (int k = 1; k <= n; ++k) {
        sum += term;
        term *= (static_cast<double>(k - n) * (p + static_cast<double>(k)) * s) /
                (static_cast<double>(k) * (k + 1.0));
      }
      const Complex pref = std::pow(A * std::exp(kI * phi) / (2.0 * kI * f.b * std::sin(phi)), n);
      return pref * sum;
    }
  }
  throw CaseError("closed_form: unreachable");
}

Complex coherent_lambda(const FlowSpec& f, Complex z, double lambda, int n_terms) {
  validate_flow(f);
  require_b_nonzero(f, "coherent_lambda");
  RecurrenceEvaluator rec(f, lambda);
  Complex acc(0.0, 0.0);
  Complex z_pow(1.0, 0.0);
  constexpr int block = 8;
  double prev_block_max = 0.0;
  int growing_blocks = 0;
  double block_max = 0.0;
  for (int n = 0; n <= n_terms; ++n) {
    const Complex term = rec.next() * z_pow;
    acc += term;
    z_pow *= z;
    block_max = std::max(block_max, std::abs(term));
    if ((n + 1) % block == 0) {
      if (n + 1 > block && block_max > prev_block_max && block_max > 1e-14 * (1.0 + std::abs(acc))) {
        if (++growing_blocks >= 5)
          throw DivergenceError("coherent_lambda: series diverging at |z| = " +
                                std::to_string(std::abs(z)));
      } else {
        growing_blocks = 0;
      }
      prev_block_max = block_max;
      block_max = 0.0;
    }
  }
  if (!std::isfinite(acc.real()) || !std::isfinite(acc.imag()))
    throw DivergenceError("coherent_lambda: non-finite partial sum");
  return acc;
}

KernelLambda kernel_lambda(const FlowSpec& f, Complex v, Complex z, double lambda, int n_terms) {
  require_b_nonzero(f, "kernel_lambda");
  KernelLambda out;
  out.value = std::conj(coherent_lambda(f, v, lambda, n_terms)) *
              coherent_lambda(f, z, lambda, n_terms);
  const Complex u = invariant_polarized(f, v, z) / (kI * std::conj(f.b));
  out.via_invariant = coherent_lambda(f, u, lambda, n_terms);
  out.residual = std::abs(out.value - out.via_invariant);
  return out;
}

Complex generating_function(const FlowSpec& f, Complex z, double lambda) {
  switch (closed_family(f)) {
    case ClosedFamily::ExponentialPlane:
      return std::exp(kI * lambda * z / f.b);
    case ClosedFamily::PochhammerPlane: {
      // (i/omega) * 1F0(-lambda/omega; -i omega z / b), principal branch.
      const double omega = f.omega();
      const Complex base = 1.0 + kI * omega * z / f.b;
      return (kI / omega) * std::exp((lambda / omega) * std::log(base));
    }
    case ClosedFamily::LaguerreDisc: {
      const double omega = f.omega();
      return std::exp(lambda * z / (omega * z - kI * f.b));
    }
    case ClosedFamily::MeixnerPollaczekDisc: {
      const double omega = f.omega();
      const Complex A = (2.0 * omega / std::abs(omega)) *
                        std::sqrt(Complex(std::norm(f.b) - omega * omega, 0.0));
      const Complex phi = std::acos(Complex(std::abs(omega) / std::abs(f.b), 0.0));
      const Complex s2 = 2.0 * kI * f.b * std::sin(phi);
      const Complex ratio = (s2 - A * std::exp(-kI * phi) * z) / (s2 - A * std::exp(kI * phi) * z);
      return std::exp((kI * lambda / A) * std::log(ratio));
    }
  }
  throw CaseError("generating_function: unreachable");
}

}  // namespace kq
