#pragma once

// Quantizing polynomial family K_n(i*lambda) built from the three-term
// recurrence, the four printed closed-form families, and the lambda-resolved
// coherent-state functions and kernels.

#include "kq/flows.hpp"
#include "kq/numcore.hpp"

namespace kq {

// Coefficient table of K_n(x) = sum_l coeff[n][l] x^l in the variable x = i*lambda.
struct PolyFamily {
  FlowSpec flow;
  int n_max = 0;
  std::vector<std::vector<Complex>> coeff;  // coeff[n] has n+1 entries

  Complex eval(int n, double lambda) const;  // Horner in x = i*lambda
};

// Recurrence (with K_{-1} = 0, K_0 = 1):
//   K_{n+1}(x) = [x K_n(x) - n a K_n(x) - (n-1) c K_{n-1}(x)] / ((n+1) b)
// Requires b != 0, else DegenerateRecurrence.
PolyFamily build_recurrence(const FlowSpec& f, int n_max);

// K_0..K_{n_max} at fixed lambda, iterating the recurrence on values; avoids
// the cancellation of Horner on the expanded coefficient table at high degree.
std::vector<Complex> recurrence_values(const FlowSpec& f, int n_max, double lambda);

// Printed closed forms, including the family prefactors:
//   Plane, omega != 0:  (-i omega)^{n-1} / (n! b^n) * (-lambda/omega)_n
//   Plane, omega  = 0:  (i lambda / b)^n / n!
//   Disc, |b|^2 != omega^2, omega != 0:  Meixner-Pollaczek (mu = 0 limit)
//   Disc, |b|^2  = omega^2:              Laguerre L_n^{(-1)}(lambda/omega)
// Disc with omega = 0 has no printed family -> ClosedFormUnavailable.
Complex closed_form(const FlowSpec& f, int n, double lambda);

enum class ClosedFamily { PochhammerPlane, ExponentialPlane, MeixnerPollaczekDisc, LaguerreDisc };
ClosedFamily closed_family(const FlowSpec& f);

// Ratio closed_form / recurrence K_n, constant over n and lambda.
Complex family_constant(const FlowSpec& f);

// sum_{n=0}^{n_terms} K_n(i lambda) z^n, with a divergence guard that trips
// when the block-wise term magnitudes grow for 5 consecutive blocks.
Complex coherent_lambda(const FlowSpec& f, Complex z, double lambda, int n_terms);

struct KernelLambda {
  Complex value;          // conj(coherent(v)) * coherent(z), the primary route
  Complex via_invariant;  // coherent evaluated at I(conj v, z) / (i conj b)
  double residual;        // |value - via_invariant|
};

KernelLambda kernel_lambda(const FlowSpec& f, Complex v, Complex z, double lambda, int n_terms);

// Closed generating functions for the coherent-state function per family
// (prefactors included); used as cross-checks for coherent_lambda.
Complex generating_function(const FlowSpec& f, Complex z, double lambda);

}  // namespace kq
