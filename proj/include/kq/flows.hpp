#pragma once

// Holomorphic vector fields w(z) = c z^2 + a z + b on the five circularly
// symmetric domains, their one-parameter flows, Mobius-type classification,
// and the real flow invariant I with its companion nu(I) = i(alpha I^2 +
// beta I + gamma).

#include "kq/numcore.hpp"

namespace kq {

enum class DomainKind { Plane, PuncturedPlane, Disc, PuncturedDisc, Annulus };

struct RiemannDomain {
  DomainKind kind = DomainKind::Plane;
  double r = 0.0;  // inner radius, Annulus only, 0 < r < 1

  bool contains(Complex z, double slack = 1e-12) const;
};

struct FlowSpec {
  RiemannDomain domain;
  Complex c{0.0, 0.0};
  Complex a{0.0, 0.0};
  Complex b{0.0, 0.0};

  Complex w(Complex z) const { return c * z * z + a * z + b; }
  // omega for the cases where a is constrained to the imaginary axis:
  // a = i*omega on the plane/punctured domains, a = 2i*omega on the disc.
  double omega() const;
};

// Throws InvalidFlow when the coefficients violate the per-domain constraints
// (Plane: c=0; punctured domains: c=b=0; Disc: c=-conj(b), a=2i*omega).
void validate_flow(const FlowSpec& f);

enum class FlowClassKind { Elliptic, Parabolic, Hyperbolic, Loxodromic };

struct FlowClass {
  FlowClassKind kind;
  bool quantizable;  // false iff Re a != 0
};

std::string to_string(FlowClassKind k);

FlowClass classify(const FlowSpec& f);

// sigma_t(z).  Throws DomainError when z (or the result) leaves the domain
// and OverflowError when e^{at} overflows for loxodromic flows.
Complex evolve(const FlowSpec& f, double t, Complex z);

struct Interval {
  double lo;
  double hi;
  bool lo_open;
  bool hi_open;
  bool contains(double x, double slack = 1e-12) const;
};

struct InvariantSpec {
  FlowSpec flow;
  // nu(I) = i*(alpha I^2 + beta I + gamma)
  double alpha;
  double beta;
  double gamma;
  Interval range;

  Complex nu(double invariant) const {
    return Complex(0.0, (alpha * invariant + beta) * invariant + gamma);
  }
};

// Requires a quantizable flow (Re a = 0), else NotQuantizable.
InvariantSpec invariant(const FlowSpec& f);

double invariant_value(const FlowSpec& f, Complex z);

// Polarized invariant I(conj(v), z): anti-holomorphic in v, holomorphic in z,
// real on the diagonal v = z.
Complex invariant_polarized(const FlowSpec& f, Complex v, Complex z);

// d/dz of the polarized invariant at (conj(v), z).
Complex invariant_dz(const FlowSpec& f, Complex v, Complex z);

}  // namespace kq
