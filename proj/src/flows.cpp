#include "kq/flows.hpp"

#include <cmath>
#include <limits>

namespace kq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool near_zero(Complex x, double scale) { return std::abs(x) <= 1e-14 * (1.0 + scale); }

}  // namespace

bool RiemannDomain::contains(Complex z, double slack) const {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  const double az = std::abs(z);
  switch (kind) {
    case DomainKind::Plane: return true;
    case DomainKind::PuncturedPlane: return az > 0.0;
    case DomainKind::Disc: return az < 1.0 + slack;
    case DomainKind::PuncturedDisc: return az > 0.0 && az < 1.0 + slack;
    case DomainKind::Annulus: return az > r - slack && az < 1.0 + slack;
  }
  return false;
}

double FlowSpec::omega() const {
  return domain.kind == DomainKind::Disc ? 0.5 * a.imag() : a.imag();
}

void validate_flow(const FlowSpec& f) {
  const double scale = std::abs(f.a) + std::abs(f.b) + std::abs(f.c);
  switch (f.domain.kind) {
    case DomainKind::Plane:
      if (!near_zero(f.c, scale)) throw InvalidFlow("plane flow requires c = 0");
      break;
    case DomainKind::PuncturedPlane:
    case DomainKind::PuncturedDisc:
    case DomainKind::Annulus:
      if (!near_zero(f.c, scale) || !near_zero(f.b, scale))
        throw InvalidFlow("punctured-domain flow requires b = c = 0");
      if (f.domain.kind == DomainKind::Annulus && !(f.domain.r > 0.0 && f.domain.r < 1.0))
        throw InvalidFlow("annulus requires 0 < r < 1");
      break;
    case DomainKind::Disc:
      if (!near_zero(f.c + std::conj(f.b), scale))
        throw InvalidFlow("disc flow requires c = -conj(b)");
      if (std::abs(f.a.real()) > 1e-14 * (1.0 + scale))
        throw InvalidFlow("disc flow requires a = 2i*omega with omega real");
      break;
  }
}

std::string to_string(FlowClassKind k) {
  switch (k) {
    case FlowClassKind::Elliptic: return "elliptic";
    case FlowClassKind::Parabolic: return "parabolic";
    case FlowClassKind::Hyperbolic: return "hyperbolic";
    case FlowClassKind::Loxodromic: return "loxodromic";
  }
  return "unknown";
}

FlowClass classify(const FlowSpec& f) {
  validate_flow(f);
  const bool quantizable = std::abs(f.a.real()) <= 1e-14 * (1.0 + std::abs(f.a));
  if (f.domain.kind == DomainKind::Disc) {
    const double omega = f.omega();
    const double disc = std::norm(f.b) - omega * omega;
    const double scale = std::norm(f.b) + omega * omega;
    FlowClassKind kind = FlowClassKind::Parabolic;
    if (disc > 1e-12 * (1.0 + scale)) kind = FlowClassKind::Hyperbolic;
    else if (disc < -1e-12 * (1.0 + scale)) kind = FlowClassKind::Elliptic;
    return {kind, quantizable};
  }
  // Plane and punctured domains.  Translation flows (a = 0, b != 0) are
  // parabolic; for a != 0 the flow is conjugate to multiplication by e^{at}
  // and inherits the multiplier class regardless of b.
  if (std::abs(f.a) == 0.0) return {FlowClassKind::Parabolic, true};
  if (!quantizable) return {FlowClassKind::Loxodromic, false};
  return {FlowClassKind::Elliptic, true};
}

Complex evolve(const FlowSpec& f, double t, Complex z) {
  validate_flow(f);
  if (!f.domain.contains(z)) throw DomainError("evolve: point outside domain");

  Complex out;
  switch (f.domain.kind) {
    case DomainKind::PuncturedPlane:
    case DomainKind::PuncturedDisc:
    case DomainKind::Annulus: {
      if (std::abs(f.a.real() * t) > 700.0) throw OverflowError("evolve: e^{at} overflow");
      out = std::exp(f.a * t) * z;
      break;
    }
    case DomainKind::Plane: {
      if (std::abs(f.a.real() * t) > 700.0) throw OverflowError("evolve: e^{at} overflow");
      if (std::abs(f.a) == 0.0) {
        out = z + f.b * t;
      } else {
        const Complex e = std::exp(f.a * t);
        out = e * z + (f.b / f.a) * (e - 1.0);
      }
      break;
    }
    case DomainKind::Disc: {
      const double omega = f.omega();
      const Complex i_omega(0.0, omega);
      const double rho2 = std::norm(f.b) - omega * omega;
      const double scale = std::norm(f.b) + omega * omega;
      if (std::abs(rho2) <= 1e-12 * (1.0 + scale)) {
        // rho = 0 limit: rational parabolic form.
        const Complex num = z * (1.0 + i_omega * t) + f.b * t;
        const Complex den = z * std::conj(f.b) * t + 1.0 - i_omega * t;
        out = num / den;
      } else {
        // Complex rho covers both the hyperbolic (rho real) and elliptic
        // (rho imaginary) subcases in one code path.
        const Complex rho = std::sqrt(Complex(rho2, 0.0));
        const Complex ch = std::cosh(rho * t);
        const Complex sh = std::sinh(rho * t);
        const Complex num = z * (rho * ch + i_omega * sh) + f.b * sh;
        const Complex den = z * std::conj(f.b) * sh + rho * ch - i_omega * sh;
        out = num / den;
      }
      break;
    }
  }
  if (!std::isfinite(out.real()) || !std::isfinite(out.imag()))
    throw OverflowError("evolve: non-finite result");
  if (!f.domain.contains(out)) throw DomainError("evolve: flow left the domain");
  return out;
}

bool Interval::contains(double x, double slack) const {
  if (x < lo - slack || x > hi + slack) return false;
  return true;
}

InvariantSpec invariant(const FlowSpec& f) {
  validate_flow(f);
  if (!classify(f).quantizable) throw NotQuantizable("invariant: flow has Re a != 0");

  InvariantSpec spec;
  spec.flow = f;
  const double omega = f.omega();
  const double b2 = std::norm(f.b);
  switch (f.domain.kind) {
    case DomainKind::PuncturedPlane:
      spec.alpha = 0.0; spec.beta = omega; spec.gamma = 0.0;
      spec.range = {0.0, kInf, true, true};
      break;
    case DomainKind::PuncturedDisc:
      spec.alpha = 0.0; spec.beta = omega; spec.gamma = 0.0;
      spec.range = {0.0, 1.0, true, true};
      break;
    case DomainKind::Annulus:
      spec.alpha = 0.0; spec.beta = omega; spec.gamma = 0.0;
      spec.range = {f.domain.r * f.domain.r, 1.0, true, true};
      break;
    case DomainKind::Plane:
      spec.alpha = 0.0; spec.beta = omega; spec.gamma = b2;
      if (omega == 0.0) spec.range = {-kInf, kInf, true, true};
      else if (omega > 0.0) spec.range = {-b2 / omega, kInf, false, true};
      else spec.range = {-kInf, -b2 / omega, true, false};
      break;
    case DomainKind::Disc:
      spec.alpha = 1.0; spec.beta = 2.0 * omega; spec.gamma = b2;
      if (std::abs(f.b) > 0.0) spec.range = {-kInf, kInf, true, true};
      else if (omega >= 0.0) spec.range = {0.0, kInf, false, true};
      else spec.range = {-kInf, 0.0, true, false};
      break;
  }
  return spec;
}

Complex invariant_polarized(const FlowSpec& f, Complex v, Complex z) {
  const Complex vbar = std::conj(v);
  const Complex i(0.0, 1.0);
  switch (f.domain.kind) {
    case DomainKind::PuncturedPlane:
    case DomainKind::PuncturedDisc:
    case DomainKind::Annulus:
      return vbar * z;
    case DomainKind::Plane:
      return f.omega() * vbar * z + i * std::conj(f.b) * z - i * f.b * vbar;
    case DomainKind::Disc: {
      const Complex num =
          2.0 * f.omega() * vbar * z + i * std::conj(f.b) * z - i * f.b * vbar;
      return num / (1.0 - vbar * z);
    }
  }
  throw Error("invariant_polarized: unreachable");
}

double invariant_value(const FlowSpec& f, Complex z) {
  if (!f.domain.contains(z)) throw DomainError("invariant_value: point outside domain");
  return invariant_polarized(f, z, z).real();
}

Complex invariant_dz(const FlowSpec& f, Complex v, Complex z) {
  const Complex vbar = std::conj(v);
  const Complex i(0.0, 1.0);
  switch (f.domain.kind) {
    case DomainKind::PuncturedPlane:
    case DomainKind::PuncturedDisc:
    case DomainKind::Annulus:
      return vbar;
    case DomainKind::Plane:
      return f.omega() * vbar + i * std::conj(f.b);
    case DomainKind::Disc: {
      const Complex q = 1.0 - vbar * z;
      const Complex p =
          2.0 * f.omega() * vbar * z + i * std::conj(f.b) * z - i * f.b * vbar;
      const Complex dp = 2.0 * f.omega() * vbar + i * std::conj(f.b);
      return (dp * q + p * vbar) / (q * q);
    }
  }
  throw Error("invariant_dz: unreachable");
}

}  // namespace kq
