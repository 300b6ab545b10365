#include "kq/sampling.hpp"

#include <cmath>
#include <numbers>

namespace kq {

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

std::vector<Complex> domain_samples(const RiemannDomain& domain, int count, double radius,
                                    int offset) {
  std::vector<Complex> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double u = halton(i + offset, 2);
    const double v = halton(i + offset, 3);
    Complex z;
    switch (domain.kind) {
      case DomainKind::Plane:
        z = Complex(radius * (2.0 * u - 1.0), radius * (2.0 * v - 1.0));
        break;
      case DomainKind::Disc:
        z = std::polar(radius * std::sqrt(u), 2.0 * std::numbers::pi * v);
        break;
      case DomainKind::PuncturedPlane:
      case DomainKind::PuncturedDisc:
        z = std::polar(radius * (0.25 + 0.75 * u), 2.0 * std::numbers::pi * v);
        break;
      case DomainKind::Annulus: {
        const double r0 = domain.r;
        const double rad = r0 + (std::min(radius, 0.999) - r0) * u;
        z = std::polar(std::max(rad, r0 + 0.5 * (1.0 - r0) * 0.01), 2.0 * std::numbers::pi * v);
        break;
      }
    }
    out.push_back(z);
  }
  return out;
}

std::vector<std::pair<Complex, Complex>> domain_sample_pairs(const RiemannDomain& domain,
                                                             int count, double radius) {
  const std::vector<Complex> pts = domain_samples(domain, 2 * count, radius);
  std::vector<std::pair<Complex, Complex>> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i)
    out.emplace_back(pts[static_cast<size_t>(2 * i)], pts[static_cast<size_t>(2 * i + 1)]);
  return out;
}

Mat random_hermitian(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(dist(rng), dist(rng));
  return 0.5 * (g + g.adjoint());
}

MatrixMeasure random_measure(std::mt19937_64& rng, int atoms, int dim, double lambda_lo,
                             double lambda_hi) {
  std::uniform_real_distribution<double> loc(lambda_lo, lambda_hi);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::vector<MeasureAtom> list;
  list.reserve(static_cast<size_t>(atoms));
  for (int k = 0; k < atoms; ++k) {
    Mat g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) g(i, j) = Complex(entry(rng), entry(rng));
    Mat w = g.adjoint() * g + 0.05 * Mat::Identity(dim, dim);
    double lambda = loc(rng);
    // Nudge collisions apart; MatrixMeasure requires strictly increasing atoms.
    for (const MeasureAtom& prev : list)
      if (std::abs(prev.lambda - lambda) < 1e-6) lambda += 1e-3 * (k + 1);
    list.push_back({lambda, std::move(w)});
  }
  return MatrixMeasure(std::move(list));
}

}  // namespace kq
