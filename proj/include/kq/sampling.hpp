#pragma once

// Deterministic sample-point generation: Halton sequences mapped into each
// domain, and seeded random measures for verification sweeps.

#include "kq/flows.hpp"
#include "kq/numcore.hpp"

#include <cstdint>
#include <random>
#include <utility>

namespace kq {

double halton(int index, int base);

// Halton points mapped into the flow's domain, scaled by `radius` (points
// stay inside |z| <= radius for the bounded domains, inside the centered box
// of half-width radius on the plane).
std::vector<Complex> domain_samples(const RiemannDomain& domain, int count,
                                    double radius = 0.5, int offset = 1);

// Pairs (v, z) from consecutive Halton points.
std::vector<std::pair<Complex, Complex>> domain_sample_pairs(const RiemannDomain& domain,
                                                             int count, double radius = 0.5);

// Random measure with the given atom count and dimension; weights are G^dag G
// for a random G, atom locations are uniform in [lambda_lo, lambda_hi].
MatrixMeasure random_measure(std::mt19937_64& rng, int atoms, int dim, double lambda_lo = 0.1,
                             double lambda_hi = 2.5);

Mat random_hermitian(std::mt19937_64& rng, int dim);

}  // namespace kq
