#pragma once

// Orchestrated verification sweep: runs the recurrence/closed-form, beta
// oracle, difference-equation, positivity, flow-invariance, Hamiltonian ODE,
// Gram-consistency and Bochner round-trip checks against one flow + measure
// (or a user-supplied coefficient series), and reports one residual per check.

#include "kq/flows.hpp"
#include "kq/json_io.hpp"
#include "kq/numcore.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace kq {

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string error;  // module error text when the check could not run
};

struct VerificationReport {
  FlowSpec flow;
  int truncation = 0;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  bool all_pass = false;
};

// series_override replaces the measure-built coefficients in the kernel-side
// checks (difference equation, positivity, invariance, ODE, Gram
// consistency); the measure is still the reference for the spectral side.
VerificationReport run_verification(const FlowSpec& f, const MatrixMeasure& mu,
                                    const std::optional<std::vector<Mat>>& series_override,
                                    int n, std::uint64_t seed);

Json report_to_json(const VerificationReport& report);

// Largest |z| such that the polarized invariant over the sample box stays
// within `fraction` of the invariant-series convergence radius; `fallback`
// when the series is entire.
double safe_sample_radius(const FlowSpec& f, double fraction = 0.5, double fallback = 0.7);

// Same bound for the lambda-resolved coherent series in z.
double safe_lambda_radius(const FlowSpec& f, double fraction = 0.4, double fallback = 0.7);

}  // namespace kq
