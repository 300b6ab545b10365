#include "kq/verify.hpp"

#include "kq/gram.hpp"
#include "kq/kernelspace.hpp"
#include "kq/polyfam.hpp"
#include "kq/sampling.hpp"
#include "kq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace kq {

namespace {

// Radius of convergence of the invariant series Phi(I) for measure-built
// coefficients; infinity for the entire families.
double invariant_series_radius(const FlowSpec& f) {
  const double omega = f.omega();
  const double babs = std::abs(f.b);
  if (f.domain.kind == DomainKind::Plane) {
    if (omega == 0.0) return std::numeric_limits<double>::infinity();
    return babs * babs / std::abs(omega);
  }
  if (f.domain.kind == DomainKind::Disc) {
    if (babs * babs >= omega * omega) return babs;
    return std::abs(omega) - std::sqrt(omega * omega - babs * babs);
  }
  return std::numeric_limits<double>::infinity();
}

double lambda_series_radius(const FlowSpec& f) {
  const double omega = f.omega();
  const double babs = std::abs(f.b);
  if (f.domain.kind == DomainKind::Plane) {
    if (omega == 0.0) return std::numeric_limits<double>::infinity();
    return babs / std::abs(omega);
  }
  if (f.domain.kind == DomainKind::Disc) {
    if (babs * babs >= omega * omega) return 1.0;
    // exp(-arccosh(|omega|/|b|)); the nearest branch point of the
    // generating function.
    const double ratio = std::abs(omega) / babs;
    return 1.0 / (ratio + std::sqrt(ratio * ratio - 1.0));
  }
  return std::numeric_limits<double>::infinity();
}

// |I| bound over sample points with |v|, |z| <= r.
double invariant_bound(const FlowSpec& f, double r) {
  const double omega = std::abs(f.omega());
  const double babs = std::abs(f.b);
  switch (f.domain.kind) {
    case DomainKind::Plane: return omega * r * r + 2.0 * babs * r;
    case DomainKind::Disc: return (2.0 * omega * r * r + 2.0 * babs * r) / (1.0 - r * r);
    default: return r * r;
  }
}

}  // namespace

double safe_sample_radius(const FlowSpec& f, double fraction, double fallback) {
  const double radius = invariant_series_radius(f);
  if (!std::isfinite(radius)) return fallback;
  double lo = 0.0, hi = f.domain.kind == DomainKind::Disc ? 0.9 : fallback;
  if (invariant_bound(f, hi) <= fraction * radius) return hi;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (invariant_bound(f, mid) <= fraction * radius) lo = mid;
    else hi = mid;
  }
  return lo;
}

double safe_lambda_radius(const FlowSpec& f, double fraction, double fallback) {
  const double radius = lambda_series_radius(f);
  const double cap = f.domain.kind == DomainKind::Disc ? 0.9 : fallback;
  if (!std::isfinite(radius)) return cap;
  return std::min(cap, fraction * radius);
}

namespace {

struct Context {
  FlowSpec flow;
  MatrixMeasure measure;
  std::vector<Mat> coeffs;  // kernel-side coefficients (override or measure-built)
  bool coeffs_from_measure = false;
  int n = 0;
  std::uint64_t seed = 0;
  bool b_zero = false;
};

using CheckFn = double (*)(const Context&);

CheckResult run_check(const std::string& name, double tolerance, bool applicable,
                      const Context& ctx, CheckFn fn) {
  CheckResult r;
  r.name = name;
  r.tolerance = tolerance;
  if (!applicable) {
    r.skipped = true;
    r.pass = true;
    return r;
  }
  try {
    r.max_residual = fn(ctx);
    r.pass = r.max_residual <= tolerance;
  } catch (const std::exception& e) {
    r.error = e.what();
    r.max_residual = -1.0;
    r.pass = false;
  }
  return r;
}

double check_recurrence_closed_form(const Context& ctx) {
  const int n_top = std::min(25, ctx.n);
  const PolyFamily fam = build_recurrence(ctx.flow, n_top);
  const Complex constant = family_constant(ctx.flow);
  std::mt19937_64 rng(ctx.seed + 1);
  std::uniform_real_distribution<double> dist(0.1, 3.0);
  std::vector<double> lambdas(20);
  for (double& l : lambdas) l = dist(rng);
  double worst = 0.0;
  for (int n = 0; n <= n_top; ++n) {
    double scale = 0.0;
    std::vector<double> diffs;
    for (double lambda : lambdas) {
      const Complex closed = closed_form(ctx.flow, n, lambda);
      const Complex rec = fam.eval(n, lambda);
      scale = std::max(scale, std::abs(closed));
      diffs.push_back(std::abs(closed - constant * rec));
    }
    for (double d : diffs) worst = std::max(worst, d / (scale > 0.0 ? scale : 1.0));
  }
  return worst;
}

double check_beta_oracle(const Context& ctx) {
  const int top = 4;
  double worst = 0.0;
  for (int m = 0; m <= top; ++m)
    for (int n = 0; n <= top; ++n) {
      const int lo = ctx.flow.domain.kind == DomainKind::Disc ? std::abs(n - m) : std::max(m, n);
      for (int l = lo; l <= m + n; ++l) {
        const Complex printed = beta_coeff(ctx.flow, m, n, l);
        const Complex probed = beta_oracle(ctx.flow, m, n, l);
        worst = std::max(worst, std::abs(printed - probed) / (1.0 + std::abs(printed)));
      }
    }
  return worst;
}

int table_size(const Context& ctx) {
  if (ctx.b_zero) return std::min(12, ctx.n);
  return std::min(12, (static_cast<int>(ctx.coeffs.size()) - 1) / 2);
}

double check_difference_equation(const Context& ctx) {
  const GramTable table = gram_from_series(ctx.coeffs, ctx.flow, table_size(ctx));
  double scale = 0.0;
  for (const Mat& c : ctx.coeffs) scale = std::max(scale, c.norm());
  return verify_difference_eq(table).max_residual / (scale > 0.0 ? scale : 1.0);
}

InvariantSeries kernel_series(const Context& ctx) {
  InvariantSeries s;
  s.flow = ctx.flow;
  s.dim = static_cast<int>(ctx.coeffs.front().rows());
  s.coeffs = ctx.coeffs;
  return s;
}

double check_positivity(const Context& ctx) {
  const InvariantSeries s = kernel_series(ctx);
  const double radius = safe_sample_radius(ctx.flow);
  const std::vector<Complex> points = domain_samples(ctx.flow.domain, 8, radius);
  std::vector<Eigen::VectorXcd> vectors;
  for (int i = 0; i < 8; ++i) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(s.dim);
    v(i % s.dim) = 1.0;
    vectors.push_back(std::move(v));
  }
  const double min_eig = mat_min_eigenvalue(gram_matrix(s, points, vectors));
  return std::max(0.0, -min_eig);
}

double check_invariance(const Context& ctx) {
  const InvariantSeries s = kernel_series(ctx);
  const double radius = safe_sample_radius(ctx.flow);
  const auto pairs = domain_sample_pairs(ctx.flow.domain, 32, radius);
  double worst = 0.0;
  for (double t : {-1.0, -0.5, -0.25, 0.25, 0.5, 1.0})
    worst = std::max(worst, flow_invariance_residual(s, t, pairs));
  return worst;
}

double check_ode(const Context& ctx) {
  const InvariantSeries s = kernel_series(ctx);
  const HamiltonianSeries psi = solve_hamiltonian(s);
  const double radius = safe_sample_radius(ctx.flow);
  const std::vector<Complex> samples = domain_samples(ctx.flow.domain, 16, radius);
  const HamiltonianResidual res = hamiltonian_residual(s, psi, samples);
  const double compat = compatibility_residual(s, psi);
  return std::max({res.pointwise, res.per_degree, compat});
}

double check_gram_consistency(const Context& ctx) {
  const int size = std::min(6, table_size(ctx));
  const GramTable table = gram_from_series(ctx.coeffs, ctx.flow, size);
  const PolyFamily fam = build_recurrence(ctx.flow, size);
  double worst = 0.0;
  for (int m = 0; m <= size; ++m)
    for (int n = 0; n <= size; ++n) {
      const Mat l2 = l2_gram_block(ctx.measure, fam, m, n);
      worst = std::max(worst, (l2 - table.block(m, n)).norm() / (1.0 + l2.norm()));
    }
  return worst;
}

double check_bochner(const Context& ctx) {
  const double radius = safe_lambda_radius(ctx.flow);
  const std::vector<Complex> points = domain_samples(ctx.flow.domain, 40, radius);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const BochnerResult res = bochner_reconstruct(ctx.measure, ctx.flow,
                                                  points[static_cast<size_t>(2 * i)],
                                                  points[static_cast<size_t>(2 * i + 1)],
                                                  ctx.n);
    worst = std::max(worst, res.residual);
  }
  return worst;
}

}  // namespace

VerificationReport run_verification(const FlowSpec& f, const MatrixMeasure& mu,
                                    const std::optional<std::vector<Mat>>& series_override,
                                    int n, std::uint64_t seed) {
  validate_flow(f);
  Context ctx;
  ctx.flow = f;
  ctx.measure = mu;
  ctx.n = n;
  ctx.seed = seed;
  ctx.b_zero = std::abs(f.b) == 0.0;
  if (series_override) {
    ctx.coeffs = *series_override;
  } else if (!ctx.b_zero) {
    ctx.coeffs = series_from_measure(mu, f, n).coeffs;
    ctx.coeffs_from_measure = true;
  } else {
    throw Error("run_verification: b = 0 flows need an explicit coefficient series");
  }

  bool closed_applicable = !ctx.b_zero;
  if (closed_applicable) {
    try {
      closed_family(f);
    } catch (const std::exception&) {
      closed_applicable = false;
    }
  }
  const bool banded = !ctx.b_zero;
  const bool has_measure = !mu.empty();

  VerificationReport report;
  report.flow = f;
  report.truncation = n;
  report.seed = seed;
  report.checks = {
      run_check("recurrence_closed_form", 1e-9, closed_applicable, ctx,
                &check_recurrence_closed_form),
      run_check("beta_oracle", 1e-8, banded, ctx, &check_beta_oracle),
      run_check("difference_equation", 1e-9, true, ctx, &check_difference_equation),
      run_check("positivity", 1e-9, true, ctx, &check_positivity),
      run_check("flow_invariance", 1e-9, true, ctx, &check_invariance),
      run_check("ode", 1e-8, true, ctx, &check_ode),
      run_check("gram_consistency", 1e-8, banded && has_measure, ctx, &check_gram_consistency),
      run_check("bochner_roundtrip", 1e-8, banded && has_measure, ctx, &check_bochner),
  };
  report.all_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const CheckResult& c) { return c.pass; });
  return report;
}

Json report_to_json(const VerificationReport& report) {
  Json checks;
  for (const CheckResult& c : report.checks) {
    Json entry{{"maxResidual", c.max_residual}, {"tolerance", c.tolerance}, {"pass", c.pass}};
    if (c.skipped) entry["skipped"] = true;
    if (!c.error.empty()) entry["error"] = c.error;
    checks[c.name] = std::move(entry);
  }
  return Json{{"metadata",
               Json{{"flow", to_json(report.flow)},
                    {"truncation", report.truncation},
                    {"seed", report.seed}}},
              {"checks", std::move(checks)},
              {"pass", report.all_pass}};
}

}  // namespace kq
