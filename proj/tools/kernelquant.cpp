#include "kq/gram.hpp"
#include "kq/json_io.hpp"
#include "kq/kernelspace.hpp"
#include "kq/polyfam.hpp"
#include "kq/sampling.hpp"
#include "kq/spectral.hpp"
#include "kq/verify.hpp"

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;

struct ParseFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

kq::Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseFailure("cannot open " + path);
  try {
    return kq::Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseFailure(std::string("parse error in ") + path + ": " + e.what());
  }
}

void emit(const kq::Json& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << payload.dump(2) << "\n";
  }
}

std::vector<double> parse_floats(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw ParseFailure("bad number: " + item);
  }
  return out;
}

// "start:step:stop", inclusive of the last point within half a step.
std::vector<double> parse_range(const std::string& text) {
  const std::vector<double> parts = parse_floats(text, ':');
  if (parts.size() != 3) throw ParseFailure("range must be start:step:stop");
  std::vector<double> out;
  const double start = parts[0], step = parts[1], stop = parts[2];
  if (step <= 0.0) throw ParseFailure("range step must be positive");
  for (double x = start; x <= stop + 0.5 * step; x += step) out.push_back(x);
  return out;
}

std::pair<kq::Complex, kq::Complex> parse_point_pair(const std::string& text) {
  const std::vector<double> parts = parse_floats(text, ',');
  if (parts.size() != 4) throw ParseFailure("--eval expects v_re,v_im,z_re,z_im");
  return {{parts[0], parts[1]}, {parts[2], parts[3]}};
}

int cmd_classify(const std::string& flow_path) {
  const kq::FlowSpec flow = kq::flow_from_json(load_json(flow_path));
  const kq::FlowClass cls = kq::classify(flow);
  emit(kq::Json{{"class", kq::to_string(cls.kind)}, {"quantizable", cls.quantizable}}, "");
  return kExitOk;
}

int cmd_polys(const std::string& flow_path, int n, const std::string& grid,
              const std::string& out_path) {
  const kq::FlowSpec flow = kq::flow_from_json(load_json(flow_path));
  const kq::PolyFamily fam = kq::build_recurrence(flow, n);
  kq::Json table = kq::Json::array();
  for (const auto& row : fam.coeff) {
    kq::Json coeffs = kq::Json::array();
    for (kq::Complex c : row) coeffs.push_back(kq::to_json(c));
    table.push_back(std::move(coeffs));
  }
  kq::Json payload{{"K", std::move(table)}};
  if (!grid.empty()) {
    const std::vector<double> lambdas = parse_range(grid);
    kq::Json values = kq::Json::array();
    for (double lambda : lambdas) {
      kq::Json row = kq::Json::array();
      for (int k = 0; k <= n; ++k) row.push_back(kq::to_json(fam.eval(k, lambda)));
      values.push_back(std::move(row));
    }
    payload["lambda"] = lambdas;
    payload["values"] = std::move(values);
  }
  emit(payload, out_path);
  return kExitOk;
}

int cmd_gram(const std::string& flow_path, const std::string& series_path, int n, bool verify,
             const std::string& out_path) {
  const kq::FlowSpec flow = kq::flow_from_json(load_json(flow_path));
  const std::vector<kq::Mat> coeffs = kq::series_from_json(load_json(series_path));
  const kq::GramTable table = kq::gram_from_series(coeffs, flow, n);
  double min_eig = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= table.n_max; ++k)
    min_eig = std::min(min_eig, kq::mat_min_eigenvalue(table.block(k, k)));
  kq::Json payload;
  if (verify) payload["maxResidual"] = kq::verify_difference_eq(table).max_residual;
  payload["psdMinEig"] = min_eig;
  emit(payload, out_path);
  return kExitOk;
}

int cmd_kernel(const std::string& flow_path, const std::string& series_path,
               const std::string& eval_spec, bool verify_all, int n, std::uint64_t seed,
               const std::string& out_path) {
  const kq::FlowSpec flow = kq::flow_from_json(load_json(flow_path));
  const std::vector<kq::Mat> coeffs = kq::series_from_json(load_json(series_path));
  kq::InvariantSeries s;
  s.flow = flow;
  s.dim = static_cast<int>(coeffs.front().rows());
  s.coeffs = coeffs;

  kq::Json payload;
  if (!eval_spec.empty()) {
    const auto [v, z] = parse_point_pair(eval_spec);
    payload["K"] = kq::to_json(kq::kernel_eval(s, v, z));
  }
  if (verify_all) {
    const double radius = kq::safe_sample_radius(flow);
    const auto pairs = kq::domain_sample_pairs(flow.domain, 32, radius);
    const auto points = kq::domain_samples(flow.domain, 16, radius);

    double herm = 0.0;
    for (const auto& [v, z] : pairs)
      herm = std::max(herm, (kq::kernel_eval(s, v, z) -
                             kq::kernel_eval(s, z, v).adjoint()).norm());

    std::vector<Eigen::VectorXcd> vectors;
    for (int i = 0; i < 8; ++i) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(s.dim);
      e(i % s.dim) = 1.0;
      vectors.push_back(std::move(e));
    }
    const std::vector<kq::Complex> gram_pts(points.begin(), points.begin() + 8);
    const double min_eig = kq::mat_min_eigenvalue(kq::gram_matrix(s, gram_pts, vectors));

    double invariance = 0.0;
    for (double t : {-1.0, -0.5, 0.5, 1.0})
      invariance = std::max(invariance, kq::flow_invariance_residual(s, t, pairs));

    const kq::HamiltonianSeries psi = kq::solve_hamiltonian(s);
    const kq::HamiltonianResidual ode = kq::hamiltonian_residual(s, psi, points);

    payload["hermSym"] = herm;
    payload["psd"] = std::max(0.0, -min_eig);
    payload["invariance"] = invariance;
    payload["ode"] = std::max(ode.pointwise, ode.per_degree);
    payload["seed"] = seed;
    payload["n"] = n;
  }
  emit(payload, out_path);
  return kExitOk;
}

int cmd_spectral(const std::string& measure_path, const std::string& flow_path, int n,
                 const std::string& reconstruct_spec, bool jacobi, int moments_count,
                 const std::string& out_path) {
  const kq::MatrixMeasure mu = kq::measure_from_json(load_json(measure_path));
  kq::Json payload;

  kq::Json moment_list = kq::Json::array();
  for (int k = 0; k < moments_count; ++k) moment_list.push_back(kq::to_json(kq::moments(mu, k)));
  payload["moments"] = std::move(moment_list);

  if (!flow_path.empty() && !reconstruct_spec.empty()) {
    const kq::FlowSpec flow = kq::flow_from_json(load_json(flow_path));
    const auto [v, z] = parse_point_pair(reconstruct_spec);
    const kq::BochnerResult res = kq::bochner_reconstruct(mu, flow, v, z, n);
    payload["reconstruction"] = kq::Json{{"K", kq::to_json(res.reconstructed)},
                                         {"series", kq::to_json(res.series_value)},
                                         {"residual", res.residual}};
  }
  if (jacobi) {
    const int size = static_cast<int>(mu.atoms().size());
    const kq::JacobiMatrix jm = kq::jacobi_matrix(mu, size);
    const Eigen::VectorXd eig = jm.eigenvalues();
    payload["jacobi"] = kq::Json{{"diag", jm.diag},
                                 {"offdiag", jm.offdiag},
                                 {"eigenvalues", std::vector<double>(eig.data(), eig.data() + eig.size())}};
  }
  emit(payload, out_path);
  return kExitOk;
}

int cmd_verify(const std::string& flow_path, const std::string& measure_path,
               const std::string& series_path, int n, std::uint64_t seed,
               const std::string& out_path) {
  const kq::FlowSpec flow = kq::flow_from_json(load_json(flow_path));
  kq::MatrixMeasure mu;
  if (!measure_path.empty()) mu = kq::measure_from_json(load_json(measure_path));
  std::optional<std::vector<kq::Mat>> series;
  if (!series_path.empty()) series = kq::series_from_json(load_json(series_path));
  const kq::VerificationReport report = kq::run_verification(flow, mu, series, n, seed);
  emit(kq::report_to_json(report), out_path);
  return report.all_pass ? kExitOk : kExitCheckFailure;
}

int cmd_decompose(const std::string& flow_path, const std::string& measure_path,
                  const std::string& v_spec, const std::string& grid_spec, int n,
                  const std::string& out_path) {
  const kq::FlowSpec flow = kq::flow_from_json(load_json(flow_path));
  const kq::MatrixMeasure mu = kq::measure_from_json(load_json(measure_path));

  kq::Complex v(0.0, 0.0);
  if (!v_spec.empty()) {
    const std::vector<double> parts = parse_floats(v_spec, ',');
    if (parts.size() != 2) throw ParseFailure("--v expects re,im");
    v = {parts[0], parts[1]};
  }

  std::vector<double> re_grid, im_grid;
  if (!grid_spec.empty()) {
    std::stringstream ss(grid_spec);
    std::string re_part, im_part;
    if (!std::getline(ss, re_part, ',') || !std::getline(ss, im_part, ','))
      throw ParseFailure("--grid expects reRange,imRange with ranges start:step:stop");
    re_grid = parse_range(re_part);
    im_grid = parse_range(im_part);
  }

  const kq::InvariantSeries s = kq::series_from_measure(mu, flow, n);

  std::ostringstream csv;
  csv << "z_re,z_im";
  for (size_t k = 0; k < mu.atoms().size(); ++k)
    csv << ",atom" << k << "_re,atom" << k << "_im,atom" << k << "_abs";
  csv << ",sum_re,sum_im,sum_abs,series_re,series_im,series_abs\n";

  char buf[64];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.12g", x);
    csv << ',' << buf;
  };

  int skipped = 0;
  for (double re : re_grid) {
    for (double im : im_grid) {
      const kq::Complex z(re, im);
      if (!flow.domain.contains(z) || !flow.domain.contains(v)) {
        ++skipped;
        continue;
      }
      std::snprintf(buf, sizeof buf, "%.12g", re);
      csv << buf;
      std::snprintf(buf, sizeof buf, "%.12g", im);
      csv << ',' << buf;
      kq::Complex weighted_sum(0.0, 0.0);
      for (const kq::MeasureAtom& atom : mu.atoms()) {
        const kq::Complex value = kq::kernel_lambda(flow, v, z, atom.lambda, n).value;
        put(value.real());
        put(value.imag());
        put(std::abs(value));
        weighted_sum += value * atom.weight(0, 0);
      }
      put(weighted_sum.real());
      put(weighted_sum.imag());
      put(std::abs(weighted_sum));
      const kq::Complex series_value = kq::kernel_eval(s, v, z)(0, 0);
      put(series_value.real());
      put(series_value.imag());
      put(std::abs(series_value));
      csv << '\n';
    }
  }
  if (skipped > 0)
    std::cerr << "decompose: skipped " << skipped << " out-of-domain grid points\n";

  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    out << csv.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
  if (const char* threads = std::getenv("KERNELQUANT_THREADS"))
    if (const int count = std::atoi(threads); count > 0) omp_set_num_threads(count);
#endif

  CLI::App app{"kernelquant: flows, quantizing polynomials, positive kernels and "
               "their spectral decompositions"};
  app.require_subcommand(1);

  std::string flow_path, measure_path, series_path, out_path;
  std::string lambda_grid, eval_spec, reconstruct_spec, v_spec, grid_spec;
  int n = 40;
  int moments_count = 8;
  std::uint64_t seed = 42;
  bool verify_flag = false, verify_all = false, jacobi = false;

  CLI::App* classify = app.add_subcommand("classify", "classify a flow spec");
  classify->add_option("--flow", flow_path)->required();

  CLI::App* polys = app.add_subcommand("polys", "build the quantizing polynomial table");
  polys->add_option("--flow", flow_path)->required();
  polys->add_option("--n", n);
  polys->add_option("--lambda-grid", lambda_grid);
  polys->add_option("--out", out_path);

  CLI::App* gram = app.add_subcommand("gram", "build Gram blocks from a coefficient series");
  gram->add_option("--flow", flow_path)->required();
  gram->add_option("--series", series_path)->required();
  gram->add_option("--n", n);
  gram->add_flag("--verify", verify_flag);
  gram->add_option("--out", out_path);

  CLI::App* kernel = app.add_subcommand("kernel", "evaluate and verify an invariant kernel");
  kernel->add_option("--flow", flow_path)->required();
  kernel->add_option("--series", series_path)->required();
  kernel->add_option("--eval", eval_spec);
  kernel->add_flag("--verify-all", verify_all);
  kernel->add_option("--n", n);
  kernel->add_option("--seed", seed);
  kernel->add_option("--out", out_path);

  CLI::App* spectral = app.add_subcommand("spectral", "moments, Jacobi matrix, reconstruction");
  spectral->add_option("--measure", measure_path)->required();
  spectral->add_option("--flow", flow_path);
  spectral->add_option("--n", n);
  spectral->add_option("--moments", moments_count);
  spectral->add_option("--reconstruct", reconstruct_spec);
  spectral->add_flag("--jacobi", jacobi);
  spectral->add_option("--out", out_path);

  CLI::App* verify = app.add_subcommand("verify", "run the full verification suite");
  verify->add_option("--flow", flow_path)->required();
  verify->add_option("--measure", measure_path);
  verify->add_option("--series", series_path);
  verify->add_option("--n", n);
  verify->add_option("--seed", seed);
  verify->add_option("--out", out_path);

  CLI::App* decompose = app.add_subcommand("decompose", "grid dump of the lambda decomposition");
  decompose->add_option("--flow", flow_path)->required();
  decompose->add_option("--measure", measure_path)->required();
  decompose->add_option("--v", v_spec);
  decompose->add_option("--grid", grid_spec);
  decompose->add_option("--n", n);
  decompose->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (classify->parsed()) return cmd_classify(flow_path);
    if (polys->parsed()) return cmd_polys(flow_path, n, lambda_grid, out_path);
    if (gram->parsed()) return cmd_gram(flow_path, series_path, n, verify_flag, out_path);
    if (kernel->parsed())
      return cmd_kernel(flow_path, series_path, eval_spec, verify_all, n, seed, out_path);
    if (spectral->parsed())
      return cmd_spectral(measure_path, flow_path, n, reconstruct_spec, jacobi, moments_count,
                          out_path);
    if (verify->parsed())
      return cmd_verify(flow_path, measure_path, series_path, n, seed, out_path);
    if (decompose->parsed())
      return cmd_decompose(flow_path, measure_path, v_spec, grid_spec, n, out_path);
  } catch (const ParseFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const kq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
