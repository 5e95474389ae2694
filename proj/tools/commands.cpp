#include "commands.hpp"

#include "starinv/io.hpp"
#include "starinv/moment_solver.hpp"
#include "starinv/weyl.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace starinv::cli {

using nlohmann::json;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::MissingEigenvalue:
      return kInvalidInput;
    case ErrorKind::NumberingAmbiguity:
      return kNumberingAmbiguity;
    case ErrorKind::NoConvergence:
      return kNoConvergence;
    case ErrorKind::NotABasis:
      return kNotABasis;
    case ErrorKind::AssumptionThreeViolation:
      return kAssumptionThree;
    case ErrorKind::IllConditioned:
      return kIllConditioned;
    case ErrorKind::OmegaMismatch:
      return kOmegaMismatch;
    case ErrorKind::InterlacingViolation:
      return kInterlacing;
    case ErrorKind::StepFailure:
      return kStepFailure;
    case ErrorKind::TooManyExceptional:
      return kTooManyExceptional;
  }
  return kOther;
}

ForwardResult run_forward(const StarGraphProblem& problem, int n_max) {
  ForwardResult r;
  r.table = compute_spectrum(problem, n_max);
  r.report = check_assumptions(problem, r.table);
  return r;
}

std::pair<std::vector<double>, std::vector<double>> inverse_families(const SpectrumTable& table) {
  std::pair<std::vector<double>, std::vector<double>> out{table.family(1), table.family(2)};
  for (int k : {1, 2}) {
    const auto& fam = k == 1 ? out.first : out.second;
    if (fam.empty())
      throw SpectralError(ErrorKind::InvalidInput,
                          "spectrum has no k = " + std::to_string(k) + " family");
    if (int(fam.size()) != table.max_n(k))
      throw SpectralError(ErrorKind::InvalidInput,
                          "k = " + std::to_string(k) + " family has a gap at n = " +
                              std::to_string(fam.size() + 1));
  }
  return out;
}

double perturb_families(std::vector<double>& lambda1, std::vector<double>& lambda2, int n_max,
                        double epsilon, std::uint64_t seed, int eps_index, int trial) {
  if (epsilon == 0.0) return 0.0;
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(eps_index),
                    std::uint32_t(trial)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  const int n1 = n_max + 1, n2 = n_max;
  Eigen::VectorXd u(n1 + n2);
  for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = normal(rng);
  const double radius = uniform(rng) * epsilon;
  u *= radius / u.norm();

  auto apply = [](double& lambda, double n, double weighted) {
    const double rho = signed_rho(lambda) + weighted / n;
    lambda = rho * std::abs(rho);
  };
  for (int n = 1; n <= n1; ++n) apply(lambda1[n - 1], n, u[n - 1]);
  for (int n = 1; n <= n2; ++n) apply(lambda2[n - 1], n, u[n1 + n - 1]);
  return radius;
}

StabilityReport run_stability(const StarGraphProblem& problem, const StabilityOptions& options) {
  const int n_max = options.inverse.n_max;
  if (n_max < 1) throw SpectralError(ErrorKind::InvalidInput, "stability needs n_max >= 1");
  if (options.trials < 1) throw SpectralError(ErrorKind::InvalidInput, "trials must be >= 1");
  for (double eps : options.epsilons)
    if (!(eps >= 0.0) || !std::isfinite(eps))
      throw SpectralError(ErrorKind::InvalidInput, "epsilon must be finite and >= 0");

  const SpectrumTable table = compute_spectrum(problem, n_max + 1);
  auto [base1, base2] = inverse_families(table);
  base1.resize(std::size_t(n_max) + 1);
  base2.resize(std::size_t(n_max));
  const std::vector<GridFunction> known(problem.potentials().begin() + 1,
                                        problem.potentials().end());
  const GridFunction& q1 = problem.potential(1);

  const ReconstructionResult baseline = full_inverse(known, base1, base2, options.inverse);
  StabilityReport report;
  report.baseline_error = (baseline.q1 - q1).l2_norm();

  const int trials = options.trials;
  const std::size_t total = options.epsilons.size() * std::size_t(trials);
  report.rows.resize(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      const int e = int(idx / std::size_t(trials));
      const int trial = int(idx % std::size_t(trials));
      StabilityRow& row = report.rows[idx];
      row.epsilon = options.epsilons[std::size_t(e)];
      row.trial = trial;
      std::vector<double> l1 = base1, l2 = base2;
      row.weighted_l2_perturbation =
          perturb_families(l1, l2, n_max, row.epsilon, options.seed, e, trial);
      try {
        const ReconstructionResult r = full_inverse(known, l1, l2, options.inverse);
        row.converged = true;
        row.q1_error_l2 = (r.q1 - q1).l2_norm();
        row.deviation_l2 = (r.q1 - baseline.q1).l2_norm();
        row.ratio = row.epsilon > 0.0 ? row.deviation_l2 / row.epsilon : 0.0;
      } catch (const SpectralError& ex) {
        row.failure = std::string(to_string(ex.kind())) + ": " + ex.what();
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, unsigned(total)));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  for (std::size_t e = 0; e < options.epsilons.size(); ++e) {
    StabilitySummary s{options.epsilons[e], 0, trials, std::numeric_limits<double>::quiet_NaN()};
    std::vector<double> ratios;
    for (int t = 0; t < trials; ++t) {
      const StabilityRow& row = report.rows[e * std::size_t(trials) + std::size_t(t)];
      if (row.converged) ratios.push_back(row.ratio);
    }
    s.converged = int(ratios.size());
    if (!ratios.empty()) {
      std::sort(ratios.begin(), ratios.end());
      const std::size_t h = ratios.size() / 2;
      s.median_ratio = ratios.size() % 2 ? ratios[h] : 0.5 * (ratios[h - 1] + ratios[h]);
    }
    report.summary.push_back(s);
  }
  return report;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SpectralError(ErrorKind::InvalidInput, "cannot write " + path);
  return out;
}

void write_json_file(const std::string& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

std::string sidecar_path(const std::string& path) {
  return std::filesystem::path(path).replace_extension(".json").string();
}

json nan_safe(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(const AssumptionReport& r) {
  auto labels = [](const std::vector<EdgeLabel>& v, bool with_edge) {
    json a = json::array();
    for (const auto& e : v)
      a.push_back(with_edge ? json{{"j", e.j}, {"n", e.n}, {"k", e.k}} : json{{"n", e.n}, {"k", e.k}});
    return a;
  };
  return {{"all_ok", r.all_ok()},
          {"distinct", r.distinct_ok},
          {"repeated", labels(r.repeated, false)},
          {"positive", r.positive_ok},
          {"nonpositive", labels(r.nonpositive, false)},
          {"s_nonzero", r.s_nonzero_ok},
          {"vanishing", labels(r.vanishing, true)},
          {"z1_separated", r.z1_separated_ok},
          {"z1_coincident_edges", r.z1_coincident_edges},
          {"s1_at_zero", r.s1_at_zero_ok}};
}

json to_json(const ReconstructionDiagnostics& d) {
  std::vector<double> c(d.coefficients.data(), d.coefficients.data() + d.coefficients.size());
  return {{"m", d.m},
          {"n_max", d.n_max},
          {"basis_dim", d.basis_dim},
          {"omega_hat", d.omega_hat},
          {"omega1", d.omega1},
          {"infinite_g", d.infinite_g},
          {"moment_residual", d.moment_residual},
          {"max_row_residual", d.max_row_residual},
          {"gram_min", d.gram_min},
          {"gram_max", d.gram_max},
          {"l2_distance_to_reference", d.l2_distance_to_reference},
          {"fit_residual", d.fit_residual},
          {"fit_iterations", d.fit_iterations},
          {"coefficients", c}};
}

void print_diagnostics(std::ostream& out, const ReconstructionDiagnostics& d) {
  out << "m = " << d.m << ", n_max = " << d.n_max << ", basis_dim = " << d.basis_dim << "\n"
      << "omega_hat = " << d.omega_hat << ", omega1 = " << d.omega1
      << ", infinite g entries = " << d.infinite_g << "\n"
      << "moment residual = " << d.moment_residual
      << ", max row residual = " << d.max_row_residual << "\n"
      << "gram eigenvalues in [" << d.gram_min << ", " << d.gram_max
      << "], distance to reference = " << d.l2_distance_to_reference << "\n"
      << "fit residual = " << d.fit_residual << " after " << d.fit_iterations
      << " iterations\n";
}

void write_reconstruction(const std::string& path, const ReconstructionResult& r, const json& extra) {
  {
    auto out = open_out(path);
    io::write_potential(out, r.q1, "q1");
  }
  json j = to_json(r.diagnostics);
  j.update(extra);
  write_json_file(sidecar_path(path), j);
}

void write_cauchy_files(const std::string& path, const ReconstructionResult& r) {
  {
    auto out = open_out(path);
    io::write_cauchy(out, r.cauchy);
  }
  write_json_file(sidecar_path(path), {{"omega", r.cauchy.omega},
                                       {"n_max", r.diagnostics.n_max},
                                       {"residual", r.diagnostics.moment_residual}});
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

struct Args {
  bool json_mode = false;
  std::string problem, spectra, g_file, out, g_out, cauchy_out;
  std::vector<std::string> known;
  int n_max = 0;
  int basis_dim = kDefaultBasisDim;
  double omega = 0.0;
  std::vector<double> eps;
  int trials = 5;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

int cmd_forward(const Args& a, std::ostream& out) {
  const StarGraphProblem problem = io::read_problem_file(a.problem);
  const ForwardResult r = run_forward(problem, a.n_max);
  {
    auto f = open_out(a.out);
    io::write_spectrum(f, r.table);
  }
  if (!a.g_out.empty()) {
    const std::vector<GridFunction> known(problem.potentials().begin() + 1,
                                          problem.potentials().end());
    const GTable g = aggregate_g(known, r.table);
    auto f = open_out(a.g_out);
    io::write_g_table(f, g);
  }
  if (a.json_mode) {
    out << json{{"command", "forward"},
                {"m", problem.m()},
                {"n_max", a.n_max},
                {"entries", r.table.entries.size()},
                {"omega_hat", r.table.omega_hat},
                {"z_roots", r.table.z_roots},
                {"assumptions", to_json(r.report)}}
               .dump(2)
        << "\n";
  } else {
    out << r.table.entries.size() << " eigenvalues written to " << a.out << "\n"
        << r.report.summary();
  }
  return kOk;
}

int cmd_invert(const Args& a, std::ostream& out) {
  std::vector<GridFunction> known;
  for (const auto& path : a.known) known.push_back(io::read_potential_file(path));
  for (const auto& q : known)
    if (!q.same_grid(known.front()))
      throw SpectralError(ErrorKind::InvalidInput, "known potentials must share one grid");
  const SpectrumTable table = io::read_spectrum_file(a.spectra);
  const auto [l1, l2] = inverse_families(table);
  const ReconstructionResult r = full_inverse(known, l1, l2, {a.n_max, a.basis_dim});
  write_reconstruction(a.out, r, json::object());
  if (!a.cauchy_out.empty()) write_cauchy_files(a.cauchy_out, r);
  if (a.json_mode)
    out << to_json(r.diagnostics).dump(2) << "\n";
  else
    print_diagnostics(out, r.diagnostics);
  return kOk;
}

int cmd_roundtrip(const Args& a, std::ostream& out) {
  const StarGraphProblem problem = io::read_problem_file(a.problem);
  const SpectrumTable table = compute_spectrum(problem, a.n_max + 1);
  auto [l1, l2] = inverse_families(table);
  l1.resize(std::size_t(a.n_max) + 1);
  l2.resize(std::size_t(a.n_max));
  const std::vector<GridFunction> known(problem.potentials().begin() + 1,
                                        problem.potentials().end());
  const ReconstructionResult r = full_inverse(known, l1, l2, {a.n_max, a.basis_dim});
  const double err = (r.q1 - problem.potential(1)).l2_norm();
  const double omega_true = integrate_potential(problem.potential(1));
  const json extra{{"q1_error_l2", err}, {"omega1_true", omega_true}};
  if (!a.out.empty()) write_reconstruction(a.out, r, extra);
  if (a.json_mode) {
    json j = to_json(r.diagnostics);
    j.update(extra);
    out << j.dump(2) << "\n";
  } else {
    print_diagnostics(out, r.diagnostics);
    out << "L2 error of q1 = " << err << " (true omega1 = " << omega_true << ")\n";
  }
  return kOk;
}

int cmd_stability(const Args& a, std::ostream& out) {
  const StarGraphProblem problem = io::read_problem_file(a.problem);
  StabilityOptions opts;
  opts.epsilons = a.eps;
  opts.trials = a.trials;
  opts.seed = a.seed;
  opts.inverse = {a.n_max, a.basis_dim};
  opts.threads = a.threads;
  const StabilityReport rep = run_stability(problem, opts);
  {
    auto f = open_out(a.out);
    f << "epsilon,trial,weighted_l2_perturbation,converged,q1_error_l2,deviation_l2,ratio,failure\n";
    for (const auto& r : rep.rows)
      f << io::format_double(r.epsilon) << "," << r.trial << ","
        << io::format_double(r.weighted_l2_perturbation) << "," << (r.converged ? 1 : 0) << ","
        << io::format_double(r.q1_error_l2) << "," << io::format_double(r.deviation_l2) << ","
        << io::format_double(r.ratio) << "," << csv_safe(r.failure) << "\n";
  }
  if (a.json_mode) {
    json rows = json::array(), summary = json::array();
    for (const auto& r : rep.rows)
      rows.push_back({{"epsilon", r.epsilon},
                      {"trial", r.trial},
                      {"weighted_l2_perturbation", r.weighted_l2_perturbation},
                      {"converged", r.converged},
                      {"q1_error_l2", r.q1_error_l2},
                      {"deviation_l2", r.deviation_l2},
                      {"ratio", r.ratio},
                      {"failure", r.failure}});
    for (const auto& s : rep.summary)
      summary.push_back({{"epsilon", s.epsilon},
                         {"converged", s.converged},
                         {"trials", s.trials},
                         {"median_ratio", nan_safe(s.median_ratio)}});
    out << json{{"command", "stability"},
                {"baseline_error", rep.baseline_error},
                {"rows", rows},
                {"summary", summary}}
               .dump(2)
        << "\n";
  } else {
    out << "baseline L2 error = " << rep.baseline_error << "\n";
    for (const auto& s : rep.summary)
      out << "eps = " << s.epsilon << ": " << s.converged << "/" << s.trials
          << " converged, median ratio = " << s.median_ratio << "\n";
  }
  return kOk;
}

int cmd_basis_check(const Args& a, std::ostream& out) {
  const SpectrumTable table = io::read_spectrum_file(a.spectra);
  const GTable g = io::read_g_table_file(a.g_file);
  const MomentSystem system = build_moment_system(table, g, a.omega, a.n_max);
  const GramReport rep = gram_condition_report(system);
  if (a.json_mode) {
    out << json{{"command", "basis-check"},
                {"rows", system.vectors.size()},
                {"min_eig", rep.min_eig},
                {"max_eig", rep.max_eig},
                {"l2_distance_to_reference", rep.l2_distance_to_reference}}
               .dump(2)
        << "\n";
  } else {
    out << system.vectors.size() << " rows, gram eigenvalues in [" << rep.min_eig << ", "
        << rep.max_eig << "], distance to reference = " << rep.l2_distance_to_reference << "\n";
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Star-graph Sturm-Liouville forward solver and partial inverse"};
  app.require_subcommand(1);
  Args a;
  app.add_flag("--json", a.json_mode, "machine-readable report on stdout");

  auto* fwd = app.add_subcommand("forward", "eigenvalues of a star graph");
  fwd->add_option("problem", a.problem, "CSV x,q1,...,qm")->required()->check(CLI::ExistingFile);
  fwd->add_option("--n-max", a.n_max, "largest index n")->required()->check(CLI::PositiveNumber);
  fwd->add_option("--out", a.out, "spectrum CSV")->required();
  fwd->add_option("--g-out", a.g_out, "also write g_nk from edges 2..m");

  auto* inv = app.add_subcommand("invert", "recover q1 from q2..qm and two eigenvalue families");
  inv->add_option("spectra", a.spectra, "CSV n,k,lambda,multiplicity")
      ->required()
      ->check(CLI::ExistingFile);
  inv->add_option("--known", a.known, "CSV x,q of a known edge, in edge order 2..m")
      ->required()
      ->check(CLI::ExistingFile);
  inv->add_option("--out", a.out, "q1 CSV; diagnostics go next to it as .json")->required();
  inv->add_option("--n-max", a.n_max, "truncation index (default: from input)")
      ->check(CLI::PositiveNumber);
  inv->add_option("--basis-dim", a.basis_dim, "cosine terms in the fit")
      ->check(CLI::NonNegativeNumber);
  inv->add_option("--cauchy-out", a.cauchy_out, "CSV t,N,K of the moment solution");

  auto* rt = app.add_subcommand("roundtrip", "forward solve, invert and compare with q1");
  rt->add_option("problem", a.problem, "CSV x,q1,...,qm")->required()->check(CLI::ExistingFile);
  rt->add_option("--n-max", a.n_max, "truncation index")->required()->check(CLI::PositiveNumber);
  rt->add_option("--basis-dim", a.basis_dim, "cosine terms in the fit")
      ->check(CLI::NonNegativeNumber);
  rt->add_option("--out", a.out, "q1 CSV");

  auto* st = app.add_subcommand("stability", "perturbed-spectra experiment");
  st->add_option("problem", a.problem, "CSV x,q1,...,qm")->required()->check(CLI::ExistingFile);
  st->add_option("--eps", a.eps, "perturbation radius (repeatable)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  st->add_option("--trials", a.trials, "trials per radius")->check(CLI::PositiveNumber);
  st->add_option("--seed", a.seed, "RNG seed");
  st->add_option("--n-max", a.n_max, "truncation index")->required()->check(CLI::PositiveNumber);
  st->add_option("--basis-dim", a.basis_dim, "cosine terms in the fit")
      ->check(CLI::NonNegativeNumber);
  st->add_option("--threads", a.threads, "worker threads (0: all cores)");
  st->add_option("--out", a.out, "per-trial CSV")->required();

  auto* bc = app.add_subcommand("basis-check", "Gram spectrum of the moment vectors");
  bc->add_option("spectra", a.spectra, "CSV n,k,lambda,multiplicity")
      ->required()
      ->check(CLI::ExistingFile);
  bc->add_option("g", a.g_file, "CSV n,k,g")->required()->check(CLI::ExistingFile);
  bc->add_option("--omega", a.omega, "omega of the unknown edge")->required();
  bc->add_option("--n-max", a.n_max, "truncation index")->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*fwd) return cmd_forward(a, out);
    if (*inv) return cmd_invert(a, out);
    if (*rt) return cmd_roundtrip(a, out);
    if (*st) return cmd_stability(a, out);
    if (*bc) return cmd_basis_check(a, out);
  } catch (const SpectralError& e) {
    const int code = exit_code(e.kind());
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    if (a.json_mode)
      out << json{{"error", to_string(e.kind())}, {"message", e.what()}, {"exit_code", code}}.dump(2)
          << "\n";
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kOther;
  }
  return kUsage;
}

}  // namespace starinv::cli
