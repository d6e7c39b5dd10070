// Command-line front end: spectra, IDS estimation, transport metrics,
// eigenvalue-majorization batch checks, theorem-verification experiments,
// and the counterexample integrals. Emits a JSON report plus plot-ready
// CSV curves per run.
//
// Exit codes: 0 success, 1 an asserted bound failed, 2 usage/config error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "idslab/config.hpp"
#include "idslab/experiment.hpp"
#include "idslab/ids.hpp"
#include "idslab/kyfan.hpp"
#include "idslab/measure.hpp"
#include "idslab/parallel.hpp"
#include "idslab/report.hpp"
#include "idslab/spectra.hpp"

namespace {

struct CommonOpts {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  unsigned workers = idslab::default_worker_count();
};

void attach_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config, "JSON config file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opts.out, "output directory (default: .)");
  cmd->add_option("--seed", opts.seed, "override the config master_seed");
  cmd->add_option("--samples", opts.samples,
                  "override the config sample count");
  cmd->add_option("--workers", opts.workers,
                  "worker threads (default: available parallelism)");
}

int finish(const idslab::ExperimentReport& report, const CommonOpts& opts) {
  const auto files = idslab::write_report(report, opts.out);
  std::cout << report.id << ": "
            << (report.verdict ? "holds" : "VIOLATED") << ", wrote "
            << files.size() << " file(s) under " << opts.out << "\n";
  return report.verdict ? 0 : 1;
}

int run_spectrum(const CommonOpts& opts) {
  const auto job = idslab::parse_spectrum_config(
      idslab::load_json_file(opts.config));
  const idslab::LatticeOperator op =
      idslab::build_anderson(job.shape, job.potential);
  const idslab::Spectrum spec = idslab::eig(op);

  idslab::ExperimentReport report;
  report.id = "spectrum";
  report.inputs = job.inputs;
  report.aggregates = {{"sites", op.dimension()},
                       {"trace", op.trace()},
                       {"sum_eigenvalues", spec.sum()},
                       {"min_eigenvalue", spec.eigenvalues.front()},
                       {"max_eigenvalue", spec.eigenvalues.back()},
                       {"eigenvalues", spec.to_json()}};
  idslab::Curve curve;
  curve.name = "spectrum";
  curve.columns = {"eigenvalue"};
  for (double lam : spec.eigenvalues) curve.rows.push_back({lam});
  report.curves.push_back(std::move(curve));
  return finish(report, opts);
}

int run_ids(const CommonOpts& opts) {
  auto job = idslab::parse_ids_config(idslab::load_json_file(opts.config));
  if (opts.seed) job.master_seed = *opts.seed;
  if (opts.samples) job.samples = *opts.samples;

  const idslab::EmpiricalIDS ids = idslab::empirical_ids(
      job.shape, job.mu, job.samples, job.grid, job.master_seed, opts.workers);

  idslab::ExperimentReport report;
  report.id = "ids";
  report.inputs = job.inputs;
  report.inputs["master_seed"] = job.master_seed;
  report.inputs["samples"] = job.samples;
  report.aggregates = {{"ids", ids.to_json()}};

  idslab::Curve curve;
  curve.name = "ids_curve";
  curve.columns = {"E", "N", "stderr"};
  for (std::size_t k = 0; k < ids.energies().size(); ++k)
    curve.rows.push_back(
        {ids.energies()[k], ids.values()[k], ids.stderrs()[k]});
  report.curves.push_back(std::move(curve));

  if (!job.deltas.empty()) {
    const idslab::LogHolderReport lh =
        idslab::log_holder_diagnostic(ids, job.deltas);
    report.aggregates["log_holder_constant"] = lh.constant;
    idslab::Curve omega;
    omega.name = "omega_curve";
    omega.columns = {"delta", "omega", "omega_times_log_inv_delta"};
    for (const auto& row : lh.rows)
      omega.rows.push_back({row[0], row[1], row[2]});
    report.curves.push_back(std::move(omega));
  }
  return finish(report, opts);
}

int run_wasserstein(const CommonOpts& opts) {
  const auto job = idslab::parse_wasserstein_config(
      idslab::load_json_file(opts.config));
  const double d_kr = idslab::kr_distance(job.mu, job.mu_tilde);
  const bool needs_discretization =
      !job.mu.finite_support() || !job.mu_tilde.finite_support();
  const idslab::ProbabilityMeasure ma =
      idslab::discretize(job.mu, job.discretization);
  const idslab::ProbabilityMeasure mb =
      idslab::discretize(job.mu_tilde, job.discretization);
  const idslab::SandwichReport sandwich =
      idslab::metric_sandwich_check(ma, mb);

  idslab::ExperimentReport report;
  report.id = "wasserstein";
  report.inputs = job.inputs;
  report.aggregates = {
      {"d_kr", d_kr},
      {"d_bl", sandwich.d_bl},
      {"d_kr_on_checked_pair", sandwich.d_kr},
      {"kr_cap", sandwich.kr_cap},
      {"support_bound", sandwich.support_bound},
      {"d_bl_normalization", "sup over f with Lip(f) <= 1 and |f| <= 1"},
  };
  if (needs_discretization)
    report.aggregates["discretization"] = job.discretization;
  report.add_check("bl_le_kr", sandwich.d_bl, sandwich.d_kr,
                   1e-10 * (1.0 + sandwich.d_kr));
  report.add_check("kr_le_cap", sandwich.d_kr, sandwich.kr_cap,
                   1e-10 * (1.0 + sandwich.kr_cap));
  return finish(report, opts);
}

int run_kyfan_check(const CommonOpts& opts) {
  auto job = idslab::parse_kyfan_config(idslab::load_json_file(opts.config));
  if (opts.seed) job.master_seed = *opts.seed;
  if (opts.samples) job.trials = *opts.samples;

  const idslab::KyFanBatchResult res = idslab::kyfan_random_batch(
      job.trials, job.max_dim, job.master_seed, job.phis, job.scale);

  std::filesystem::create_directories(opts.out);
  std::string lines;
  for (const auto& rec : res.records) lines += rec.to_json().dump() + "\n";
  idslab::write_text_file(std::filesystem::path(opts.out) /
                              "kyfan_batch.jsonl",
                          lines);

  idslab::ExperimentReport report;
  report.id = "kyfan_check";
  report.inputs = job.inputs;
  report.inputs["master_seed"] = job.master_seed;
  report.inputs["trials"] = job.trials;
  report.aggregates = {{"records", res.records.size()},
                       {"worst_relative_margin", res.worst_margin},
                       {"worst_trace_error", res.worst_trace_error}};
  report.add_check("majorization_worst_margin", -res.worst_margin, 0.0, 1e-9);
  report.add_check("trace_identity_worst_error", res.worst_trace_error, 0.0,
                   1e-9);
  return finish(report, opts);
}

int run_experiment(const CommonOpts& opts) {
  auto job = idslab::parse_experiment_config(
      idslab::load_json_file(opts.config));
  if (opts.seed) job.theorem1.master_seed = *opts.seed;
  if (opts.samples) job.theorem1.samples = *opts.samples;

  idslab::ExperimentReport report;
  if (job.kind == "theorem1_dos")
    report = idslab::run_theorem1_dos(job.theorem1, opts.workers);
  else if (job.kind == "theorem1_ids")
    report = idslab::run_theorem1_ids(job.theorem1, opts.workers);
  else if (job.kind == "sharpness_shift")
    report = idslab::run_sharpness_shift(job.shift, opts.workers);
  else
    report = idslab::run_holder_rate(job.holder, opts.workers);
  return finish(report, opts);
}

int run_counterexample(const CommonOpts& opts) {
  const idslab::CounterexampleConfig cfg =
      idslab::parse_counterexample_config(idslab::load_json_file(opts.config));
  const idslab::ExperimentReport report =
      idslab::counterexample_integrals(cfg);
  return finish(report, opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Numerical laboratory for spectral statistics of random lattice "
      "operators: exact 1D transport metrics, eigenvalue-majorization "
      "checks, and Monte Carlo integrated-density-of-states experiments."};
  app.require_subcommand(1);

  CommonOpts spectrum_opts, ids_opts, wass_opts, kyfan_opts, exp_opts,
      ce_opts;
  attach_common(app.add_subcommand("spectrum",
                                   "eigenvalues of one lattice operator"),
                spectrum_opts);
  attach_common(
      app.add_subcommand("ids", "Monte Carlo integrated density of states"),
      ids_opts);
  attach_common(app.add_subcommand(
                    "wasserstein",
                    "transport distances and the metric sandwich check"),
                wass_opts);
  attach_common(app.add_subcommand(
                    "kyfan-check",
                    "random batch of eigenvalue-majorization inequalities"),
                kyfan_opts);
  attach_common(
      app.add_subcommand("experiment", "theorem-verification drivers"),
      exp_opts);
  attach_common(app.add_subcommand("counterexample",
                                   "truncated free-Laplacian integrals"),
                ce_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("spectrum")) return run_spectrum(spectrum_opts);
    if (app.got_subcommand("ids")) return run_ids(ids_opts);
    if (app.got_subcommand("wasserstein")) return run_wasserstein(wass_opts);
    if (app.got_subcommand("kyfan-check")) return run_kyfan_check(kyfan_opts);
    if (app.got_subcommand("experiment")) return run_experiment(exp_opts);
    if (app.got_subcommand("counterexample"))
      return run_counterexample(ce_opts);
  } catch (const idslab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "no subcommand selected\n";
  return 2;
}
