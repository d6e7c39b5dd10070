#ifndef IDSLAB_EXPERIMENT_HPP
#define IDSLAB_EXPERIMENT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "idslab/ids.hpp"
#include "idslab/lattice.hpp"
#include "idslab/measure.hpp"
#include "idslab/numeric.hpp"
#include "idslab/parallel.hpp"
#include "idslab/report.hpp"
#include "idslab/spectra.hpp"

namespace idslab {

// Grid covering the Gershgorin windows of both disorder laws, one unit of
// margin on each side.
inline GridSpec default_grid_pair(const BoxShape& shape,
                                  const ProbabilityMeasure& mu,
                                  const ProbabilityMeasure& mu_tilde,
                                  std::size_t points = 2048) {
  return {std::min(mu.min_support(), mu_tilde.min_support()) - 1.0,
          4.0 * shape.dimension +
              std::max(mu.max_support(), mu_tilde.max_support()) + 1.0,
          points};
}

// Log-spaced deltas for the modulus/bound infimum, from a couple of grid
// steps up to half of the energy window.
inline std::vector<double> default_deltas(const GridSpec& grid,
                                          std::size_t count = 25) {
  const double h = grid.spacing();
  return log_spaced(2.0 * h, 0.5 * (grid.max_energy - grid.min_energy),
                    count);
}

struct Theorem1Config {
  BoxShape shape = BoxShape::line(100);
  ProbabilityMeasure mu = ProbabilityMeasure::dirac(0.0);
  ProbabilityMeasure mu_tilde = ProbabilityMeasure::dirac(0.0);
  std::size_t samples = 100;
  std::uint64_t master_seed = 1;
  // ids variant only:
  std::optional<GridSpec> grid;
  std::vector<double> deltas;

  nlohmann::json inputs_json() const {
    nlohmann::json j{{"shape", shape.to_json()},
                     {"mu", mu.to_json()},
                     {"mu_tilde", mu_tilde.to_json()},
                     {"samples", samples},
                     {"master_seed", master_seed}};
    if (grid) {
      j["grid"] = {{"min", grid->min_energy},
                   {"max", grid->max_energy},
                   {"points", grid->points}};
      j["deltas"] = deltas;
    }
    return j;
  }
};

// Verifies the transport bound on the density of states at finite volume:
// per coupled sample the deterministic majorization
//   sum_j |lambda~_j - lambda_j| <= sum_x |V(x) - V~(x)|,
// and in aggregate d_KR between the pooled spectral counting measures
// against d_KR(mu, mu~) with a 3-standard-error Monte Carlo allowance.
inline ExperimentReport run_theorem1_dos(const Theorem1Config& cfg,
                                         unsigned workers = 1) {
  if (cfg.samples < 1)
    throw std::invalid_argument("run_theorem1_dos: samples must be >= 1");
  const std::size_t sites = cfg.shape.site_count();

  struct SampleSlot {
    double cost_spec = 0.0;
    double cost_pot = 0.0;
    double norm = 0.0;
    std::vector<double> eigs, eigs_tilde;
  };
  std::vector<SampleSlot> slots(cfg.samples);

  parallel_for_indexed(cfg.samples, workers, [&](std::size_t s) {
    const std::vector<double> us =
        sample_uniforms(sites, cfg.master_seed, s);
    std::vector<double> v = potential_from_uniforms(cfg.mu, us);
    std::vector<double> vt = potential_from_uniforms(cfg.mu_tilde, us);
    std::vector<double> absdiff(sites);
    for (std::size_t i = 0; i < sites; ++i)
      absdiff[i] = std::abs(v[i] - vt[i]);

    const LatticeOperator op = build_anderson(cfg.shape, std::move(v));
    const LatticeOperator op_tilde =
        build_anderson(cfg.shape, std::move(vt));
    SampleSlot& slot = slots[s];
    slot.norm = std::max(op.norm_bound(), op_tilde.norm_bound());
    slot.cost_pot = pairwise_sum(absdiff);
    Spectrum spec = eig(op);
    Spectrum spec_tilde = eig(op_tilde);
    slot.cost_spec = spectral_transport_cost(spec, spec_tilde);
    slot.eigs = std::move(spec.eigenvalues);
    slot.eigs_tilde = std::move(spec_tilde.eigenvalues);
  });

  ExperimentReport report;
  report.id = "theorem1_dos";
  report.inputs = cfg.inputs_json();

  double worst_violation = -std::numeric_limits<double>::infinity();
  double tol_per_sample = 0.0;
  std::vector<double> pot_per_site(cfg.samples), spec_per_site(cfg.samples);
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    const SampleSlot& slot = slots[s];
    worst_violation = std::max(worst_violation, slot.cost_spec - slot.cost_pot);
    tol_per_sample = std::max(tol_per_sample, 1e-9 * slot.norm);
    pot_per_site[s] = slot.cost_pot / static_cast<double>(sites);
    spec_per_site[s] = slot.cost_spec / static_cast<double>(sites);
    report.per_sample.push_back({{"sample", s},
                                 {"spectral_cost", slot.cost_spec},
                                 {"potential_cost", slot.cost_pot},
                                 {"margin", slot.cost_pot - slot.cost_spec}});
  }
  report.add_check("per_sample_majorization", worst_violation, 0.0,
                   tol_per_sample);

  auto pool = [&](bool tilde) {
    std::vector<Atom> atoms;
    atoms.reserve(cfg.samples * sites);
    const double w =
        1.0 / (static_cast<double>(cfg.samples) * static_cast<double>(sites));
    for (const SampleSlot& slot : slots)
      for (double lam : (tilde ? slot.eigs_tilde : slot.eigs))
        atoms.push_back({lam, w});
    return ProbabilityMeasure::atomic(std::move(atoms));
  };
  const double d_kr_rho = kr_distance(pool(false), pool(true));
  const double d_kr_mu = kr_distance(cfg.mu, cfg.mu_tilde);
  const MeanStderr pot_stats = mean_and_stderr(pot_per_site);
  const MeanStderr spec_stats = mean_and_stderr(spec_per_site);
  report.add_check("dos_transport_bound", d_kr_rho, d_kr_mu,
                   3.0 * pot_stats.stderr_of_mean + 1e-12);

  report.aggregates = {
      {"d_kr_mu", d_kr_mu},
      {"d_kr_rho_empirical", d_kr_rho},
      {"mean_potential_cost_per_site", pot_stats.mean},
      {"se_potential_cost_per_site", pot_stats.stderr_of_mean},
      {"mean_spectral_cost_per_site", spec_stats.mean},
      {"se_spectral_cost_per_site", spec_stats.stderr_of_mean},
  };

  Curve c;
  c.name = "per_sample_costs";
  c.columns = {"sample", "spectral_cost_per_site", "potential_cost_per_site",
               "margin_per_site"};
  for (std::size_t s = 0; s < cfg.samples; ++s)
    c.rows.push_back({static_cast<double>(s), spec_per_site[s],
                      pot_per_site[s], pot_per_site[s] - spec_per_site[s]});
  report.curves.push_back(std::move(c));
  return report;
}

// Verifies the sup-norm deduction: sup_E |N - N~| against
// inf_delta(omega(delta) + d_KR(mu, mu~)/delta) with omega measured on the
// reference model, plus a 3-SE Monte Carlo allowance.
inline ExperimentReport run_theorem1_ids(const Theorem1Config& cfg,
                                         unsigned workers = 1) {
  if (cfg.samples < 1)
    throw std::invalid_argument("run_theorem1_ids: samples must be >= 1");
  const GridSpec grid =
      cfg.grid ? *cfg.grid : default_grid_pair(cfg.shape, cfg.mu, cfg.mu_tilde);
  const std::vector<double> deltas =
      cfg.deltas.empty() ? default_deltas(grid) : cfg.deltas;
  const std::vector<double> energies = grid.energies();
  const std::size_t sites = cfg.shape.site_count();
  const std::size_t points = energies.size();

  struct SampleSlot {
    std::vector<std::int32_t> counts, counts_tilde;
  };
  std::vector<SampleSlot> slots(cfg.samples);
  parallel_for_indexed(cfg.samples, workers, [&](std::size_t s) {
    const std::vector<double> us =
        sample_uniforms(sites, cfg.master_seed, s);
    const LatticeOperator op =
        build_anderson(cfg.shape, potential_from_uniforms(cfg.mu, us));
    const LatticeOperator op_tilde =
        build_anderson(cfg.shape, potential_from_uniforms(cfg.mu_tilde, us));
    slots[s].counts = detail::counts_on_grid(eig(op).eigenvalues, energies);
    slots[s].counts_tilde =
        detail::counts_on_grid(eig(op_tilde).eigenvalues, energies);
  });

  std::vector<std::int64_t> sum(points, 0), sumsq(points, 0);
  std::vector<std::int64_t> sum_t(points, 0), sumsq_t(points, 0);
  std::vector<std::int64_t> sum_d(points, 0), sumsq_d(points, 0);
  for (const SampleSlot& slot : slots)
    for (std::size_t k = 0; k < points; ++k) {
      const std::int64_t c = slot.counts[k];
      const std::int64_t ct = slot.counts_tilde[k];
      sum[k] += c;
      sumsq[k] += c * c;
      sum_t[k] += ct;
      sumsq_t[k] += ct * ct;
      sum_d[k] += c - ct;
      sumsq_d[k] += (c - ct) * (c - ct);
    }

  const double nn = static_cast<double>(sites);
  const double ss = static_cast<double>(cfg.samples);
  auto finalize = [&](const std::vector<std::int64_t>& s1,
                      const std::vector<std::int64_t>& s2,
                      std::vector<double>& mean, std::vector<double>& se) {
    mean.resize(points);
    se.assign(points, 0.0);
    for (std::size_t k = 0; k < points; ++k) {
      const double m = static_cast<double>(s1[k]) / ss;
      mean[k] = m / nn;
      if (cfg.samples > 1) {
        const double var =
            (static_cast<double>(s2[k]) - ss * m * m) / (ss - 1.0);
        se[k] = std::sqrt(std::max(var, 0.0) / ss) / nn;
      }
    }
  };
  std::vector<double> n1, se1, n2, se2, nd_mean, nd_se;
  finalize(sum, sumsq, n1, se1);
  finalize(sum_t, sumsq_t, n2, se2);
  finalize(sum_d, sumsq_d, nd_mean, nd_se);

  EmpiricalIDS ids1(grid, n1, se1, cfg.shape, cfg.samples, cfg.mu.to_json(),
                    cfg.master_seed);
  EmpiricalIDS ids2(grid, n2, se2, cfg.shape, cfg.samples,
                    cfg.mu_tilde.to_json(), cfg.master_seed);

  double sup_diff = 0.0, se_max = 0.0;
  std::size_t argmax = 0;
  for (std::size_t k = 0; k < points; ++k) {
    const double d = std::abs(nd_mean[k]);
    if (d > sup_diff) {
      sup_diff = d;
      argmax = k;
    }
    se_max = std::max(se_max, nd_se[k]);
  }

  const double d_kr_mu = kr_distance(cfg.mu, cfg.mu_tilde);
  double bound = std::numeric_limits<double>::infinity();
  double delta_star = deltas.front();
  Curve omega_curve;
  omega_curve.name = "omega_curve";
  omega_curve.columns = {"delta", "omega", "omega_plus_dkr_over_delta"};
  for (double d : deltas) {
    const double omega = ids1.modulus_of_continuity(d);
    const double term = omega + d_kr_mu / d;
    omega_curve.rows.push_back({d, omega, term});
    if (term < bound) {
      bound = term;
      delta_star = d;
    }
  }

  ExperimentReport report;
  report.id = "theorem1_ids";
  report.inputs = cfg.inputs_json();
  report.inputs["grid"] = {{"min", grid.min_energy},
                           {"max", grid.max_energy},
                           {"points", grid.points}};
  report.inputs["deltas"] = deltas;
  report.add_check("ids_sup_bound", sup_diff, bound, 3.0 * se_max + 1e-12);

  // Both one-sided sandwich bounds at the infimum's delta, with the same
  // statistical allowance.
  const SandwichBoundsReport sandwich =
      ids_sandwich_bounds(ids1, ids2, d_kr_mu, delta_star);
  report.add_check("sandwich_upper", -sandwich.worst_upper_margin, 0.0,
                   3.0 * se_max + 1e-12);
  report.add_check("sandwich_lower", -sandwich.worst_lower_margin, 0.0,
                   3.0 * se_max + 1e-12);

  const double craig_simon_ratio =
      d_kr_mu > 0.0 && d_kr_mu < 1.0
          ? sup_diff * std::log(1.0 / d_kr_mu)
          : 0.0;
  report.aggregates = {{"d_kr_mu", d_kr_mu},
                       {"sup_diff", sup_diff},
                       {"sup_diff_energy", energies[argmax]},
                       {"bound_inf_delta", bound},
                       {"delta_star", delta_star},
                       {"se_max", se_max},
                       {"craig_simon_ratio", craig_simon_ratio}};

  for (std::size_t s = 0; s < cfg.samples; ++s) {
    std::int32_t worst = 0;
    for (std::size_t k = 0; k < points; ++k)
      worst = std::max(worst, std::abs(static_cast<std::int32_t>(
                                  slots[s].counts[k] - slots[s].counts_tilde[k])));
    report.per_sample.push_back(
        {{"sample", s},
         {"max_count_gap_per_site", static_cast<double>(worst) / nn}});
  }

  Curve ids_curve;
  ids_curve.name = "ids_curve";
  ids_curve.columns = {"E", "N", "N_tilde", "diff", "se_diff"};
  for (std::size_t k = 0; k < points; ++k)
    ids_curve.rows.push_back(
        {energies[k], n1[k], n2[k], nd_mean[k], nd_se[k]});
  report.curves.push_back(std::move(ids_curve));
  report.curves.push_back(std::move(omega_curve));
  return report;
}

struct ShiftConfig {
  std::vector<BoxShape> shapes;
  double shift = 1.0;
};

// The constant-shift pair mu = delta_0, mu~ = delta_c attains the transport
// bound with equality: d_KR of the spectral counting measures equals c
// exactly, for every box. Verified to 1e-12.
inline ExperimentReport run_sharpness_shift(const ShiftConfig& cfg,
                                            unsigned workers = 1) {
  if (cfg.shapes.empty())
    throw std::invalid_argument("run_sharpness_shift: no shapes");
  const double c = cfg.shift;

  struct Slot {
    double d_kr = 0.0;
    double mean_cost = 0.0;
  };
  std::vector<Slot> slots(cfg.shapes.size());
  parallel_for_indexed(cfg.shapes.size(), workers, [&](std::size_t i) {
    const BoxShape& shape = cfg.shapes[i];
    const std::vector<double> zero(shape.site_count(), 0.0);
    const LatticeOperator op = build_anderson(shape, zero);
    const LatticeOperator op_shift = shift_potential(op, c);
    const Spectrum s0 = eig(op);
    const Spectrum s1 = eig(op_shift);
    slots[i].d_kr = kr_distance(s0.counting_measure(), s1.counting_measure());
    slots[i].mean_cost = spectral_transport_cost(s0, s1) /
                         static_cast<double>(shape.site_count());
  });

  ExperimentReport report;
  report.id = "sharpness_shift";
  nlohmann::json shapes_json = nlohmann::json::array();
  for (const auto& s : cfg.shapes) shapes_json.push_back(s.to_json());
  report.inputs = {{"shapes", shapes_json}, {"shift", c}};

  Curve curve;
  curve.name = "shift_equality";
  curve.columns = {"dimension", "l0", "l1", "sites", "d_kr_rho", "abs_error"};
  double worst = 0.0;
  for (std::size_t i = 0; i < cfg.shapes.size(); ++i) {
    const BoxShape& shape = cfg.shapes[i];
    const double err = std::abs(slots[i].d_kr - std::abs(c));
    worst = std::max(worst, err);
    report.add_check("shift_equality_" + std::to_string(i), err, 0.0, 1e-12);
    curve.rows.push_back({static_cast<double>(shape.dimension),
                          static_cast<double>(shape.side[0]),
                          static_cast<double>(shape.side[1]),
                          static_cast<double>(shape.site_count()),
                          slots[i].d_kr, err});
    report.per_sample.push_back({{"shape", shape.to_json()},
                                 {"d_kr_rho", slots[i].d_kr},
                                 {"mean_transport_cost", slots[i].mean_cost}});
  }
  report.aggregates = {{"shift", c}, {"max_abs_error", worst}};
  report.curves.push_back(std::move(curve));
  return report;
}

struct HolderFitModel {
  BoxShape shape = BoxShape::line(200);
  ProbabilityMeasure mu = ProbabilityMeasure::two_point(0.0, 1.0, 0.5);
  std::size_t samples = 50;
  std::uint64_t master_seed = 1;
  std::optional<GridSpec> grid;
  std::vector<double> fit_deltas;
};

struct HolderRateConfig {
  double a = 1.0;
  double c = 1.0;
  std::vector<double> t_values;    // d_KR magnitudes, log-spaced
  std::vector<double> delta_grid;  // minimization grid
  std::size_t delta_points = 3000;  // grid size when delta_grid is defaulted
  double slope_tolerance = 0.05;
  std::optional<HolderFitModel> fit_model;
};

// For omega(delta) <= C delta^a the combined bound
// inf_delta(C delta^a + t/delta) scales like t^{a/(1+a)}; the driver
// evaluates the infimum numerically over a delta grid and fits the log-log
// slope across the configured t range. With a fit model supplied, (C, a)
// are first fitted to the measured modulus of that model.
inline ExperimentReport run_holder_rate(const HolderRateConfig& cfg_in,
                                        unsigned workers = 1) {
  HolderRateConfig cfg = cfg_in;
  if (!(cfg.a > 0.0) || !(cfg.c > 0.0))
    throw std::invalid_argument("run_holder_rate: need a > 0 and C > 0");

  ExperimentReport report;
  report.id = "holder_rate";

  nlohmann::json fit_json;
  if (cfg.fit_model) {
    const HolderFitModel& fm = *cfg.fit_model;
    const GridSpec grid =
        fm.grid ? *fm.grid : default_grid(fm.shape, fm.mu);
    const EmpiricalIDS ids = empirical_ids(fm.shape, fm.mu, fm.samples, grid,
                                           fm.master_seed, workers);
    const std::vector<double> fit_deltas =
        fm.fit_deltas.empty() ? log_spaced(2.0 * grid.spacing(), 0.5, 12)
                              : fm.fit_deltas;
    std::vector<double> lx, ly;
    for (double d : fit_deltas) {
      const double omega = ids.modulus_of_continuity(d);
      if (omega > 0.0) {
        lx.push_back(std::log(d));
        ly.push_back(std::log(omega));
      }
    }
    if (lx.size() < 2)
      throw std::domain_error(
          "run_holder_rate: measured modulus is degenerate; cannot fit");
    const LinearFit fit = linear_fit(lx, ly);
    cfg.a = fit.slope;
    cfg.c = std::exp(fit.intercept);
    if (!(cfg.a > 0.0))
      throw std::domain_error("run_holder_rate: fitted exponent is <= 0");
    fit_json = {{"fitted_a", cfg.a},
                {"fitted_c", cfg.c},
                {"fit_deltas", fit_deltas},
                {"model_shape", fm.shape.to_json()},
                {"model_measure", fm.mu.to_json()},
                {"model_samples", fm.samples},
                {"model_master_seed", fm.master_seed}};
  }

  if (cfg.t_values.empty()) cfg.t_values = log_spaced(1e-6, 1e-2, 25);
  if (cfg.delta_grid.empty()) {
    if (cfg.delta_points < 2)
      throw std::invalid_argument("run_holder_rate: delta_points must be >= 2");
    const double lo =
        std::pow(cfg.t_values.front() / (cfg.a * cfg.c), 1.0 / (1.0 + cfg.a));
    const double hi =
        std::pow(cfg.t_values.back() / (cfg.a * cfg.c), 1.0 / (1.0 + cfg.a));
    cfg.delta_grid = log_spaced(lo / 100.0, hi * 100.0, cfg.delta_points);
  }

  Curve curve;
  curve.name = "holder_scaling";
  curve.columns = {"t", "bound", "delta_star"};
  std::vector<double> log_t, log_b;
  for (double t : cfg.t_values) {
    double best = std::numeric_limits<double>::infinity();
    double best_delta = cfg.delta_grid.front();
    for (double d : cfg.delta_grid) {
      const double v = cfg.c * std::pow(d, cfg.a) + t / d;
      if (v < best) {
        best = v;
        best_delta = d;
      }
    }
    curve.rows.push_back({t, best, best_delta});
    log_t.push_back(std::log(t));
    log_b.push_back(std::log(best));
  }
  const LinearFit fit = linear_fit(log_t, log_b);
  const double expected = cfg.a / (1.0 + cfg.a);

  report.inputs = {{"a", cfg.a},
                   {"c", cfg.c},
                   {"t_values", cfg.t_values},
                   {"delta_grid_size", cfg.delta_grid.size()},
                   {"slope_tolerance", cfg.slope_tolerance}};
  if (!fit_json.is_null()) report.inputs["fit_model"] = fit_json;
  report.add_check("holder_loglog_slope", std::abs(fit.slope - expected), 0.0,
                   cfg.slope_tolerance);
  report.aggregates = {{"slope", fit.slope},
                       {"expected_exponent", expected},
                       {"intercept", fit.intercept}};
  report.curves.push_back(std::move(curve));
  return report;
}

struct CounterexampleConfig {
  int d = 1;
  double alpha = 1.0;
  double delta_shift = 0.1;
  std::vector<double> epsilons;  // strictly decreasing
  double c_d = 1.0;              // free-Laplacian density normalization
};

// Evaluates, per epsilon, the pair of truncated free-Laplacian integrals
//
//   I_rho      = C_d int_0^{eps^{-1/alpha} - 1}        ((1+l)^-alpha       - eps) l^{d/2-1} dl
//   I_rho_tilde= C_d int_0^{eps^{-1/alpha} - 1 - delta}((1+l+delta)^-alpha - eps) l^{d/2-1} dl
//
// by adaptive quadrature (absolute tolerance 1e-8 per integral, after the
// substitution l = s^2 that removes the endpoint singularity for odd d).
inline ExperimentReport counterexample_integrals(
    const CounterexampleConfig& cfg) {
  if (cfg.d < 1)
    throw std::domain_error("counterexample_integrals: need d >= 1");
  if (cfg.alpha == 0.0)
    throw std::domain_error("counterexample_integrals: alpha must be nonzero");
  if (!(cfg.delta_shift >= 0.0))
    throw std::domain_error("counterexample_integrals: delta must be >= 0");
  if (cfg.epsilons.empty())
    throw std::domain_error("counterexample_integrals: no epsilons");
  for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
    if (!(cfg.epsilons[i] > 0.0 && cfg.epsilons[i] < 1.0))
      throw std::domain_error(
          "counterexample_integrals: epsilons must lie in (0,1)");
    if (i > 0 && !(cfg.epsilons[i] < cfg.epsilons[i - 1]))
      throw std::domain_error(
          "counterexample_integrals: epsilons must decrease");
  }

  auto integral = [&](double eps, double shift, double upper) {
    // l = s^2 turns l^{d/2-1} dl into 2 s^{d-1} ds.
    if (upper <= 0.0) return 0.0;
    const double s_max = std::sqrt(upper);
    auto integrand = [&](double s) {
      const double lam = s * s;
      return 2.0 * (std::pow(1.0 + lam + shift, -cfg.alpha) - eps) *
             std::pow(s, cfg.d - 1);
    };
    return cfg.c_d * adaptive_simpson(integrand, 0.0, s_max, 1e-8);
  };

  ExperimentReport report;
  report.id = "counterexample";
  report.inputs = {{"d", cfg.d},
                   {"alpha", cfg.alpha},
                   {"delta_shift", cfg.delta_shift},
                   {"epsilons", cfg.epsilons},
                   {"c_d", cfg.c_d}};

  Curve curve;
  curve.name = "divergence";
  curve.columns = {"epsilon", "i_rho", "i_rho_tilde", "difference"};
  std::vector<double> diffs;
  for (double eps : cfg.epsilons) {
    const double upper = std::pow(eps, -1.0 / cfg.alpha) - 1.0;
    if (upper <= 0.0)
      throw std::domain_error(
          "counterexample_integrals: empty integration range (alpha < 0 or "
          "epsilon too large makes eps^{-1/alpha} <= 1)");
    const double i_rho = integral(eps, 0.0, upper);
    const double i_rho_tilde =
        integral(eps, cfg.delta_shift, upper - cfg.delta_shift);
    const double diff = i_rho - i_rho_tilde;
    diffs.push_back(diff);
    curve.rows.push_back({eps, i_rho, i_rho_tilde, diff});
    report.per_sample.push_back({{"epsilon", eps},
                                 {"i_rho", i_rho},
                                 {"i_rho_tilde", i_rho_tilde},
                                 {"difference", diff}});
  }

  bool monotone = true;
  for (std::size_t i = 0; i + 1 < diffs.size(); ++i)
    monotone = monotone && diffs[i + 1] >= diffs[i];
  report.aggregates = {
      {"monotone_increasing", monotone},
      {"first_difference", diffs.front()},
      {"last_difference", diffs.back()},
      {"ratio_last_to_first",
       diffs.front() != 0.0 ? diffs.back() / diffs.front() : 0.0}};
  report.curves.push_back(std::move(curve));
  return report;
}

}  // namespace idslab

#endif  // IDSLAB_EXPERIMENT_HPP
