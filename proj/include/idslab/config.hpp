#ifndef IDSLAB_CONFIG_HPP
#define IDSLAB_CONFIG_HPP

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "idslab/experiment.hpp"
#include "idslab/ids.hpp"
#include "idslab/kyfan.hpp"
#include "idslab/lattice.hpp"
#include "idslab/measure.hpp"

namespace idslab {

// Anything wrong with a config file (unreadable, bad JSON, unknown keys,
// invalid values) is a usage error, distinct from a verification failure.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return j;
}

// Unknown keys are a hard error: a typo in a scientific config must never
// silently fall back to a default.
inline void require_keys(const nlohmann::json& j,
                         std::initializer_list<const char*> allowed,
                         const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool known = false;
    for (const char* a : allowed)
      if (key == a) {
        known = true;
        break;
      }
    if (!known) throw ConfigError(context + ": unknown key '" + key + "'");
  }
}

inline void require_version(const nlohmann::json& j,
                            const std::string& context) {
  if (!j.contains("version"))
    throw ConfigError(context + ": missing 'version'");
  if (!j.at("version").is_number_integer() ||
      j.at("version").get<int>() != 1)
    throw ConfigError(context + ": unsupported version (expected 1)");
}

template <class T>
T get_field(const nlohmann::json& j, const char* key,
            const std::string& context) {
  if (!j.contains(key))
    throw ConfigError(context + ": missing key '" + std::string(key) + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(context + ": bad value for '" + std::string(key) +
                      "': " + e.what());
  }
}

template <class T>
T get_field_or(const nlohmann::json& j, const char* key,
               const std::string& context, T fallback) {
  if (!j.contains(key)) return fallback;
  return get_field<T>(j, key, context);
}

inline ProbabilityMeasure parse_measure(const nlohmann::json& j,
                                        const std::string& context) {
  try {
    return ProbabilityMeasure::from_json(j);
  } catch (const std::exception& e) {
    throw ConfigError(context + ": " + e.what());
  }
}

inline BoxShape parse_shape(const nlohmann::json& j,
                            const std::string& context) {
  try {
    return BoxShape::from_json(j);
  } catch (const std::exception& e) {
    throw ConfigError(context + ": " + e.what());
  }
}

// {"min":..., "max":..., "points":...}; missing fields fall back to the
// provided defaults.
inline GridSpec parse_grid(const nlohmann::json& j, const GridSpec& fallback,
                           const std::string& context) {
  require_keys(j, {"min", "max", "points"}, context);
  GridSpec g = fallback;
  g.min_energy = get_field_or<double>(j, "min", context, fallback.min_energy);
  g.max_energy = get_field_or<double>(j, "max", context, fallback.max_energy);
  g.points = get_field_or<std::size_t>(j, "points", context, fallback.points);
  if (g.points < 2 || !(g.min_energy < g.max_energy))
    throw ConfigError(context + ": grid needs min < max and points >= 2");
  return g;
}

// ---- per-subcommand configs ------------------------------------------

struct SpectrumJob {
  BoxShape shape;
  std::vector<double> potential;  // resolved to explicit site values
  nlohmann::json inputs;
};

inline SpectrumJob parse_spectrum_config(const nlohmann::json& j) {
  const std::string ctx = "spectrum config";
  require_keys(j, {"version", "shape", "potential", "mu", "seed"}, ctx);
  require_version(j, ctx);
  SpectrumJob job;
  job.shape = parse_shape(j.at("shape"), ctx);
  if (j.contains("potential") && j.contains("mu"))
    throw ConfigError(ctx + ": give either 'potential' or 'mu', not both");
  if (j.contains("potential")) {
    job.potential = get_field<std::vector<double>>(j, "potential", ctx);
  } else if (j.contains("mu")) {
    const ProbabilityMeasure mu = parse_measure(j.at("mu"), ctx);
    const std::uint64_t seed = get_field_or<std::uint64_t>(j, "seed", ctx, 0);
    job.potential = potential_from_uniforms(
        mu, sample_uniforms(job.shape.site_count(), seed, 0));
  } else {
    job.potential.assign(job.shape.site_count(), 0.0);
  }
  job.inputs = j;
  return job;
}

struct IdsJob {
  BoxShape shape;
  ProbabilityMeasure mu = ProbabilityMeasure::dirac(0.0);
  std::size_t samples = 100;
  std::uint64_t master_seed = 1;
  GridSpec grid;
  std::vector<double> deltas;  // empty: skip the modulus diagnostics
  nlohmann::json inputs;
};

inline IdsJob parse_ids_config(const nlohmann::json& j) {
  const std::string ctx = "ids config";
  require_keys(j, {"version", "shape", "mu", "samples", "master_seed", "grid",
                   "deltas"},
               ctx);
  require_version(j, ctx);
  IdsJob job;
  job.shape = parse_shape(j.at("shape"), ctx);
  job.mu = parse_measure(j.at("mu"), ctx);
  job.samples = get_field_or<std::size_t>(j, "samples", ctx, 100);
  job.master_seed = get_field_or<std::uint64_t>(j, "master_seed", ctx, 1);
  const GridSpec fallback = default_grid(job.shape, job.mu);
  job.grid = j.contains("grid") ? parse_grid(j.at("grid"), fallback, ctx)
                                : fallback;
  job.deltas = get_field_or<std::vector<double>>(j, "deltas", ctx, {});
  if (job.samples < 1) throw ConfigError(ctx + ": samples must be >= 1");
  job.inputs = j;
  return job;
}

struct WassersteinJob {
  ProbabilityMeasure mu = ProbabilityMeasure::dirac(0.0);
  ProbabilityMeasure mu_tilde = ProbabilityMeasure::dirac(0.0);
  std::size_t discretization = 1024;
  nlohmann::json inputs;
};

inline WassersteinJob parse_wasserstein_config(const nlohmann::json& j) {
  const std::string ctx = "wasserstein config";
  require_keys(j, {"version", "mu", "mu_tilde", "discretization"}, ctx);
  require_version(j, ctx);
  WassersteinJob job;
  job.mu = parse_measure(j.at("mu"), ctx);
  job.mu_tilde = parse_measure(j.at("mu_tilde"), ctx);
  job.discretization =
      get_field_or<std::size_t>(j, "discretization", ctx, 1024);
  if (job.discretization < 1)
    throw ConfigError(ctx + ": discretization must be >= 1");
  job.inputs = j;
  return job;
}

struct KyFanJob {
  std::size_t trials = 1000;
  std::size_t max_dim = 20;
  std::uint64_t master_seed = 1;
  double scale = 1.0;
  std::vector<ConvexTestFunction> phis;
  std::vector<std::string> phi_names;
  nlohmann::json inputs;
};

inline ConvexTestFunction parse_phi(const std::string& name,
                                    const std::string& ctx) {
  if (name == "abs") return ConvexTestFunction::abs_value();
  if (name == "square") return ConvexTestFunction::square();
  if (name == "linear:+1") return ConvexTestFunction::linear(1.0);
  if (name == "linear:-1") return ConvexTestFunction::linear(-1.0);
  if (name.rfind("hinge:", 0) == 0) {
    try {
      return ConvexTestFunction::hinge(std::stod(name.substr(6)));
    } catch (const std::exception&) {
      throw ConfigError(ctx + ": bad hinge threshold in '" + name + "'");
    }
  }
  throw ConfigError(ctx + ": unknown test function '" + name +
                    "' (use abs, square, hinge:<t>, linear:+1, linear:-1)");
}

inline KyFanJob parse_kyfan_config(const nlohmann::json& j) {
  const std::string ctx = "kyfan-check config";
  require_keys(j, {"version", "trials", "max_dim", "master_seed", "scale",
                   "phis"},
               ctx);
  require_version(j, ctx);
  KyFanJob job;
  job.trials = get_field_or<std::size_t>(j, "trials", ctx, 1000);
  job.max_dim = get_field_or<std::size_t>(j, "max_dim", ctx, 20);
  job.master_seed = get_field_or<std::uint64_t>(j, "master_seed", ctx, 1);
  job.scale = get_field_or<double>(j, "scale", ctx, 1.0);
  job.phi_names = get_field_or<std::vector<std::string>>(
      j, "phis", ctx, {"abs", "square", "hinge:0.5"});
  for (const std::string& name : job.phi_names)
    job.phis.push_back(parse_phi(name, ctx));
  if (job.phis.empty()) throw ConfigError(ctx + ": 'phis' must be nonempty");
  if (job.trials < 1 || job.max_dim < 1)
    throw ConfigError(ctx + ": trials and max_dim must be >= 1");
  job.inputs = j;
  return job;
}

struct ExperimentJob {
  std::string kind;  // theorem1_dos | theorem1_ids | sharpness_shift | holder_rate
  Theorem1Config theorem1;
  ShiftConfig shift;
  HolderRateConfig holder;
};

inline ExperimentJob parse_experiment_config(const nlohmann::json& j) {
  const std::string ctx = "experiment config";
  if (!j.is_object() || !j.contains("experiment"))
    throw ConfigError(ctx + ": missing 'experiment'");
  ExperimentJob job;
  job.kind = get_field<std::string>(j, "experiment", ctx);

  if (job.kind == "theorem1_dos" || job.kind == "theorem1_ids") {
    require_keys(j,
                 {"version", "experiment", "shape", "mu", "mu_tilde",
                  "samples", "master_seed", "grid", "deltas"},
                 ctx);
    require_version(j, ctx);
    if (job.kind == "theorem1_dos" && (j.contains("grid") || j.contains("deltas")))
      throw ConfigError(ctx + ": 'grid'/'deltas' apply to theorem1_ids only");
    Theorem1Config& c = job.theorem1;
    c.shape = parse_shape(j.at("shape"), ctx);
    c.mu = parse_measure(j.at("mu"), ctx);
    c.mu_tilde = parse_measure(j.at("mu_tilde"), ctx);
    c.samples = get_field_or<std::size_t>(j, "samples", ctx, 100);
    c.master_seed = get_field_or<std::uint64_t>(j, "master_seed", ctx, 1);
    if (c.samples < 1) throw ConfigError(ctx + ": samples must be >= 1");
    if (job.kind == "theorem1_ids") {
      const GridSpec fallback = default_grid_pair(c.shape, c.mu, c.mu_tilde);
      c.grid = j.contains("grid") ? parse_grid(j.at("grid"), fallback, ctx)
                                  : fallback;
      c.deltas = get_field_or<std::vector<double>>(j, "deltas", ctx, {});
    }
    return job;
  }

  if (job.kind == "sharpness_shift") {
    require_keys(j, {"version", "experiment", "shapes", "shift"}, ctx);
    require_version(j, ctx);
    if (!j.contains("shapes") || !j.at("shapes").is_array() ||
        j.at("shapes").empty())
      throw ConfigError(ctx + ": 'shapes' must be a nonempty array");
    for (const auto& s : j.at("shapes"))
      job.shift.shapes.push_back(parse_shape(s, ctx));
    job.shift.shift = get_field<double>(j, "shift", ctx);
    return job;
  }

  if (job.kind == "holder_rate") {
    require_keys(j,
                 {"version", "experiment", "a", "c", "t_min", "t_max",
                  "t_count", "delta_points", "slope_tolerance", "fit_model"},
                 ctx);
    require_version(j, ctx);
    HolderRateConfig& c = job.holder;
    c.a = get_field_or<double>(j, "a", ctx, 1.0);
    c.c = get_field_or<double>(j, "c", ctx, 1.0);
    const double t_min = get_field_or<double>(j, "t_min", ctx, 1e-6);
    const double t_max = get_field_or<double>(j, "t_max", ctx, 1e-2);
    const std::size_t t_count =
        get_field_or<std::size_t>(j, "t_count", ctx, 25);
    if (!(t_min > 0.0 && t_max > t_min) || t_count < 2)
      throw ConfigError(ctx + ": need 0 < t_min < t_max and t_count >= 2");
    c.t_values = log_spaced(t_min, t_max, t_count);
    c.delta_points = get_field_or<std::size_t>(j, "delta_points", ctx, 3000);
    if (c.delta_points < 2)
      throw ConfigError(ctx + ": delta_points must be >= 2");
    c.slope_tolerance =
        get_field_or<double>(j, "slope_tolerance", ctx, 0.05);
    if (j.contains("fit_model")) {
      const auto& fj = j.at("fit_model");
      require_keys(fj,
                   {"shape", "mu", "samples", "master_seed", "grid",
                    "fit_deltas"},
                   ctx + ".fit_model");
      HolderFitModel fm;
      fm.shape = parse_shape(fj.at("shape"), ctx);
      fm.mu = parse_measure(fj.at("mu"), ctx);
      fm.samples = get_field_or<std::size_t>(fj, "samples", ctx, 50);
      fm.master_seed = get_field_or<std::uint64_t>(fj, "master_seed", ctx, 1);
      if (fj.contains("grid"))
        fm.grid = parse_grid(fj.at("grid"), default_grid(fm.shape, fm.mu),
                             ctx + ".fit_model");
      fm.fit_deltas =
          get_field_or<std::vector<double>>(fj, "fit_deltas", ctx, {});
      c.fit_model = std::move(fm);
    }
    return job;
  }

  throw ConfigError(ctx + ": unknown experiment '" + job.kind +
                    "' (use theorem1_dos, theorem1_ids, sharpness_shift, "
                    "holder_rate)");
}

inline CounterexampleConfig parse_counterexample_config(
    const nlohmann::json& j) {
  const std::string ctx = "counterexample config";
  require_keys(j, {"version", "d", "alpha", "delta_shift", "epsilons", "c_d"},
               ctx);
  require_version(j, ctx);
  CounterexampleConfig c;
  c.d = get_field<int>(j, "d", ctx);
  c.alpha = get_field<double>(j, "alpha", ctx);
  c.delta_shift = get_field<double>(j, "delta_shift", ctx);
  c.epsilons = get_field<std::vector<double>>(j, "epsilons", ctx);
  c.c_d = get_field_or<double>(j, "c_d", ctx, 1.0);
  return c;
}

}  // namespace idslab

#endif  // IDSLAB_CONFIG_HPP
