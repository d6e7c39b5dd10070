#ifndef IDSLAB_IDS_HPP
#define IDSLAB_IDS_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "idslab/lattice.hpp"
#include "idslab/measure.hpp"
#include "idslab/numeric.hpp"
#include "idslab/parallel.hpp"
#include "idslab/rng.hpp"
#include "idslab/spectra.hpp"

namespace idslab {

// Piecewise-linear function with |slope| <= 1, extended by constants
// beyond its breakpoints.
class LipschitzTestFunction {
 public:
  LipschitzTestFunction(std::vector<double> xs, std::vector<double> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size() || xs_.empty())
      throw std::invalid_argument("LipschitzTestFunction: breakpoint sizes");
    lipschitz_ = 0.0;
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
      if (!(xs_[i] < xs_[i + 1]))
        throw std::invalid_argument(
            "LipschitzTestFunction: breakpoints must increase");
      lipschitz_ = std::max(
          lipschitz_,
          std::abs((ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i])));
    }
    if (lipschitz_ > 1.0 + 1e-12)
      throw std::invalid_argument(
          "LipschitzTestFunction: slope magnitude exceeds 1");
  }

  double operator()(double x) const {
    if (x <= xs_.front()) return ys_.front();
    if (x >= xs_.back()) return ys_.back();
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - xs_.begin()) - 1;
    const double t = (x - xs_[k]) / (xs_[k + 1] - xs_[k]);
    return ys_[k] + t * (ys_[k + 1] - ys_[k]);
  }

  double lipschitz_constant() const { return lipschitz_; }

  // Min and max of f over [a, b]; infinities select the constant tails.
  std::pair<double, double> range_on(double a, double b) const {
    double fmin = std::numeric_limits<double>::infinity();
    double fmax = -fmin;
    auto take = [&](double v) {
      fmin = std::min(fmin, v);
      fmax = std::max(fmax, v);
    };
    take((*this)(std::isinf(a) ? xs_.front() : a));
    take((*this)(std::isinf(b) ? xs_.back() : b));
    for (std::size_t i = 0; i < xs_.size(); ++i)
      if (xs_[i] > a && xs_[i] < b) take(ys_[i]);
    return {fmin, fmax};
  }

 private:
  std::vector<double> xs_, ys_;
  double lipschitz_ = 0.0;
};

// The tent used to turn measure-distance bounds into IDS sup bounds:
// f = delta on (-inf, E], sloping down to 0 on [E, E + delta], 0 beyond.
inline LipschitzTestFunction tent_function(double energy, double delta) {
  if (!(delta > 0.0))
    throw std::invalid_argument("tent_function: delta must be positive");
  return LipschitzTestFunction({energy, energy + delta}, {delta, 0.0});
}

struct GridSpec {
  double min_energy = 0.0;
  double max_energy = 1.0;
  std::size_t points = 2048;

  std::vector<double> energies() const {
    if (points < 2 || !(min_energy < max_energy))
      throw std::invalid_argument("GridSpec: need min < max and >= 2 points");
    std::vector<double> e(points);
    for (std::size_t k = 0; k < points; ++k)
      e[k] = min_energy + (max_energy - min_energy) *
                              static_cast<double>(k) /
                              static_cast<double>(points - 1);
    return e;
  }

  double spacing() const {
    return (max_energy - min_energy) / static_cast<double>(points - 1);
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Default grid: 2048 uniform points over the Gershgorin window of the model
// with one unit of margin on each side.
inline GridSpec default_grid(const BoxShape& shape,
                             const ProbabilityMeasure& mu,
                             std::size_t points = 2048) {
  return {mu.min_support() - 1.0,
          4.0 * shape.dimension + mu.max_support() + 1.0, points};
}

// Per-sample uniforms, one per site in lexicographic order. Sample s uses
// the stream SplitMix64(sample_seed(master_seed, s)) and nothing else, so
// any worker assignment reproduces the same draws.
inline std::vector<double> sample_uniforms(std::size_t site_count,
                                           std::uint64_t master_seed,
                                           std::uint64_t sample_index) {
  SplitMix64 rng(sample_seed(master_seed, sample_index));
  std::vector<double> us(site_count);
  for (double& u : us) u = rng.next_unit();
  return us;
}

inline std::vector<double> potential_from_uniforms(
    const ProbabilityMeasure& mu, std::span<const double> us) {
  std::vector<double> v(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) v[i] = mu.quantile(us[i]);
  return v;
}

// Grid-sampled cumulative spectral function N(E_k) averaged over Monte
// Carlo samples. Counts are accumulated as integers, so the result is
// bitwise reproducible for a fixed (grid, master_seed) regardless of
// worker count.
class EmpiricalIDS {
 public:
  EmpiricalIDS(GridSpec grid, std::vector<double> values,
               std::vector<double> stderrs, BoxShape shape,
               std::size_t n_samples, nlohmann::json measure_descriptor,
               std::uint64_t master_seed)
      : grid_(grid),
        energies_(grid.energies()),
        values_(std::move(values)),
        stderr_(std::move(stderrs)),
        shape_(shape),
        n_samples_(n_samples),
        measure_(std::move(measure_descriptor)),
        master_seed_(master_seed) {
    if (values_.size() != energies_.size() ||
        stderr_.size() != energies_.size())
      throw std::invalid_argument("EmpiricalIDS: size mismatch");
    for (std::size_t k = 0; k + 1 < values_.size(); ++k)
      if (values_[k] > values_[k + 1] + 1e-15)
        throw std::invalid_argument("EmpiricalIDS: values must not decrease");
  }

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& energies() const { return energies_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& stderrs() const { return stderr_; }
  const BoxShape& shape() const { return shape_; }
  std::size_t sample_count() const { return n_samples_; }
  std::uint64_t master_seed() const { return master_seed_; }
  const nlohmann::json& measure_descriptor() const { return measure_; }
  double spacing() const { return grid_.spacing(); }

  // Grid-sup approximation of the modulus of continuity: the largest
  // increase of N over a window of length delta, with the window rounded
  // to whole grid steps.
  double modulus_of_continuity(double delta) const {
    const double h = spacing();
    if (!(delta > 0.0) || delta < h * (1.0 - 1e-9))
      throw std::domain_error(
          "modulus_of_continuity: delta below grid resolution");
    const std::size_t shift =
        static_cast<std::size_t>(std::llround(delta / h));
    const std::size_t last = values_.size() - 1;
    double worst = 0.0;
    for (std::size_t k = 0; k <= last; ++k) {
      const std::size_t j = std::min(k + shift, last);
      worst = std::max(worst, values_[j] - values_[k]);
    }
    return worst;
  }

  nlohmann::json to_json() const {
    return {{"grid",
             {{"min", grid_.min_energy},
              {"max", grid_.max_energy},
              {"points", grid_.points}}},
            {"values", values_},
            {"stderr", stderr_},
            {"meta",
             {{"shape", shape_.to_json()},
              {"samples", n_samples_},
              {"measure", measure_},
              {"master_seed", master_seed_}}}};
  }

 private:
  GridSpec grid_;
  std::vector<double> energies_;
  std::vector<double> values_;
  std::vector<double> stderr_;
  BoxShape shape_;
  std::size_t n_samples_ = 0;
  nlohmann::json measure_;
  std::uint64_t master_seed_ = 0;
};

inline double modulus_of_continuity(const EmpiricalIDS& ids, double delta) {
  return ids.modulus_of_continuity(delta);
}

namespace detail {

// #{eigenvalues <= E_k} for every grid point, by a single sweep over the
// sorted spectrum.
inline std::vector<std::int32_t> counts_on_grid(
    const std::vector<double>& eigenvalues,
    const std::vector<double>& energies) {
  std::vector<std::int32_t> counts(energies.size());
  std::size_t idx = 0;
  for (std::size_t k = 0; k < energies.size(); ++k) {
    while (idx < eigenvalues.size() && eigenvalues[idx] <= energies[k]) ++idx;
    counts[k] = static_cast<std::int32_t>(idx);
  }
  return counts;
}

}  // namespace detail

inline EmpiricalIDS empirical_ids(const BoxShape& shape,
                                  const ProbabilityMeasure& mu,
                                  std::size_t n_samples, const GridSpec& grid,
                                  std::uint64_t master_seed,
                                  unsigned workers = 1) {
  if (n_samples < 1)
    throw std::invalid_argument("empirical_ids: need at least one sample");
  const std::vector<double> energies = grid.energies();
  const std::size_t sites = shape.site_count();
  const std::size_t points = energies.size();

  std::vector<std::vector<std::int32_t>> per_sample(n_samples);
  parallel_for_indexed(n_samples, workers, [&](std::size_t s) {
    const std::vector<double> us = sample_uniforms(sites, master_seed, s);
    const LatticeOperator op =
        build_anderson(shape, potential_from_uniforms(mu, us));
    per_sample[s] = detail::counts_on_grid(eig(op).eigenvalues, energies);
  });

  std::vector<std::int64_t> sum(points, 0), sumsq(points, 0);
  for (std::size_t s = 0; s < n_samples; ++s)
    for (std::size_t k = 0; k < points; ++k) {
      const std::int64_t c = per_sample[s][k];
      sum[k] += c;
      sumsq[k] += c * c;
    }

  const double nn = static_cast<double>(sites);
  const double ss = static_cast<double>(n_samples);
  std::vector<double> values(points), stderrs(points, 0.0);
  for (std::size_t k = 0; k < points; ++k) {
    const double mean_count = static_cast<double>(sum[k]) / ss;
    values[k] = mean_count / nn;
    if (n_samples > 1) {
      const double var_count =
          (static_cast<double>(sumsq[k]) - ss * mean_count * mean_count) /
          (ss - 1.0);
      stderrs[k] = std::sqrt(std::max(var_count, 0.0) / ss) / nn;
    }
  }
  return EmpiricalIDS(grid, std::move(values), std::move(stderrs), shape,
                      n_samples, mu.to_json(), master_seed);
}

struct LogHolderReport {
  double constant = 0.0;  // sup_delta omega(delta) * log(1/delta)
  std::vector<std::array<double, 3>> rows;  // delta, omega, product
};

// Measured log-Hoelder diagnostic; report-only (no universal constant is
// asserted).
inline LogHolderReport log_holder_diagnostic(const EmpiricalIDS& ids,
                                             std::span<const double> deltas) {
  LogHolderReport r;
  for (double d : deltas) {
    if (!(d > 0.0 && d <= 0.5))
      throw std::domain_error("log_holder_diagnostic: delta outside (0, 1/2]");
    const double omega = ids.modulus_of_continuity(d);
    const double product = omega * std::log(1.0 / d);
    r.rows.push_back({d, omega, product});
    r.constant = std::max(r.constant, product);
  }
  return r;
}

// Bracketing Riemann-Stieltjes integral of f against the measure whose
// cumulative function is the grid-sampled N: on each grid cell the mass is
// multiplied by the min/max of f over the cell, and the masses below/above
// the grid use the constant tails of f. Returns {lower, upper}.
inline std::pair<double, double> stieltjes_bounds(
    const LipschitzTestFunction& f, const EmpiricalIDS& ids) {
  const auto& e = ids.energies();
  const auto& n = ids.values();
  constexpr double inf = std::numeric_limits<double>::infinity();
  double lower = 0.0, upper = 0.0;

  auto add = [&](double mass, double a, double b) {
    if (mass <= 0.0) return;
    const auto [fmin, fmax] = f.range_on(a, b);
    lower += mass * fmin;
    upper += mass * fmax;
  };
  add(n.front(), -inf, e.front());
  for (std::size_t k = 0; k + 1 < e.size(); ++k)
    add(n[k + 1] - n[k], e[k], e[k + 1]);
  add(1.0 - n.back(), e.back(), inf);
  return {lower, upper};
}

struct SandwichBoundsReport {
  double delta = 0.0;
  double d_kr = 0.0;
  double worst_upper_margin = 0.0;
  double worst_lower_margin = 0.0;

  bool holds(double tol = 0.0) const {
    return worst_upper_margin >= -tol && worst_lower_margin >= -tol;
  }
};

// Checks  N2(E) <= N1(E + delta) + d_kr/delta  and
//         N2(E) >= N1(E - delta) - d_kr/delta  at every grid point.
// Off-grid references use the exact tails 0 and 1 (the grid spans the
// Gershgorin window of both models).
inline SandwichBoundsReport ids_sandwich_bounds(const EmpiricalIDS& ids1,
                                                const EmpiricalIDS& ids2,
                                                double d_kr_mu, double delta) {
  if (!(ids1.grid() == ids2.grid()))
    throw std::invalid_argument("ids_sandwich_bounds: grid mismatch");
  if (!(delta > 0.0))
    throw std::invalid_argument("ids_sandwich_bounds: delta must be positive");
  const double h = ids1.spacing();
  const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(
      std::llround(delta / h));
  const auto& n1 = ids1.values();
  const auto& n2 = ids2.values();
  const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(n1.size()) - 1;

  auto n1_at = [&](std::ptrdiff_t k) {
    if (k < 0) return 0.0;
    if (k > last) return 1.0;
    return n1[static_cast<std::size_t>(k)];
  };

  SandwichBoundsReport r;
  r.delta = delta;
  r.d_kr = d_kr_mu;
  const double penalty = d_kr_mu / delta;
  double worst_u = std::numeric_limits<double>::infinity();
  double worst_l = worst_u;
  for (std::ptrdiff_t k = 0; k <= last; ++k) {
    const double v2 = n2[static_cast<std::size_t>(k)];
    worst_u = std::min(worst_u, n1_at(k + shift) + penalty - v2);
    worst_l = std::min(worst_l, v2 - n1_at(k - shift) + penalty);
  }
  r.worst_upper_margin = worst_u;
  r.worst_lower_margin = worst_l;
  return r;
}

}  // namespace idslab

#endif  // IDSLAB_IDS_HPP
