#ifndef IDSLAB_KYFAN_HPP
#define IDSLAB_KYFAN_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "idslab/numeric.hpp"
#include "idslab/rng.hpp"
#include "idslab/spectra.hpp"

namespace idslab {

// Continuous convex test function phi. The built-in tags are exact; custom
// piecewise-linear functions carry their convexity certificate (slopes
// nondecreasing, checked at construction).
class ConvexTestFunction {
 public:
  static ConvexTestFunction abs_value() {
    return ConvexTestFunction(Tag::abs_value, 0.0, "abs");
  }
  static ConvexTestFunction square() {
    return ConvexTestFunction(Tag::square, 0.0, "square");
  }
  static ConvexTestFunction hinge(double threshold) {
    return ConvexTestFunction(Tag::hinge, threshold,
                              "hinge(" + format_param(threshold) + ")");
  }
  static ConvexTestFunction linear(double sign) {
    if (sign != 1.0 && sign != -1.0)
      throw std::invalid_argument("linear test function: sign must be +-1");
    return ConvexTestFunction(Tag::linear, sign,
                              sign > 0 ? "linear(+1)" : "linear(-1)");
  }

  // Breakpoint representation; extended linearly beyond the ends with the
  // first/last segment slopes.
  static ConvexTestFunction piecewise_linear(std::vector<double> xs,
                                             std::vector<double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
      throw std::invalid_argument("piecewise_linear: need >= 2 breakpoints");
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      if (!(xs[i] < xs[i + 1]))
        throw std::invalid_argument("piecewise_linear: x not increasing");
    double prev_slope = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      const double s = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
      if (s + 1e-12 < prev_slope)
        throw std::invalid_argument(
            "piecewise_linear: slopes must be nondecreasing (not convex)");
      prev_slope = s;
    }
    ConvexTestFunction f(Tag::piecewise, 0.0, "piecewise-linear");
    f.xs_ = std::move(xs);
    f.ys_ = std::move(ys);
    return f;
  }

  double operator()(double x) const {
    switch (tag_) {
      case Tag::abs_value: return std::abs(x);
      case Tag::square: return x * x;
      case Tag::hinge: return std::max(x - param_, 0.0);
      case Tag::linear: return param_ * x;
      case Tag::piecewise: return eval_piecewise(x);
    }
    throw std::logic_error("unknown test function tag");
  }

  bool vanishes_at_zero() const { return (*this)(0.0) == 0.0; }
  const std::string& name() const { return name_; }

 private:
  enum class Tag { abs_value, square, hinge, linear, piecewise };

  ConvexTestFunction(Tag tag, double param, std::string name)
      : tag_(tag), param_(param), name_(std::move(name)) {}

  static std::string format_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
  }

  double eval_piecewise(double x) const {
    if (x <= xs_.front()) {
      const double s = (ys_[1] - ys_[0]) / (xs_[1] - xs_[0]);
      return ys_.front() + s * (x - xs_.front());
    }
    if (x >= xs_.back()) {
      const std::size_t k = xs_.size() - 2;
      const double s = (ys_[k + 1] - ys_[k]) / (xs_[k + 1] - xs_[k]);
      return ys_.back() + s * (x - xs_.back());
    }
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - xs_.begin()) - 1;
    const double t = (x - xs_[k]) / (xs_[k + 1] - xs_[k]);
    return ys_[k] + t * (ys_[k + 1] - ys_[k]);
  }

  Tag tag_;
  double param_;
  std::string name_;
  std::vector<double> xs_, ys_;
};

struct KyFanReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  double tolerance = 0.0;
  bool holds = false;
};

// Checks sum_j phi(lambda~_j - lambda_j) <= sum_j phi(e_j) for A, B and
// A + B, with the rank-matched (sorted) eigenvalue pairing; that is the
// pairing under which the majorization statement holds.
inline KyFanReport kyfan_convex_margin(const SymMatrix& a, const SymMatrix& b,
                                       const ConvexTestFunction& phi) {
  if (a.n != b.n)
    throw std::invalid_argument("kyfan_convex_margin: dimension mismatch");
  const Spectrum sa = eig_dense_symmetric(a);
  const Spectrum sb = eig_dense_symmetric(b);
  const Spectrum sab = eig_dense_symmetric(a + b);

  std::vector<double> lhs_terms(a.n), rhs_terms(a.n);
  for (std::size_t j = 0; j < a.n; ++j) {
    lhs_terms[j] = phi(sab.eigenvalues[j] - sa.eigenvalues[j]);
    rhs_terms[j] = phi(sb.eigenvalues[j]);
  }
  KyFanReport r;
  r.lhs = pairwise_sum(lhs_terms);
  r.rhs = pairwise_sum(rhs_terms);
  r.margin = r.rhs - r.lhs;
  r.tolerance = 1e-9 * (1.0 + std::abs(r.rhs));
  r.holds = r.lhs <= r.rhs + r.tolerance;
  return r;
}

// phi = |.| specialization: the right side is the trace norm ||B||_1.
inline KyFanReport kyfan_l1_margin(const SymMatrix& a, const SymMatrix& b) {
  return kyfan_convex_margin(a, b, ConvexTestFunction::abs_value());
}

struct TraceEqualityReport {
  double shift_sum = 0.0;  // sum_j (lambda~_j - lambda_j)
  double trace_b = 0.0;
  double tolerance = 0.0;
  bool holds = false;
};

// phi(x) = x and phi(x) = -x are both convex, so the majorization pinches
// the shift sum to exactly tr B.
inline TraceEqualityReport trace_equality_check(const SymMatrix& a,
                                                const SymMatrix& b) {
  if (a.n != b.n)
    throw std::invalid_argument("trace_equality_check: dimension mismatch");
  const Spectrum sa = eig_dense_symmetric(a);
  const Spectrum sab = eig_dense_symmetric(a + b);
  std::vector<double> terms(a.n);
  for (std::size_t j = 0; j < a.n; ++j)
    terms[j] = sab.eigenvalues[j] - sa.eigenvalues[j];
  TraceEqualityReport r;
  r.shift_sum = pairwise_sum(terms);
  r.trace_b = b.trace();
  r.tolerance = 1e-9 * (1.0 + std::abs(r.trace_b));
  r.holds = std::abs(r.shift_sum - r.trace_b) <= r.tolerance;
  return r;
}

inline SymMatrix random_symmetric(SplitMix64& rng, std::size_t n,
                                  double scale) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = rng.next_in(-scale, scale);
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  return m;
}

struct KyFanTrialRecord {
  std::uint64_t seed = 0;
  std::size_t dim = 0;
  std::string phi;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = false;

  nlohmann::json to_json() const {
    return {{"seed", seed},   {"dim", dim},       {"phi", phi},
            {"lhs", lhs},     {"rhs", rhs},       {"margin", margin},
            {"holds", holds}};
  }
};

struct KyFanBatchResult {
  std::vector<KyFanTrialRecord> records;
  double worst_margin = 0.0;
  double worst_trace_error = 0.0;
  bool all_hold = true;
};

// Seeded batch of random symmetric pairs, one record per (pair, phi)
// triple, plus the +-x trace identity on every pair.
inline KyFanBatchResult kyfan_random_batch(
    std::size_t trials, std::size_t max_dim, std::uint64_t master_seed,
    const std::vector<ConvexTestFunction>& phis, double scale = 1.0) {
  if (max_dim < 1)
    throw std::invalid_argument("kyfan_random_batch: max_dim must be >= 1");
  KyFanBatchResult out;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t seed = sample_seed(master_seed, t);
    SplitMix64 rng(seed);
    const std::size_t n = 1 + static_cast<std::size_t>(
                                  rng.next() % static_cast<std::uint64_t>(max_dim));
    const SymMatrix a = random_symmetric(rng, n, scale);
    const SymMatrix b = random_symmetric(rng, n, scale);
    for (const auto& phi : phis) {
      const KyFanReport r = kyfan_convex_margin(a, b, phi);
      out.records.push_back(
          {seed, n, phi.name(), r.lhs, r.rhs, r.margin, r.holds});
      out.worst_margin = std::min(out.worst_margin, r.margin / (1.0 + std::abs(r.rhs)));
      out.all_hold = out.all_hold && r.holds;
    }
    const TraceEqualityReport tr = trace_equality_check(a, b);
    out.worst_trace_error =
        std::max(out.worst_trace_error,
                 std::abs(tr.shift_sum - tr.trace_b) / (1.0 + std::abs(tr.trace_b)));
    out.all_hold = out.all_hold && tr.holds;
  }
  if (out.records.empty()) out.worst_margin = 0.0;
  return out;
}

}  // namespace idslab

#endif  // IDSLAB_KYFAN_HPP
