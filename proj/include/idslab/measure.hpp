#ifndef IDSLAB_MEASURE_HPP
#define IDSLAB_MEASURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "idslab/numeric.hpp"
#include "idslab/simplex.hpp"

namespace idslab {

enum class MeasureKind {
  atomic,
  parametric_uniform,
  parametric_two_point,
  empirical,
};

inline const char* to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::atomic: return "atomic";
    case MeasureKind::parametric_uniform: return "parametric-uniform";
    case MeasureKind::parametric_two_point: return "parametric-bernoulli-two-point";
    case MeasureKind::empirical: return "empirical-from-samples";
  }
  throw std::logic_error("unknown MeasureKind");
}

struct Atom {
  double x = 0.0;
  double w = 0.0;
  friend bool operator==(const Atom&, const Atom&) = default;
};

// A Borel probability measure on R with compact support [-A, A].
//
// Finite-support kinds (atomic, two-point, empirical) carry an explicit
// sorted atom list; the uniform family keeps exact cdf/quantile formulas
// and is discretized only by an explicit discretize() call.
class ProbabilityMeasure {
 public:
  static ProbabilityMeasure atomic(std::vector<Atom> atoms,
                                   double support_bound = -1.0) {
    return ProbabilityMeasure(MeasureKind::atomic, std::move(atoms),
                              support_bound);
  }

  static ProbabilityMeasure dirac(double location) {
    return atomic({{location, 1.0}});
  }

  static ProbabilityMeasure uniform(double lo, double hi,
                                    double support_bound = -1.0) {
    if (!(lo < hi))
      throw std::invalid_argument("uniform measure requires lo < hi");
    ProbabilityMeasure m;
    m.kind_ = MeasureKind::parametric_uniform;
    m.lo_ = lo;
    m.hi_ = hi;
    m.support_bound_ = resolve_bound(support_bound, lo, hi);
    return m;
  }

  static ProbabilityMeasure two_point(double lo, double hi, double p_lo,
                                      double support_bound = -1.0) {
    if (!(lo < hi))
      throw std::invalid_argument("two-point measure requires lo < hi");
    if (!(p_lo > 0.0 && p_lo < 1.0))
      throw std::invalid_argument("two-point probability must be in (0,1)");
    ProbabilityMeasure m(MeasureKind::parametric_two_point,
                         {{lo, p_lo}, {hi, 1.0 - p_lo}}, support_bound);
    m.lo_ = lo;
    m.hi_ = hi;
    m.p_lo_ = p_lo;
    return m;
  }

  static ProbabilityMeasure from_samples(std::span<const double> samples,
                                         double support_bound = -1.0) {
    if (samples.empty())
      throw std::invalid_argument("empirical measure needs samples");
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    std::vector<Atom> atoms;
    const double w = 1.0 / static_cast<double>(s.size());
    for (double x : s) {
      if (!atoms.empty() && atoms.back().x == x)
        atoms.back().w += w;
      else
        atoms.push_back({x, w});
    }
    return ProbabilityMeasure(MeasureKind::empirical, std::move(atoms),
                              support_bound);
  }

  MeasureKind kind() const { return kind_; }
  double support_bound() const { return support_bound_; }
  bool finite_support() const {
    return kind_ != MeasureKind::parametric_uniform;
  }

  const std::vector<Atom>& atoms() const {
    if (!finite_support())
      throw std::domain_error("measure has no atomic representation");
    return atoms_;
  }

  // Cumulative weight up to and including atom i; back() == 1 exactly.
  const std::vector<double>& cumulative_weights() const {
    if (!finite_support())
      throw std::domain_error("measure has no atomic representation");
    return cumw_;
  }

  double min_support() const {
    return finite_support() ? atoms_.front().x : lo_;
  }
  double max_support() const {
    return finite_support() ? atoms_.back().x : hi_;
  }

  // Right-continuous distribution function P(X <= x).
  double cdf(double x) const {
    if (kind_ == MeasureKind::parametric_uniform) {
      if (x < lo_) return 0.0;
      if (x >= hi_) return 1.0;
      return (x - lo_) / (hi_ - lo_);
    }
    auto it = std::upper_bound(
        atoms_.begin(), atoms_.end(), x,
        [](double v, const Atom& a) { return v < a.x; });
    if (it == atoms_.begin()) return 0.0;
    return cumw_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
  }

  // Generalized inverse inf{x : cdf(x) >= u}; ties at jumps resolve to the
  // atom where the cumulative weight first reaches u.
  double quantile(double u) const {
    if (!(u > 0.0 && u < 1.0))
      throw std::domain_error("quantile argument must lie in (0,1)");
    if (kind_ == MeasureKind::parametric_uniform)
      return lo_ + (hi_ - lo_) * u;
    auto it = std::lower_bound(cumw_.begin(), cumw_.end(), u);
    return atoms_[static_cast<std::size_t>(it - cumw_.begin())].x;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["kind"] = to_string(kind_);
    j["support_bound"] = support_bound_;
    if (kind_ == MeasureKind::atomic || kind_ == MeasureKind::empirical) {
      nlohmann::json arr = nlohmann::json::array();
      for (const Atom& a : atoms_) arr.push_back({a.x, a.w});
      j["atoms"] = std::move(arr);
    } else if (kind_ == MeasureKind::parametric_uniform) {
      j["params"] = {{"lo", lo_}, {"hi", hi_}};
    } else {
      j["params"] = {{"lo", lo_}, {"hi", hi_}, {"p_lo", p_lo_}};
    }
    return j;
  }

  static ProbabilityMeasure from_json(const nlohmann::json& j);

  friend bool operator==(const ProbabilityMeasure& a,
                         const ProbabilityMeasure& b) {
    if (a.kind_ != b.kind_ || a.support_bound_ != b.support_bound_)
      return false;
    if (a.kind_ == MeasureKind::parametric_uniform)
      return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    if (a.kind_ == MeasureKind::parametric_two_point)
      return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.p_lo_ == b.p_lo_;
    return a.atoms_ == b.atoms_;
  }

 private:
  ProbabilityMeasure() = default;

  ProbabilityMeasure(MeasureKind kind, std::vector<Atom> atoms,
                     double support_bound) {
    kind_ = kind;
    if (atoms.empty()) throw std::invalid_argument("measure needs atoms");
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.x < b.x; });
    atoms_.reserve(atoms.size());
    for (const Atom& a : atoms) {
      if (!(a.w > 0.0)) throw std::invalid_argument("atom weight must be > 0");
      if (!std::isfinite(a.x))
        throw std::invalid_argument("atom location must be finite");
      if (!atoms_.empty() && atoms_.back().x == a.x)
        atoms_.back().w += a.w;
      else
        atoms_.push_back(a);
    }
    std::vector<double> ws(atoms_.size());
    for (std::size_t i = 0; i < atoms_.size(); ++i) ws[i] = atoms_[i].w;
    const double total = pairwise_sum(ws);
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("atom weights must sum to 1 (1e-12)");
    cumw_.resize(atoms_.size());
    double run = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      run += atoms_[i].w;
      cumw_[i] = run;
    }
    cumw_.back() = 1.0;
    support_bound_ =
        resolve_bound(support_bound, atoms_.front().x, atoms_.back().x);
  }

  static double resolve_bound(double requested, double lo, double hi) {
    const double needed = std::max(std::abs(lo), std::abs(hi));
    if (requested < 0.0) return needed;
    if (requested + 1e-15 < needed)
      throw std::invalid_argument("support bound too small for the support");
    return requested;
  }

  MeasureKind kind_ = MeasureKind::atomic;
  std::vector<Atom> atoms_;
  std::vector<double> cumw_;
  double lo_ = 0.0, hi_ = 0.0, p_lo_ = 0.5;  // parametric families
  double support_bound_ = 0.0;
};

inline double cdf(const ProbabilityMeasure& m, double x) { return m.cdf(x); }
inline double quantile(const ProbabilityMeasure& m, double u) {
  return m.quantile(u);
}

// Equal-mass atoms at quantile midpoints; finite-support measures pass
// through unchanged (already atomic).
inline ProbabilityMeasure discretize(const ProbabilityMeasure& m,
                                     std::size_t count = 1024) {
  if (m.finite_support())
    return ProbabilityMeasure::atomic(m.atoms(), m.support_bound());
  if (count == 0) throw std::invalid_argument("discretize: count must be > 0");
  std::vector<Atom> atoms;
  atoms.reserve(count);
  const double w = 1.0 / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    atoms.push_back({m.quantile(u), w});
  }
  return ProbabilityMeasure::atomic(std::move(atoms), m.support_bound());
}

namespace detail {

// Exact W1 between finite-support measures: integral of |F1 - F2| over the
// union of jump locations, piecewise constant in between.
inline double kr_distance_exact(const ProbabilityMeasure& m1,
                                const ProbabilityMeasure& m2) {
  const auto& a1 = m1.atoms();
  const auto& a2 = m2.atoms();
  std::size_t i = 0, j = 0;
  double f1 = 0.0, f2 = 0.0, total = 0.0;
  double prev = 0.0;
  bool have_prev = false;
  while (i < a1.size() || j < a2.size()) {
    double x;
    if (i < a1.size() && (j >= a2.size() || a1[i].x <= a2[j].x))
      x = a1[i].x;
    else
      x = a2[j].x;
    if (have_prev) total += std::abs(f1 - f2) * (x - prev);
    while (i < a1.size() && a1[i].x == x) f1 += a1[i++].w;
    while (j < a2.size() && a2[j].x == x) f2 += a2[j++].w;
    prev = x;
    have_prev = true;
  }
  return total;
}

inline void append_breakpoints(const ProbabilityMeasure& m,
                               std::vector<double>& pts) {
  if (!m.finite_support()) return;
  const auto& cw = m.cumulative_weights();
  for (std::size_t i = 0; i + 1 < cw.size(); ++i) pts.push_back(cw[i]);
}

}  // namespace detail

// Kantorovich-Rubinstein (1-Wasserstein) distance. Finite-support pairs
// use the exact CDF-difference integral; otherwise the quantile form
// int_0^1 |Q1 - Q2| du is integrated by adaptive Simpson (absolute
// tolerance 1e-10), split at the jump locations of any atomic side.
inline double kr_distance(const ProbabilityMeasure& m1,
                          const ProbabilityMeasure& m2) {
  if (m1.finite_support() && m2.finite_support())
    return detail::kr_distance_exact(m1, m2);

  std::vector<double> pts{0.0, 1.0};
  detail::append_breakpoints(m1, pts);
  detail::append_breakpoints(m2, pts);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  constexpr double kTol = 1e-10;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double a = pts[k], b = pts[k + 1];
    const double width = b - a;
    if (width <= 0.0) continue;
    // Quantile functions jump exactly at the split points; evaluation is
    // nudged into the open interval so each piece sees a continuous
    // integrand. The nextafter guard keeps the nudge effective when it is
    // smaller than one ulp of the endpoint.
    const double nudge = 1e-14 * width;
    auto integrand = [&](double u) {
      double uu = std::min(std::max(u, a + nudge), b - nudge);
      if (uu <= a) uu = std::nextafter(a, b);
      if (uu >= b) uu = std::nextafter(b, a);
      return std::abs(m1.quantile(uu) - m2.quantile(uu));
    };
    total += adaptive_simpson(integrand, a, b, kTol * width);
  }
  return total;
}

// Bounded-Lipschitz distance between finite-support measures: the value of
//
//   max sum_i f_i (mu_i - nu_i)   s.t.  |f_i| <= 1,
//                                       |f_{i+1} - f_i| <= x_{i+1} - x_i,
//
// over the union of the supports. Adjacent Lipschitz constraints suffice
// on R. The LP is solved by the in-repo bounded-variable simplex.
inline double bl_distance(const ProbabilityMeasure& m1,
                          const ProbabilityMeasure& m2) {
  if (!m1.finite_support() || !m2.finite_support())
    throw std::domain_error(
        "bl_distance requires finite-support measures; discretize first");

  // Canonical argument order makes the metric exactly symmetric: both
  // orders solve the identical LP.
  const auto lex_less = [](const std::vector<Atom>& a,
                           const std::vector<Atom>& b) {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(),
        [](const Atom& p, const Atom& q) {
          return p.x < q.x || (p.x == q.x && p.w < q.w);
        });
  };
  const ProbabilityMeasure* p1 = &m1;
  const ProbabilityMeasure* p2 = &m2;
  if (lex_less(m2.atoms(), m1.atoms())) std::swap(p1, p2);

  struct Point {
    double x;
    double diff;
  };
  std::vector<Point> pts;
  {
    const auto& a1 = p1->atoms();
    const auto& a2 = p2->atoms();
    std::size_t i = 0, j = 0;
    while (i < a1.size() || j < a2.size()) {
      double x;
      if (i < a1.size() && (j >= a2.size() || a1[i].x <= a2[j].x))
        x = a1[i].x;
      else
        x = a2[j].x;
      double d = 0.0;
      while (i < a1.size() && a1[i].x == x) d += a1[i++].w;
      while (j < a2.size() && a2[j].x == x) d -= a2[j++].w;
      pts.push_back({x, d});
    }
  }
  const std::size_t n = pts.size();
  if (n == 1) return 0.0;
  const std::size_t m = n - 1;

  std::vector<std::vector<double>> A(m, std::vector<double>(n + m, 0.0));
  std::vector<double> b(m), c(n + m, 0.0), lo(n + m), up(n + m);
  for (std::size_t i = 0; i < m; ++i) {
    const double gap = pts[i + 1].x - pts[i].x;
    A[i][i] = -1.0;
    A[i][i + 1] = 1.0;
    A[i][n + i] = 1.0;  // slack: t_i = gap - (f_{i+1} - f_i) in [0, 2 gap]
    b[i] = gap;
    lo[n + i] = 0.0;
    up[n + i] = 2.0 * gap;
  }
  for (std::size_t j = 0; j < n; ++j) {
    c[j] = pts[j].diff;
    lo[j] = -1.0;
    up[j] = 1.0;
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;
  std::vector<char> at_upper(n + m, 0);  // f starts nonbasic at -1

  const SimplexResult res =
      solve_bounded_lp(A, b, c, lo, up, std::move(basis), std::move(at_upper));
  return std::max(res.objective, 0.0);
}

struct CouplingSample {
  double x = 0.0;
  double x_tilde = 0.0;
  double u = 0.0;
};

// Monotone (quantile) coupling: both coordinates are driven by one common
// uniform, which is the coupling attaining the KR infimum on R.
inline std::vector<CouplingSample> quantile_couple(
    const ProbabilityMeasure& m1, const ProbabilityMeasure& m2,
    std::span<const double> u_stream) {
  std::vector<CouplingSample> out;
  out.reserve(u_stream.size());
  for (double u : u_stream)
    out.push_back({m1.quantile(u), m2.quantile(u), u});
  return out;
}

struct SandwichReport {
  double d_bl = 0.0;
  double d_kr = 0.0;
  double kr_cap = 0.0;  // max(A,1) * d_bl
  double support_bound = 0.0;
  bool holds = false;
};

// Checks d_BL <= d_KR <= max(A,1) d_BL with A covering both supports.
inline SandwichReport metric_sandwich_check(const ProbabilityMeasure& m1,
                                            const ProbabilityMeasure& m2) {
  SandwichReport r;
  r.support_bound = std::max(m1.support_bound(), m2.support_bound());
  r.d_bl = bl_distance(m1, m2);
  r.d_kr = kr_distance(m1, m2);
  r.kr_cap = std::max(r.support_bound, 1.0) * r.d_bl;
  const double tol = 1e-10 * (1.0 + r.d_kr + r.d_bl);
  r.holds = r.d_bl <= r.d_kr + tol && r.d_kr <= r.kr_cap + tol;
  return r;
}

inline ProbabilityMeasure ProbabilityMeasure::from_json(
    const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("measure JSON: not an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "kind" && key != "atoms" && key != "params" &&
        key != "support_bound")
      throw std::invalid_argument("measure JSON: unknown key '" + key + "'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  const double bound = j.contains("support_bound")
                           ? j.at("support_bound").get<double>()
                           : -1.0;
  if (kind == "atomic" || kind == "empirical-from-samples") {
    std::vector<Atom> atoms;
    for (const auto& pair : j.at("atoms")) {
      if (!pair.is_array() || pair.size() != 2)
        throw std::invalid_argument("measure JSON: atom must be [x, w]");
      atoms.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    ProbabilityMeasure m = ProbabilityMeasure::atomic(std::move(atoms), bound);
    if (kind == "empirical-from-samples") m.kind_ = MeasureKind::empirical;
    return m;
  }
  if (kind == "parametric-uniform") {
    const auto& p = j.at("params");
    return uniform(p.at("lo").get<double>(), p.at("hi").get<double>(), bound);
  }
  if (kind == "parametric-bernoulli-two-point") {
    const auto& p = j.at("params");
    return two_point(p.at("lo").get<double>(), p.at("hi").get<double>(),
                     p.at("p_lo").get<double>(), bound);
  }
  throw std::invalid_argument("measure JSON: unknown kind '" + kind + "'");
}

}  // namespace idslab

#endif  // IDSLAB_MEASURE_HPP
