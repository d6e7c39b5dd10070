#ifndef IDSLAB_TEST_HELPERS_HPP
#define IDSLAB_TEST_HELPERS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "idslab/measure.hpp"
#include "idslab/rng.hpp"
#include "idslab/spectra.hpp"

namespace testhelp {

// Random atomic measure; locations land on a coarse lattice so that pairs
// occasionally share support points.
inline idslab::ProbabilityMeasure random_atomic(idslab::SplitMix64& rng,
                                                std::size_t max_atoms,
                                                double coord_scale = 2.0) {
  const std::size_t n =
      1 + static_cast<std::size_t>(rng.next() % max_atoms);
  std::vector<double> locs(n);
  std::vector<double> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    locs[i] = std::round(rng.next_in(-coord_scale, coord_scale) * 8.0) / 8.0;
    raw[i] = 0.05 + rng.next_unit();
  }
  double total = 0.0;
  for (double w : raw) total += w;
  std::vector<idslab::Atom> atoms;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back({locs[i], raw[i] / total});
  return idslab::ProbabilityMeasure::atomic(std::move(atoms));
}

// W1 between equal-count, equal-weight atom lists by sorted pairing; the
// independent route against the CDF-difference integral.
inline double w1_sorted_matching(std::vector<double> xs,
                                 std::vector<double> ys) {
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    total += std::abs(xs[i] - ys[i]);
  return total / static_cast<double>(xs.size());
}

// Exact bounded-Lipschitz oracle for tiny supports (n <= 4) by enumerating
// polytope vertices: every vertex activates n constraints drawn from
// f_i = +-1 and f_{i+1} - f_i = +-gap_i.
inline double bl_vertex_oracle(const std::vector<double>& xs,
                               const std::vector<double>& c) {
  const std::size_t n = xs.size();
  struct Constraint {
    std::vector<double> row;
    double rhs;
  };
  std::vector<Constraint> cons;
  for (std::size_t i = 0; i < n; ++i)
    for (double sign : {1.0, -1.0}) {
      Constraint k{std::vector<double>(n, 0.0), sign};
      k.row[i] = 1.0;
      k.rhs = sign;
      cons.push_back(k);
    }
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (double sign : {1.0, -1.0}) {
      Constraint k{std::vector<double>(n, 0.0), sign * (xs[i + 1] - xs[i])};
      k.row[i] = -1.0;
      k.row[i + 1] = 1.0;
      cons.push_back(k);
    }

  auto solve = [&](const std::vector<std::size_t>& pick,
                   std::vector<double>& f) {
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t j = 0; j < n; ++j) a[r][j] = cons[pick[r]].row[j];
      a[r][n] = cons[pick[r]].rhs;
    }
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < n; ++r)
        if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
      if (std::abs(a[piv][col]) < 1e-12) return false;
      std::swap(a[piv], a[col]);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col) continue;
        const double fac = a[r][col] / a[col][col];
        if (fac == 0.0) continue;
        for (std::size_t j = col; j <= n; ++j) a[r][j] -= fac * a[col][j];
      }
    }
    f.resize(n);
    for (std::size_t r = 0; r < n; ++r) f[r] = a[r][n] / a[r][r];
    return true;
  };

  auto feasible = [&](const std::vector<double>& f) {
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(f[i]) > 1.0 + 1e-9) return false;
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (std::abs(f[i + 1] - f[i]) > xs[i + 1] - xs[i] + 1e-9) return false;
    return true;
  };

  double best = 0.0;  // f == 0 is feasible with objective 0
  std::vector<std::size_t> pick(n);
  std::vector<double> f;
  const std::size_t total = cons.size();
  auto recurse = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
    if (depth == n) {
      if (!solve(pick, f) || !feasible(f)) return;
      double obj = 0.0;
      for (std::size_t i = 0; i < n; ++i) obj += c[i] * f[i];
      best = std::max(best, obj);
      return;
    }
    for (std::size_t i = start; i < total; ++i) {
      pick[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

// Approximate bounded-Lipschitz oracle for moderate supports: dynamic
// program over f-values discretized to `levels` points of [-1, 1]. The
// window is widened by one level so the discrete feasible set contains a
// snap of every continuous solution; the result therefore brackets the LP
// optimum within a few grid steps.
inline double bl_grid_dp_oracle(const std::vector<double>& xs,
                                const std::vector<double>& c,
                                std::size_t levels = 801) {
  const std::size_t n = xs.size();
  const double step = 2.0 / static_cast<double>(levels - 1);
  auto level_value = [&](std::size_t j) {
    return -1.0 + step * static_cast<double>(j);
  };
  std::vector<double> dp(levels), next(levels);
  for (std::size_t j = 0; j < levels; ++j) dp[j] = c[0] * level_value(j);
  for (std::size_t i = 1; i < n; ++i) {
    const double gap = xs[i] - xs[i - 1];
    const std::size_t radius =
        static_cast<std::size_t>(std::floor(gap / step + 1e-9)) + 1;
    for (std::size_t j = 0; j < levels; ++j) {
      const std::size_t lo = j > radius ? j - radius : 0;
      const std::size_t hi = std::min(j + radius, levels - 1);
      double best = -1e300;
      for (std::size_t k = lo; k <= hi; ++k) best = std::max(best, dp[k]);
      next[j] = best + c[i] * level_value(j);
    }
    std::swap(dp, next);
  }
  double best = 0.0;
  for (double v : dp) best = std::max(best, v);
  return best;
}

// Random orthogonal matrix as a product of Householder reflectors; used to
// manufacture symmetric matrices with a known spectrum.
inline idslab::SymMatrix random_orthogonal(idslab::SplitMix64& rng,
                                           std::size_t n) {
  idslab::SymMatrix q = idslab::SymMatrix::identity(n);
  for (std::size_t rep = 0; rep < n; ++rep) {
    std::vector<double> v(n);
    double norm2 = 0.0;
    for (double& x : v) {
      x = rng.next_in(-1.0, 1.0);
      norm2 += x * x;
    }
    if (norm2 < 1e-12) continue;
    // q <- q (I - 2 v v^T / |v|^2)
    idslab::SymMatrix next(n);
    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t k = 0; k < n; ++k) dot += q.at(i, k) * v[k];
      for (std::size_t j = 0; j < n; ++j)
        next.at(i, j) = q.at(i, j) - 2.0 * dot * v[j] / norm2;
    }
    q = next;
  }
  return q;
}

inline idslab::SymMatrix with_spectrum(idslab::SplitMix64& rng,
                                       const std::vector<double>& lambda) {
  const std::size_t n = lambda.size();
  const idslab::SymMatrix q = random_orthogonal(rng, n);
  idslab::SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        s += q.at(i, k) * lambda[k] * q.at(j, k);
      a.at(i, j) = s;
      a.at(j, i) = s;
    }
  return a;
}

}  // namespace testhelp

#endif  // IDSLAB_TEST_HELPERS_HPP
