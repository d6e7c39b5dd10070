#ifndef IDSLAB_SIMPLEX_HPP
#define IDSLAB_SIMPLEX_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace idslab {

// Dense bounded-variable primal simplex:
//
//   maximize c'z   subject to   A z = b,   lo <= z <= up.
//
// The caller supplies an initial basis whose basic solution is feasible
// (nonbasic variables sit at the bound selected by `at_upper`). The basis
// inverse is kept explicitly and updated by elementary row operations.
// Dantzig pricing, with a switch to Bland's rule after a stall budget so
// degenerate instances cannot cycle.
struct SimplexResult {
  double objective = 0.0;
  std::vector<double> solution;
  std::size_t iterations = 0;
};

inline SimplexResult solve_bounded_lp(
    const std::vector<std::vector<double>>& A, const std::vector<double>& b,
    const std::vector<double>& c, const std::vector<double>& lo,
    const std::vector<double>& up, std::vector<std::size_t> basis,
    std::vector<char> at_upper) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  if (b.size() != m || lo.size() != n || up.size() != n || basis.size() != m ||
      at_upper.size() != n)
    throw std::invalid_argument("solve_bounded_lp: inconsistent dimensions");
  for (const auto& row : A)
    if (row.size() != n)
      throw std::invalid_argument("solve_bounded_lp: ragged constraint row");

  constexpr double kPivotTol = 1e-11;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double cscale = 1.0;
  for (double v : c) cscale = std::max(cscale, std::abs(v));
  const double rc_tol = 1e-9 * cscale;

  std::vector<char> is_basic(n, 0);
  for (std::size_t k = 0; k < m; ++k) is_basic[basis[k]] = 1;

  // Dense basis inverse, row-major. The chain/slack bases this solver is
  // used with start as the identity.
  std::vector<double> binv(m * m, 0.0);
  {
    // Verify the initial basis is the identity in the supplied columns;
    // otherwise build the inverse by Gauss-Jordan.
    bool identity = true;
    for (std::size_t k = 0; k < m && identity; ++k)
      for (std::size_t i = 0; i < m && identity; ++i)
        if (A[i][basis[k]] != (i == k ? 1.0 : 0.0)) identity = false;
    if (identity) {
      for (std::size_t k = 0; k < m; ++k) binv[k * m + k] = 1.0;
    } else {
      std::vector<double> aug(m * 2 * m, 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) aug[i * 2 * m + k] = A[i][basis[k]];
        aug[i * 2 * m + m + i] = 1.0;
      }
      for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
          if (std::abs(aug[r * 2 * m + col]) > std::abs(aug[piv * 2 * m + col]))
            piv = r;
        if (std::abs(aug[piv * 2 * m + col]) < kPivotTol)
          throw std::invalid_argument("solve_bounded_lp: singular basis");
        if (piv != col)
          for (std::size_t j = 0; j < 2 * m; ++j)
            std::swap(aug[piv * 2 * m + j], aug[col * 2 * m + j]);
        const double d = aug[col * 2 * m + col];
        for (std::size_t j = 0; j < 2 * m; ++j) aug[col * 2 * m + j] /= d;
        for (std::size_t r = 0; r < m; ++r) {
          if (r == col) continue;
          const double f = aug[r * 2 * m + col];
          if (f == 0.0) continue;
          for (std::size_t j = 0; j < 2 * m; ++j)
            aug[r * 2 * m + j] -= f * aug[col * 2 * m + j];
        }
      }
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) binv[i * m + k] = aug[i * 2 * m + m + k];
    }
  }

  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = at_upper[j] ? up[j] : lo[j];

  auto recompute_basic_values = [&]() {
    std::vector<double> rhs(b);
    for (std::size_t j = 0; j < n; ++j) {
      if (is_basic[j] || x[j] == 0.0) continue;
      for (std::size_t i = 0; i < m; ++i) rhs[i] -= A[i][j] * x[j];
    }
    for (std::size_t k = 0; k < m; ++k) {
      double v = 0.0;
      for (std::size_t i = 0; i < m; ++i) v += binv[k * m + i] * rhs[i];
      x[basis[k]] = v;
    }
  };
  recompute_basic_values();

  std::vector<double> y(m), w(m);
  const std::size_t max_iter = 50 * (n + m) + 1000;
  const std::size_t bland_after = 5 * (n + m) + 50;
  std::size_t iter = 0;

  for (;; ++iter) {
    if (iter >= max_iter)
      throw std::runtime_error("solve_bounded_lp: iteration limit exceeded");
    const bool bland = iter >= bland_after;

    for (std::size_t i = 0; i < m; ++i) {
      double v = 0.0;
      for (std::size_t k = 0; k < m; ++k) v += c[basis[k]] * binv[k * m + i];
      y[i] = v;
    }

    // Pricing.
    std::size_t enter = n;
    double best = rc_tol;
    int enter_dir = 0;  // +1: increase from lower, -1: decrease from upper
    for (std::size_t j = 0; j < n; ++j) {
      if (is_basic[j] || lo[j] == up[j]) continue;
      double rj = c[j];
      for (std::size_t i = 0; i < m; ++i) rj -= y[i] * A[i][j];
      int dir = 0;
      double gain = 0.0;
      if (!at_upper[j] && rj > rc_tol) {
        dir = +1;
        gain = rj;
      } else if (at_upper[j] && rj < -rc_tol) {
        dir = -1;
        gain = -rj;
      }
      if (dir == 0) continue;
      if (bland) {
        enter = j;
        enter_dir = dir;
        break;
      }
      if (gain > best) {
        best = gain;
        enter = j;
        enter_dir = dir;
      }
    }
    if (enter == n) break;  // optimal

    for (std::size_t k = 0; k < m; ++k) {
      double v = 0.0;
      for (std::size_t i = 0; i < m; ++i) v += binv[k * m + i] * A[i][enter];
      w[k] = v;
    }

    // Ratio test: x_B changes at rate -dir*w per unit step of the entering
    // variable; the entering variable itself may only travel to its other
    // bound.
    double theta = up[enter] - lo[enter];
    std::size_t leave = m;  // m means "bound flip"
    int leave_hits_upper = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const double rate = -static_cast<double>(enter_dir) * w[k];
      const std::size_t jb = basis[k];
      double limit = kInf;
      int hits_upper = 0;
      if (rate > kPivotTol) {
        limit = (up[jb] - x[jb]) / rate;
        hits_upper = 1;
      } else if (rate < -kPivotTol) {
        limit = (lo[jb] - x[jb]) / rate;
      }
      if (limit < -1e-12) limit = 0.0;
      if (limit < theta - 1e-12 ||
          (limit < theta + 1e-12 && leave != m &&
           std::abs(w[k]) > std::abs(w[leave]))) {
        theta = std::max(limit, 0.0);
        leave = k;
        leave_hits_upper = hits_upper;
      }
    }
    if (theta == kInf)
      throw std::runtime_error("solve_bounded_lp: unbounded objective");

    // Apply the step.
    const double step = static_cast<double>(enter_dir) * theta;
    for (std::size_t k = 0; k < m; ++k) x[basis[k]] -= step * w[k];
    x[enter] = (at_upper[enter] ? up[enter] : lo[enter]) + step;

    if (leave == m) {
      at_upper[enter] = !at_upper[enter];
      x[enter] = at_upper[enter] ? up[enter] : lo[enter];
      continue;
    }

    const std::size_t leaving_col = basis[leave];
    is_basic[leaving_col] = 0;
    at_upper[leaving_col] = static_cast<char>(leave_hits_upper);
    x[leaving_col] = leave_hits_upper ? up[leaving_col] : lo[leaving_col];
    basis[leave] = enter;
    is_basic[enter] = 1;

    const double piv = w[leave];
    if (std::abs(piv) < kPivotTol)
      throw std::runtime_error("solve_bounded_lp: numerically singular pivot");
    for (std::size_t i = 0; i < m; ++i) binv[leave * m + i] /= piv;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == leave || w[k] == 0.0) continue;
      const double f = w[k];
      for (std::size_t i = 0; i < m; ++i)
        binv[k * m + i] -= f * binv[leave * m + i];
    }
    recompute_basic_values();
  }

  // Feasibility audit; the solver must not return a silently bad point.
  double bscale = 1.0;
  for (double v : b) bscale = std::max(bscale, std::abs(v));
  for (std::size_t i = 0; i < m; ++i) {
    double r = -b[i];
    for (std::size_t j = 0; j < n; ++j) r += A[i][j] * x[j];
    if (std::abs(r) > 1e-7 * bscale)
      throw std::runtime_error("solve_bounded_lp: residual check failed");
  }
  for (std::size_t j = 0; j < n; ++j)
    if (x[j] < lo[j] - 1e-7 || x[j] > up[j] + 1e-7)
      throw std::runtime_error("solve_bounded_lp: bound check failed");

  SimplexResult res;
  res.solution = x;
  res.iterations = iter;
  double obj = 0.0;
  for (std::size_t j = 0; j < n; ++j) obj += c[j] * x[j];
  res.objective = obj;
  return res;
}

}  // namespace idslab

#endif  // IDSLAB_SIMPLEX_HPP
