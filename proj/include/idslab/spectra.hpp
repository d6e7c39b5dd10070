#ifndef IDSLAB_SPECTRA_HPP
#define IDSLAB_SPECTRA_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "idslab/lattice.hpp"
#include "idslab/measure.hpp"
#include "idslab/numeric.hpp"

namespace idslab {

// Dense symmetric matrix, row-major full storage.
struct SymMatrix {
  std::size_t n = 0;
  std::vector<double> a;

  SymMatrix() = default;
  explicit SymMatrix(std::size_t size) : n(size), a(size * size, 0.0) {}
  SymMatrix(std::size_t size, std::vector<double> data)
      : n(size), a(std::move(data)) {
    if (a.size() != n * n)
      throw std::invalid_argument("SymMatrix: storage size mismatch");
  }

  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  static SymMatrix identity(std::size_t size) {
    SymMatrix m(size);
    for (std::size_t i = 0; i < size; ++i) m.at(i, i) = 1.0;
    return m;
  }

  static SymMatrix diagonal(const std::vector<double>& d) {
    SymMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
    return m;
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) t += at(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
  }

  double asymmetry() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        worst = std::max(worst, std::abs(at(i, j) - at(j, i)));
    return worst;
  }

  friend SymMatrix operator+(const SymMatrix& x, const SymMatrix& y) {
    if (x.n != y.n) throw std::invalid_argument("SymMatrix: size mismatch");
    SymMatrix r(x.n);
    for (std::size_t k = 0; k < x.a.size(); ++k) r.a[k] = x.a[k] + y.a[k];
    return r;
  }
};

// All eigenvalues of a finite self-adjoint operator, ascending.
struct Spectrum {
  std::vector<double> eigenvalues;

  std::size_t size() const { return eigenvalues.size(); }

  double sum() const { return pairwise_sum(eigenvalues); }

  std::size_t count_at_most(double energy) const {
    return static_cast<std::size_t>(
        std::upper_bound(eigenvalues.begin(), eigenvalues.end(), energy) -
        eigenvalues.begin());
  }

  // Serializes as a plain JSON array of reals.
  nlohmann::json to_json() const { return nlohmann::json(eigenvalues); }

  static Spectrum from_json(const nlohmann::json& j) {
    Spectrum s{j.get<std::vector<double>>()};
    if (!std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()))
      throw std::invalid_argument("spectrum JSON: values must be ascending");
    return s;
  }

  // Normalized counting measure (1/n) sum_j delta_{lambda_j}. Duplicate
  // eigenvalues merge into a single atom so locations stay strictly
  // increasing.
  ProbabilityMeasure counting_measure() const {
    std::vector<Atom> atoms;
    const double w = 1.0 / static_cast<double>(eigenvalues.size());
    for (double lam : eigenvalues) {
      if (!atoms.empty() && atoms.back().x == lam)
        atoms.back().w += w;
      else
        atoms.push_back({lam, w});
    }
    return ProbabilityMeasure::atomic(std::move(atoms));
  }
};

namespace detail {

// QL iteration with implicit Wilkinson shifts on a symmetric tridiagonal
// matrix; eigenvalues only. d is the diagonal, e the subdiagonal (e[i]
// couples i and i+1). At most 50 sweeps per eigenvalue; exceeding the cap
// is a hard error.
inline void ql_implicit_shift(std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = d.size();
  if (n == 0) return;
  if (e.size() + 1 != n && !(n == 1 && e.empty()))
    throw std::invalid_argument("ql_implicit_shift: off-diagonal length");
  e.resize(n, 0.0);  // sentinel slot e[n-1]
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 50)
          throw std::runtime_error(
              "ql_implicit_shift: no convergence in 50 sweeps");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool restarted = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            restarted = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (restarted) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

// Householder reduction of a dense symmetric matrix (row-major, destroyed)
// to tridiagonal form; eigenvalues only, so the transforms are not
// accumulated. On return d holds the diagonal and e[i] (i >= 1) the
// coupling between i-1 and i.
inline void householder_tridiagonalize(std::vector<double>& a, std::size_t n,
                                       std::vector<double>& d,
                                       std::vector<double>& e) {
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (std::size_t i = n; i-- > 1;) {
    const std::size_t l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (std::size_t k = 0; k <= l; ++k) scale += std::abs(a[i * n + k]);
      if (scale == 0.0) {
        e[i] = a[i * n + l];
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          a[i * n + k] /= scale;
          h += a[i * n + k] * a[i * n + k];
        }
        double f = a[i * n + l];
        const double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a[i * n + l] = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          double gj = 0.0;
          for (std::size_t k = 0; k <= j; ++k) gj += a[j * n + k] * a[i * n + k];
          for (std::size_t k = j + 1; k <= l; ++k)
            gj += a[k * n + j] * a[i * n + k];
          e[j] = gj / h;
          f += e[j] * a[i * n + j];
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          f = a[i * n + j];
          const double gj = e[j] - hh * f;
          e[j] = gj;
          for (std::size_t k = 0; k <= j; ++k)
            a[j * n + k] -= f * e[k] + gj * a[i * n + k];
        }
      }
    } else {
      e[i] = a[i * n + l];
    }
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i * n + i];
}

}  // namespace detail

inline Spectrum eig_tridiagonal(std::vector<double> diag,
                                std::vector<double> offdiag) {
  if (!diag.empty() && offdiag.size() + 1 != diag.size())
    throw std::invalid_argument(
        "eig_tridiagonal: offdiag length must be diag length - 1");
  detail::ql_implicit_shift(diag, offdiag);
  std::sort(diag.begin(), diag.end());
  return Spectrum{std::move(diag)};
}

inline Spectrum eig_dense_symmetric(SymMatrix m) {
  const double tol = 1e-12 * std::max(1.0, m.max_abs());
  if (m.asymmetry() > tol)
    throw std::domain_error("eig_dense_symmetric: matrix is not symmetric");
  std::vector<double> d, e;
  detail::householder_tridiagonalize(m.a, m.n, d, e);
  if (m.n > 0) e.erase(e.begin());  // e[i] now couples i and i+1
  detail::ql_implicit_shift(d, e);
  std::sort(d.begin(), d.end());
  return Spectrum{std::move(d)};
}

// Full spectrum of a lattice operator; 1D boxes take the tridiagonal path.
inline Spectrum eig(const LatticeOperator& op) {
  if (op.is_tridiagonal())
    return eig_tridiagonal(op.tridiagonal_main(), op.tridiagonal_off());
  return eig_dense_symmetric(SymMatrix(op.dimension(), op.dense()));
}

struct InertiaCount {
  std::size_t count = 0;
  bool used_fallback = false;
};

namespace detail {

inline bool sturm_count(const std::vector<double>& d,
                        const std::vector<double>& e, double energy,
                        double pivot_tol, std::size_t& out) {
  std::size_t negatives = 0;
  double q = d[0] - energy;
  for (std::size_t i = 0;; ++i) {
    if (std::abs(q) < pivot_tol) return false;
    if (q < 0.0) ++negatives;
    if (i + 1 >= d.size()) break;
    q = (d[i + 1] - energy) - e[i] * e[i] / q;
  }
  out = negatives;
  return true;
}

inline bool ldlt_count(std::vector<double> a, std::size_t n, double energy,
                       double pivot_tol, std::size_t& out) {
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] -= energy;
  std::size_t negatives = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double piv = a[k * n + k];
    if (std::abs(piv) < pivot_tol) return false;
    if (piv < 0.0) ++negatives;
    // Lower triangle only: the reduced matrix stays symmetric, so row k's
    // entry at column j > k is read from a[j][k].
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / piv;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j <= i; ++j)
        a[i * n + j] -= f * a[j * n + k];
    }
  }
  out = negatives;
  return true;
}

}  // namespace detail

// Number of eigenvalues of H_Lambda at or below `energy`, via the inertia
// of the LDL^T factorization of H - E I (Sylvester's law). The
// factorization runs unpivoted: on a pivot below 1e-13 * ||H|| the energy
// is perturbed once by 1e-12 * ||H||, and if that also breaks down the
// routine falls back to a full diagonalization and flags it.
inline InertiaCount count_at_most(const LatticeOperator& op, double energy) {
  const double norm = std::max(op.norm_bound(), 1.0);
  const double pivot_tol = 1e-13 * norm;
  const double nudge = 1e-12 * norm;

  std::size_t count = 0;
  if (op.is_tridiagonal()) {
    const std::vector<double> d = op.tridiagonal_main();
    const std::vector<double> e = op.tridiagonal_off();
    if (detail::sturm_count(d, e, energy, pivot_tol, count))
      return {count, false};
    if (detail::sturm_count(d, e, energy + nudge, pivot_tol, count))
      return {count, false};
  } else {
    const std::vector<double> a = op.dense();
    if (detail::ldlt_count(a, op.dimension(), energy, pivot_tol, count))
      return {count, false};
    if (detail::ldlt_count(a, op.dimension(), energy + nudge, pivot_tol,
                           count))
      return {count, false};
  }
  return {eig(op).count_at_most(energy), true};
}

// Transport cost sum_j |lambda_j - mu_j| of the rank-matched (sorted)
// pairing; divided by n this is W1 between the two normalized counting
// measures.
inline double spectral_transport_cost(const Spectrum& s1, const Spectrum& s2) {
  if (s1.size() != s2.size())
    throw std::invalid_argument("spectral_transport_cost: length mismatch");
  std::vector<double> diffs(s1.size());
  for (std::size_t j = 0; j < s1.size(); ++j)
    diffs[j] = std::abs(s1.eigenvalues[j] - s2.eigenvalues[j]);
  return pairwise_sum(diffs);
}

}  // namespace idslab

#endif  // IDSLAB_SPECTRA_HPP
