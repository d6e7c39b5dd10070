#ifndef IDSLAB_LATTICE_HPP
#define IDSLAB_LATTICE_HPP

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace idslab {

// Finite box of Z^d, d in {1,2}. Sites are ordered lexicographically by
// coordinates; the ordering is part of the serialization contract.
struct BoxShape {
  int dimension = 1;
  std::array<int, 2> side = {1, 1};

  BoxShape() = default;
  BoxShape(int d, int l0, int l1 = 1) : dimension(d), side{l0, l1} {
    if (d != 1 && d != 2)
      throw std::invalid_argument("BoxShape: dimension must be 1 or 2");
    if (l0 < 1 || (d == 2 && l1 < 1))
      throw std::invalid_argument("BoxShape: side lengths must be >= 1");
    if (d == 1) side[1] = 1;
  }

  static BoxShape line(int length) { return BoxShape(1, length); }
  static BoxShape rect(int lx, int ly) { return BoxShape(2, lx, ly); }

  std::size_t site_count() const {
    return static_cast<std::size_t>(side[0]) *
           static_cast<std::size_t>(dimension == 2 ? side[1] : 1);
  }

  std::size_t index(int x, int y = 0) const {
    return static_cast<std::size_t>(x) *
               static_cast<std::size_t>(dimension == 2 ? side[1] : 1) +
           static_cast<std::size_t>(y);
  }

  nlohmann::json to_json() const {
    if (dimension == 1) return nlohmann::json::array({side[0]});
    return nlohmann::json::array({side[0], side[1]});
  }

  static BoxShape from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty() || j.size() > 2)
      throw std::invalid_argument("shape JSON: expected [L] or [Lx, Ly]");
    if (j.size() == 1) return line(j[0].get<int>());
    return rect(j[0].get<int>(), j[1].get<int>());
  }

  friend bool operator==(const BoxShape&, const BoxShape&) = default;
};

struct PotentialField {
  std::vector<double> values;
};

// H_Lambda = P_Lambda (-Delta + V) P_Lambda^*: diagonal 2d + V(n) at every
// site (boundary sites keep the full 2d because the restriction is by
// coordinate projection, not the subgraph Laplacian), and -1 on each pair
// of adjacent sites inside the box. Immutable after construction.
class LatticeOperator {
 public:
  LatticeOperator(BoxShape shape, PotentialField potential)
      : shape_(shape), potential_(std::move(potential)) {
    if (potential_.values.size() != shape_.site_count())
      throw std::invalid_argument(
          "LatticeOperator: potential length does not match the box");
  }

  const BoxShape& shape() const { return shape_; }
  const std::vector<double>& potential() const { return potential_.values; }
  std::size_t dimension() const { return shape_.site_count(); }

  double diagonal(std::size_t site) const {
    return 2.0 * shape_.dimension + potential_.values[site];
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dimension(); ++i) t += diagonal(i);
    return t;
  }

  // Spectrum is contained in [min V, 4d + max V].
  std::pair<double, double> gershgorin_window() const {
    double vmin = potential_.values[0], vmax = potential_.values[0];
    for (double v : potential_.values) {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    return {vmin, 4.0 * shape_.dimension + vmax};
  }

  double norm_bound() const {
    const auto [a, b] = gershgorin_window();
    return std::max(std::abs(a), std::abs(b));
  }

  bool is_tridiagonal() const { return shape_.dimension == 1; }

  std::vector<double> tridiagonal_main() const {
    require_1d();
    std::vector<double> d(dimension());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = diagonal(i);
    return d;
  }

  std::vector<double> tridiagonal_off() const {
    require_1d();
    return std::vector<double>(dimension() > 0 ? dimension() - 1 : 0, -1.0);
  }

  // Neighbor pairs (i, j) with i < j, each listed once.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    if (shape_.dimension == 1) {
      for (int x = 0; x + 1 < shape_.side[0]; ++x)
        e.emplace_back(shape_.index(x), shape_.index(x + 1));
      return e;
    }
    for (int x = 0; x < shape_.side[0]; ++x)
      for (int y = 0; y < shape_.side[1]; ++y) {
        if (x + 1 < shape_.side[0])
          e.emplace_back(shape_.index(x, y), shape_.index(x + 1, y));
        if (y + 1 < shape_.side[1])
          e.emplace_back(shape_.index(x, y), shape_.index(x, y + 1));
      }
    return e;
  }

  std::vector<double> matvec(std::span<const double> psi) const {
    if (psi.size() != dimension())
      throw std::invalid_argument("matvec: vector length mismatch");
    std::vector<double> out(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) out[i] = diagonal(i) * psi[i];
    for (const auto& [i, j] : edges()) {
      out[i] -= psi[j];
      out[j] -= psi[i];
    }
    return out;
  }

  // Dense row-major matrix; used by the dense eigensolver entry point.
  std::vector<double> dense() const {
    const std::size_t n = dimension();
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] = diagonal(i);
    for (const auto& [i, j] : edges()) {
      a[i * n + j] = -1.0;
      a[j * n + i] = -1.0;
    }
    return a;
  }

  LatticeOperator with_shifted_potential(double c) const {
    PotentialField p = potential_;
    for (double& v : p.values) v += c;
    return LatticeOperator(shape_, std::move(p));
  }

  nlohmann::json to_json() const {
    return {{"shape", shape_.to_json()}, {"potential", potential_.values}};
  }

  static LatticeOperator from_json(const nlohmann::json& j) {
    for (const auto& [key, value] : j.items()) {
      (void)value;
      if (key != "shape" && key != "potential")
        throw std::invalid_argument("operator JSON: unknown key '" + key + "'");
    }
    BoxShape shape = BoxShape::from_json(j.at("shape"));
    PotentialField p{j.at("potential").get<std::vector<double>>()};
    return LatticeOperator(shape, std::move(p));
  }

 private:
  void require_1d() const {
    if (shape_.dimension != 1)
      throw std::domain_error("tridiagonal access requires a 1D box");
  }

  BoxShape shape_;
  PotentialField potential_;
};

inline LatticeOperator build_anderson(const BoxShape& shape,
                                      PotentialField potential) {
  return LatticeOperator(shape, std::move(potential));
}

inline LatticeOperator build_anderson(const BoxShape& shape,
                                      std::vector<double> potential) {
  return LatticeOperator(shape, PotentialField{std::move(potential)});
}

// Eigenvalues of the result are exactly those of `op` shifted by c.
inline LatticeOperator shift_potential(const LatticeOperator& op, double c) {
  return op.with_shifted_potential(c);
}

}  // namespace idslab

#endif  // IDSLAB_LATTICE_HPP
