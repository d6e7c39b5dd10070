#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "idslab/kyfan.hpp"
#include "idslab/lattice.hpp"
#include "idslab/measure.hpp"
#include "idslab/rng.hpp"
#include "idslab/spectra.hpp"
#include "helpers.hpp"

using idslab::BoxShape;
using idslab::SplitMix64;
using idslab::SymMatrix;

TEST_CASE("eig_tridiagonal pinned spectra") {
  // Characteristic polynomial gives 2 - sqrt(2), 2, 2 + sqrt(2).
  const auto s = idslab::eig_tridiagonal({2, 2, 2}, {-1, -1});
  REQUIRE(s.size() == 3);
  CHECK(s.eigenvalues[0] == Catch::Approx(2.0 - std::sqrt(2.0)).margin(1e-12));
  CHECK(s.eigenvalues[1] == Catch::Approx(2.0).margin(1e-12));
  CHECK(s.eigenvalues[2] == Catch::Approx(2.0 + std::sqrt(2.0)).margin(1e-12));

  const auto one = idslab::eig_tridiagonal({5.0}, {});
  REQUIRE(one.size() == 1);
  CHECK(one.eigenvalues[0] == 5.0);

  const auto pm = idslab::eig_tridiagonal({0.0, 0.0}, {-1.0});
  CHECK(pm.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-14));
  CHECK(pm.eigenvalues[1] == Catch::Approx(1.0).margin(1e-14));

  CHECK_THROWS_AS(idslab::eig_tridiagonal({1, 2, 3}, {0.5}),
                  std::invalid_argument);
}

TEST_CASE("free chain closed form") {
  // Eigenvalues of the free 1D box are 2 - 2cos(k pi/(L+1)).
  const int L = 50;
  const auto op = idslab::build_anderson(BoxShape::line(L),
                                         std::vector<double>(L, 0.0));
  const auto s = idslab::eig(op);
  for (int k = 1; k <= L; ++k) {
    const double expect =
        2.0 - 2.0 * std::cos(k * std::numbers::pi / (L + 1));
    CHECK(s.eigenvalues[static_cast<std::size_t>(k - 1)] ==
          Catch::Approx(expect).margin(1e-10 * 4.0));
  }
}

TEST_CASE("eig_dense_symmetric basics") {
  const auto id4 = idslab::eig_dense_symmetric(SymMatrix::identity(4));
  for (double lam : id4.eigenvalues) CHECK(lam == Catch::Approx(1.0).margin(1e-13));

  // Free 2x2 box in 2D: tensor sum of two L=2 chains, {2, 4, 4, 6}.
  const auto op = idslab::build_anderson(BoxShape::rect(2, 2),
                                         std::vector<double>(4, 0.0));
  const auto s = idslab::eig(op);
  CHECK(s.eigenvalues[0] == Catch::Approx(2.0).margin(1e-12));
  CHECK(s.eigenvalues[1] == Catch::Approx(4.0).margin(1e-12));
  CHECK(s.eigenvalues[2] == Catch::Approx(4.0).margin(1e-12));
  CHECK(s.eigenvalues[3] == Catch::Approx(6.0).margin(1e-12));

  const auto d = idslab::eig_dense_symmetric(SymMatrix::diagonal({3.0, -1.0}));
  CHECK(d.eigenvalues == std::vector<double>{-1.0, 3.0});

  SymMatrix bad(2, {0.0, 1.0, 0.0, 0.0});
  CHECK_THROWS_AS(idslab::eig_dense_symmetric(bad), std::domain_error);
}

TEST_CASE("dense path agrees with tridiagonal path") {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.next() % 30;
    std::vector<double> d(n), e(n - 1);
    for (auto& x : d) x = rng.next_in(-2.0, 2.0);
    for (auto& x : e) x = rng.next_in(-2.0, 2.0);
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = d[i];
    for (std::size_t i = 0; i + 1 < n; ++i) {
      m.at(i, i + 1) = e[i];
      m.at(i + 1, i) = e[i];
    }
    const auto s1 = idslab::eig_tridiagonal(d, e);
    const auto s2 = idslab::eig_dense_symmetric(m);
    for (std::size_t j = 0; j < n; ++j)
      CHECK(s2.eigenvalues[j] ==
            Catch::Approx(s1.eigenvalues[j]).margin(1e-9));
  }
}

TEST_CASE("recovers a planted spectrum") {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + rng.next() % 14;
    std::vector<double> lambda(n);
    for (auto& x : lambda) x = rng.next_in(-5.0, 5.0);
    std::sort(lambda.begin(), lambda.end());
    const SymMatrix a = testhelp::with_spectrum(rng, lambda);
    double norm = 0.0;
    for (double lam : lambda) norm = std::max(norm, std::abs(lam));
    const auto s = idslab::eig_dense_symmetric(a);
    for (std::size_t j = 0; j < n; ++j)
      CHECK(s.eigenvalues[j] ==
            Catch::Approx(lambda[j]).margin(1e-9 * std::max(norm, 1.0)));
  }
}

TEST_CASE("count_at_most pinned values") {
  const auto free3 = idslab::build_anderson(BoxShape::line(3),
                                            std::vector<double>(3, 0.0));
  // Spectrum (0.586, 2, 3.414).
  CHECK(idslab::count_at_most(free3, 2.5).count == 2);
  CHECK(idslab::count_at_most(free3, -0.5).count == 0);   // below Gershgorin
  CHECK(idslab::count_at_most(free3, 4.5).count == 3);    // above Gershgorin
}

TEST_CASE("inertia count equals the spectrum count") {
  SplitMix64 rng(29);
  for (int trial = 0; trial < 1000; ++trial) {
    const bool two_d = (trial % 4 == 0);
    const BoxShape shape = two_d
                               ? BoxShape::rect(2 + int(rng.next() % 4),
                                                2 + int(rng.next() % 4))
                               : BoxShape::line(2 + int(rng.next() % 24));
    std::vector<double> v(shape.site_count());
    for (auto& x : v) x = rng.next_in(-1.0, 1.0);
    const auto op = idslab::build_anderson(shape, v);
    const auto spec = idslab::eig(op);
    const double energy = rng.next_in(-1.5, 4.0 * shape.dimension + 1.5);
    const auto res = idslab::count_at_most(op, energy);
    CHECK(res.count == spec.count_at_most(energy));
  }
}

TEST_CASE("count_at_most falls back cleanly at an exact eigenvalue") {
  // Free L=3 has an eigenvalue exactly at 2; the Sturm pivot vanishes at
  // the second step, the nudged retry resolves it.
  const auto free3 = idslab::build_anderson(BoxShape::line(3),
                                            std::vector<double>(3, 0.0));
  const auto res = idslab::count_at_most(free3, 2.0);
  CHECK(res.count == 2);
}

TEST_CASE("Weyl bound for rank-matched eigenvalues") {
  SplitMix64 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.next() % 12;
    const SymMatrix a = idslab::random_symmetric(rng, n, 1.0);
    const SymMatrix b = idslab::random_symmetric(rng, n, 1.0);
    const auto sa = idslab::eig_dense_symmetric(a);
    const auto sab = idslab::eig_dense_symmetric(a + b);
    const auto sb = idslab::eig_dense_symmetric(b);
    const double bnorm = std::max(std::abs(sb.eigenvalues.front()),
                                  std::abs(sb.eigenvalues.back()));
    for (std::size_t j = 0; j < n; ++j)
      CHECK(std::abs(sab.eigenvalues[j] - sa.eigenvalues[j]) <=
            bnorm + 1e-9);
  }
}

TEST_CASE("spectral transport cost") {
  idslab::Spectrum s{{0.0, 2.0}};
  CHECK(idslab::spectral_transport_cost(s, s) == 0.0);
  idslab::Spectrum t{{1.0, 3.0}};
  CHECK(idslab::spectral_transport_cost(s, t) == 2.0);
  idslab::Spectrum bad{{1.0}};
  CHECK_THROWS_AS(idslab::spectral_transport_cost(s, bad),
                  std::invalid_argument);

  // Cross-check against the measure-level metric: cost / n equals W1 of
  // the counting measures.
  SplitMix64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.next() % 20;
    std::vector<double> xs(n), ys(n);
    for (auto& x : xs) x = rng.next_in(-3.0, 3.0);
    for (auto& y : ys) y = rng.next_in(-3.0, 3.0);
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    idslab::Spectrum sx{xs}, sy{ys};
    const double via_cost =
        idslab::spectral_transport_cost(sx, sy) / static_cast<double>(n);
    const double via_measure =
        kr_distance(sx.counting_measure(), sy.counting_measure());
    CHECK(via_cost == Catch::Approx(via_measure).margin(1e-10));
  }
}

TEST_CASE("counting measure merges degenerate eigenvalues") {
  idslab::Spectrum s{{1.0, 1.0, 2.0, 3.0}};
  const auto m = s.counting_measure();
  REQUIRE(m.atoms().size() == 3);
  CHECK(m.atoms()[0].w == 0.5);
}

TEST_CASE("spectrum JSON is a plain array of reals") {
  idslab::Spectrum s{{-1.5, 0.25, 2.0}};
  CHECK(s.to_json().dump() == "[-1.5,0.25,2.0]");
  CHECK(idslab::Spectrum::from_json(s.to_json()).eigenvalues == s.eigenvalues);
  CHECK_THROWS_AS(idslab::Spectrum::from_json(nlohmann::json{2.0, 1.0}),
                  std::invalid_argument);
}
