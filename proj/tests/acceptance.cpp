// Acceptance suite: every criterion below runs at its stated tolerance and
// prints one "criterion N: PASS/FAIL" line. Run a single criterion by
// passing its number, or "all" (default).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "idslab/experiment.hpp"
#include "idslab/ids.hpp"
#include "idslab/kyfan.hpp"
#include "idslab/measure.hpp"
#include "idslab/report.hpp"
#include "idslab/rng.hpp"
#include "idslab/spectra.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Line {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

idslab::ProbabilityMeasure bernoulli_pair_mu() {
  return idslab::ProbabilityMeasure::two_point(0.0, 1.0, 0.5);
}
idslab::ProbabilityMeasure bernoulli_pair_mu_tilde() {
  return idslab::ProbabilityMeasure::two_point(0.0, 1.1, 0.5);
}

// ---- criterion 1: Ky Fan suite ----------------------------------------
bool criterion_1() {
  const auto start = Clock::now();
  Line line;

  const std::vector<idslab::ConvexTestFunction> phis{
      idslab::ConvexTestFunction::abs_value(),
      idslab::ConvexTestFunction::square(),
      idslab::ConvexTestFunction::hinge(0.5)};
  const auto batch = idslab::kyfan_random_batch(1000, 20, 20260811, phis);

  line.require(batch.records.size() == 3000, "record count");
  line.require(batch.all_hold, "a majorization or trace identity failed");
  line.require(batch.worst_margin >= -1e-9,
               "worst relative margin " + std::to_string(batch.worst_margin));
  line.require(batch.worst_trace_error <= 1e-9,
               "trace identity error " +
                   std::to_string(batch.worst_trace_error));

  const double elapsed = seconds_since(start);
  line.require(elapsed < 10.0, "runtime over 10 s");
  std::printf(
      "criterion 1: %s - 1000 pairs x {abs,square,hinge}, worst margin "
      "%.3e, trace err %.3e, %.2f s%s%s\n",
      line.pass ? "PASS" : "FAIL", batch.worst_margin,
      batch.worst_trace_error, elapsed, line.detail.empty() ? "" : " - ",
      line.detail.c_str());
  return line.pass;
}

// ---- criterion 2: per-sample Theorem-1 core ----------------------------
bool criterion_2() {
  const auto start = Clock::now();
  Line line;

  idslab::Theorem1Config cfg;
  cfg.shape = idslab::BoxShape::line(500);
  cfg.mu = bernoulli_pair_mu();
  cfg.mu_tilde = bernoulli_pair_mu_tilde();
  cfg.samples = 200;
  cfg.master_seed = 424242;
  const auto rep = idslab::run_theorem1_dos(cfg, idslab::default_worker_count());

  const double d_kr_mu = rep.aggregates.at("d_kr_mu").get<double>();
  line.require(std::abs(d_kr_mu - 0.05) <= 1e-14,
               "marginal distance is not the derived 0.05");
  for (const auto& check : rep.checks)
    line.require(check.holds, check.name + " failed (margin " +
                                  std::to_string(check.margin) + ")");

  const double d_kr_rho =
      rep.aggregates.at("d_kr_rho_empirical").get<double>();
  const double se =
      rep.aggregates.at("se_potential_cost_per_site").get<double>();
  const double elapsed = seconds_since(start);
  line.require(elapsed < 120.0, "runtime over 2 min");
  std::printf(
      "criterion 2: %s - 200 samples, every per-sample majorization holds; "
      "d_KR(rho,rho~)=%.6f <= 0.05 + 3*SE (SE=%.2e), %.2f s%s%s\n",
      line.pass ? "PASS" : "FAIL", d_kr_rho, se, elapsed,
      line.detail.empty() ? "" : " - ", line.detail.c_str());
  return line.pass;
}

// ---- criterion 3: sharpness of power and prefactor ---------------------
bool criterion_3() {
  const auto start = Clock::now();
  Line line;

  double worst = 0.0;
  for (double c : {0.3, 1.0}) {
    idslab::ShiftConfig cfg;
    cfg.shapes = {idslab::BoxShape::line(10), idslab::BoxShape::line(100),
                  idslab::BoxShape::line(500), idslab::BoxShape::rect(20, 20)};
    cfg.shift = c;
    const auto rep =
        idslab::run_sharpness_shift(cfg, idslab::default_worker_count());
    const double err = rep.aggregates.at("max_abs_error").get<double>();
    worst = std::max(worst, err);
    line.require(rep.verdict, "equality violated at shift " +
                                  std::to_string(c) + " (err " +
                                  std::to_string(err) + ")");
  }

  const double elapsed = seconds_since(start);
  line.require(elapsed < 60.0, "runtime over 1 min");
  std::printf(
      "criterion 3: %s - shift equality |d_KR - c| <= 1e-12 on 1D "
      "{10,100,500} and 2D 20x20 for c in {0.3, 1}; worst %.2e, %.2f s%s%s\n",
      line.pass ? "PASS" : "FAIL", worst, elapsed,
      line.detail.empty() ? "" : " - ", line.detail.c_str());
  return line.pass;
}

// ---- criterion 4: free-model IDS against the closed form ---------------
bool criterion_4() {
  const auto start = Clock::now();
  Line line;

  auto sup_err = [](int length) {
    const auto ids = idslab::empirical_ids(
        idslab::BoxShape::line(length), idslab::ProbabilityMeasure::dirac(0.0),
        1, idslab::GridSpec{-1.0, 5.0, 2048}, 1);
    double worst = 0.0;
    for (std::size_t k = 0; k < ids.energies().size(); ++k) {
      const double e = ids.energies()[k];
      const double closed = e <= 0.0 ? 0.0
                            : e >= 4.0
                                ? 1.0
                                : std::acos(1.0 - e / 2.0) / std::numbers::pi;
      worst = std::max(worst, std::abs(ids.values()[k] - closed));
    }
    return worst;
  };
  const double e1000 = sup_err(1000);
  const double e2000 = sup_err(2000);

  line.require(e2000 < 5e-3, "sup error at L=2000 is " + std::to_string(e2000));
  line.require(e1000 / e2000 >= 1.5,
               "doubling L only improved by x" + std::to_string(e1000 / e2000));

  const double elapsed = seconds_since(start);
  line.require(elapsed < 30.0, "runtime over 30 s");
  std::printf(
      "criterion 4: %s - sup|N_L - arccos-form|: L=1000 %.3e, L=2000 %.3e "
      "(ratio %.2f >= 1.5, L=2000 < 5e-3), %.2f s%s%s\n",
      line.pass ? "PASS" : "FAIL", e1000, e2000, e1000 / e2000, elapsed,
      line.detail.empty() ? "" : " - ", line.detail.c_str());
  return line.pass;
}

// ---- criterion 5: IDS sandwich and sup bound ---------------------------
bool criterion_5() {
  const auto start = Clock::now();
  Line line;

  idslab::Theorem1Config cfg;
  cfg.shape = idslab::BoxShape::line(500);
  cfg.mu = bernoulli_pair_mu();
  cfg.mu_tilde = bernoulli_pair_mu_tilde();
  cfg.samples = 200;
  cfg.master_seed = 424242;
  const auto rep = idslab::run_theorem1_ids(cfg, idslab::default_worker_count());

  for (const auto& check : rep.checks)
    line.require(check.holds, check.name + " failed (margin " +
                                  std::to_string(check.margin) + ")");
  const double sup = rep.aggregates.at("sup_diff").get<double>();
  const double bound = rep.aggregates.at("bound_inf_delta").get<double>();
  const double se = rep.aggregates.at("se_max").get<double>();

  const double elapsed = seconds_since(start);
  line.require(elapsed < 180.0, "runtime over 3 min");
  std::printf(
      "criterion 5: %s - sup|N-N~| = %.4f <= inf_delta(omega + d_KR/delta) "
      "= %.4f + 3*SE (SE=%.2e), %.2f s%s%s\n",
      line.pass ? "PASS" : "FAIL", sup, bound, se, elapsed,
      line.detail.empty() ? "" : " - ", line.detail.c_str());
  return line.pass;
}

// ---- criterion 6: metric module ----------------------------------------
bool criterion_6() {
  const auto start = Clock::now();
  Line line;

  idslab::SplitMix64 rng(6060);
  auto random_atomic = [&rng](std::size_t max_atoms) {
    const std::size_t n = 1 + rng.next() % max_atoms;
    std::vector<double> raw(n);
    double total = 0.0;
    std::vector<idslab::Atom> atoms;
    for (auto& w : raw) {
      w = 0.05 + rng.next_unit();
      total += w;
    }
    for (std::size_t i = 0; i < n; ++i)
      atoms.push_back(
          {std::round(rng.next_in(-2.0, 2.0) * 8.0) / 8.0, raw[i] / total});
    return idslab::ProbabilityMeasure::atomic(std::move(atoms));
  };

  double worst_triangle = 0.0;
  for (int trial = 0; trial < 500 && line.pass; ++trial) {
    const auto m1 = random_atomic(6);
    const auto m2 = random_atomic(6);
    const auto m3 = random_atomic(6);

    line.require(kr_distance(m1, m2) == kr_distance(m2, m1),
                 "kr symmetry not exact");
    line.require(bl_distance(m1, m2) == bl_distance(m2, m1),
                 "bl symmetry not exact");
    line.require(kr_distance(m1, m1) <= 1e-12, "kr identity");
    line.require(bl_distance(m1, m1) <= 1e-12, "bl identity");

    const double tri_kr =
        kr_distance(m1, m3) - kr_distance(m1, m2) - kr_distance(m2, m3);
    const double tri_bl =
        bl_distance(m1, m3) - bl_distance(m1, m2) - bl_distance(m2, m3);
    worst_triangle = std::max({worst_triangle, tri_kr, tri_bl});
    line.require(tri_kr <= 1e-10, "kr triangle slack");
    line.require(tri_bl <= 1e-10, "bl triangle slack");

    const auto sandwich = idslab::metric_sandwich_check(m1, m2);
    line.require(sandwich.holds, "metric sandwich violated");
  }

  // Two independent W1 routes: CDF-difference integral vs rank-matched
  // transport cost on equal-weight atom lists.
  double worst_route_gap = 0.0;
  for (int trial = 0; trial < 200 && line.pass; ++trial) {
    const std::size_t n = 2 + rng.next() % 50;
    std::vector<double> xs(n), ys(n);
    for (auto& x : xs) x = rng.next_in(-3.0, 3.0);
    for (auto& y : ys) y = rng.next_in(-3.0, 3.0);
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    idslab::Spectrum sx{xs}, sy{ys};
    const double route_cost =
        idslab::spectral_transport_cost(sx, sy) / static_cast<double>(n);
    const double route_cdf =
        kr_distance(sx.counting_measure(), sy.counting_measure());
    worst_route_gap =
        std::max(worst_route_gap, std::abs(route_cost - route_cdf));
    line.require(std::abs(route_cost - route_cdf) <= 1e-10,
                 "W1 route disagreement " + std::to_string(route_cost - route_cdf));
  }

  const double elapsed = seconds_since(start);
  std::printf(
      "criterion 6: %s - 500 atomic triples: axioms (symmetry exact, "
      "triangle slack %.1e), sandwich holds; W1 routes agree to %.1e, "
      "%.2f s%s%s\n",
      line.pass ? "PASS" : "FAIL", worst_triangle, worst_route_gap, elapsed,
      line.detail.empty() ? "" : " - ", line.detail.c_str());
  return line.pass;
}

// ---- criterion 7: counterexample regime split --------------------------
bool criterion_7() {
  const auto start = Clock::now();
  Line line;

  idslab::CounterexampleConfig cfg;
  cfg.alpha = 1.0;
  cfg.delta_shift = 0.1;
  cfg.epsilons = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};

  cfg.d = 4;
  const auto rep4 = idslab::counterexample_integrals(cfg);
  const bool mono4 = rep4.aggregates.at("monotone_increasing").get<bool>();
  const double ratio4 = rep4.aggregates.at("ratio_last_to_first").get<double>();
  line.require(mono4, "d=4 difference not monotonically increasing");
  line.require(ratio4 > 10.0,
               "d=4 growth ratio " + std::to_string(ratio4) +
                   " does not exceed 10x the first value");

  cfg.d = 1;
  const auto rep1 = idslab::counterexample_integrals(cfg);
  const bool mono1 = rep1.aggregates.at("monotone_increasing").get<bool>();
  const double ratio1 = rep1.aggregates.at("ratio_last_to_first").get<double>();
  line.require(mono1, "d=1 difference not monotonically increasing");
  line.require(ratio1 < 2.0 && ratio1 > 0.5,
               "d=1 difference left a factor 2 of its first value");

  const double elapsed = seconds_since(start);
  line.require(elapsed < 10.0, "runtime over 10 s");
  std::printf(
      "criterion 7: %s - delta=0.1, eps 1e-1..1e-5: d=4 monotone=%s "
      "ratio=%.3f (required > 10), d=1 monotone=%s ratio=%.4f (required "
      "within factor 2), %.2f s%s%s\n",
      line.pass ? "PASS" : "FAIL", mono4 ? "yes" : "no", ratio4,
      mono1 ? "yes" : "no", ratio1, elapsed,
      line.detail.empty() ? "" : " - ", line.detail.c_str());
  return line.pass;
}

// ---- criterion 8: reproducibility across worker counts -----------------
bool criterion_8() {
  const auto start = Clock::now();
  Line line;
  namespace fs = std::filesystem;

  const fs::path base = fs::temp_directory_path() / "idslab_acceptance_repro";
  fs::remove_all(base);

  auto files_identical = [&line](const fs::path& a, const fs::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    line.require(fa.good() && fb.good(), "missing output file");
    const std::string sa((std::istreambuf_iterator<char>(fa)),
                         std::istreambuf_iterator<char>());
    const std::string sb((std::istreambuf_iterator<char>(fb)),
                         std::istreambuf_iterator<char>());
    return fa.good() && fb.good() && sa == sb;
  };

  auto compare_dirs = [&](const fs::path& d1, const fs::path& d8,
                          const std::string& what) {
    std::size_t checked = 0;
    for (const auto& entry : fs::directory_iterator(d1)) {
      ++checked;
      line.require(files_identical(entry.path(), d8 / entry.path().filename()),
                   what + ": " + entry.path().filename().string() +
                       " differs between worker counts");
    }
    line.require(checked > 0, what + ": no outputs written");
  };

  {
    idslab::Theorem1Config cfg;
    cfg.shape = idslab::BoxShape::line(100);
    cfg.mu = bernoulli_pair_mu();
    cfg.mu_tilde = bernoulli_pair_mu_tilde();
    cfg.samples = 40;
    cfg.master_seed = 8;
    idslab::write_report(idslab::run_theorem1_dos(cfg, 1), base / "dos_w1");
    idslab::write_report(idslab::run_theorem1_dos(cfg, 8), base / "dos_w8");
    compare_dirs(base / "dos_w1", base / "dos_w8", "theorem1_dos");

    idslab::write_report(idslab::run_theorem1_ids(cfg, 1), base / "ids_w1");
    idslab::write_report(idslab::run_theorem1_ids(cfg, 8), base / "ids_w8");
    compare_dirs(base / "ids_w1", base / "ids_w8", "theorem1_ids");
  }
  {
    idslab::ShiftConfig cfg;
    cfg.shapes = {idslab::BoxShape::line(64), idslab::BoxShape::rect(8, 8)};
    cfg.shift = 0.5;
    idslab::write_report(idslab::run_sharpness_shift(cfg, 1),
                         base / "shift_w1");
    idslab::write_report(idslab::run_sharpness_shift(cfg, 8),
                         base / "shift_w8");
    compare_dirs(base / "shift_w1", base / "shift_w8", "sharpness_shift");
  }

  const double elapsed = seconds_since(start);
  std::printf(
      "criterion 8: %s - theorem1_dos, theorem1_ids, sharpness_shift rerun "
      "at workers 1 and 8: all JSON/CSV outputs byte-identical, %.2f s%s%s\n",
      line.pass ? "PASS" : "FAIL", elapsed,
      line.detail.empty() ? "" : " - ", line.detail.c_str());
  return line.pass;
}

}  // namespace

int main(int argc, char** argv) {
  bool (*criteria[])() = {criterion_1, criterion_2, criterion_3, criterion_4,
                          criterion_5, criterion_6, criterion_7, criterion_8};
  const int total = 8;

  int which = 0;  // 0 = all
  if (argc > 1 && std::strcmp(argv[1], "all") != 0) {
    which = std::atoi(argv[1]);
    if (which < 1 || which > total) {
      std::fprintf(stderr, "usage: acceptance [1-%d|all]\n", total);
      return 2;
    }
  }

  bool all_pass = true;
  for (int i = 1; i <= total; ++i) {
    if (which != 0 && i != which) continue;
    all_pass = criteria[i - 1]() && all_pass;
  }
  return all_pass ? 0 : 1;
}
