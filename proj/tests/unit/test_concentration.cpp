#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>

#include "negdim/concentration.hpp"
#include "negdim/errors.hpp"

using namespace negdim;

namespace {

// Calls visit(counts) for every composition of n into s parts.
template <class F>
void for_each_composition(std::size_t s, std::int64_t n, F&& visit) {
  std::vector<std::int64_t> c(s, 0);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
    if (i + 1 == s) {
      c[i] = left;
      visit(c);
      return;
    }
    for (std::int64_t k = 0; k <= left; ++k) {
      c[i] = k;
      rec(i + 1, left - k);
    }
  };
  rec(0, n);
}

double choose(double n, double k) {
  return std::round(std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)));
}

// Exhaustive count with integer multiplicities: prod C(N_i + q_i - 1, q_i - 1).
double brute_count(const LevelSpectrum& spec, std::int64_t n, double e) {
  double total = 0;
  for_each_composition(spec.size(), n, [&](const std::vector<std::int64_t>& c) {
    double en = 0, ways = 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
      en += c[i] * spec[i].x;
      ways *= choose(c[i] + spec[i].q - 1, spec[i].q - 1);
    }
    if (en <= e + 1e-9) total += ways;
  });
  return total;
}

const LevelSpectrum kNine({{1, 1}, {2, 1}, {3, 1}});

}  // namespace

TEST_CASE("count_variants: worked instances") {
  CHECK(count_variants(kNine, {4, 8.0}).count() == 9);
  CHECK(brute_count(kNine, 4, 8.0) == 9);
  CHECK(count_variants(kNine, {4, 12.0}).count() == 15);
  CHECK(count_variants(kNine, {4, 100.0}).count() == 15);
  CHECK(count_variants(kNine, {4, 3.0}).count() == 0);
  CHECK(count_variants(kNine, {0, 0.0}).count() == 1);

  const auto big = count_variants(LevelSpectrum::integer_ladder(30), {200, 1e9});
  CHECK(big.count() == BigCount("4837571034251854646166126620736709884"));  // C(229, 29)
}

TEST_CASE("count_variants: randomized fuzz against enumeration") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    const int s = std::uniform_int_distribution<int>(1, 5)(rng);
    std::vector<Level> levels;
    double x = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int i = 0; i < s; ++i) {
      levels.push_back({x, double(std::uniform_int_distribution<int>(1, 3)(rng))});
      x += std::uniform_int_distribution<int>(1, 3)(rng);
    }
    const LevelSpectrum spec(levels);
    const auto n = std::uniform_int_distribution<std::int64_t>(0, 7)(rng);
    const double e = std::uniform_int_distribution<int>(0, int(n * spec.max_level()) + 2)(rng);
    const auto table = count_variants(spec, {n, e});
    CHECK(table.count().convert_to<double>() == brute_count(spec, n, e));
  }
}

TEST_CASE("count_variants: rational levels use a common grid") {
  const LevelSpectrum spec({{0.5, 1}, {1.25, 1}, {2, 1}});
  const auto t = count_variants(spec, {5, 5.0});
  CHECK(t.energy_scale() == 4);
  CHECK(t.count().convert_to<double>() == brute_count(spec, 5, 5.0));
  CHECK_THROWS_AS(count_variants(LevelSpectrum({{0, 1}, {0.3333333, 1}}), {3, 1.0},
                                 CountOptions{1 << 20, 1 << 20, 100}),
                  BudgetError);
  CHECK_THROWS_AS(count_variants(LevelSpectrum({{0, 1.5}}), {3, 1.0}), DomainError);
  CHECK_THROWS_AS(count_variants(LevelSpectrum::integer_ladder(60), {400, 1e9},
                                 CountOptions{1 << 20, 1000, 1000}),
                  BudgetError);
}

TEST_CASE("sample_variants: exact uniformity on the 9-variant instance") {
  const auto table = count_variants(kNine, {4, 8.0});
  const auto samples = sample_variants_seeded(table, 9000, 123);
  std::map<std::vector<std::int64_t>, int> freq;
  for (const auto& s : samples) {
    std::int64_t n = 0, e = 0;
    for (std::size_t i = 0; i < 3; ++i) n += s.counts[i], e += s.counts[i] * (i + 1);
    CHECK(n == 4);
    CHECK(e <= 8);
    ++freq[s.counts];
  }
  CHECK(freq.size() == 9);
  double chi2 = 0;
  for (const auto& [v, f] : freq) {
    CHECK(std::abs(f - 1000) < 4 * std::sqrt(1000 * (8.0 / 9)));
    chi2 += (f - 1000.0) * (f - 1000.0) / 1000.0;
  }
  const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(8), chi2));
  CHECK(p > 0.001);
}

TEST_CASE("sample_variants: multiplicities weight compositions") {
  // Level 0 with q = 2 expands into two sub-levels: composition (k, 2-k) has
  // k + 1 sub-level configurations.
  const LevelSpectrum spec({{0, 2}, {1, 1}});
  const auto table = count_variants(spec, {2, 2.0});
  CHECK(table.count() == 6);
  std::map<std::int64_t, int> freq;
  for (const auto& s : sample_variants_seeded(table, 60000, 5)) ++freq[s.counts[0]];
  CHECK(std::abs(freq[2] / 60000.0 - 0.5) < 0.01);
  CHECK(std::abs(freq[1] / 60000.0 - 2.0 / 6) < 0.01);
  CHECK(std::abs(freq[0] / 60000.0 - 1.0 / 6) < 0.01);
}

TEST_CASE("sample_variants: determinism, worker independence, checkpoints") {
  const auto spec = LevelSpectrum::integer_ladder(40);
  const EnsembleConstraints cons{40, 0.6 * 40 * spec.mean_level()};
  const auto full = count_variants(spec, cons);
  CHECK(full.checkpoint_interval() == 1);
  const auto a = sample_variants_seeded(full, 300, 99);
  CHECK(a == sample_variants_seeded(full, 300, 99));
  CHECK(a != sample_variants_seeded(full, 300, 100));

  ::setenv("NEGDIM_THREADS", "1", 1);
  const auto serial = sample_variants_seeded(full, 300, 99);
  ::setenv("NEGDIM_THREADS", "7", 1);
  const auto seven = sample_variants_seeded(full, 300, 99);
  ::unsetenv("NEGDIM_THREADS");
  CHECK(serial == a);
  CHECK(seven == a);

  CountOptions tight;
  tight.max_bytes = full.stored_bytes() / 4 * 3;
  const auto sparse = count_variants(spec, cons, tight);
  CHECK(sparse.checkpoint_interval() > 1);
  CHECK(sparse.stored_bytes() <= tight.max_bytes);
  CHECK(sparse.count() == full.count());
  CHECK(sample_variants_seeded(sparse, 300, 99) == a);

  ConcentrationConfig cfg;
  cfg.n_samples = 300;
  cfg.seed = 99;
  CHECK(sample_variants(full, cfg) == a);
}

TEST_CASE("sample_variants: single-variant and empty instances") {
  const auto zero = count_variants(kNine, {0, 0.0});
  for (const auto& s : sample_variants_seeded(zero, 10, 1))
    CHECK(s.counts == std::vector<std::int64_t>{0, 0, 0});
  const auto forced = count_variants(kNine, {3, 3.0});
  for (const auto& s : sample_variants_seeded(forced, 10, 1))
    CHECK(s.counts == std::vector<std::int64_t>{3, 0, 0});
  CHECK_THROWS_AS(sample_variants_seeded(count_variants(kNine, {3, 2.0}), 1, 1), DomainError);
}

TEST_CASE("deviation statistics") {
  const BoseParams p{0.5, solve_nu(kNine, 0.5, 4.0)};
  const VariantSample v{{2, 1, 1}};
  CHECK(deviation_statistic(v, kNine, p, 1) == doctest::Approx(std::abs(2 - cumulative(kNine, p, 1))));
  CHECK(deviation_statistic(v, kNine, p, 3) < 1e-9);
  const VariantSample all_low{{4, 0, 0}};
  const VariantSample shifted{{3, 0, 1}};
  CHECK(deviation_statistic(all_low, kNine, p, 1) - deviation_statistic(shifted, kNine, p, 1) ==
        doctest::Approx(1.0));
  const std::vector<std::size_t> grid{1, 2, 3};
  CHECK(max_deviation(v, kNine, p, grid) ==
        std::max({deviation_statistic(v, kNine, p, 1), deviation_statistic(v, kNine, p, 2),
                  deviation_statistic(v, kNine, p, 3)}));
  CHECK_THROWS_AS(deviation_statistic(v, kNine, p, 0), DomainError);
  CHECK_THROWS_AS(deviation_statistic(v, kNine, p, 4), DomainError);
}

TEST_CASE("max_l S_l never exceeds N") {
  InstanceFamily fam;
  const auto spec = fam.spectrum_for(60);
  const auto cons = fam.constraints_for(60);
  const auto params = solve_beta_nu(spec, cons).params;
  const auto table = count_variants(spec, cons);
  const auto grid = default_l_grid(spec);
  for (const auto& s : sample_variants_seeded(table, 500, 3))
    CHECK(max_deviation(s, spec, params, grid) <= 60.0);
}

TEST_CASE("default_l_grid") {
  CHECK(default_l_grid(LevelSpectrum::integer_ladder(10)) ==
        std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(default_l_grid(LevelSpectrum::integer_ladder(100)) ==
        std::vector<std::size_t>{10, 20, 30, 40, 50, 60, 70, 80, 90, 100});
  // The first level carries 1% of the mass and is kept out by the 5% floor.
  std::vector<Level> lv{{1, 1}};
  for (int i = 2; i <= 12; ++i) lv.push_back({double(i), 9});
  const auto g = default_l_grid(LevelSpectrum(lv));
  CHECK(g.front() >= 2);
}

TEST_CASE("wilson_interval") {
  const double z = 1.959963984540054;
  const auto w0 = wilson_interval(0, 10);
  CHECK(w0.lo == 0.0);
  CHECK(w0.hi == doctest::Approx(z * z / (10 + z * z)).epsilon(1e-12));
  const auto a = wilson_interval(3, 20);
  const auto b = wilson_interval(17, 20);
  CHECK(a.lo == doctest::Approx(1 - b.hi).epsilon(1e-12));
  CHECK(a.lo < 0.15);
  CHECK(a.hi > 0.15);
  CHECK_THROWS_AS(wilson_interval(1, 0), DomainError);
}

TEST_CASE("concentration_report: epsilon = 1/4 boundary and CSV") {
  InstanceFamily fam;
  fam.n_grid = {40, 80};
  ConcentrationConfig cfg;
  cfg.n_samples = 200;
  cfg.epsilon = 0.2499999;
  const auto rows = concentration_report(fam, cfg);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.exceed_fraction == 0.0);
    CHECK(r.q50 <= r.q95);
    CHECK(r.wilson_lo == 0.0);
  }
  CHECK(rows[0].s == 10);
  const std::string csv = report_csv(rows);
  CHECK(csv.rfind("N,s,epsilon,threshold,exceed_fraction,wilson_lo,wilson_hi,q50,q95\n40,10,", 0) == 0);
  cfg.epsilon = 0.3;
  CHECK_THROWS_AS(concentration_report(fam, cfg), DomainError);
}

TEST_CASE("exact_log_partition") {
  const LevelSpectrum s3({{0, 1}, {1, 1}, {2, 1}});
  for (int n : {1, 7, 30}) {
    CHECK(exact_log_partition(s3, 0.0, n) ==
          doctest::Approx(std::log(choose(n + 2, 2))).epsilon(1e-13));
  }
  // q = 2 at one level equals two unit levels of the same energy.
  const LevelSpectrum merged({{0, 2}, {1.5, 1}});
  const LevelSpectrum split({{0, 1}, {1e-300, 1}, {1.5, 1}});
  for (int n : {3, 9})
    CHECK(exact_log_partition(merged, 0.8, n) ==
          doctest::Approx(exact_log_partition(split, 0.8, n)).epsilon(1e-12));
}

TEST_CASE("boltzmann_shell_ratio") {
  // Margin N^{1/2} = 2 at N = 4: shell E' = 6.
  double weighted = 0;
  int total = 0;
  for_each_composition(3, 4, [&](const std::vector<std::int64_t>& c) {
    const double e = c[0] + 2.0 * c[1] + 3.0 * c[2];
    if (e <= 8) ++total;
    if (e <= 6) weighted += std::exp(-0.7 * e);
  });
  const auto r = boltzmann_shell_ratio(kNine, {4, 8.0}, 0.7, 0.5);
  CHECK(std::abs(r.ratio - weighted / total) <= 1e-12 * (weighted / total));

  const auto flat = boltzmann_shell_ratio(kNine, {4, 8.0}, 0.0, 0.5);
  const double shell = count_variants(kNine, {4, 6.0}).count().convert_to<double>();
  CHECK(flat.ratio == doctest::Approx(shell / 9).epsilon(1e-14));
  CHECK(flat.ratio <= 1.0);

  const auto empty = boltzmann_shell_ratio(kNine, {4, 8.0}, 0.7, 1.5);
  CHECK(empty.ratio == 0.0);
}
