#include "negdim/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "integer_grid.hpp"
#include "negdim/errors.hpp"
#include "negdim/parallel.hpp"
#include "negdim/text_io.hpp"

namespace negdim {

namespace {

double quantile(std::vector<double> v, double p) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double h = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

void check_l_grid(const LevelSpectrum& spec, std::span<const std::size_t> l_grid) {
  for (std::size_t l : l_grid)
    if (l < 1 || l > spec.size())
      throw DomainError("cut index l = " + std::to_string(l) + " outside [1, " +
                        std::to_string(spec.size()) + "]");
}

}  // namespace

std::vector<std::size_t> default_l_grid(const LevelSpectrum& spec, double mass_floor) {
  const double total = spec.total_multiplicity();
  std::vector<double> mass(spec.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) mass[i] = (acc += spec[i].q);

  std::vector<std::size_t> out;
  for (int d = 1; d <= 10; ++d) {
    const double target = total * d / 10.0 * (1.0 - 1e-12);
    const auto it = std::lower_bound(mass.begin(), mass.end(), target);
    const std::size_t idx = it == mass.end() ? mass.size() - 1
                                             : static_cast<std::size_t>(it - mass.begin());
    if (mass[idx] < mass_floor * total) continue;
    if (out.empty() || out.back() != idx + 1) out.push_back(idx + 1);
  }
  return out;
}

double deviation_statistic(const VariantSample& sample, const LevelSpectrum& spec,
                           BoseParams params, std::size_t l) {
  if (sample.counts.size() != spec.size())
    throw DomainError("sample length does not match the spectrum");
  if (l < 1 || l > spec.size()) throw DomainError("cut index out of range");
  std::int64_t partial = 0;
  for (std::size_t i = 0; i < l; ++i) partial += sample.counts[i];
  return std::abs(static_cast<double>(partial) - cumulative(spec, params, l));
}

double max_deviation(const VariantSample& sample, const LevelSpectrum& spec, BoseParams params,
                     std::span<const std::size_t> l_grid) {
  if (sample.counts.size() != spec.size())
    throw DomainError("sample length does not match the spectrum");
  check_l_grid(spec, l_grid);
  const std::vector<double> curve = cumulative_curve(spec, params);
  std::vector<std::int64_t> partial(spec.size());
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < spec.size(); ++i) partial[i] = (acc += sample.counts[i]);
  double best = 0.0;
  for (std::size_t l : l_grid)
    best = std::max(best, std::abs(static_cast<double>(partial[l - 1]) - curve[l - 1]));
  return best;
}

WilsonInterval wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) throw DomainError("Wilson interval needs n >= 1");
  if (k > n) throw DomainError("Wilson interval needs k <= n");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

LevelSpectrum InstanceFamily::spectrum_for(std::int64_t n) const {
  if (n < 1) throw DomainError("instance size must be positive");
  const auto s = std::max<std::int64_t>(1, std::llround(s_ratio * static_cast<double>(n)));
  std::vector<Level> levels;
  levels.reserve(static_cast<std::size_t>(s));
  for (std::int64_t i = 1; i <= s; ++i)
    levels.push_back({static_cast<double>(i), weight(i, Dimension(dim)).value()});
  return LevelSpectrum(std::move(levels));
}

EnsembleConstraints InstanceFamily::constraints_for(std::int64_t n) const {
  const LevelSpectrum spec = spectrum_for(n);
  return {n, energy_fraction * static_cast<double>(n) * spec.mean_level()};
}

std::vector<ReportRow> concentration_report(const InstanceFamily& family,
                                            const ConcentrationConfig& cfg,
                                            const CountOptions& options) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.25))
    throw DomainError("epsilon must lie in (0, 1/4)");
  if (cfg.n_samples == 0) throw DomainError("n_samples must be positive");

  std::vector<ReportRow> rows;
  for (std::int64_t n : family.n_grid) {
    const LevelSpectrum spec = family.spectrum_for(n);
    const EnsembleConstraints cons = family.constraints_for(n);
    const BoseParams params = solve_beta_nu(spec, cons).params;

    std::vector<std::size_t> l_grid = cfg.l_grid.empty() ? default_l_grid(spec) : cfg.l_grid;
    check_l_grid(spec, l_grid);

    const CountTable table = count_variants(spec, cons, options);
    const std::uint64_t seed = cfg.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(n));
    const std::vector<VariantSample> samples = sample_variants_seeded(table, cfg.n_samples, seed);

    const double nd = static_cast<double>(n);
    const double threshold = std::pow(nd, 0.75 + cfg.epsilon);
    const double unit = std::pow(nd, 0.75);
    std::vector<double> scaled(samples.size());
    std::size_t exceed = 0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const double dev = max_deviation(samples[k], spec, params, l_grid);
      if (dev >= threshold) ++exceed;
      scaled[k] = dev / unit;
    }
    const WilsonInterval ci = wilson_interval(exceed, samples.size());
    rows.push_back({n, spec.size(), cfg.epsilon, threshold,
                    static_cast<double>(exceed) / static_cast<double>(samples.size()), ci.lo,
                    ci.hi, quantile(scaled, 0.5), quantile(scaled, 0.95), params});
  }
  return rows;
}

std::string report_csv(std::span<const ReportRow> rows) {
  std::ostringstream out;
  out << "N,s,epsilon,threshold,exceed_fraction,wilson_lo,wilson_hi,q50,q95\n";
  for (const ReportRow& r : rows) {
    out << r.n << ',' << r.s << ',' << format_double(r.epsilon) << ','
        << format_double(r.threshold) << ',' << format_double(r.exceed_fraction) << ','
        << format_double(r.wilson_lo) << ',' << format_double(r.wilson_hi) << ','
        << format_double(r.q50) << ',' << format_double(r.q95) << '\n';
  }
  return out.str();
}

ShellRatio boltzmann_shell_ratio(const LevelSpectrum& spec, const EnsembleConstraints& cons,
                                 double beta, double margin_exponent,
                                 const CountOptions& options) {
  if (cons.n < 0) throw DomainError("N must be nonnegative");
  if (!std::isfinite(beta)) throw DomainError("beta must be finite");
  const detail::IntegerGrid grid = detail::make_integer_grid(spec, options.max_energy_scale);
  const std::int64_t n = cons.n;
  const std::int64_t cap = grid.cap(cons.energy, n);
  if (cap < 0) throw DomainError("no admissible variants: E < N * min x");
  const double margin = std::pow(static_cast<double>(n), margin_exponent);
  const std::int64_t shell_cap = grid.cap(cons.energy - margin, n);

  const auto width = static_cast<std::size_t>(cap) + 1;
  const auto rows = static_cast<std::size_t>(n) + 1;
  if (rows > options.max_entries / width ||
      rows * width > options.max_bytes / sizeof(double))
    throw BudgetError("shell-ratio table exceeds budget");

  // g[k][e]: number of ways to place k particles with shifted energy e.
  std::vector<double> g(rows * width, 0.0);
  g[0] = 1.0;
  for (std::int64_t y : grid.y) {
    const auto yy = static_cast<std::size_t>(y);
    if (yy >= width) continue;
    for (std::size_t k = 1; k < rows; ++k) {
      double* cur = &g[k * width];
      const double* prev = &g[(k - 1) * width];
      for (std::size_t e = yy; e < width; ++e) cur[e] += prev[e - yy];
    }
  }

  const double* last = &g[(rows - 1) * width];
  const double neg_inf = -std::numeric_limits<double>::infinity();
  double log_total = neg_inf;
  double log_shell = neg_inf;
  for (std::size_t e = 0; e < width; ++e) {
    if (last[e] == 0.0) continue;
    if (!std::isfinite(last[e])) throw BudgetError("shell-ratio counts overflow double range");
    const double lg = std::log(last[e]);
    log_total = log_add(log_total, lg);
    if (static_cast<std::int64_t>(e) <= shell_cap)
      log_shell = log_add(log_shell, lg - beta * grid.energy_of(static_cast<std::int64_t>(e), n));
  }
  const double log_ratio = log_shell - log_total;
  return {std::exp(log_ratio), log_ratio};
}

double exact_log_partition(const LevelSpectrum& spec, double beta, std::int64_t n) {
  if (n < 0) throw DomainError("N must be nonnegative");
  const auto rows = static_cast<std::size_t>(n) + 1;
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> z(rows, neg_inf);
  z[0] = 0.0;
  std::vector<double> coef(rows);
  for (const Level& level : spec.levels()) {
    const double lgq = boost::math::lgamma(level.q);
    for (std::size_t k = 0; k < rows; ++k) {
      const double kd = static_cast<double>(k);
      coef[k] = boost::math::lgamma(kd + level.q) - boost::math::lgamma(kd + 1.0) - lgq -
                beta * kd * level.x;
    }
    std::vector<double> next(rows, neg_inf);
    for (std::size_t m = 0; m < rows; ++m)
      for (std::size_t k = 0; k <= m; ++k) next[m] = log_add(next[m], coef[k] + z[m - k]);
    z = std::move(next);
  }
  return z[rows - 1];
}

}  // namespace negdim
