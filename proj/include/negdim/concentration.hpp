#pragma once

// Empirical check of the concentration theorem: among all occupancy vectors
// {N_i} with sum N_i = N and sum N_i x_i <= E, taken as equiprobable, the
// partial sums sum_{i<=l} N_i stay within N^{3/4+eps} of the Bose-Einstein
// cumulative curve for all but a vanishing fraction of vectors.
//
// The ensemble is counted exactly by dynamic programming over
// (sub-level, remaining N, remaining E) and sampled exactly uniformly by
// unranking. Integer multiplicities q_i are expanded into q_i unit
// sub-levels of equal energy.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "negdim/bose_model.hpp"
#include "negdim/weights.hpp"

namespace negdim {

using BigCount = boost::multiprecision::cpp_int;

struct VariantSample {
  std::vector<std::int64_t> counts;  ///< N_i per level, length s

  friend bool operator==(const VariantSample&, const VariantSample&) = default;
};

struct CountOptions {
  /// Upper bound on bytes held by stored layers; beyond it layers are
  /// checkpointed and recomputed while sampling.
  std::size_t max_bytes = std::size_t{1} << 30;
  /// Total table entries over all layers; above this the instance is refused.
  std::size_t max_entries = std::size_t{4} << 30;
  /// Largest denominator tried when mapping rational levels onto integers.
  std::int64_t max_energy_scale = 1000;
};

namespace detail {
struct CountTableImpl;
}

/// Exact counts of admissible completions, immutable and cheap to copy.
class CountTable {
 public:
  const LevelSpectrum& spectrum() const noexcept;
  const EnsembleConstraints& constraints() const noexcept;
  /// |M|, the number of admissible variants.
  const BigCount& count() const noexcept;
  /// Levels and E are multiplied by this before rounding to the integer grid.
  std::int64_t energy_scale() const noexcept;
  /// Layers kept in memory: 1 means every layer is stored.
  std::size_t checkpoint_interval() const noexcept;
  std::size_t stored_bytes() const noexcept;
  std::size_t total_entries() const noexcept;

 private:
  explicit CountTable(std::shared_ptr<const detail::CountTableImpl> impl)
      : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::CountTableImpl> impl_;

  friend CountTable count_variants(const LevelSpectrum&, const EnsembleConstraints&,
                                   const CountOptions&);
  friend std::vector<VariantSample> sample_variants_seeded(const CountTable&, std::size_t,
                                                           std::uint64_t);
};

/// Builds the exact counting table. Requires integer multiplicities and
/// levels on a rational grid; N >= 0. Throws BudgetError past the limits.
CountTable count_variants(const LevelSpectrum& spec, const EnsembleConstraints& cons,
                          const CountOptions& options = {});

struct ConcentrationConfig {
  double epsilon = 0.05;
  std::size_t n_samples = 2000;
  std::uint64_t seed = 0;
  /// Cut indices l (1-based); empty selects default_l_grid per instance.
  std::vector<std::size_t> l_grid;
};

/// Deciles of cumulative multiplicity mass, keeping cuts whose mass is at
/// least `mass_floor * Q`.
std::vector<std::size_t> default_l_grid(const LevelSpectrum& spec, double mass_floor = 0.05);

/// Exactly uniform draws from the admissible set. Sample k depends only on
/// (seed, k), never on how work is split.
std::vector<VariantSample> sample_variants(const CountTable& table,
                                           const ConcentrationConfig& cfg);
std::vector<VariantSample> sample_variants_seeded(const CountTable& table,
                                                  std::size_t n_samples, std::uint64_t seed);

/// S_l = |sum_{i<=l} N_i - B_l|.
double deviation_statistic(const VariantSample& sample, const LevelSpectrum& spec,
                           BoseParams params, std::size_t l);

/// max over `l_grid` of S_l.
double max_deviation(const VariantSample& sample, const LevelSpectrum& spec,
                     BoseParams params, std::span<const std::size_t> l_grid);

struct WilsonInterval {
  double lo;
  double hi;
};

/// Wilson score interval for k successes in n trials (z = 1.96 by default).
WilsonInterval wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);

/// Growing instances: x_i = i for i = 1..s, q_i = weight(i, dim),
/// s = max(1, round(s_ratio * N)), E = energy_fraction * N * xbar.
struct InstanceFamily {
  std::vector<std::int64_t> n_grid{50, 100, 200, 400};
  double s_ratio = 0.25;
  double energy_fraction = 0.6;
  double dim = 1.0;

  LevelSpectrum spectrum_for(std::int64_t n) const;
  EnsembleConstraints constraints_for(std::int64_t n) const;
};

struct ReportRow {
  std::int64_t n;
  std::size_t s;
  double epsilon;
  double threshold;  ///< N^{3/4+eps}
  double exceed_fraction;
  double wilson_lo;
  double wilson_hi;
  double q50;  ///< median of max_l S_l / N^{3/4}
  double q95;
  BoseParams params;
};

std::vector<ReportRow> concentration_report(const InstanceFamily& family,
                                            const ConcentrationConfig& cfg,
                                            const CountOptions& options = {});

/// CSV with header N,s,epsilon,threshold,exceed_fraction,wilson_lo,wilson_hi,q50,q95.
std::string report_csv(std::span<const ReportRow> rows);

struct ShellRatio {
  double ratio;
  double log_ratio;
};

/// (1/|M|) sum exp(-beta sum N_i x_i) over variants with sum N_i = N and
/// sum N_i x_i <= E - N^{margin_exponent}.
ShellRatio boltzmann_shell_ratio(const LevelSpectrum& spec, const EnsembleConstraints& cons,
                                 double beta, double margin_exponent,
                                 const CountOptions& options = {});

/// Exact ln Z(beta, N) by dynamic programming over levels, with the
/// multiplicity coefficients Gamma(k+q)/(Gamma(k+1) Gamma(q)).
double exact_log_partition(const LevelSpectrum& spec, double beta, std::int64_t n);

}  // namespace negdim
