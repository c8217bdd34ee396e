#pragma once

// Bose-Einstein occupancy over a spectrum of levels x_i with multiplicities
// q_i:
//
//   occupation_i = q_i / (exp(beta * x_i - nu) - 1)
//
// together with the constraint solvers for (beta, nu), the log grand
// partition function ln zeta_s and its nu-derivatives, the saddle-point
// estimate of the canonical partition function, and the rank-curve model
// used for frequency dictionaries (dimension D = -1).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "negdim/weights.hpp"

namespace negdim {

struct Level {
  double x;  ///< energy-like value
  double q;  ///< multiplicity, > 0
};

/// Levels strictly increasing in x, all multiplicities positive, s >= 1.
class LevelSpectrum {
 public:
  explicit LevelSpectrum(std::vector<Level> levels);

  /// Levels x_i = first, first+1, ..., first+s-1 with unit multiplicity.
  static LevelSpectrum integer_ladder(std::size_t s, double first = 1.0);

  std::span<const Level> levels() const noexcept { return levels_; }
  const Level& operator[](std::size_t i) const noexcept { return levels_[i]; }
  std::size_t size() const noexcept { return levels_.size(); }

  double total_multiplicity() const noexcept { return total_q_; }  ///< Q
  double mean_level() const noexcept { return mean_x_; }           ///< xbar
  double min_level() const noexcept { return levels_.front().x; }
  double max_level() const noexcept { return levels_.back().x; }

 private:
  std::vector<Level> levels_;
  double total_q_ = 0.0;
  double mean_x_ = 0.0;
};

struct BoseParams {
  double beta = 0.0;
  double nu = 0.0;
};

/// True when beta * x - nu > 0 on every level.
bool is_valid_for(const LevelSpectrum& spec, BoseParams params) noexcept;

/// Total count N and energy budget E with N*min_x <= E <= N*xbar.
struct EnsembleConstraints {
  std::int64_t n = 1;
  double energy = 0.0;

  double mean() const noexcept { return energy / static_cast<double>(n); }
};

/// Throws DomainError unless `cons` is admissible for `spec`.
void check_admissible(const LevelSpectrum& spec, const EnsembleConstraints& cons);

double occupation(const Level& level, BoseParams params);

/// B_l = sum_{i<=l} occupation_i, 1 <= l <= s.
double cumulative(const LevelSpectrum& spec, BoseParams params, std::size_t l);

/// B_1 .. B_s.
std::vector<double> cumulative_curve(const LevelSpectrum& spec, BoseParams params);

/// sum_i q_i x_i / (exp(beta x_i - nu) - 1).
double energy_sum(const LevelSpectrum& spec, BoseParams params);

/// The unique nu < beta * x_min with sum_i occupation_i = n.
/// Residual |sum - n| / n <= 1e-10. The search keeps beta*x_min - nu >= 1e-13.
double solve_nu(const LevelSpectrum& spec, double beta, double n);

struct SolveResult {
  BoseParams params;
  double count_residual;   ///< |B_s - N| / N
  double energy_residual;  ///< |energy_sum - E| / E
};

/// (beta', nu') with B_s = N and energy_sum = E. Outer bracketed search on
/// beta >= 0 with solve_nu inside. E == N * xbar gives beta' = 0.
SolveResult solve_beta_nu(const LevelSpectrum& spec, const EnsembleConstraints& cons);

/// ln zeta_s = -sum q_i ln(1 - exp(nu - beta x_i)).
double log_zeta(const LevelSpectrum& spec, BoseParams params);

/// d/dnu ln zeta_s = sum of occupations.
double log_zeta_d1(const LevelSpectrum& spec, BoseParams params);

/// d^2/dnu^2 ln zeta_s = sum q_i e^{a_i} / (e^{a_i} - 1)^2, a_i = beta x_i - nu.
double log_zeta_d2(const LevelSpectrum& spec, BoseParams params);

/// Laplace estimate of ln Z(beta, N), Z = sum over sum N_i = N of
/// exp(-beta sum N_i x_i) (with multiplicity weights):
///   -nu N + ln zeta_s - 1/2 ln(2 pi d2),   nu = solve_nu(spec, beta, N).
double partition_saddle(const LevelSpectrum& spec, double beta, std::int64_t n);

/// omega^D / (exp(beta omega) - 1).
double planck_density(double omega, double beta, Dimension dim);

enum class RankMode {
  Discrete,    ///< C sum_{i=2}^{floor(alpha omega)} 1/(i(i-1)(e^{beta i - nu} - 1))
  Quadrature,  ///< C int_{2/alpha}^{omega} du / (a u (a u - 1)(e^{beta a u - nu} - 1)), a = alpha
  ClosedBeta0  ///< closed form of the integral at beta = 0
};

/// Cumulative rank model for D = -1 weights 1/(i(i-1)). Requires
/// alpha * omega >= 2 (value 0 at the lower limit) and a finite positive
/// Bose factor over the integration range.
double rank_model_neg1(double omega, double alpha, BoseParams params, double scale,
                       RankMode mode);

}  // namespace negdim
