#pragma once

// Two-point calibration of the D = -1 rank model against an empirical
// inverted-rank curve, the root-mean-square error sigma, and the alpha sweep.
//
// For beta != 0 the constants are (C, nu): the ratio of the model at the two
// calibration frequencies does not depend on C, which leaves a monotone 1-D
// root-find in nu. At beta = 0 the model depends on C and nu only through
// C / (e^{-nu} - 1); nu is then fixed to -ln 2 and the second constant is the
// additive constant of the indefinite integral (`offset`).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "negdim/bose_model.hpp"
#include "negdim/corpus.hpp"

namespace negdim {

struct FitConfig {
  std::int64_t omega1 = 0;
  std::int64_t omega2 = 0;
  double alpha = 1.0;
  double beta = 0.0;
  RankMode mode = RankMode::ClosedBeta0;
};

/// ClosedBeta0 when beta == 0, Quadrature otherwise.
RankMode default_mode(double beta) noexcept;

struct FitResult {
  double scale = 0.0;   ///< C
  double nu = 0.0;
  double offset = 0.0;  ///< additive constant, nonzero only at beta = 0
  double sigma = 0.0;
  std::size_t n_points = 0;  ///< curve points inside the model domain
  FitConfig config;
};

/// Model value C * rank_model_neg1(omega) + offset.
double fitted_model(const FitResult& fit, double omega);

/// Solves for the constants so the model passes through the curve at omega1
/// and omega2. sigma is left at 0; see mean_quadratic_error.
FitResult calibrate_two_point(const RankCurve& curve, const FitConfig& cfg);

/// sqrt(mean of (inverted_rank - model)^2) over the curve points inside the
/// model domain alpha * omega >= 2.
double mean_quadratic_error(const RankCurve& curve, const FitResult& fit);

/// Calibrate then fill in sigma.
FitResult fit_curve(const RankCurve& curve, const FitConfig& cfg);

struct SweepPoint {
  double alpha;
  std::optional<double> sigma;  ///< empty when skipped
  std::string skipped;          ///< reason when skipped
};

struct SweepResult {
  std::vector<SweepPoint> grid;  ///< ascending alpha
  double best_alpha = 0.0;
  double best_sigma = 0.0;
};

/// lo + k*step for k = 0.. while <= hi (inclusive, 1e-9 relative slack).
std::vector<double> alpha_grid(double lo, double hi, double step);

SweepResult alpha_sweep(const RankCurve& curve, double lo, double hi, double step,
                        const FitConfig& tmpl);

/// Sweep over explicit alphas, evaluated in the given order; the result is
/// sorted by alpha so it does not depend on evaluation order.
SweepResult alpha_sweep(const RankCurve& curve, std::span<const double> alphas,
                        const FitConfig& tmpl);

/// Fixed key order: alpha, beta, nu, C, sigma, omega1, omega2, n_points, offset.
std::string fit_json(const FitResult& fit);
/// Header "alpha,sigma"; skipped grid points are omitted.
std::string sweep_csv(const SweepResult& sweep);

}  // namespace negdim
