#include "negdim/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>
#include <json.hpp>

#include "negdim/errors.hpp"
#include "negdim/parallel.hpp"
#include "negdim/text_io.hpp"

namespace negdim {

namespace {

double curve_value(const RankCurve& curve, std::int64_t omega) {
  const auto it = std::lower_bound(curve.points.begin(), curve.points.end(), omega,
                                   [](const RankPoint& p, std::int64_t w) { return p.omega < w; });
  if (it == curve.points.end() || it->omega != omega) {
    std::string range = curve.points.empty()
                            ? std::string("empty curve")
                            : "surviving range [" + std::to_string(curve.points.front().omega) +
                                  ", " + std::to_string(curve.points.back().omega) + "]";
    throw DomainError("calibration frequency " + std::to_string(omega) +
                      " is not a curve point (" + range + ")");
  }
  return it->inverted_rank;
}

void check_config(const FitConfig& cfg) {
  if (!(cfg.omega1 < cfg.omega2)) throw DomainError("omega1 must be smaller than omega2");
  if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha)) throw DomainError("alpha must be positive");
  if (!std::isfinite(cfg.beta)) throw DomainError("beta must be finite");
  if (!(cfg.alpha * static_cast<double>(cfg.omega1) > 2.0))
    throw DomainError("alpha * omega1 must exceed 2 (got " +
                      std::to_string(cfg.alpha * static_cast<double>(cfg.omega1)) + ")");
  if (cfg.beta != 0.0 && cfg.mode == RankMode::ClosedBeta0)
    throw DomainError("closed-beta0 mode requires beta = 0");
}

bool in_domain(double alpha, std::int64_t omega) {
  return alpha * static_cast<double>(omega) >= 2.0 * (1.0 - 1e-12);
}

std::size_t domain_points(const RankCurve& curve, double alpha) {
  return static_cast<std::size_t>(std::count_if(curve.points.begin(), curve.points.end(),
                                                [&](const RankPoint& p) { return in_domain(alpha, p.omega); }));
}

// Largest nu keeping the Bose factor positive on [2, alpha*omega2].
double nu_limit(const FitConfig& cfg) {
  const double top = cfg.alpha * static_cast<double>(cfg.omega2);
  return std::min(2.0 * cfg.beta, cfg.beta * top);
}

}  // namespace

RankMode default_mode(double beta) noexcept {
  return beta == 0.0 ? RankMode::ClosedBeta0 : RankMode::Quadrature;
}

double fitted_model(const FitResult& fit, double omega) {
  const FitConfig& c = fit.config;
  return rank_model_neg1(omega, c.alpha, {c.beta, fit.nu}, fit.scale, c.mode) + fit.offset;
}

FitResult calibrate_two_point(const RankCurve& curve, const FitConfig& cfg) {
  check_config(cfg);
  const double r1 = curve_value(curve, cfg.omega1);
  const double r2 = curve_value(curve, cfg.omega2);
  const double w1 = static_cast<double>(cfg.omega1);
  const double w2 = static_cast<double>(cfg.omega2);
  auto shape = [&](double omega, double nu) {
    return rank_model_neg1(omega, cfg.alpha, {cfg.beta, nu}, 1.0, cfg.mode);
  };

  FitResult fit;
  fit.config = cfg;
  fit.n_points = domain_points(curve, cfg.alpha);

  if (cfg.beta == 0.0) {
    fit.nu = -std::numbers::ln2;
    const double f1 = shape(w1, fit.nu);
    const double f2 = shape(w2, fit.nu);
    if (!(f2 > f1)) throw DomainError("model takes equal values at omega1 and omega2");
    fit.scale = (r2 - r1) / (f2 - f1);
    if (!(fit.scale > 0.0))
      throw DomainError("calibration points give a non-positive amplitude C");
    fit.offset = r1 - fit.scale * f1;
  } else {
    if (!(r1 > 0.0 && r2 > r1))
      throw DomainError("calibration needs 0 < rank(omega1) < rank(omega2)");
    const double target = std::log(r1 / r2);
    const double limit = nu_limit(cfg);
    // nu = limit - exp(s); the log-ratio is monotone in s.
    auto h = [&](double s) {
      const double nu = limit - std::exp(s);
      return std::log(shape(w1, nu)) - std::log(shape(w2, nu)) - target;
    };
    const double s_lo = std::log(1e-10);
    const double s_hi = std::log(600.0);
    const double h_lo = h(s_lo);
    const double h_hi = h(s_hi);
    if (!std::isfinite(h_lo) || !std::isfinite(h_hi) || (h_lo > 0) == (h_hi > 0)) {
      const double a = std::exp(h_lo + target);
      const double b = std::exp(h_hi + target);
      throw ConvergenceError("no nu reproduces rank ratio " + format_double(r1 / r2) +
                                 "; achievable range [" + format_double(std::min(a, b)) + ", " +
                                 format_double(std::max(a, b)) + "]",
                             std::min(a, b), std::max(a, b), r1 / r2);
    }
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        h, s_lo, s_hi, h_lo, h_hi, boost::math::tools::eps_tolerance<double>(52), iters);
    const double s = std::abs(h(a)) <= std::abs(h(b)) ? a : b;
    fit.nu = limit - std::exp(s);
    fit.scale = r1 / shape(w1, fit.nu);
  }

  const double e1 = std::abs(fitted_model(fit, w1) - r1) / std::abs(r1 != 0.0 ? r1 : 1.0);
  const double e2 = std::abs(fitted_model(fit, w2) - r2) / std::abs(r2);
  if (!(std::max(e1, e2) <= 1e-9))
    throw ConvergenceError("two-point calibration misses its points", e1, e2, std::max(e1, e2));
  return fit;
}

double mean_quadratic_error(const RankCurve& curve, const FitResult& fit) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const RankPoint& p : curve.points) {
    if (!in_domain(fit.config.alpha, p.omega)) continue;
    const double d = p.inverted_rank - fitted_model(fit, static_cast<double>(p.omega));
    sum += d * d;
    ++n;
  }
  if (n == 0) throw DomainError("no curve point with alpha * omega >= 2");
  return std::sqrt(sum / static_cast<double>(n));
}

FitResult fit_curve(const RankCurve& curve, const FitConfig& cfg) {
  FitResult fit = calibrate_two_point(curve, cfg);
  fit.sigma = mean_quadratic_error(curve, fit);
  return fit;
}

std::vector<double> alpha_grid(double lo, double hi, double step) {
  if (!(lo > 0.0) || !std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError("alpha range must be positive and finite");
  if (!(step > 0.0)) throw DomainError("alpha step must be positive");
  if (hi < lo) throw DomainError("alpha range is empty");
  const auto n = static_cast<std::int64_t>(std::floor((hi - lo) / step * (1.0 + 1e-9) + 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (std::int64_t k = 0; k <= n; ++k) out.push_back(lo + static_cast<double>(k) * step);
  return out;
}

SweepResult alpha_sweep(const RankCurve& curve, std::span<const double> alphas,
                        const FitConfig& tmpl) {
  if (alphas.empty()) throw DomainError("empty alpha grid");
  if (curve.points.empty()) throw DomainError("empty rank curve");
  std::vector<SweepPoint> grid(alphas.size());
  parallel_for(alphas.size(), [&](std::size_t k) {
    const double alpha = alphas[k];
    SweepPoint& pt = grid[k];
    pt.alpha = alpha;
    FitConfig cfg = tmpl;
    cfg.alpha = alpha;
    try {
      pt.sigma = fit_curve(curve, cfg).sigma;
    } catch (const DomainError& e) {
      pt.skipped = e.what();
    } catch (const ConvergenceError& e) {
      pt.skipped = e.what();
    }
  });
  std::stable_sort(grid.begin(), grid.end(),
                   [](const SweepPoint& a, const SweepPoint& b) { return a.alpha < b.alpha; });

  SweepResult result{std::move(grid), 0.0, 0.0};
  bool found = false;
  for (const SweepPoint& pt : result.grid) {
    if (!pt.sigma) continue;
    if (!found || *pt.sigma < result.best_sigma) {
      result.best_alpha = pt.alpha;
      result.best_sigma = *pt.sigma;
      found = true;
    }
  }
  if (!found) throw DomainError("every alpha on the sweep grid is infeasible");
  return result;
}

SweepResult alpha_sweep(const RankCurve& curve, double lo, double hi, double step,
                        const FitConfig& tmpl) {
  const std::vector<double> grid = alpha_grid(lo, hi, step);
  return alpha_sweep(curve, std::span<const double>(grid), tmpl);
}

std::string fit_json(const FitResult& fit) {
  nlohmann::ordered_json j;
  j["alpha"] = fit.config.alpha;
  j["beta"] = fit.config.beta;
  j["nu"] = fit.nu;
  j["C"] = fit.scale;
  j["sigma"] = fit.sigma;
  j["omega1"] = fit.config.omega1;
  j["omega2"] = fit.config.omega2;
  j["n_points"] = fit.n_points;
  j["offset"] = fit.offset;
  return j.dump(2) + "\n";
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream out;
  out << "alpha,sigma\n";
  for (const SweepPoint& pt : sweep.grid)
    if (pt.sigma) out << format_double(pt.alpha) << ',' << format_double(*pt.sigma) << '\n';
  return out.str();
}

}  // namespace negdim
