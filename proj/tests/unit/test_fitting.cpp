#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "negdim/errors.hpp"
#include "negdim/fitting.hpp"

using namespace negdim;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

RankCurve synthetic(double alpha, BoseParams p, double c, RankMode mode, std::int64_t lo,
                    std::int64_t hi, double offset = 0.0) {
  RankCurve curve;
  for (std::int64_t w = lo; w <= hi; ++w)
    curve.points.push_back({w, rank_model_neg1(double(w), alpha, p, c, mode) + offset});
  return curve;
}

}  // namespace

TEST_CASE("calibrate_two_point recovers generators for beta != 0") {
  for (double alpha : {0.35, 0.5, 1.4}) {
    const BoseParams p{0.02, -0.3};
    const auto curve = synthetic(alpha, p, 250.0, RankMode::Quadrature, 25, 300);
    FitConfig cfg{30, 250, alpha, 0.02, RankMode::Quadrature};
    const auto fit = fit_curve(curve, cfg);
    CHECK(rel(fit.scale, 250.0) < 1e-6);
    CHECK(rel(fit.nu, -0.3) < 1e-6);
    CHECK(fit.offset == 0.0);
    CHECK(fit.sigma < 1e-6);
    CHECK(rel(fitted_model(fit, 30), curve.points[5].inverted_rank) < 1e-9);
    CHECK(rel(fitted_model(fit, 250), curve.points[225].inverted_rank) < 1e-9);
  }
}

TEST_CASE("calibrate_two_point at beta = 0 fits amplitude and offset") {
  const auto curve = synthetic(0.5, {0, -std::log(2.0)}, 40.0, RankMode::ClosedBeta0, 5, 200, 3.0);
  const auto fit = fit_curve(curve, {6, 150, 0.5, 0.0, RankMode::ClosedBeta0});
  CHECK(rel(fit.scale, 40.0) < 1e-9);
  CHECK(rel(fit.offset, 3.0) < 1e-9);
  CHECK(fit.sigma < 1e-9);
  CHECK(fit.n_points == curve.points.size());

  // Points below the model domain are left out of sigma and n_points.
  RankCurve longer = curve;
  longer.points.insert(longer.points.begin(), {{1, -100.0}, {2, -50.0}, {3, -20.0}});
  const auto fit2 = fit_curve(longer, {6, 150, 0.5, 0.0, RankMode::ClosedBeta0});
  CHECK(fit2.n_points == curve.points.size());
  CHECK(fit2.sigma < 1e-9);
}

TEST_CASE("C is linear in the curve scale") {
  const auto base = synthetic(0.8, {0.05, 0.01}, 10.0, RankMode::Quadrature, 5, 120);
  for (double lambda : {0.5, 3.0, 1000.0}) {
    RankCurve scaled = base;
    for (auto& p : scaled.points) p.inverted_rank *= lambda;
    FitConfig cfg{6, 90, 0.8, 0.05, RankMode::Quadrature};
    const auto a = calibrate_two_point(base, cfg);
    const auto b = calibrate_two_point(scaled, cfg);
    CHECK(rel(b.scale, lambda * a.scale) < 1e-9);
    CHECK(std::abs(b.nu - a.nu) < 1e-9);
  }
}

TEST_CASE("mean_quadratic_error") {
  const auto curve = synthetic(0.5, {0, -std::log(2.0)}, 40.0, RankMode::ClosedBeta0, 5, 200);
  auto fit = fit_curve(curve, {6, 150, 0.5, 0.0, RankMode::ClosedBeta0});
  CHECK(mean_quadratic_error(curve, fit) < 1e-12);
  fit.offset += 0.25;
  CHECK(mean_quadratic_error(curve, fit) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK_THROWS_AS(mean_quadratic_error(RankCurve{}, fit), DomainError);
  CHECK_THROWS_AS(mean_quadratic_error(RankCurve{{{1, 1.0}, {3, 2.0}}}, fit), DomainError);

  // Additive noise of scale tau: sigma of the true model is close to tau.
  std::mt19937_64 rng(17);
  std::normal_distribution<double> noise(0.0, 0.3);
  for (int trial = 0; trial < 10; ++trial) {
    RankCurve noisy = curve;
    for (auto& p : noisy.points) p.inverted_rank += noise(rng);
    FitResult truth = fit;
    truth.offset -= 0.25;
    CHECK(std::abs(mean_quadratic_error(noisy, truth) - 0.3) < 0.2 * 0.3);
  }
}

TEST_CASE("calibration preconditions") {
  const auto curve = synthetic(0.5, {0, -0.5}, 10.0, RankMode::ClosedBeta0, 5, 50);
  CHECK_THROWS_AS(calibrate_two_point(curve, {20, 10, 0.5, 0.0, RankMode::ClosedBeta0}), DomainError);
  CHECK_THROWS_AS(calibrate_two_point(curve, {2, 10, 0.5, 0.0, RankMode::ClosedBeta0}), DomainError);
  CHECK_THROWS_AS(calibrate_two_point(curve, {5, 60, 0.5, 0.0, RankMode::ClosedBeta0}), DomainError);
  CHECK_THROWS_AS(calibrate_two_point(curve, {6, 40, 0.5, 0.1, RankMode::ClosedBeta0}), DomainError);
  // Ratio outside what the model can produce: a curve flat between the points.
  RankCurve flat{{{10, 1.0}, {20, 1.0000000001}}};
  CHECK_THROWS_AS(calibrate_two_point(flat, {10, 20, 0.5, 0.1, RankMode::Quadrature}),
                  ConvergenceError);
}

TEST_CASE("alpha_grid") {
  const auto g = alpha_grid(0.1, 1.5, 0.05);
  CHECK(g.size() == 29);
  CHECK(g.front() == 0.1);
  CHECK(g[3] == 0.1 + 3 * 0.05);
  CHECK(std::abs(g.back() - 1.5) < 1e-12);
  CHECK(alpha_grid(1, 1, 0.1).size() == 1);
  CHECK_THROWS_AS(alpha_grid(0, 1, 0.1), DomainError);
  CHECK_THROWS_AS(alpha_grid(1, 0.5, 0.1), DomainError);
}

TEST_CASE("alpha_sweep: self-consistency and order independence") {
  const double a_star = 0.5;
  const auto curve = synthetic(a_star, {0.02, -0.3}, 250.0, RankMode::Quadrature, 25, 300);
  FitConfig tmpl{30, 250, 1.0, 0.02, RankMode::Quadrature};
  const auto sweep = alpha_sweep(curve, 0.1, 1.5, 0.05, tmpl);
  CHECK(sweep.grid.size() == 29);
  CHECK(std::abs(sweep.best_alpha - a_star) <= 0.05 + 1e-12);
  for (const auto& pt : sweep.grid)
    if (pt.sigma) CHECK(sweep.best_sigma <= *pt.sigma);

  auto alphas = alpha_grid(0.1, 1.5, 0.05);
  std::reverse(alphas.begin(), alphas.end());
  std::mt19937 rng(1);
  std::shuffle(alphas.begin(), alphas.end(), rng);
  const auto shuffled = alpha_sweep(curve, alphas, tmpl);
  CHECK(shuffled.best_alpha == sweep.best_alpha);
  CHECK(sweep_csv(shuffled) == sweep_csv(sweep));
}

TEST_CASE("alpha_sweep: infeasible points are skipped with a reason") {
  const auto curve = synthetic(1.0, {0, -0.7}, 5.0, RankMode::ClosedBeta0, 3, 60);
  const auto sweep = alpha_sweep(curve, 0.1, 1.5, 0.05, {4, 50, 1.0, 0.0, RankMode::ClosedBeta0});
  std::size_t skipped = 0;
  for (const auto& pt : sweep.grid) {
    if (pt.alpha * 4 <= 2) {
      CHECK_FALSE(pt.sigma.has_value());
      CHECK_FALSE(pt.skipped.empty());
    }
    skipped += pt.sigma ? 0 : 1;
  }
  CHECK(skipped > 0);
  CHECK(std::abs(sweep.best_alpha - 1.0) < 1e-9);
  CHECK_THROWS_AS(alpha_sweep(curve, 0.1, 0.3, 0.05, {4, 50, 1.0, 0.0, RankMode::ClosedBeta0}),
                  DomainError);
}

TEST_CASE("fit_json key order") {
  FitResult r;
  r.config = {2, 42, 1.4, 0.0, RankMode::ClosedBeta0};
  r.scale = 2.5;
  r.nu = -0.5;
  r.sigma = 0.125;
  r.n_points = 7;
  CHECK(fit_json(r) ==
        "{\n  \"alpha\": 1.4,\n  \"beta\": 0.0,\n  \"nu\": -0.5,\n  \"C\": 2.5,\n  \"sigma\": 0.125,\n"
        "  \"omega1\": 2,\n  \"omega2\": 42,\n  \"n_points\": 7,\n  \"offset\": 0.0\n}\n");
}
