#include "negdim/bose_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "negdim/errors.hpp"

namespace negdim {

namespace {

constexpr double kNuClamp = 1e-13;
constexpr double kNuTolerance = 1e-10;
constexpr double kEnergyTolerance = 1e-8;

// 1 / (4 sinh^2(a/2)) == e^a / (e^a - 1)^2 without overflow for large a.
double bose_fluctuation(double a) {
  const double s = std::sinh(0.5 * a);
  return 0.25 / (s * s);
}

double checked_gap(const Level& level, BoseParams p) {
  const double a = p.beta * level.x - p.nu;
  if (!(a > 0.0))
    throw DomainError("non-physical parameters: beta*x - nu = " + std::to_string(a) +
                      " <= 0 at x = " + std::to_string(level.x));
  return a;
}

// Sum of occupations written in terms of t = m - nu, where m = min_i beta x_i.
struct ShiftedSum {
  std::vector<double> offsets;  // beta x_i - m >= 0
  std::vector<double> q;

  ShiftedSum(const LevelSpectrum& spec, double beta, double& m) {
    m = std::numeric_limits<double>::infinity();
    for (const auto& l : spec.levels()) m = std::min(m, beta * l.x);
    for (const auto& l : spec.levels()) {
      offsets.push_back(beta * l.x - m);
      q.push_back(l.q);
    }
  }
  double value(double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += q[i] / std::expm1(offsets[i] + t);
    return s;
  }
  double d2(double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += q[i] * bose_fluctuation(offsets[i] + t);
    return s;
  }
};

}  // namespace

LevelSpectrum::LevelSpectrum(std::vector<Level> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw DomainError("level spectrum must have at least one level");
  double qx = 0.0;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const auto& l = levels_[i];
    if (!std::isfinite(l.x) || !std::isfinite(l.q))
      throw DomainError("level values must be finite");
    if (!(l.q > 0.0)) throw DomainError("multiplicities must be positive");
    if (i > 0 && !(l.x > levels_[i - 1].x))
      throw DomainError("levels must be strictly increasing");
    total_q_ += l.q;
    qx += l.q * l.x;
  }
  mean_x_ = qx / total_q_;
}

LevelSpectrum LevelSpectrum::integer_ladder(std::size_t s, double first) {
  std::vector<Level> levels;
  levels.reserve(s);
  for (std::size_t i = 0; i < s; ++i) levels.push_back({first + static_cast<double>(i), 1.0});
  return LevelSpectrum(std::move(levels));
}

bool is_valid_for(const LevelSpectrum& spec, BoseParams params) noexcept {
  return std::all_of(spec.levels().begin(), spec.levels().end(), [&](const Level& l) {
    return params.beta * l.x - params.nu > 0.0;
  });
}

void check_admissible(const LevelSpectrum& spec, const EnsembleConstraints& cons) {
  if (cons.n < 1) throw DomainError("N must be at least 1");
  if (!std::isfinite(cons.energy)) throw DomainError("E must be finite");
  const double n = static_cast<double>(cons.n);
  const double slack = 1e-12 * std::max(1.0, std::abs(n * spec.mean_level()));
  if (cons.energy < n * spec.min_level() - slack || cons.energy > n * spec.mean_level() + slack)
    throw DomainError("inadmissible constraints: need N*min_x <= E <= N*xbar (E = " +
                      std::to_string(cons.energy) + ", N*min_x = " +
                      std::to_string(n * spec.min_level()) +
                      ", N*xbar = " + std::to_string(n * spec.mean_level()) + ")");
}

double occupation(const Level& level, BoseParams params) {
  return level.q / std::expm1(checked_gap(level, params));
}

double cumulative(const LevelSpectrum& spec, BoseParams params, std::size_t l) {
  if (l < 1 || l > spec.size())
    throw DomainError("cut index l = " + std::to_string(l) + " outside [1, " +
                      std::to_string(spec.size()) + "]");
  double sum = 0.0;
  for (std::size_t i = 0; i < l; ++i) sum += occupation(spec[i], params);
  return sum;
}

std::vector<double> cumulative_curve(const LevelSpectrum& spec, BoseParams params) {
  std::vector<double> out;
  out.reserve(spec.size());
  double sum = 0.0;
  for (const auto& level : spec.levels()) {
    sum += occupation(level, params);
    out.push_back(sum);
  }
  return out;
}

double energy_sum(const LevelSpectrum& spec, BoseParams params) {
  double sum = 0.0;
  for (const auto& level : spec.levels()) sum += level.x * occupation(level, params);
  return sum;
}

double log_zeta(const LevelSpectrum& spec, BoseParams params) {
  double sum = 0.0;
  for (const auto& level : spec.levels())
    sum -= level.q * std::log(-std::expm1(-checked_gap(level, params)));
  return sum;
}

double log_zeta_d1(const LevelSpectrum& spec, BoseParams params) {
  double sum = 0.0;
  for (const auto& level : spec.levels()) sum += occupation(level, params);
  return sum;
}

double log_zeta_d2(const LevelSpectrum& spec, BoseParams params) {
  double sum = 0.0;
  for (const auto& level : spec.levels())
    sum += level.q * bose_fluctuation(checked_gap(level, params));
  return sum;
}

double solve_nu(const LevelSpectrum& spec, double beta, double n) {
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("N must be positive and finite");
  if (!std::isfinite(beta)) throw DomainError("beta must be finite");

  double m = 0.0;
  const ShiftedSum sum(spec, beta, m);

  // sum(t) decreases in t; work in s = ln t.
  double s_lo = std::log(kNuClamp);
  double s_hi = std::log(std::log1p(spec.total_multiplicity() / n)) + 1e-12;
  if (sum.value(kNuClamp) < n)
    throw ConvergenceError("solve_nu: N exceeds the occupancy reachable at the condensate clamp",
                           m - std::exp(s_hi), m - kNuClamp, sum.value(kNuClamp) - n);

  double s = 0.5 * (s_lo + s_hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double t = std::exp(s);
    const double r = sum.value(t) - n;
    if (std::abs(r) <= 1e-14 * n) break;
    if (r > 0) s_lo = s; else s_hi = s;
    // Newton in ln t: d sum / ds = -t * d2.
    const double step = r / (t * sum.d2(t));
    double next = s + step;
    if (!(next > s_lo && next < s_hi)) next = 0.5 * (s_lo + s_hi);
    if (next == s) break;
    s = next;
    if (s_hi - s_lo < 1e-15) break;
  }

  // Polish in the nu representation callers will substitute back.
  double nu = m - std::exp(s);
  const double nu_max = m - kNuClamp;
  auto residual = [&](double v) {
    return log_zeta_d1(spec, {beta, v}) - n;
  };
  double best = nu;
  double best_r = std::abs(residual(nu));
  for (int k = 0; k < 4 && best_r > 1e-15 * n; ++k) {
    const double r = residual(nu);
    const double next = std::min(nu - r / log_zeta_d2(spec, {beta, nu}), nu_max);
    if (next == nu) break;
    nu = next;
    const double rr = std::abs(residual(nu));
    if (rr < best_r) {
      best = nu;
      best_r = rr;
    }
  }
  if (!(best_r <= kNuTolerance * n))
    throw ConvergenceError("solve_nu did not reach relative residual 1e-10", m - std::exp(s_hi),
                           m - std::exp(s_lo), best_r / n);
  return best;
}

SolveResult solve_beta_nu(const LevelSpectrum& spec, const EnsembleConstraints& cons) {
  check_admissible(spec, cons);
  const double n = static_cast<double>(cons.n);
  const double e = cons.energy;
  const double spread = spec.mean_level() - spec.min_level();
  if (!(e > n * spec.min_level()) && spread > 0)
    throw DomainError("inadmissible constraints: E = N*min_x requires infinite beta");

  auto finish = [&](double beta) {
    const BoseParams p{beta, solve_nu(spec, beta, n)};
    const double ce = std::abs(log_zeta_d1(spec, p) - n) / n;
    const double ee = std::abs(energy_sum(spec, p) - e) / (e != 0.0 ? std::abs(e) : 1.0);
    return SolveResult{p, ce, ee};
  };

  if (spread == 0.0 || e >= n * spec.mean_level()) return finish(0.0);

  // Energy at fixed B_s = N decreases in beta from N*xbar (beta = 0) to N*min_x.
  auto excess = [&](double beta) {
    return energy_sum(spec, {beta, solve_nu(spec, beta, n)}) - e;
  };
  double lo = 0.0;
  double hi = 1.0 / spread;
  int doublings = 0;
  while (excess(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 200)
      throw ConvergenceError("solve_beta_nu: could not bracket beta", lo, hi, excess(hi) / e);
  }

  std::uintmax_t max_iter = 300;
  const auto [a, b] = boost::math::tools::toms748_solve(
      excess, lo, hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
  SolveResult ra = finish(a);
  SolveResult rb = finish(b);
  SolveResult best = ra.energy_residual <= rb.energy_residual ? ra : rb;
  if (!(best.energy_residual <= kEnergyTolerance && best.count_residual <= kEnergyTolerance))
    throw ConvergenceError("solve_beta_nu did not reach relative residual 1e-8", a, b,
                           best.energy_residual);
  return best;
}

double partition_saddle(const LevelSpectrum& spec, double beta, std::int64_t n) {
  if (n < 1) throw DomainError("N must be at least 1");
  const double nn = static_cast<double>(n);
  const BoseParams p{beta, solve_nu(spec, beta, nn)};
  return -p.nu * nn + log_zeta(spec, p) -
         0.5 * std::log(2.0 * std::numbers::pi * log_zeta_d2(spec, p));
}

double planck_density(double omega, double beta, Dimension dim) {
  if (!(omega > 0.0)) throw DomainError("planck_density requires omega > 0");
  if (!(beta > 0.0)) throw DomainError("planck_density requires beta > 0");
  return std::pow(omega, dim.value()) / std::expm1(beta * omega);
}

double rank_model_neg1(double omega, double alpha, BoseParams params, double scale,
                       RankMode mode) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("scale C must be positive");
  if (!std::isfinite(omega) || !std::isfinite(params.beta) || !std::isfinite(params.nu))
    throw DomainError("rank model arguments must be finite");
  const double top = alpha * omega;
  if (top < 2.0 * (1.0 - 1e-12))
    throw DomainError("rank model requires alpha*omega >= 2 (got " + std::to_string(top) + ")");
  const double beta = params.beta;
  const double nu = params.nu;
  // The Bose factor is smallest at one end of [2, alpha*omega].
  const double gap = std::min(2.0 * beta - nu, beta * std::max(top, 2.0) - nu);
  if (!(gap > 0.0))
    throw DomainError("rank model requires beta*alpha*u - nu > 0 over the whole range");
  if (top <= 2.0) return 0.0;

  switch (mode) {
    case RankMode::Discrete: {
      const auto last = static_cast<std::int64_t>(std::floor(top * (1.0 + 1e-14)));
      double sum = 0.0;
      for (std::int64_t i = 2; i <= last; ++i) {
        const double di = static_cast<double>(i);
        sum += 1.0 / (di * (di - 1.0) * std::expm1(beta * di - nu));
      }
      return scale * sum;
    }
    case RankMode::ClosedBeta0: {
      if (beta != 0.0) throw DomainError("closed-beta0 mode requires beta = 0");
      // int du / (a u (a u - 1)) = (1/a) ln((a u - 1)/(a u)); lower limit gives ln(1/2).
      return scale / (alpha * std::expm1(-nu)) *
             (std::log1p(-1.0 / top) + std::numbers::ln2);
    }
    case RankMode::Quadrature: {
      using boost::math::quadrature::gauss_kronrod;
      double err = 0.0;
      double value = 0.0;
      if (beta > 0.0) {
        // v = ln((beta a u - nu) / (2 beta - nu)) removes the near-pole at the
        // lower limit; a u is rebuilt from positive terms.
        const double ba = beta * alpha;
        const double g0 = 2.0 * beta - nu;
        auto f = [&](double v) {
          const double grow = g0 * std::expm1(v) / beta;
          const double g = g0 * std::exp(v);
          return g / (std::expm1(g) * ba * (2.0 + grow) * (1.0 + grow));
        };
        value = gauss_kronrod<double, 61>::integrate(f, 0.0, std::log1p(beta * (top - 2.0) / g0),
                                                     15, 1e-12, &err);
      } else {
        auto f = [&](double u) {
          const double au = alpha * u;
          return 1.0 / (au * (au - 1.0) * std::expm1(beta * au - nu));
        };
        value = gauss_kronrod<double, 61>::integrate(f, 2.0 / alpha, omega, 15, 1e-12, &err);
      }
      return scale * value;
    }
  }
  throw DomainError("unknown rank model mode");
}

}  // namespace negdim
