#include "negdim/weights.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "negdim/errors.hpp"

namespace negdim {

namespace {

// C(n, k) in 128-bit integer arithmetic; empty if it would overflow.
std::optional<double> exact_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  constexpr auto kMax = ~static_cast<unsigned __int128>(0);
  for (std::int64_t j = 1; j <= k; ++j) {
    const auto f = static_cast<unsigned __int128>(n - k + j);
    if (r > kMax / f) return std::nullopt;
    r = r * f / static_cast<unsigned __int128>(j);
  }
  return static_cast<double>(r);
}

// Gamma(i + d) / Gamma(i + 1) with sign, for i + d not a non-positive integer.
double raw_gamma_ratio(std::int64_t i, double d) {
  const double x = static_cast<double>(i) + d;
  if (x > 0) return boost::math::tgamma_ratio(x, static_cast<double>(i) + 1.0);
  int sign = 1;
  const double lg = boost::math::lgamma(x, &sign) - boost::math::lgamma(static_cast<double>(i) + 1.0);
  return sign * std::exp(lg);
}

}  // namespace

Dimension::Dimension(double value) : value_(value) {
  if (!std::isfinite(value)) throw DomainError("dimension must be finite");
}

bool Dimension::is_integer() const noexcept { return value_ == std::nearbyint(value_); }

bool Dimension::is_nonpositive_integer() const noexcept { return is_integer() && value_ <= 0.0; }

double Weight::value() const {
  if (pole_) throw DomainError("weight is a pole");
  return value_;
}

Normalization effective_normalization(Dimension dim, Normalization requested) noexcept {
  if (requested == Normalization::UnitAtZero && dim.is_nonpositive_integer())
    return Normalization::RawGamma;
  return requested;
}

Weight weight(std::int64_t i, Dimension dim, Normalization normalization) {
  if (i < 0) throw DomainError("weight index must be nonnegative, got " + std::to_string(i));
  const double d = dim.value();
  if (dim.is_integer() && static_cast<double>(i) + d <= 0.0) return Weight::pole();

  const Normalization norm = effective_normalization(dim, normalization);
  double v = 0.0;
  try {
    if (norm == Normalization::UnitAtZero) {
      if (i == 0) return Weight::finite(1.0);
      if (dim.is_integer() && d < 1e9) {
        if (auto exact = exact_binomial(i + static_cast<std::int64_t>(d) - 1, i))
          return Weight::finite(*exact);
      }
      if (d > 0) {
        v = 1.0 / (static_cast<double>(i) * boost::math::beta(static_cast<double>(i), d));
      } else {
        v = raw_gamma_ratio(i, d) / boost::math::tgamma(d);
      }
    } else {
      v = raw_gamma_ratio(i, d);
    }
  } catch (const std::overflow_error&) {
    v = std::numeric_limits<double>::infinity();
  }
  if (!std::isfinite(v))
    throw DomainError("weight(" + std::to_string(i) + ", D=" + std::to_string(d) +
                      ") overflows double range");
  return Weight::finite(v);
}

WeightSequence weight_sequence(Dimension dim, std::int64_t i_max, Normalization normalization) {
  if (i_max < 0) throw DomainError("i_max must be nonnegative");
  WeightSequence seq{dim, effective_normalization(dim, normalization), {}};
  seq.values.reserve(static_cast<std::size_t>(i_max) + 1);
  for (std::int64_t i = 0; i <= i_max; ++i) seq.values.push_back(weight(i, dim, normalization));
  return seq;
}

std::vector<std::int64_t> pole_indices(Dimension dim) {
  std::vector<std::int64_t> out;
  if (!dim.is_nonpositive_integer()) return out;
  const auto last = static_cast<std::int64_t>(-dim.value());
  out.reserve(static_cast<std::size_t>(last) + 1);
  for (std::int64_t i = 0; i <= last; ++i) out.push_back(i);
  return out;
}

}  // namespace negdim
