#include "integer_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "negdim/errors.hpp"

namespace negdim::detail {

IntegerGrid make_integer_grid(const LevelSpectrum& spec, std::int64_t max_scale) {
  IntegerGrid grid;
  grid.scale = 0;
  for (std::int64_t m = 1; m <= max_scale && grid.scale == 0; ++m) {
    const bool ok = std::all_of(spec.levels().begin(), spec.levels().end(), [&](const Level& l) {
      const double v = l.x * static_cast<double>(m);
      return std::abs(v - std::nearbyint(v)) <= 1e-9 * std::max(1.0, std::abs(v));
    });
    if (ok) grid.scale = m;
  }
  if (grid.scale == 0)
    throw BudgetError("levels are not on a rational grid with denominator <= " +
                      std::to_string(max_scale));

  const double m = static_cast<double>(grid.scale);
  grid.base = static_cast<std::int64_t>(std::nearbyint(spec.min_level() * m));
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double q = spec[i].q;
    const double qi = std::nearbyint(q);
    if (std::abs(q - qi) > 1e-9 * std::max(1.0, q) || qi < 1)
      throw DomainError("exact counting needs integer multiplicities (q = " + std::to_string(q) +
                        ")");
    const auto yi = static_cast<std::int64_t>(std::nearbyint(spec[i].x * m)) - grid.base;
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(qi); ++c) {
      grid.y.push_back(yi);
      grid.level_of.push_back(i);
    }
  }
  return grid;
}

std::int64_t IntegerGrid::cap(double energy, std::int64_t n) const {
  const double es = energy * static_cast<double>(scale);
  const double floor_es = std::floor(es + 1e-9 * std::max(1.0, std::abs(es)));
  const double c = floor_es - static_cast<double>(n) * static_cast<double>(base);
  if (c > 9e15) throw BudgetError("energy grid too large");
  return c < 0 ? -1 : static_cast<std::int64_t>(c);
}

double IntegerGrid::energy_of(std::int64_t shifted, std::int64_t n) const {
  return static_cast<double>(shifted + n * base) / static_cast<double>(scale);
}

}  // namespace negdim::detail
