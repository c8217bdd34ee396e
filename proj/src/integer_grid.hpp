#pragma once

// Maps a level spectrum with integer multiplicities onto integer unit
// sub-levels: sub-level energies are round(x * scale) - base, base being the
// scaled lowest level, and each level i contributes q_i sub-levels.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "negdim/bose_model.hpp"

namespace negdim::detail {

struct IntegerGrid {
  std::int64_t scale = 1;
  std::int64_t base = 0;
  std::vector<std::int64_t> y;
  std::vector<std::size_t> level_of;

  /// Shifted, scaled budget floor(E * scale) - n * base; -1 when infeasible.
  std::int64_t cap(double energy, std::int64_t n) const;
  /// Unshifted energy of a shifted grid value for n particles.
  double energy_of(std::int64_t shifted, std::int64_t n) const;
};

IntegerGrid make_integer_grid(const LevelSpectrum& spec, std::int64_t max_scale);

}  // namespace negdim::detail
