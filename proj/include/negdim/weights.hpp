#pragma once

// Multiplicity weights q_i(D) of a lattice of real dimension D, continued to
// negative and fractional D through the Gamma function:
//
//   q_i(D) = Gamma(i + D) / (Gamma(i + 1) * Gamma(D)) = C(i + D - 1, i)
//
// For non-positive integer D the leading terms i = 0..-D diverge ("holes");
// they are reported as pole markers instead of IEEE infinities.

#include <cstdint>
#include <vector>

namespace negdim {

/// Real lattice dimension; must be finite.
class Dimension {
 public:
  explicit Dimension(double value);

  double value() const noexcept { return value_; }
  bool is_integer() const noexcept;
  bool is_nonpositive_integer() const noexcept;

 private:
  double value_;
};

enum class Normalization {
  UnitAtZero,  ///< divide by Gamma(D) so that q_0 = 1
  RawGamma,    ///< Gamma(i + D) / Gamma(i + 1), no 1/Gamma(D) factor
};

/// Extended-real weight: either a finite value or a pole marker. Reading the
/// value of a pole throws, so poles never leak into arithmetic.
class Weight {
 public:
  static Weight finite(double v) noexcept { return Weight(v, false); }
  static Weight pole() noexcept { return Weight(0.0, true); }

  bool is_pole() const noexcept { return pole_; }
  double value() const;

  friend bool operator==(const Weight&, const Weight&) = default;

 private:
  Weight(double v, bool p) noexcept : value_(v), pole_(p) {}
  double value_;
  bool pole_;
};

struct WeightSequence {
  Dimension dim;
  /// Normalization actually applied (UnitAtZero falls back to RawGamma when
  /// Gamma(D) itself diverges).
  Normalization normalization;
  std::vector<Weight> values;
};

/// Normalization used for `dim` when `requested` is asked for.
Normalization effective_normalization(Dimension dim, Normalization requested) noexcept;

/// q_i(D). Throws DomainError for i < 0 or when the value overflows a double.
Weight weight(std::int64_t i, Dimension dim,
              Normalization normalization = Normalization::UnitAtZero);

/// q_0(D) .. q_{i_max}(D).
WeightSequence weight_sequence(Dimension dim, std::int64_t i_max,
                               Normalization normalization = Normalization::UnitAtZero);

/// Indices i >= 0 with i + D a non-positive integer, ascending.
std::vector<std::int64_t> pole_indices(Dimension dim);

}  // namespace negdim
