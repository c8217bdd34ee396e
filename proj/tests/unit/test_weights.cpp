#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "negdim/errors.hpp"
#include "negdim/weights.hpp"

using namespace negdim;

namespace {

// Pascal's triangle in 64-bit integers.
std::vector<std::vector<std::uint64_t>> pascal(int rows) {
  std::vector<std::vector<std::uint64_t>> c(rows + 1);
  for (int n = 0; n <= rows; ++n) {
    c[n].assign(n + 1, 1);
    for (int k = 1; k < n; ++k) c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
  }
  return c;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("weight: worked values") {
  CHECK(weight(2, Dimension(3)).value() == 6.0);
  for (int i = 0; i < 20; ++i) CHECK(weight(i, Dimension(1)).value() == 1.0);
  CHECK(rel(weight(3, Dimension(-1)).value(), 1.0 / 6.0) < 1e-15);
  CHECK_THROWS_AS(weight(-1, Dimension(2)), DomainError);
  CHECK_THROWS_AS(Dimension(std::nan("")), DomainError);
}

TEST_CASE("weight_sequence: small tables") {
  auto d3 = weight_sequence(Dimension(3), 3);
  REQUIRE(d3.values.size() == 4);
  const double expect[] = {1, 3, 6, 10};
  for (int i = 0; i < 4; ++i) CHECK(d3.values[i].value() == expect[i]);

  auto d1 = weight_sequence(Dimension(1), 4);
  for (const auto& w : d1.values) CHECK(w.value() == 1.0);

  auto dm1 = weight_sequence(Dimension(-1), 4);
  CHECK(dm1.normalization == Normalization::RawGamma);
  CHECK(dm1.values[0].is_pole());
  CHECK(dm1.values[1].is_pole());
  const double c = dm1.values[2].value();
  CHECK(rel(c, 0.5) < 1e-15);
  CHECK(rel(dm1.values[3].value(), c / 3) < 1e-15);
  CHECK(rel(dm1.values[4].value(), c / 6) < 1e-15);
}

TEST_CASE("weight: positive integer D equals integer binomial") {
  const auto c = pascal(60);
  for (int d = 1; d <= 4; ++d)
    for (int i = 0; i <= 50; ++i)
      CHECK(weight(i, Dimension(d)).value() == static_cast<double>(c[i + d - 1][i]));
}

TEST_CASE("weight: recurrence holds for real D") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-6.0, 8.0);
  for (int trial = 0; trial < 60; ++trial) {
    const double d = dist(rng);
    for (auto norm : {Normalization::UnitAtZero, Normalization::RawGamma}) {
      const auto seq = weight_sequence(Dimension(d), 150, norm);
      for (std::size_t i = 0; i + 1 < seq.values.size(); ++i) {
        const auto& a = seq.values[i];
        const auto& b = seq.values[i + 1];
        if (a.is_pole() || b.is_pole() || a.value() == 0.0) continue;
        const double lhs = b.value() * static_cast<double>(i + 1);
        const double rhs = a.value() * (static_cast<double>(i) + d);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
      }
    }
  }
}

TEST_CASE("weight: lgamma cross-check for fractional D") {
  for (double d : {0.5, 2.25, 7.5}) {
    for (int i : {0, 1, 5, 40, 300}) {
      const double expect = std::exp(std::lgamma(i + d) - std::lgamma(i + 1.0) - std::lgamma(d));
      CHECK(rel(weight(i, Dimension(d)).value(), expect) < 1e-11);
    }
  }
}

TEST_CASE("pole_indices matches pole markers") {
  CHECK(pole_indices(Dimension(-1)) == std::vector<std::int64_t>{0, 1});
  CHECK(pole_indices(Dimension(3)).empty());
  CHECK(pole_indices(Dimension(-2.5)).empty());
  CHECK(pole_indices(Dimension(0)) == std::vector<std::int64_t>{0});
  for (double d : {-4.0, -3.0, -1.0, 0.0, 1.0, 2.0, -2.5, 0.5}) {
    const auto poles = pole_indices(Dimension(d));
    for (std::int64_t i = 0; i <= 12; ++i) {
      const bool listed = std::find(poles.begin(), poles.end(), i) != poles.end();
      CHECK(weight(i, Dimension(d)).is_pole() == listed);
    }
  }
}

TEST_CASE("weight: raw mode is continuous across D = -1") {
  for (int i = 2; i <= 30; ++i) {
    const double below = weight(i, Dimension(-1 - 1e-6), Normalization::RawGamma).value();
    const double above = weight(i, Dimension(-1 + 1e-6), Normalization::RawGamma).value();
    const double at = weight(i, Dimension(-1), Normalization::RawGamma).value();
    CHECK(rel(below, above) < 1e-4);
    CHECK(rel(at, 1.0 / (i * (i - 1.0))) < 1e-12);
  }
}

TEST_CASE("weight: overflow is a domain error, large i_max stays finite") {
  CHECK_THROWS_AS(weight(100000, Dimension(200)), DomainError);
  const auto seq = weight_sequence(Dimension(-0.5), 5000, Normalization::RawGamma);
  CHECK(std::isfinite(seq.values.back().value()));
}
