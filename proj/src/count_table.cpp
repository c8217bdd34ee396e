// Exact counting and uniform sampling of admissible occupancy vectors.
//
// Sub-levels u = 0..U-1 carry shifted integer energies y_0 = 0 <= y_1 <= ...
// C_u(k, e) is the number of ways to put k particles on sub-levels u..U-1
// with total energy <= e:
//
//   C_u(k, e) = C_{u+1}(k, e) + C_u(k - 1, e - y_u),   C_U(k, e) = [k == 0].
//
// For fixed (u, k) only e in [k y_u, min(E, k y_{U-1})] is stored: below the
// range the count is 0, above it the count no longer depends on e.
// Counts are fixed-width little-endian limb arrays; layers that do not fit the
// byte budget are dropped and recomputed from the nearest stored layer.

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <string>

#include "integer_grid.hpp"
#include "negdim/concentration.hpp"
#include "negdim/errors.hpp"
#include "negdim/parallel.hpp"

namespace negdim {

namespace detail {

using Limb = std::uint64_t;

struct Layer {
  std::vector<std::size_t> offset;  // entry offset of row k; size N + 2
  std::vector<Limb> data;
  bool empty() const noexcept { return offset.empty(); }
};

struct CountTableImpl {
  LevelSpectrum spec;
  EnsembleConstraints cons;
  BigCount count;
  std::int64_t scale = 1;
  std::vector<std::int64_t> y;        // sub-level energies, shifted and scaled
  std::vector<std::size_t> level_of;  // sub-level -> level index
  std::int64_t n = 0;
  std::int64_t ecap = 0;  // shifted, scaled energy budget
  std::size_t limbs = 1;
  std::size_t interval = 1;
  std::size_t entries = 0;
  std::size_t bytes = 0;
  std::vector<Layer> stored;  // index u in [0, U]; empty unless kept
  std::vector<Limb> zero;
  std::vector<Limb> one;

  CountTableImpl(LevelSpectrum s, EnsembleConstraints c) : spec(std::move(s)), cons(c) {}

  std::size_t sublevels() const noexcept { return y.size(); }
  std::int64_t top() const noexcept { return y.back(); }

  std::int64_t row_lo(std::size_t u, std::int64_t k) const noexcept { return k * y[u]; }
  std::int64_t row_hi(std::size_t, std::int64_t k) const noexcept {
    return std::min(ecap, k * top());
  }

  std::size_t layer_entries(std::size_t u) const {
    std::size_t total = 0;
    for (std::int64_t k = 0; k <= n; ++k) {
      const std::int64_t span = row_hi(u, k) - row_lo(u, k) + 1;
      if (span > 0) total += static_cast<std::size_t>(span);
    }
    return total;
  }

  // Count C_u(k, e) given layer u's storage (or terminal when u == U).
  const Limb* lookup(std::size_t u, const Layer& layer, std::int64_t k, std::int64_t e) const {
    if (e < 0) return zero.data();
    if (u == sublevels()) return k == 0 ? one.data() : zero.data();
    if (e < row_lo(u, k)) return zero.data();
    e = std::min(e, k * top());
    const std::int64_t lo = row_lo(u, k);
    if (e > row_hi(u, k)) return zero.data();  // unreachable for e <= ecap
    return layer.data.data() +
           (layer.offset[static_cast<std::size_t>(k)] + static_cast<std::size_t>(e - lo)) * limbs;
  }

  Layer make_layout(std::size_t u) const {
    Layer layer;
    layer.offset.resize(static_cast<std::size_t>(n) + 2, 0);
    for (std::int64_t k = 0; k <= n; ++k) {
      const std::int64_t span = row_hi(u, k) - row_lo(u, k) + 1;
      layer.offset[static_cast<std::size_t>(k) + 1] =
          layer.offset[static_cast<std::size_t>(k)] + static_cast<std::size_t>(std::max<std::int64_t>(span, 0));
    }
    layer.data.assign(layer.offset.back() * limbs, 0);
    return layer;
  }

  // Layer u from layer u + 1.
  Layer compute(std::size_t u, const Layer& next) const {
    Layer cur = make_layout(u);
    const std::int64_t step = y[u];
    for (std::int64_t k = 0; k <= n; ++k) {
      const std::int64_t lo = row_lo(u, k);
      const std::int64_t hi = row_hi(u, k);
      for (std::int64_t e = lo; e <= hi; ++e) {
        Limb* out = cur.data.data() +
                    (cur.offset[static_cast<std::size_t>(k)] + static_cast<std::size_t>(e - lo)) * limbs;
        const Limb* a = lookup(u + 1, next, k, e);
        const Limb* b = k > 0 ? lookup(u, cur, k - 1, e - step) : zero.data();
        Limb carry = 0;
        for (std::size_t w = 0; w < limbs; ++w) {
          const Limb s1 = a[w] + b[w];
          const Limb c1 = s1 < a[w] ? 1 : 0;
          const Limb s2 = s1 + carry;
          const Limb c2 = s2 < s1 ? 1 : 0;
          out[w] = s2;
          carry = c1 + c2;
        }
      }
    }
    return cur;
  }

  // Layer v (1 <= v <= U): the stored copy, or a recomputation into `scratch`
  // starting from the nearest stored layer above v.
  const Layer* layer_for(std::size_t v, Layer& scratch) const {
    if (v >= sublevels()) {
      scratch = Layer{};
      return &scratch;
    }
    if (!stored[v].empty()) return &stored[v];
    std::size_t c = v;
    while (c < sublevels() && stored[c].empty()) ++c;
    static const Layer terminal{};
    const Layer* above = c < sublevels() ? &stored[c] : &terminal;
    Layer work;
    for (std::size_t u = c; u-- > v;) {
      Layer cur = compute(u, *above);
      work = std::move(cur);
      above = &work;
    }
    scratch = std::move(work);
    return &scratch;
  }
};

}  // namespace detail

namespace {

using detail::Limb;

std::size_t bit_length(const BigCount& x) {
  return x == 0 ? 0 : boost::multiprecision::msb(x) + 1;
}

BigCount binomial(std::int64_t n, std::int64_t k) {
  BigCount r = 1;
  for (std::int64_t j = 1; j <= k; ++j) {
    r *= (n - k + j);
    r /= j;
  }
  return r;
}

bool less_than(const Limb* a, const Limb* b, std::size_t w) {
  for (std::size_t i = w; i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

void subtract_in_place(Limb* a, const Limb* b, std::size_t w) {
  Limb borrow = 0;
  for (std::size_t i = 0; i < w; ++i) {
    const Limb d1 = a[i] - b[i];
    const Limb b1 = a[i] < b[i] ? 1 : 0;
    const Limb d2 = d1 - borrow;
    const Limb b2 = d1 < borrow ? 1 : 0;
    a[i] = d2;
    borrow = b1 + b2;
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

const LevelSpectrum& CountTable::spectrum() const noexcept { return impl_->spec; }
const EnsembleConstraints& CountTable::constraints() const noexcept { return impl_->cons; }
const BigCount& CountTable::count() const noexcept { return impl_->count; }
std::int64_t CountTable::energy_scale() const noexcept { return impl_->scale; }
std::size_t CountTable::checkpoint_interval() const noexcept { return impl_->interval; }
std::size_t CountTable::stored_bytes() const noexcept { return impl_->bytes; }
std::size_t CountTable::total_entries() const noexcept { return impl_->entries; }

CountTable count_variants(const LevelSpectrum& spec, const EnsembleConstraints& cons,
                          const CountOptions& options) {
  if (cons.n < 0) throw DomainError("N must be nonnegative");
  if (!std::isfinite(cons.energy)) throw DomainError("E must be finite");
  auto impl = std::make_shared<detail::CountTableImpl>(spec, cons);
  impl->n = cons.n;

  const detail::IntegerGrid grid = detail::make_integer_grid(spec, options.max_energy_scale);
  impl->scale = grid.scale;
  impl->y = grid.y;
  impl->level_of = grid.level_of;
  impl->ecap = grid.cap(cons.energy, cons.n);

  const std::size_t U = impl->sublevels();
  const BigCount bound = binomial(cons.n + static_cast<std::int64_t>(U) - 1,
                                  static_cast<std::int64_t>(U) - 1);
  impl->limbs = std::max<std::size_t>(1, (bit_length(bound) + 64) / 64);
  impl->zero.assign(impl->limbs, 0);
  impl->one.assign(impl->limbs, 0);
  impl->one[0] = 1;
  impl->stored.resize(U + 1);

  if (impl->ecap < 0) {
    impl->count = 0;
    return CountTable(std::move(impl));
  }

  std::vector<std::size_t> sizes(U);
  std::size_t largest = 0;
  for (std::size_t u = 0; u < U; ++u) {
    sizes[u] = impl->layer_entries(u);
    impl->entries += sizes[u];
    largest = std::max(largest, sizes[u]);
    if (impl->entries > options.max_entries)
      throw BudgetError("counting table exceeds " + std::to_string(options.max_entries) +
                        " entries; shrink N, E or the level count");
  }
  const std::size_t entry_bytes = impl->limbs * sizeof(Limb);

  // Smallest checkpoint interval whose stored layers plus two working layers fit.
  std::size_t interval = 0;
  for (std::size_t k = 1; k <= std::max<std::size_t>(U, 1); ++k) {
    std::size_t kept = 0;
    for (std::size_t u = 1; u < U; ++u)
      if (u % k == 0) kept += sizes[u];
    const std::size_t working = k == 1 ? 0 : 3 * largest;
    if ((kept + working) * entry_bytes <= options.max_bytes) {
      interval = k;
      break;
    }
  }
  if (interval == 0)
    throw BudgetError("counting table does not fit in " + std::to_string(options.max_bytes) +
                      " bytes even with checkpointing");
  impl->interval = interval;

  detail::Layer above;  // terminal
  for (std::size_t u = U; u-- > 0;) {
    detail::Layer cur = impl->compute(u, above);
    if (u >= 1 && u % interval == 0) {
      impl->bytes += cur.data.size() * sizeof(Limb);
      impl->stored[u] = cur;
    }
    above = std::move(cur);
  }
  const Limb* total = impl->lookup(0, above, impl->n, impl->ecap);
  boost::multiprecision::import_bits(impl->count, total, total + impl->limbs, 64, false);
  return CountTable(std::move(impl));
}

std::vector<VariantSample> sample_variants(const CountTable& table, const ConcentrationConfig& cfg) {
  return sample_variants_seeded(table, cfg.n_samples, cfg.seed);
}

std::vector<VariantSample> sample_variants_seeded(const CountTable& table, std::size_t n_samples,
                                                  std::uint64_t seed) {
  const auto& t = *table.impl_;
  if (table.count() == 0) throw DomainError("no admissible variants to sample");
  const std::size_t w = t.limbs;
  const std::size_t s = t.spec.size();

  // Root count as limbs, plus its bit length for rejection sampling.
  std::vector<Limb> total(w, 0);
  boost::multiprecision::export_bits(table.count(), total.begin(), 64, false);
  const std::size_t bits = bit_length(table.count());
  const std::size_t top_limb = (bits - 1) / 64;
  const Limb top_mask = (bits % 64 == 0) ? ~Limb{0} : ((Limb{1} << (bits % 64)) - 1);

  struct Walker {
    std::vector<Limb> rank;
    std::int64_t n;
    std::int64_t e;
  };
  std::vector<Walker> walkers(n_samples);
  std::vector<VariantSample> out(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(i))));
    std::vector<Limb> r(w, 0);
    do {
      std::fill(r.begin(), r.end(), 0);
      for (std::size_t j = 0; j <= top_limb; ++j) r[j] = rng();
      r[top_limb] &= top_mask;
    } while (!less_than(r.data(), total.data(), w));
    walkers[i] = {std::move(r), t.n, t.ecap};
    out[i].counts.assign(s, 0);
  });

  const std::size_t U = t.sublevels();
  for (std::size_t u = 0; u < U; ++u) {
    detail::Layer scratch;
    const detail::Layer& next = *t.layer_for(u + 1, scratch);
    parallel_for(n_samples, [&](std::size_t i) {
      auto& wk = walkers[i];
      while (wk.n > 0) {
        const Limb* c = t.lookup(u + 1, next, wk.n, wk.e);
        if (less_than(wk.rank.data(), c, w)) break;
        subtract_in_place(wk.rank.data(), c, w);
        --wk.n;
        wk.e -= t.y[u];
        ++out[i].counts[t.level_of[u]];
      }
    });
  }
  for (const auto& wk : walkers)
    if (wk.n != 0 || wk.e < 0)
      throw std::logic_error("unranking walk ended outside the admissible set");
  return out;
}

}  // namespace negdim
