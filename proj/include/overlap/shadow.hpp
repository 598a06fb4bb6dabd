#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

#include "overlap/core.hpp"

namespace overlap {

// A <_lex B iff min(A Δ B) ∈ A.
inline std::strong_ordering lex_compare(SetWord a, SetWord b) {
  if (a == b) return std::strong_ordering::equal;
  const SetWord first = lowest_bit(a ^ b);
  return (a & first) ? std::strong_ordering::less : std::strong_ordering::greater;
}

struct UniformFamily {
  GroundSet ground;
  int k = 0;
  Family sets;

  UniformFamily() = default;
  UniformFamily(GroundSet g, int uniformity, Family f) : ground(g), k(uniformity), sets(std::move(f)) {
    require(sets.ground() == ground, ErrorCode::ground_mismatch, "family ground differs");
    require(k >= 0 && k <= ground.n(), ErrorCode::invalid_argument, "uniformity outside [0, n]");
    for (SetWord s : sets)
      require(popcount(s) == k, ErrorCode::invalid_argument, "member " + format_set(s) + " has wrong size");
  }
  std::size_t size() const { return sets.size(); }
};

// k-subsets of [n] in lex order, produced by successor steps on sorted tuples.
class LexEnumerator {
 public:
  LexEnumerator(int n, int k) : n_(n), k_(k), tuple_(k) {
    for (int i = 0; i < k; ++i) tuple_[i] = i;
    done_ = k > n;
  }
  bool done() const { return done_; }
  SetWord current() const {
    SetWord s = 0;
    for (int e : tuple_) s |= SetWord{1} << e;
    return s;
  }
  void next() {
    int i = k_ - 1;
    while (i >= 0 && tuple_[i] == n_ - k_ + i) --i;
    if (i < 0) {
      done_ = true;
      return;
    }
    ++tuple_[i];
    for (int j = i + 1; j < k_; ++j) tuple_[j] = tuple_[j - 1] + 1;
  }

 private:
  int n_, k_;
  std::vector<int> tuple_;
  bool done_ = false;
};

inline UniformFamily initial_segment(int n, int k, std::uint64_t size) {
  const GroundSet g(n);
  require(k >= 0 && k <= n, ErrorCode::invalid_argument, "uniformity outside [0, n]");
  require(size <= binom_u64(n, k), ErrorCode::invalid_argument, "segment larger than C(n, k)");
  std::vector<SetWord> out;
  out.reserve(size);
  for (LexEnumerator it(n, k); out.size() < size; it.next()) out.push_back(it.current());
  return UniformFamily(g, k, Family(g, std::move(out)));
}

inline UniformFamily upper_shadow(const UniformFamily& f) {
  require(f.k < f.ground.n(), ErrorCode::invalid_argument, "upper shadow needs k < n");
  const SetWord full = f.ground.full();
  std::vector<SetWord> out;
  for (SetWord s : f.sets)
    for (SetWord free = full & ~s; free; free &= free - 1) out.push_back(s | lowest_bit(free));
  return UniformFamily(f.ground, f.k + 1, Family(f.ground, std::move(out)));
}

inline UniformFamily lower_shadow(const UniformFamily& f) {
  require(f.k > 0, ErrorCode::invalid_argument, "lower shadow needs k > 0");
  std::vector<SetWord> out;
  for (SetWord s : f.sets)
    for (SetWord rest = s; rest; rest &= rest - 1) out.push_back(s & ~lowest_bit(rest));
  return UniformFamily(f.ground, f.k - 1, Family(f.ground, std::move(out)));
}

// Element-wise complement inside [n].
inline UniformFamily complement_image(const UniformFamily& f) {
  std::vector<SetWord> out;
  for (SetWord s : f.sets) out.push_back(f.ground.full() & ~s);
  return UniformFamily(f.ground, f.ground.n() - f.k, Family(f.ground, std::move(out)));
}

// ---------------------------------------------------------------------------
// Minimality of lex initial segments

enum class KKMode { exhaustive, sample };

struct KKOptions {
  KKMode mode = KKMode::exhaustive;
  std::uint64_t seed = 1;
  std::uint64_t samples = 10000;
  // Exhaustive enumeration needs C(n,k) <= this bound.
  int exhaustive_ground_cap = 12;
};

struct KKReport {
  bool holds = true;
  std::uint64_t size = 0;
  std::uint64_t segment_shadow = 0;
  std::uint64_t families_checked = 0;
  std::uint64_t min_shadow_seen = 0;
  std::vector<SetWord> counterexample;
};

namespace detail {

// Shadows of the k-sets as bitsets over the lex ranks of (k+1)-sets.
struct ShadowTable {
  int words = 0;
  std::vector<SetWord> k_sets;
  std::vector<std::uint64_t> bits;  // k_sets.size() rows of `words` words

  ShadowTable(int n, int k) {
    std::unordered_map<SetWord, std::size_t> rank_up;
    std::size_t r = 0;
    if (k < n)
      for (LexEnumerator it(n, k + 1); !it.done(); it.next()) rank_up[it.current()] = r++;
    words = static_cast<int>((r + 63) / 64);
    for (LexEnumerator it(n, k); !it.done(); it.next()) k_sets.push_back(it.current());
    bits.assign(k_sets.size() * words, 0);
    const SetWord full = GroundSet(n).full();
    for (std::size_t i = 0; i < k_sets.size(); ++i)
      for (SetWord free = full & ~k_sets[i]; free; free &= free - 1) {
        const std::size_t up = rank_up.at(k_sets[i] | lowest_bit(free));
        bits[i * words + up / 64] |= std::uint64_t{1} << (up % 64);
      }
  }

  // |∂_u| of the family given by indices into k_sets.
  std::uint64_t shadow_size(const std::vector<std::size_t>& picks, std::vector<std::uint64_t>& scratch) const {
    scratch.assign(words, 0);
    for (std::size_t i : picks)
      for (int w = 0; w < words; ++w) scratch[w] |= bits[i * words + w];
    std::uint64_t total = 0;
    for (auto w : scratch) total += std::popcount(w);
    return total;
  }
};

}  // namespace detail

// Checks |∂_u(initial segment)| <= |∂_u(F)| for all (exhaustive) or sampled
// families F ⊂ C([n], k) with |F| = size.
inline KKReport kk_verify(int n, int k, std::uint64_t size, const KKOptions& opts = {}) {
  require(n >= 1 && n <= 24, ErrorCode::invalid_argument, "kk_verify supports 1 <= n <= 24");
  require(k >= 0 && k < n, ErrorCode::invalid_argument, "kk_verify needs 0 <= k < n");
  const std::uint64_t total = binom_u64(n, k);
  require(size <= total, ErrorCode::invalid_argument, "size larger than C(n, k)");
  require(total <= 4096, ErrorCode::cap_exceeded, "C(n, k) above 4096 sets");

  const detail::ShadowTable table(n, k);
  std::vector<std::uint64_t> scratch;
  KKReport report;
  report.size = size;
  {
    std::vector<std::size_t> segment(size);
    for (std::uint64_t i = 0; i < size; ++i) segment[i] = i;  // lex ranks 0..size-1
    report.segment_shadow = table.shadow_size(segment, scratch);
  }
  report.min_shadow_seen = report.segment_shadow;

  auto record = [&](const std::vector<std::size_t>& picks) {
    const auto s = table.shadow_size(picks, scratch);
    ++report.families_checked;
    if (s < report.min_shadow_seen) report.min_shadow_seen = s;
    if (s < report.segment_shadow && report.holds) {
      report.holds = false;
      for (std::size_t i : picks) report.counterexample.push_back(table.k_sets[i]);
    }
  };

  if (opts.mode == KKMode::exhaustive) {
    require(total <= static_cast<std::uint64_t>(opts.exhaustive_ground_cap), ErrorCode::budget_exceeded,
            "exhaustive mode needs C(n,k) <= " + std::to_string(opts.exhaustive_ground_cap) +
                "; use sample mode");
    std::vector<std::size_t> picks;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << total); ++mask) {
      if (static_cast<std::uint64_t>(std::popcount(mask)) != size) continue;
      picks.clear();
      for (std::uint64_t i = 0; i < total; ++i)
        if (mask >> i & 1u) picks.push_back(i);
      record(picks);
    }
  } else {
    // One stream per (seed, size) so results do not depend on how sizes are scheduled.
    std::mt19937_64 rng(opts.seed * 0x9E3779B97F4A7C15ull + size);
    std::vector<std::size_t> pool(total);
    std::vector<std::size_t> picks;
    for (std::uint64_t s = 0; s < opts.samples; ++s) {
      for (std::size_t i = 0; i < total; ++i) pool[i] = i;
      for (std::uint64_t i = 0; i < size; ++i) {
        const std::uint64_t j = i + rng() % (total - i);
        std::swap(pool[i], pool[j]);
      }
      picks.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
      record(picks);
    }
  }
  return report;
}

}  // namespace overlap
