#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "overlap/error.hpp"
#include "overlap/numeric.hpp"

namespace overlap {

// A subset of [n]: element i (1-based) is present iff bit i-1 is set.
using SetWord = std::uint64_t;

inline constexpr int kMaxGround = 62;
inline constexpr int kDefaultCap = 24;

inline int popcount(SetWord s) { return std::popcount(s); }
inline bool is_subset(SetWord a, SetWord b) { return (a & ~b) == 0; }
inline SetWord lowest_bit(SetWord s) { return s & (~s + 1); }

// Builds a mask from 1-based elements.
inline SetWord set_of(std::initializer_list<int> elements) {
  SetWord s = 0;
  for (int e : elements) {
    require(e >= 1 && e <= kMaxGround, ErrorCode::invalid_argument,
            "element " + std::to_string(e) + " outside [1, 62]");
    s |= SetWord{1} << (e - 1);
  }
  return s;
}

// Mask of the interval [lo, hi] of 1-based elements; empty when hi < lo.
inline SetWord interval(int lo, int hi) {
  SetWord s = 0;
  for (int e = lo; e <= hi; ++e) s |= SetWord{1} << (e - 1);
  return s;
}

inline std::vector<int> elements_of(SetWord s) {
  std::vector<int> out;
  while (s) {
    out.push_back(std::countr_zero(s) + 1);
    s &= s - 1;
  }
  return out;
}

inline std::string format_set(SetWord s) {
  if (s == 0) return "{}";
  std::string out = "{";
  bool first = true;
  for (int e : elements_of(s)) {
    if (!first) out += ",";
    out += std::to_string(e);
    first = false;
  }
  return out + "}";
}

// Calls fn(subset) for every subset of `base` with at most `t` elements.
template <typename Fn>
void for_each_subset_upto(SetWord base, int t, Fn&& fn) {
  std::vector<SetWord> bits;
  for (SetWord s = base; s; s &= s - 1) bits.push_back(lowest_bit(s));
  auto rec = [&](auto&& self, std::size_t from, SetWord cur, int left) -> void {
    fn(cur);
    if (left == 0) return;
    for (std::size_t i = from; i < bits.size(); ++i) self(self, i + 1, cur | bits[i], left - 1);
  };
  rec(rec, 0, 0, t);
}

// Calls fn(subset) for every subset of `base` with exactly `t` elements.
template <typename Fn>
void for_each_subset_of_size(SetWord base, int t, Fn&& fn) {
  std::vector<SetWord> bits;
  for (SetWord s = base; s; s &= s - 1) bits.push_back(lowest_bit(s));
  if (t < 0 || static_cast<std::size_t>(t) > bits.size()) return;
  auto rec = [&](auto&& self, std::size_t from, SetWord cur, int left) -> void {
    if (left == 0) {
      fn(cur);
      return;
    }
    for (std::size_t i = from; i + left <= bits.size(); ++i)
      self(self, i + 1, cur | bits[i], left - 1);
  };
  rec(rec, 0, 0, t);
}

class GroundSet {
 public:
  constexpr GroundSet() = default;
  explicit GroundSet(int n) : n_(n) {
    require(n >= 0 && n <= kMaxGround, ErrorCode::invalid_argument,
            "ground set size " + std::to_string(n) + " outside [0, 62]");
  }

  int n() const { return n_; }
  SetWord full() const { return n_ == 0 ? 0 : (~SetWord{0} >> (64 - n_)); }
  bool contains(SetWord s) const { return is_subset(s, full()); }

  friend bool operator==(GroundSet a, GroundSet b) { return a.n_ == b.n_; }

 private:
  int n_ = 0;
};

// A deduplicated family of subsets of one ground set, sorted by mask value.
class Family {
 public:
  Family() = default;
  explicit Family(GroundSet ground) : ground_(ground) {}
  Family(GroundSet ground, std::vector<SetWord> sets) : ground_(ground), sets_(std::move(sets)) {
    for (SetWord s : sets_)
      require(ground_.contains(s), ErrorCode::invalid_argument,
              "set " + format_set(s) + " outside ground set [" + std::to_string(ground_.n()) + "]");
    std::sort(sets_.begin(), sets_.end());
    sets_.erase(std::unique(sets_.begin(), sets_.end()), sets_.end());
  }
  Family(GroundSet ground, std::initializer_list<SetWord> sets)
      : Family(ground, std::vector<SetWord>(sets)) {}

  // 2^X, materialized only when |X| <= cap.
  static Family power_set(GroundSet ground, SetWord x, int cap = kDefaultCap) {
    require(popcount(x) <= cap, ErrorCode::cap_exceeded,
            "2^X with |X| = " + std::to_string(popcount(x)) + " above cap " + std::to_string(cap));
    std::vector<SetWord> out;
    out.reserve(std::size_t{1} << popcount(x));
    SetWord sub = 0;
    do {
      out.push_back(sub);
      sub = (sub - x) & x;
    } while (sub != 0);
    return Family(ground, std::move(out));
  }
  static Family power_set(GroundSet ground, int cap = kDefaultCap) {
    return power_set(ground, ground.full(), cap);
  }

  // C(X, <= t)
  static Family up_to(GroundSet ground, SetWord x, int t) {
    std::vector<SetWord> out;
    for_each_subset_upto(x, t, [&](SetWord s) { out.push_back(s); });
    return Family(ground, std::move(out));
  }

  // C(X, t)
  static Family layer(GroundSet ground, SetWord x, int t) {
    std::vector<SetWord> out;
    for_each_subset_of_size(x, t, [&](SetWord s) { out.push_back(s); });
    return Family(ground, std::move(out));
  }

  GroundSet ground() const { return ground_; }
  const std::vector<SetWord>& sets() const { return sets_; }
  std::size_t size() const { return sets_.size(); }
  bool empty() const { return sets_.empty(); }
  auto begin() const { return sets_.begin(); }
  auto end() const { return sets_.end(); }

  bool contains(SetWord s) const { return std::binary_search(sets_.begin(), sets_.end(), s); }

  // Members of exactly t elements.
  Family uniform_layer(int t) const {
    std::vector<SetWord> out;
    for (SetWord s : sets_)
      if (popcount(s) == t) out.push_back(s);
    return Family(ground_, std::move(out));
  }

  friend bool operator==(const Family& a, const Family& b) {
    return a.ground_ == b.ground_ && a.sets_ == b.sets_;
  }

 private:
  GroundSet ground_;
  std::vector<SetWord> sets_;
};

inline void require_same_ground(const Family& a, const Family& b) {
  require(a.ground() == b.ground(), ErrorCode::ground_mismatch,
          "[" + std::to_string(a.ground().n()) + "] vs [" + std::to_string(b.ground().n()) + "]");
}

inline Family family_union(const Family& a, const Family& b) {
  require_same_ground(a, b);
  std::vector<SetWord> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Family(a.ground(), std::move(out));
}

inline Family family_intersection(const Family& a, const Family& b) {
  require_same_ground(a, b);
  std::vector<SetWord> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Family(a.ground(), std::move(out));
}

inline bool family_includes(const Family& super, const Family& sub) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

// Symmetric non-negative matrix m indexed by unordered pairs of [ell].
// Family indices are 0-based in the C++ API.
class OverlapSpec {
 public:
  OverlapSpec() = default;
  explicit OverlapSpec(int ell, int uniform = 0) : ell_(ell) {
    require(ell >= 1 && ell <= 64, ErrorCode::invalid_argument, "ell must be in [1, 64]");
    require(uniform >= 0, ErrorCode::invalid_argument, "negative overlap bound");
    entries_.assign(static_cast<std::size_t>(ell) * (ell - 1) / 2, uniform);
  }

  static OverlapSpec uniform(int ell, int m) { return OverlapSpec(ell, m); }

  int ell() const { return ell_; }
  int at(int k1, int k2) const { return entries_[index(k1, k2)]; }
  void set(int k1, int k2, int value) {
    require(value >= 0, ErrorCode::invalid_argument, "negative overlap bound");
    entries_[index(k1, k2)] = value;
  }

  // Pairs (k1 < k2) in order (0,1), (0,2), ..., (1,2), ...
  std::vector<std::pair<int, int>> pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < ell_; ++a)
      for (int b = a + 1; b < ell_; ++b) out.emplace_back(a, b);
    return out;
  }

  int total() const {
    int s = 0;
    for (int v : entries_) s += v;
    return s;
  }

  std::optional<int> uniform_value() const {
    if (entries_.empty()) return std::nullopt;
    for (int v : entries_)
      if (v != entries_.front()) return std::nullopt;
    return entries_.front();
  }

  friend bool operator==(const OverlapSpec&, const OverlapSpec&) = default;

 private:
  std::size_t index(int k1, int k2) const {
    require(k1 != k2 && k1 >= 0 && k2 >= 0 && k1 < ell_ && k2 < ell_, ErrorCode::invalid_argument,
            "invalid family pair (" + std::to_string(k1) + ", " + std::to_string(k2) + ")");
    if (k1 > k2) std::swap(k1, k2);
    // row offset of k1 in the packed upper triangle
    return static_cast<std::size_t>(k1) * (2 * ell_ - k1 - 1) / 2 + (k2 - k1 - 1);
  }

  int ell_ = 0;
  std::vector<int> entries_;
};

struct FamilySystem {
  GroundSet ground;
  std::vector<Family> families;
  OverlapSpec spec;

  FamilySystem() = default;
  FamilySystem(GroundSet g, std::vector<Family> fams, OverlapSpec s)
      : ground(g), families(std::move(fams)), spec(std::move(s)) {
    require(static_cast<int>(families.size()) == spec.ell(), ErrorCode::invalid_argument,
            "number of families differs from spec dimension");
    for (const auto& f : families)
      require(f.ground() == ground, ErrorCode::ground_mismatch, "family ground differs from system ground");
  }

  int ell() const { return spec.ell(); }
  const Family& operator[](int k) const { return families.at(k); }

  friend bool operator==(const FamilySystem&, const FamilySystem&) = default;
};

inline BigInt system_product(const FamilySystem& sys) {
  BigInt p = 1;
  for (const auto& f : sys.families) p *= f.size();
  return p;
}

// ---------------------------------------------------------------------------
// Family algebra

namespace detail {

// All x op y; on small grounds duplicates are folded through a bitmap of 2^n
// instead of sorting |a|·|b| words.
template <class Op>
Family pairwise(const Family& a, const Family& b, Op op) {
  require_same_ground(a, b);
  const int n = a.ground().n();
  std::vector<SetWord> out;
  if (n <= 20 && a.size() * b.size() > (std::size_t{1} << n) / 8) {
    std::vector<bool> seen(std::size_t{1} << n);
    for (SetWord x : a)
      for (SetWord y : b) seen[op(x, y)] = true;
    for (std::size_t s = 0; s < seen.size(); ++s)
      if (seen[s]) out.push_back(s);
  } else {
    out.reserve(a.size() * b.size());
    for (SetWord x : a)
      for (SetWord y : b) out.push_back(op(x, y));
  }
  return Family(a.ground(), std::move(out));
}

}  // namespace detail

inline Family wedge(const Family& a, const Family& b) {
  return detail::pairwise(a, b, [](SetWord x, SetWord y) { return x & y; });
}

inline Family vee(const Family& a, const Family& b) {
  return detail::pairwise(a, b, [](SetWord x, SetWord y) { return x | y; });
}

// Fold of vee; the empty fold is {∅}.
inline Family vee_all(GroundSet ground, std::span<const Family> fams) {
  Family acc(ground, {SetWord{0}});
  for (const auto& f : fams) acc = vee(acc, f);
  return acc;
}

inline Family wedge_all(std::span<const Family> fams) {
  require(!fams.empty(), ErrorCode::invalid_argument, "wedge over an empty list");
  Family acc = fams.front();
  for (std::size_t i = 1; i < fams.size(); ++i) acc = wedge(acc, fams[i]);
  return acc;
}

enum class Selector { restrict, require, avoid, trace };

// restrict: F|_B; require: F(A); avoid: F(Ā); trace: F(A, B) with A ⊆ B.
inline Family select(const Family& f, Selector mode, SetWord a, SetWord b = 0) {
  const GroundSet g = f.ground();
  require(g.contains(a) && g.contains(b), ErrorCode::invalid_argument, "selector mask outside ground set");
  std::vector<SetWord> out;
  switch (mode) {
    case Selector::restrict:
      for (SetWord s : f) out.push_back(s & b);
      break;
    case Selector::require:
      for (SetWord s : f)
        if (is_subset(a, s)) out.push_back(s & ~a);
      break;
    case Selector::avoid:
      for (SetWord s : f)
        if ((s & a) == 0) out.push_back(s);
      break;
    case Selector::trace:
      require(is_subset(a, b), ErrorCode::invalid_argument, "trace selector needs A ⊆ B");
      for (SetWord s : f)
        if ((s & b) == a) out.push_back(s & ~b);
      break;
  }
  return Family(g, std::move(out));
}

// ---------------------------------------------------------------------------
// Overlap predicate

struct OverlapWitness {
  int k1 = 0;
  int k2 = 0;
  SetWord set1 = 0;
  SetWord set2 = 0;
};

struct OverlapReport {
  bool ok = true;
  std::optional<OverlapWitness> witness;
};

namespace detail {

inline std::vector<SetWord> larger_than(const Family& f, int m) {
  std::vector<SetWord> out;
  for (SetWord s : f)
    if (popcount(s) > m) out.push_back(s);
  return out;
}

// True iff some member of `a` and some member of `b` share more than m elements.
inline bool pair_violates(const std::vector<SetWord>& a, const std::vector<SetWord>& b, int m) {
  if (a.empty() || b.empty()) return false;
  const double pairwise = static_cast<double>(a.size()) * static_cast<double>(b.size());
  double via_subsets = 0;
  for (SetWord s : a) via_subsets += static_cast<double>(binom_u64(popcount(s), m + 1));
  for (SetWord s : b) via_subsets += static_cast<double>(binom_u64(popcount(s), m + 1));
  if (pairwise <= 4 * via_subsets) {
    for (SetWord x : a)
      for (SetWord y : b)
        if (popcount(x & y) > m) return true;
    return false;
  }
  // A violation exists iff a common (m+1)-subset lies in a member of each side.
  std::unordered_set<SetWord> seen;
  for (SetWord s : a) for_each_subset_of_size(s, m + 1, [&](SetWord t) { seen.insert(t); });
  bool hit = false;
  for (SetWord s : b) {
    for_each_subset_of_size(s, m + 1, [&](SetWord t) { hit = hit || seen.count(t); });
    if (hit) return true;
  }
  return false;
}

}  // namespace detail

// Checks |F ∩ F'| <= m_{k,k'} for all k != k'. The witness is the first violating
// (k < k', F, F') in index order and then mask order.
inline OverlapReport check_overlap(const FamilySystem& sys) {
  const int ell = sys.ell();
  for (int k1 = 0; k1 < ell; ++k1) {
    for (int k2 = k1 + 1; k2 < ell; ++k2) {
      const int m = sys.spec.at(k1, k2);
      const auto a = detail::larger_than(sys.families[k1], m);
      const auto b = detail::larger_than(sys.families[k2], m);
      if (!detail::pair_violates(a, b, m)) continue;
      for (SetWord x : a)
        for (SetWord y : b)
          if (popcount(x & y) > m) return {false, OverlapWitness{k1, k2, x, y}};
      throw Error(ErrorCode::internal, "overlap violation detected but no witness found");
    }
  }
  return {true, std::nullopt};
}

// ---------------------------------------------------------------------------
// Down-closure and degrees

inline Family down_closure(const Family& f) {
  std::unordered_set<SetWord> seen(f.begin(), f.end());
  std::vector<SetWord> stack(f.begin(), f.end());
  while (!stack.empty()) {
    SetWord s = stack.back();
    stack.pop_back();
    for (SetWord rest = s; rest; rest &= rest - 1) {
      SetWord sub = s & ~lowest_bit(rest);
      if (seen.insert(sub).second) stack.push_back(sub);
    }
  }
  return Family(f.ground(), std::vector<SetWord>(seen.begin(), seen.end()));
}

// Checks only single-element removals, which suffices for down-closedness.
inline bool is_down_closed(const Family& f) {
  for (SetWord s : f)
    for (SetWord rest = s; rest; rest &= rest - 1)
      if (!f.contains(s & ~lowest_bit(rest))) return false;
  return true;
}

// Normalized degree |f(S)| / |f|.
inline Rational degree(const Family& f, SetWord s) {
  require(!f.empty(), ErrorCode::invalid_argument, "degree of an empty family");
  std::size_t hits = 0;
  for (SetWord x : f)
    if (is_subset(s, x)) ++hits;
  return ratio(hits, f.size());
}

// Fraction of F in family k1 with |F ∩ center2| >= s.
inline Rational directed_degree(const FamilySystem& sys, int k1, int k2, SetWord center2, int s) {
  require(k1 >= 0 && k2 >= 0 && k1 < sys.ell() && k2 < sys.ell() && k1 != k2, ErrorCode::invalid_argument,
          "invalid family indices");
  require(s >= 0, ErrorCode::invalid_argument, "negative threshold");
  const Family& f = sys.families[k1];
  require(!f.empty(), ErrorCode::invalid_argument, "directed degree of an empty family");
  std::size_t hits = 0;
  for (SetWord x : f)
    if (popcount(x & center2) >= s) ++hits;
  return ratio(hits, f.size());
}

// ---------------------------------------------------------------------------
// Correlation inequality: prod |A_k| <= prod_{k} |vee_{|S|=k} wedge_{s in S} A_s|.

struct RinottReport {
  BigInt lhs;
  BigInt rhs;
  bool holds = true;
};

inline RinottReport rinott_check(std::span<const Family> fams) {
  require(!fams.empty(), ErrorCode::invalid_argument, "empty family list");
  for (const auto& f : fams) require_same_ground(fams.front(), f);
  const GroundSet g = fams.front().ground();
  const int count = static_cast<int>(fams.size());
  require(count <= 20, ErrorCode::invalid_argument, "too many families");

  RinottReport report;
  report.lhs = 1;
  for (const auto& f : fams) report.lhs *= f.size();

  // Layer k is the vee-fold over all k-subsets S of the wedge of A_s, s in S.
  report.rhs = 1;
  for (int k = 1; k <= count; ++k) {
    Family acc(g, {SetWord{0}});
    for (std::uint32_t pick = 1; pick < (1u << count); ++pick) {
      if (std::popcount(pick) != k) continue;
      std::vector<Family> chosen;
      for (int i = 0; i < count; ++i)
        if (pick >> i & 1u) chosen.push_back(fams[i]);
      acc = vee(acc, wedge_all(chosen));
    }
    report.rhs *= acc.size();
  }
  report.holds = report.lhs <= report.rhs;
  if (!report.holds)
    throw Error(ErrorCode::internal, "correlation inequality violated: lhs " + report.lhs.str() +
                                         " > rhs " + report.rhs.str());
  return report;
}

}  // namespace overlap
