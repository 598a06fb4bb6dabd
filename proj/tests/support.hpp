#pragma once

// Reference implementations and random generators shared by the tests. The
// oracles here are deliberately naive: direct transcriptions of definitions.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "overlap/coloring.hpp"
#include "overlap/core.hpp"
#include "overlap/tournament.hpp"

namespace oracle {

using overlap::BigInt;
using overlap::EdgeColoring;
using overlap::Family;
using overlap::FamilySystem;
using overlap::GroundSet;
using overlap::SetWord;

inline int bits(SetWord s) { return __builtin_popcountll(s); }

inline std::vector<SetWord> sorted(std::set<SetWord> s) { return {s.begin(), s.end()}; }

inline std::vector<SetWord> all_subsets(int n) {
  std::vector<SetWord> out;
  for (SetWord s = 0; s < (SetWord{1} << n); ++s) out.push_back(s);
  return out;
}

inline std::vector<SetWord> naive_wedge(const Family& a, const Family& b) {
  std::set<SetWord> out;
  for (SetWord x : a)
    for (SetWord y : b) out.insert(x & y);
  return sorted(out);
}

inline std::vector<SetWord> naive_vee(const Family& a, const Family& b) {
  std::set<SetWord> out;
  for (SetWord x : a)
    for (SetWord y : b) out.insert(x | y);
  return sorted(out);
}

inline bool naive_overlapping(const FamilySystem& sys) {
  for (int a = 0; a < sys.ell(); ++a)
    for (int b = 0; b < sys.ell(); ++b) {
      if (a == b) continue;
      for (SetWord x : sys.families[a])
        for (SetWord y : sys.families[b])
          if (bits(x & y) > sys.spec.at(a, b)) return false;
    }
  return true;
}

inline bool naive_down_closed(const Family& f) {
  for (SetWord x : f)
    for (SetWord y = 0; y <= x; ++y)
      if ((y & ~x) == 0 && !f.contains(y)) return false;
  return true;
}

// Colour of an edge by linear search over the colouring's edge list.
inline int colour_of(const EdgeColoring& c, SetWord e) {
  for (std::size_t i = 0; i < c.edge_count(); ++i)
    if (c.edges()[i] == e) return c.colors()[i];
  return -1;
}

// S is a colour-i clique iff every (m+1)-subset of S has colour i.
inline std::vector<std::vector<SetWord>> naive_cliques(const EdgeColoring& c) {
  const int n = c.n(), r = c.arity();
  std::vector<std::vector<SetWord>> out(c.ell());
  for (SetWord s = 0; s < (SetWord{1} << n); ++s) {
    for (int col = 0; col < c.ell(); ++col) {
      bool ok = true;
      for (SetWord t = s;; t = (t - 1) & s) {
        if (bits(t) == r && colour_of(c, t) != col) {
          ok = false;
          break;
        }
        if (t == 0) break;
      }
      if (ok) out[col].push_back(s);
    }
  }
  return out;
}

inline BigInt naive_product(const EdgeColoring& c) {
  BigInt p = 1;
  for (const auto& v : naive_cliques(c)) p *= v.size();
  return p;
}

// max over all ell^{C(n, m+1)} colourings.
inline BigInt brute_best(int n, int ell, int m) {
  EdgeColoring c(GroundSet(n), m + 1, ell);
  const std::size_t e = c.edge_count();
  std::vector<int> digits(e, 0);
  BigInt best = 0;
  while (true) {
    for (std::size_t i = 0; i < e; ++i) c.set_color(i, digits[i]);
    best = std::max(best, naive_product(c));
    std::size_t i = 0;
    while (i < e && ++digits[i] == ell) digits[i++] = 0;
    if (i == e) break;
  }
  return best;
}

// r(T): pairs {a, b} with some vertex pointing at both.
inline int naive_r(const overlap::OrientedGraph& t) {
  int r = 0;
  for (int a = 0; a < t.ell(); ++a)
    for (int b = a + 1; b < t.ell(); ++b) {
      bool common = false;
      for (int v = 0; v < t.ell(); ++v) common = common || (t.has_edge(v, a) && t.has_edge(v, b));
      r += common;
    }
  return r;
}

inline BigInt naive_binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// ---------------------------------------------------------------------------
// generators

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  std::uint64_t below(std::uint64_t k) { return std::uniform_int_distribution<std::uint64_t>(0, k - 1)(rng); }
  int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

  SetWord subset(int n, double p = 0.5) {
    SetWord s = 0;
    for (int i = 0; i < n; ++i)
      if (coin(p)) s |= SetWord{1} << i;
    return s;
  }

  Family family(int n, int count, double p = 0.5) {
    std::vector<SetWord> v;
    for (int i = 0; i < count; ++i) v.push_back(subset(n, p));
    return Family(GroundSet(n), v);
  }

  Family down_closed(int n, int generators, double p = 0.4) {
    return overlap::down_closure(family(n, generators, p));
  }

  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), rng);
    return p;
  }

  EdgeColoring coloring(int n, int arity, int ell) {
    EdgeColoring c(GroundSet(n), arity, ell);
    for (std::size_t i = 0; i < c.edge_count(); ++i) c.set_color(i, range(0, ell - 1));
    return c;
  }

  // Random overlapping system built greedily: each candidate set joins a
  // family only if the system stays overlapping, then everything is closed
  // downwards (down-closure never creates a violation).
  FamilySystem overlapping_system(int n, int ell, int max_m, int attempts) {
    overlap::OverlapSpec spec(ell);
    for (auto [a, b] : spec.pairs()) spec.set(a, b, range(0, max_m));
    std::vector<std::vector<SetWord>> fams(ell, std::vector<SetWord>{0});
    for (int t = 0; t < attempts; ++t) {
      const int k = range(0, ell - 1);
      const SetWord s = subset(n, 0.5);
      bool ok = true;
      for (int o = 0; o < ell && ok; ++o) {
        if (o == k) continue;
        for (SetWord y : fams[o])
          if (bits(s & y) > spec.at(k, o)) {
            ok = false;
            break;
          }
      }
      if (ok) fams[k].push_back(s);
    }
    std::vector<Family> out;
    for (auto& v : fams) out.push_back(overlap::down_closure(Family(GroundSet(n), v)));
    return FamilySystem(GroundSet(n), std::move(out), spec);
  }
};

inline SetWord permute(SetWord s, const std::vector<int>& p) {
  SetWord out = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (s >> i & 1u) out |= SetWord{1} << p[i];
  return out;
}

inline Family permute(const Family& f, const std::vector<int>& p) {
  std::vector<SetWord> v;
  for (SetWord s : f) v.push_back(permute(s, p));
  return Family(f.ground(), v);
}

}  // namespace oracle
