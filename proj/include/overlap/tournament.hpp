#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "overlap/core.hpp"

namespace overlap {

// Oriented graph on vertices 0..ell-1; vertex sets are bit masks.
class OrientedGraph {
 public:
  OrientedGraph() = default;
  explicit OrientedGraph(int ell) : ell_(ell), out_(ell, 0), in_(ell, 0) {
    require(ell >= 1 && ell <= 64, ErrorCode::invalid_argument, "ell must be in [1, 64]");
  }

  int ell() const { return ell_; }

  void add_edge(int from, int to) {
    check(from);
    check(to);
    require(from != to, ErrorCode::invalid_argument, "self loop");
    require(!has_edge(to, from), ErrorCode::invalid_argument,
            "pair (" + std::to_string(from + 1) + ", " + std::to_string(to + 1) + ") already oriented");
    out_[from] |= SetWord{1} << to;
    in_[to] |= SetWord{1} << from;
  }

  bool has_edge(int from, int to) const { return out_[from] >> to & 1u; }
  bool adjacent(int a, int b) const { return has_edge(a, b) || has_edge(b, a); }
  SetWord in_set(int k) const { return in_[k]; }
  SetWord out_set(int k) const { return out_[k]; }

  std::pair<SetWord, SetWord> in_out(int k) const {
    check(k);
    return {in_[k], out_[k]};
  }

  // Edges (from, to) sorted lexicographically.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < ell_; ++a)
      for (int b = 0; b < ell_; ++b)
        if (has_edge(a, b)) out.emplace_back(a, b);
    return out;
  }

  bool is_tournament() const {
    for (int a = 0; a < ell_; ++a)
      for (int b = a + 1; b < ell_; ++b)
        if (!adjacent(a, b)) return false;
    return true;
  }

  OrientedGraph relabeled(const std::vector<int>& perm) const {
    OrientedGraph g(ell_);
    for (auto [a, b] : edges()) g.add_edge(perm[a], perm[b]);
    return g;
  }

  friend bool operator==(const OrientedGraph&, const OrientedGraph&) = default;

 private:
  void check(int k) const {
    require(k >= 0 && k < ell_, ErrorCode::invalid_argument, "vertex index out of range");
  }

  int ell_ = 0;
  std::vector<SetWord> out_;
  std::vector<SetWord> in_;
};

// Number of unordered pairs with a common in-neighbour.
inline int r_functional(const OrientedGraph& t) {
  int r = 0;
  for (int a = 0; a < t.ell(); ++a)
    for (int b = a + 1; b < t.ell(); ++b)
      if (t.in_set(a) & t.in_set(b)) ++r;
  return r;
}

// ---------------------------------------------------------------------------
// Tournament codes: bit i of the code orients the i-th pair (a < b) of the
// order (0,1), (0,2), ..., (1,2), ...; a set bit means a -> b.

inline int pair_count(int ell) { return ell * (ell - 1) / 2; }

inline OrientedGraph tournament_from_code(int ell, std::uint64_t code) {
  OrientedGraph t(ell);
  int i = 0;
  for (int a = 0; a < ell; ++a)
    for (int b = a + 1; b < ell; ++b, ++i) {
      if (code >> i & 1u)
        t.add_edge(a, b);
      else
        t.add_edge(b, a);
    }
  return t;
}

inline std::uint64_t tournament_code(const OrientedGraph& t) {
  require(t.is_tournament(), ErrorCode::invalid_argument, "not a tournament");
  std::uint64_t code = 0;
  int i = 0;
  for (int a = 0; a < t.ell(); ++a)
    for (int b = a + 1; b < t.ell(); ++b, ++i)
      if (t.has_edge(a, b)) code |= std::uint64_t{1} << i;
  return code;
}

namespace detail {

struct CodeTables {
  int ell;
  std::vector<int> pair_index;  // ell*ell -> bit index for a<b
  std::vector<std::vector<int>> perms;

  explicit CodeTables(int l) : ell(l), pair_index(l * l, -1) {
    int i = 0;
    for (int a = 0; a < l; ++a)
      for (int b = a + 1; b < l; ++b) pair_index[a * l + b] = i++;
    std::vector<int> p(l);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
  }

  std::uint64_t image(std::uint64_t code, const std::vector<int>& p) const {
    std::uint64_t out = 0;
    int i = 0;
    for (int a = 0; a < ell; ++a)
      for (int b = a + 1; b < ell; ++b, ++i) {
        const bool forward = code >> i & 1u;
        int from = forward ? p[a] : p[b];
        int to = forward ? p[b] : p[a];
        if (from < to) out |= std::uint64_t{1} << pair_index[from * ell + to];
      }
    return out;
  }
};

// r from a code, without building a graph.
inline int r_of_code(int ell, std::uint64_t code) {
  SetWord in[8] = {0};
  int i = 0;
  for (int a = 0; a < ell; ++a)
    for (int b = a + 1; b < ell; ++b, ++i) {
      if (code >> i & 1u)
        in[b] |= SetWord{1} << a;
      else
        in[a] |= SetWord{1} << b;
    }
  int r = 0;
  for (int a = 0; a < ell; ++a)
    for (int b = a + 1; b < ell; ++b)
      if (in[a] & in[b]) ++r;
  return r;
}

}  // namespace detail

// Smallest code in the isomorphism class of a tournament.
inline std::uint64_t canonical_code(const OrientedGraph& t) {
  require(t.ell() <= 8, ErrorCode::cap_exceeded, "canonical form supports ell <= 8");
  const detail::CodeTables tables(t.ell());
  const std::uint64_t code = tournament_code(t);
  std::uint64_t best = code;
  for (const auto& p : tables.perms) best = std::min(best, tables.image(code, p));
  return best;
}

struct MaxRResult {
  int r_star = 0;
  std::uint64_t maximizer_count = 0;       // labelled tournaments attaining r*
  std::vector<std::uint64_t> witnesses;    // canonical codes, one per class, ascending
};

inline constexpr int kMaxREnumerationCap = 7;

// Exact maximum of r over all tournaments on ell vertices.
inline MaxRResult max_r(int ell, unsigned threads = 1) {
  require(ell >= 1 && ell <= kMaxREnumerationCap, ErrorCode::cap_exceeded,
          "max_r enumerates only ell <= " + std::to_string(kMaxREnumerationCap));
  const int pairs = pair_count(ell);
  const std::uint64_t space = std::uint64_t{1} << pairs;
  threads = std::max(1u, threads);

  // Chunks by high-order bits of the code; per-chunk maxima merge deterministically.
  struct Chunk {
    int best = -1;
    std::vector<std::uint64_t> codes;
  };
  const std::uint64_t chunks = std::min<std::uint64_t>(space, 64);
  std::vector<Chunk> results(chunks);
  auto work = [&](unsigned id) {
    for (std::uint64_t c = id; c < chunks; c += threads) {
      const std::uint64_t lo = space * c / chunks, hi = space * (c + 1) / chunks;
      Chunk& out = results[c];
      for (std::uint64_t code = lo; code < hi; ++code) {
        const int r = detail::r_of_code(ell, code);
        if (r > out.best) {
          out.best = r;
          out.codes.clear();
        }
        if (r == out.best) out.codes.push_back(code);
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned id = 1; id < threads; ++id) pool.emplace_back(work, id);
  work(0);
  for (auto& th : pool) th.join();

  MaxRResult res;
  res.r_star = -1;
  for (const auto& c : results) res.r_star = std::max(res.r_star, c.best);
  std::vector<std::uint64_t> maximizers;
  for (const auto& c : results)
    if (c.best == res.r_star) maximizers.insert(maximizers.end(), c.codes.begin(), c.codes.end());
  res.maximizer_count = maximizers.size();

  // Orbits are swept once: every image of a fresh maximizer is marked seen.
  const detail::CodeTables tables(ell);
  std::vector<bool> seen(space, false);
  for (std::uint64_t code : maximizers) {
    if (seen[code]) continue;
    std::uint64_t canon = code;
    for (const auto& p : tables.perms) {
      const std::uint64_t img = tables.image(code, p);
      seen[img] = true;
      canon = std::min(canon, img);
    }
    res.witnesses.push_back(canon);
  }
  std::sort(res.witnesses.begin(), res.witnesses.end());
  return res;
}

inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Edge x -> y iff x - y is a nonzero quadratic residue mod p.
inline OrientedGraph paley(int p) {
  require(is_prime(p) && p % 4 == 3, ErrorCode::invalid_argument,
          "Paley tournament needs a prime p = 3 (mod 4), got " + std::to_string(p));
  require(p <= 63, ErrorCode::cap_exceeded, "Paley tournament supports p <= 63");
  std::vector<bool> residue(p, false);
  for (int x = 1; x < p; ++x) residue[x * x % p] = true;
  OrientedGraph t(p);
  for (int x = 0; x < p; ++x)
    for (int y = 0; y < p; ++y)
      if (x != y && residue[((x - y) % p + p) % p]) t.add_edge(x, y);
  return t;
}

inline OrientedGraph random_tournament(int ell, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  OrientedGraph t(ell);
  for (int a = 0; a < ell; ++a)
    for (int b = a + 1; b < ell; ++b) {
      if (rng() >> 63)
        t.add_edge(a, b);
      else
        t.add_edge(b, a);
    }
  return t;
}

// 1 - C(ell,2) (3/4)^(ell-2); negative values are returned unchanged.
inline Rational success_probability_bound(int ell) {
  require(ell >= 2, ErrorCode::invalid_argument, "bound needs ell >= 2");
  const BigInt num = boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(ell - 2));
  const BigInt den = boost::multiprecision::pow(BigInt(4), static_cast<unsigned>(ell - 2));
  return Rational(1) - Rational(binom(ell, 2)) * Rational(num, den);
}

// The ell = 5 extremal tournament: 1->2->3->1, k->4 and k->5 for k in [3], 4->5.
inline OrientedGraph t5() {
  OrientedGraph t(5);
  t.add_edge(0, 1);
  t.add_edge(1, 2);
  t.add_edge(2, 0);
  for (int k = 0; k < 3; ++k) {
    t.add_edge(k, 3);
    t.add_edge(k, 4);
  }
  t.add_edge(3, 4);
  return t;
}

inline OrientedGraph transitive_tournament(int ell) {
  OrientedGraph t(ell);
  for (int a = 0; a < ell; ++a)
    for (int b = a + 1; b < ell; ++b) t.add_edge(a, b);
  return t;
}

}  // namespace overlap
