#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "overlap/coloring.hpp"
#include "overlap/core.hpp"
#include "overlap/tournament.hpp"

namespace overlap {

using Edge = std::pair<int, int>;  // (from, to), 0-based

// Octopus layout: an oriented graph matching the nonzero entries of m, and a
// partition of [n] into blocks A_(k,k'), one per edge.
struct OctopusPlan {
  GroundSet ground;
  OverlapSpec spec;
  OrientedGraph graph;
  std::map<Edge, SetWord> blocks;

  void validate() const {
    require(graph.ell() == spec.ell(), ErrorCode::invalid_argument, "graph and spec sizes differ");
    for (auto [a, b] : spec.pairs()) {
      const bool positive = spec.at(a, b) > 0;
      require(graph.adjacent(a, b) == positive, ErrorCode::invalid_argument,
              "pair (" + std::to_string(a + 1) + ", " + std::to_string(b + 1) +
                  ") must carry an edge iff its overlap bound is positive");
    }
    SetWord covered = 0;
    for (auto e : graph.edges()) {
      auto it = blocks.find(e);
      require(it != blocks.end(), ErrorCode::invalid_argument,
              "missing block for edge " + std::to_string(e.first + 1) + "->" + std::to_string(e.second + 1));
      require((it->second & covered) == 0, ErrorCode::invalid_argument, "blocks overlap");
      covered |= it->second;
    }
    require(blocks.size() == graph.edges().size(), ErrorCode::invalid_argument, "block for a non-edge");
    require(covered == ground.full(), ErrorCode::invalid_argument, "blocks do not cover the ground set");
  }

  SetWord block(int from, int to) const { return blocks.at({from, to}); }

  // ⊔_{k' ∈ In_k} A_(k',k)
  SetWord body(int k) const {
    SetWord s = 0;
    for (auto e : graph.edges())
      if (e.second == k) s |= blocks.at(e);
    return s;
  }
};

inline BigInt octopus_family_size(const OctopusPlan& plan, int k) {
  BigInt size = pow2(popcount(plan.body(k)));
  for (auto e : plan.graph.edges())
    if (e.first == k) size *= binom_le(popcount(plan.blocks.at(e)), plan.spec.at(e.first, e.second));
  return size;
}

// 2^{body_k} ∨ ⋁_{k' ∈ Out_k} C(A_(k,k'), <= m_{k,k'})
inline Family octopus_family(const OctopusPlan& plan, int k, int cap = kDefaultCap) {
  plan.validate();
  require(k >= 0 && k < plan.spec.ell(), ErrorCode::invalid_argument, "invalid family index");
  Family f = Family::power_set(plan.ground, plan.body(k), cap);
  for (auto e : plan.graph.edges())
    if (e.first == k) f = vee(f, Family::up_to(plan.ground, plan.blocks.at(e), plan.spec.at(e.first, e.second)));
  return f;
}

inline FamilySystem octopus_system(const OctopusPlan& plan, int cap = kDefaultCap) {
  std::vector<Family> fams;
  for (int k = 0; k < plan.spec.ell(); ++k) fams.push_back(octopus_family(plan, k, cap));
  return FamilySystem(plan.ground, std::move(fams), plan.spec);
}

// Block sizes by largest remainder on m_S n / Σ m (ties to the earlier edge in
// pair order); blocks are consecutive intervals of [n] in that order.
inline OctopusPlan balanced_plan(int n, const OverlapSpec& spec, const OrientedGraph& graph) {
  const GroundSet g(n);
  std::vector<Edge> edges;  // in pair order, oriented per graph
  std::vector<int> weights;
  for (auto [a, b] : spec.pairs()) {
    if (spec.at(a, b) == 0) continue;
    require(graph.adjacent(a, b), ErrorCode::invalid_argument, "graph misses an edge with positive overlap");
    edges.push_back(graph.has_edge(a, b) ? Edge{a, b} : Edge{b, a});
    weights.push_back(spec.at(a, b));
  }
  require(!edges.empty(), ErrorCode::invalid_argument, "all overlap bounds are zero");
  require(n >= static_cast<int>(edges.size()), ErrorCode::invalid_argument,
          "n smaller than the number of edges with positive overlap");
  const long total = std::accumulate(weights.begin(), weights.end(), 0L);
  std::vector<int> sizes(edges.size());
  std::vector<std::pair<long, std::size_t>> remainders;  // (-remainder numerator, index)
  int assigned = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const long num = static_cast<long>(weights[i]) * n;
    sizes[i] = static_cast<int>(num / total);
    assigned += sizes[i];
    remainders.emplace_back(-(num % total), i);
  }
  std::sort(remainders.begin(), remainders.end());
  for (int i = 0; assigned < n; ++i, ++assigned) ++sizes[remainders[i].second];

  OctopusPlan plan{g, spec, graph, {}};
  int next = 1;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    plan.blocks[edges[i]] = interval(next, next + sizes[i] - 1);
    next += sizes[i];
  }
  plan.validate();
  return plan;
}

// ---------------------------------------------------------------------------
// The ell = 5 system

struct L5Plan {
  GroundSet ground;
  std::map<Edge, SetWord> blocks;  // the ten edges of t5()
  std::array<SetWord, 3> w{};      // partition of A_(4,5)

  void validate() const {
    const OrientedGraph t = t5();
    SetWord covered = 0;
    for (auto e : t.edges()) {
      auto it = blocks.find(e);
      require(it != blocks.end(), ErrorCode::invalid_argument, "missing block of the ell=5 layout");
      require((it->second & covered) == 0, ErrorCode::invalid_argument, "blocks overlap");
      covered |= it->second;
    }
    require(blocks.size() == 10, ErrorCode::invalid_argument, "the ell=5 layout has exactly ten blocks");
    require(covered == ground.full(), ErrorCode::invalid_argument, "blocks do not cover the ground set");
    const SetWord a45 = blocks.at({3, 4});
    require((w[0] & w[1]) == 0 && (w[0] & w[2]) == 0 && (w[1] & w[2]) == 0 && (w[0] | w[1] | w[2]) == a45,
            ErrorCode::invalid_argument, "W_1, W_2, W_3 must partition A_(4,5)");
  }

  SetWord block(int from, int to) const { return blocks.at({from, to}); }

  OctopusPlan as_octopus() const {
    return OctopusPlan{ground, OverlapSpec::uniform(5, 1), t5(), blocks};
  }
};

// Balanced blocks of t5(); W takes consecutive runs of A_(4,5) of the given sizes.
inline L5Plan l5_plan(int n, std::array<int, 3> w_sizes) {
  const OctopusPlan base = balanced_plan(n, OverlapSpec::uniform(5, 1), t5());
  L5Plan plan{base.ground, base.blocks, {}};
  const auto a45 = elements_of(plan.block(3, 4));
  require(w_sizes[0] >= 0 && w_sizes[1] >= 0 && w_sizes[2] >= 0 &&
              w_sizes[0] + w_sizes[1] + w_sizes[2] == static_cast<int>(a45.size()),
          ErrorCode::invalid_argument, "W sizes must sum to |A_(4,5)| = " + std::to_string(a45.size()));
  std::size_t next = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < w_sizes[i]; ++j) plan.w[i] |= SetWord{1} << (a45[next++] - 1);
  plan.validate();
  return plan;
}

// Sizes as equal as possible, earlier parts larger.
inline L5Plan l5_plan_even(int n) {
  const OctopusPlan base = balanced_plan(n, OverlapSpec::uniform(5, 1), t5());
  const int a = popcount(base.block(3, 4));
  return l5_plan(n, {(a + 2) / 3, (a + 1) / 3, a / 3});
}

inline FamilySystem l5_system(const L5Plan& plan, int cap = kDefaultCap) {
  plan.validate();
  const GroundSet g = plan.ground;
  const OrientedGraph t = t5();
  auto le1 = [&](SetWord x) { return Family::up_to(g, x, 1); };
  const Family singletons = Family::layer(g, g.full(), 1);

  std::vector<Family> fams;
  for (int k = 0; k < 3; ++k) {
    const int i_k = std::countr_zero(t.in_set(k));            // unique in-neighbour
    const int o_k = std::countr_zero(t.out_set(k) & SetWord{7});  // unique out-neighbour in [3]
    // ⋁_{k' ∈ Out_k} C(A_{k,k'}, <= 1)
    Family bracket(g, {SetWord{0}});
    for (SetWord out = t.out_set(k); out; out &= out - 1)
      bracket = vee(bracket, le1(plan.block(k, std::countr_zero(out))));
    // ∪ C(A_{o_k,s}, <= 1) ∨ C(A_{k,s'}, <= 1) for {s, s'} = {4, 5}
    for (auto [s, s2] : {Edge{3, 4}, Edge{4, 3}})
      bracket = family_union(bracket, vee(le1(plan.block(o_k, s)), le1(plan.block(k, s2))));
    // ∪ C(W_k, <= 1) ∨ C(A_{k,o_k}, <= 1) ∪ C(W_{o_k}, <= 1)
    bracket = family_union(bracket, vee(le1(plan.w[k]), le1(plan.block(k, o_k))));
    bracket = family_union(bracket, le1(plan.w[o_k]));
    Family f = vee(Family::power_set(g, plan.block(i_k, k), cap), bracket);
    fams.push_back(family_union(f, singletons));
  }
  const OctopusPlan oct = plan.as_octopus();
  for (int k = 3; k < 5; ++k) fams.push_back(family_union(octopus_family(oct, k, cap), singletons));
  return FamilySystem(g, std::move(fams), OverlapSpec::uniform(5, 1));
}

// Colouring of K_n read off the 2-sets of a 1-overlapping system whose 2-layers
// partition C([n], 2).
inline EdgeColoring coloring_from_pair_layers(const FamilySystem& sys) {
  const GroundSet g = sys.ground;
  EdgeColoring c(g, 2, sys.ell());
  std::vector<int> owner(c.edge_count(), -1);
  for (int k = 0; k < sys.ell(); ++k)
    for (SetWord s : sys.families[k]) {
      if (popcount(s) != 2) continue;
      const std::size_t i = c.index_of(s);
      require(owner[i] < 0, ErrorCode::invalid_argument, "pair " + format_set(s) + " lies in two families");
      owner[i] = k;
    }
  for (std::size_t i = 0; i < owner.size(); ++i) {
    require(owner[i] >= 0, ErrorCode::invalid_argument, "pair " + format_set(c.edges()[i]) + " is uncovered");
    c.set_color(i, owner[i]);
  }
  return c;
}

inline EdgeColoring l5_coloring(const L5Plan& plan) { return coloring_from_pair_layers(l5_system(plan)); }

// F_1 = C([n], <= t), F_2 = 2^[n].
inline FamilySystem two_family_extremal(int n, int t, int cap = kDefaultCap) {
  require(t >= 0 && t <= n, ErrorCode::invalid_argument, "need 0 <= t <= n");
  const GroundSet g(n);
  Family full = Family::power_set(g, cap);
  return FamilySystem(g, {Family::up_to(g, g.full(), t), std::move(full)}, OverlapSpec::uniform(2, t));
}

// ---------------------------------------------------------------------------
// Diagnostics

struct CenterReport {
  int k = 0;
  SetWord center = 0;
  std::vector<Rational> degrees;  // index i holds d_k(i+1)
  Rational alpha;
};

// C*_k = {x : d_k(x) >= 1/2 - alpha}
inline CenterReport probabilistic_center(const FamilySystem& sys, int k, const Rational& alpha) {
  require(k >= 0 && k < sys.ell(), ErrorCode::invalid_argument, "invalid family index");
  const Family& f = sys.families[k];
  require(!f.empty(), ErrorCode::invalid_argument, "center of an empty family");
  CenterReport rep{k, 0, {}, alpha};
  const Rational threshold = Rational(1, 2) - alpha;
  for (int x = 0; x < sys.ground.n(); ++x) {
    rep.degrees.push_back(degree(f, SetWord{1} << x));
    if (rep.degrees.back() >= threshold) rep.center |= SetWord{1} << x;
  }
  return rep;
}

inline std::vector<SetWord> probabilistic_centers(const FamilySystem& sys, const Rational& alpha) {
  std::vector<SetWord> out;
  for (int k = 0; k < sys.ell(); ++k) out.push_back(probabilistic_center(sys, k, alpha).center);
  return out;
}

struct PairDirection {
  int k1 = 0;
  int k2 = 0;
  Rational forward;   // d_{k1 -> k2}^{(>=1)}
  Rational backward;  // d_{k2 -> k1}^{(>=1)}
  bool tie = false;
};

struct DirectionReport {
  OrientedGraph graph;
  std::vector<PairDirection> pairs;
  std::vector<Edge> ties;
};

// Orients k1 -> k2 when d_{k2->k1} < d_{k1->k2}; equal values are left unoriented.
inline DirectionReport tentacle_direction(const FamilySystem& sys, const std::vector<SetWord>& centers) {
  require(static_cast<int>(centers.size()) == sys.ell(), ErrorCode::invalid_argument, "one center per family");
  for (std::size_t a = 0; a < centers.size(); ++a)
    for (std::size_t b = a + 1; b < centers.size(); ++b)
      require((centers[a] & centers[b]) == 0, ErrorCode::invalid_argument, "centers must be disjoint");
  DirectionReport rep{OrientedGraph(sys.ell()), {}, {}};
  for (auto [a, b] : sys.spec.pairs()) {
    if (sys.spec.at(a, b) == 0) continue;
    PairDirection d{a, b, directed_degree(sys, a, b, centers[b], 1), directed_degree(sys, b, a, centers[a], 1)};
    if (d.backward < d.forward)
      rep.graph.add_edge(a, b);
    else if (d.forward < d.backward)
      rep.graph.add_edge(b, a);
    else {
      d.tie = true;
      rep.ties.emplace_back(a, b);
    }
    rep.pairs.push_back(std::move(d));
  }
  return rep;
}

}  // namespace overlap
