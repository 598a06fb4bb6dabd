#pragma once

#include <vector>

#include "overlap/core.hpp"

namespace overlap {

// Edges are the (m_{k,k'}+1)-subsets of members of the opposing families, so a
// set is compatible with every opposing family iff it spans no edge.
struct ConflictHypergraph {
  GroundSet ground;
  Family edges;
};

// For down-closed opposing families this is exactly the union of their
// (m_{k,k'}+1)-uniform layers; for arbitrary families it also covers the
// (m+1)-subsets of larger members.
inline ConflictHypergraph build_conflict(const FamilySystem& sys, int k) {
  require(k >= 0 && k < sys.ell(), ErrorCode::invalid_argument, "invalid family index");
  std::vector<SetWord> edges;
  for (int other = 0; other < sys.ell(); ++other) {
    if (other == k) continue;
    const int t = sys.spec.at(k, other) + 1;
    for (SetWord s : sys.families[other]) {
      if (popcount(s) == t)
        edges.push_back(s);
      else if (popcount(s) > t)
        for_each_subset_of_size(s, t, [&](SetWord e) { edges.push_back(e); });
    }
  }
  return {sys.ground, Family(sys.ground, std::move(edges))};
}

inline bool is_independent(const ConflictHypergraph& h, SetWord set) {
  for (SetWord e : h.edges)
    if (is_subset(e, set)) return false;
  return true;
}

// All independent sets, in increasing mask order.
inline Family independent_sets(const ConflictHypergraph& h, int cap = kDefaultCap) {
  const int n = h.ground.n();
  require(n <= cap, ErrorCode::cap_exceeded,
          "ground set " + std::to_string(n) + " above enumeration cap " + std::to_string(cap));
  // Elements are decided from the top down; an edge fires on its minimum element,
  // at which point all its other elements have already been decided.
  std::vector<std::vector<SetWord>> trigger(n);
  bool has_empty_edge = false;
  for (SetWord e : h.edges) {
    if (e == 0) {
      has_empty_edge = true;
      continue;
    }
    const SetWord low = lowest_bit(e);
    trigger[std::countr_zero(low)].push_back(e & ~low);
  }
  std::vector<SetWord> out;
  if (has_empty_edge) return Family(h.ground, std::move(out));
  auto rec = [&](auto&& self, int v, SetWord cur) -> void {
    if (v < 0) {
      out.push_back(cur);
      return;
    }
    self(self, v - 1, cur);
    for (SetWord rest : trigger[v])
      if (is_subset(rest, cur)) return;
    self(self, v - 1, cur | (SetWord{1} << v));
  };
  rec(rec, n - 1, 0);
  return Family(h.ground, std::move(out));
}

// The largest family that may replace family k while keeping the system overlapping.
inline Family maximal_completion(const FamilySystem& sys, int k, int cap = kDefaultCap) {
  return independent_sets(build_conflict(sys, k), cap);
}

// Completes families in ascending k until no family grows.
inline FamilySystem complete_all(FamilySystem sys, int cap = kDefaultCap) {
  bool grew = true;
  while (grew) {
    grew = false;
    for (int k = 0; k < sys.ell(); ++k) {
      Family next = maximal_completion(sys, k, cap);
      if (next != sys.families[k]) {
        grew = true;
        sys.families[k] = std::move(next);
      }
    }
  }
  return sys;
}

}  // namespace overlap
