#pragma once

#include <optional>
#include <vector>

#include "overlap/core.hpp"
#include "overlap/tournament.hpp"

namespace overlap {

struct SymmetrizationRequest {
  FamilySystem sys;
  int k0 = 0;
  SetWord s0 = 0;  // tentacle to chop
  SetWord s = 0;   // replacement tentacle
  std::vector<SetWord> centers;
  // When set, S0 must lie in the centers of Out_{k0}; otherwise in any other center.
  std::optional<OrientedGraph> graph;
};

struct SymmetrizationResult {
  FamilySystem new_sys;
  BigInt old_product;
  BigInt new_product;
  bool accepted = false;
};

namespace detail {

// F ∈ f(∘S') iff F ∩ S' = ∅ and F ∪ S' ∈ f.
inline bool in_stripped(const Family& f, SetWord set, SetWord strip) {
  return (set & strip) == 0 && f.contains(set | strip);
}

// F_{k0}(∘S) ∩ ⋂_{S' ⊊ S0} F_{k0}(∘S'); the intersection is F_{k0} itself when |S0| = 1.
inline std::vector<SetWord> guarded_slice(const Family& f, SetWord s0, SetWord s) {
  std::vector<SetWord> out;
  for (SetWord x : f) {
    if (!is_subset(s, x)) continue;
    const SetWord cand = x & ~s;
    bool ok = true;
    if (popcount(s0) > 1) {
      // proper subsets of S0, including ∅
      SetWord sub = 0;
      do {
        if (sub != s0 && !in_stripped(f, cand, sub)) {
          ok = false;
          break;
        }
        sub = (sub - s0) & s0;
      } while (sub != 0);
    }
    if (ok) out.push_back(cand);
  }
  return out;
}

inline SetWord allowed_tentacle_support(const FamilySystem& sys, int k0, const std::vector<SetWord>& centers,
                                        const std::optional<OrientedGraph>& graph) {
  SetWord support = 0;
  for (int k = 0; k < sys.ell(); ++k) {
    if (k == k0) continue;
    if (graph && !graph->has_edge(k0, k)) continue;
    support |= centers[k];
  }
  return support;
}

inline void check_centers(const FamilySystem& sys, const std::vector<SetWord>& centers) {
  require(static_cast<int>(centers.size()) == sys.ell(), ErrorCode::invalid_argument, "one center per family");
  SetWord seen = 0;
  for (SetWord c : centers) {
    require(sys.ground.contains(c), ErrorCode::invalid_argument, "center outside ground set");
    require((c & seen) == 0, ErrorCode::invalid_argument, "centers must be disjoint");
    seen |= c;
  }
}

}  // namespace detail

// Step 1 drops every set containing S0 from every family; step 3 re-attaches
// S0 to the guarded slice of F_{k0} at S. The output is re-verified.
inline SymmetrizationResult symmetrize(const SymmetrizationRequest& req) {
  const FamilySystem& sys = req.sys;
  require(req.k0 >= 0 && req.k0 < sys.ell(), ErrorCode::invalid_argument, "invalid k0");
  require(req.s0 != 0, ErrorCode::invalid_argument, "S0 must be non-empty");
  require(sys.ground.contains(req.s0) && sys.ground.contains(req.s), ErrorCode::invalid_argument,
          "tentacle outside ground set");
  detail::check_centers(sys, req.centers);
  if (req.graph) require(req.graph->ell() == sys.ell(), ErrorCode::invalid_argument, "graph size differs");
  require(is_subset(req.s0, detail::allowed_tentacle_support(sys, req.k0, req.centers, req.graph)),
          ErrorCode::invalid_argument, "S0 must lie in the centers of the out-neighbours of k0");
  for (SetWord c : req.centers)
    require(popcount(req.s & c) == popcount(req.s0 & c), ErrorCode::invalid_argument,
            "S must meet every center in as many elements as S0");
  for (const auto& f : sys.families)
    require(is_down_closed(f), ErrorCode::invalid_argument, "input families must be down-closed");
  require(check_overlap(sys).ok, ErrorCode::invalid_argument, "input system must be overlapping");

  std::vector<Family> next;
  for (const auto& f : sys.families) {
    std::vector<SetWord> kept;
    for (SetWord x : f)
      if (!is_subset(req.s0, x)) kept.push_back(x);
    next.emplace_back(sys.ground, std::move(kept));
  }
  {
    std::vector<SetWord> grown = next[req.k0].sets();
    for (SetWord x : detail::guarded_slice(sys.families[req.k0], req.s0, req.s)) grown.push_back(x | req.s0);
    next[req.k0] = Family(sys.ground, std::move(grown));
  }

  SymmetrizationResult res{FamilySystem(sys.ground, std::move(next), sys.spec), system_product(sys), 0, false};
  if (down_closure(res.new_sys.families[req.k0]) != res.new_sys.families[req.k0])
    throw Error(ErrorCode::internal, "symmetrized family is not down-closed");
  if (!check_overlap(res.new_sys).ok) throw Error(ErrorCode::internal, "symmetrized system is not overlapping");
  res.new_product = system_product(res.new_sys);
  res.accepted = res.new_product > res.old_product;
  return res;
}

// Candidates S whose guarded slice has normalized size >= d_{k0}(S0) + delta.
inline Family i_delta(const FamilySystem& sys, int k0, SetWord s0, const Family& candidates, const Rational& delta,
                      const std::vector<SetWord>& centers) {
  require(k0 >= 0 && k0 < sys.ell(), ErrorCode::invalid_argument, "invalid k0");
  require(candidates.ground() == sys.ground, ErrorCode::ground_mismatch, "candidate ground differs");
  require(candidates.contains(s0), ErrorCode::invalid_argument, "S0 must be a candidate");
  detail::check_centers(sys, centers);
  const SetWord support = detail::allowed_tentacle_support(sys, k0, centers, std::nullopt);
  for (SetWord c : candidates)
    require(is_subset(c, support), ErrorCode::invalid_argument,
            "candidate " + format_set(c) + " is not a tentacle of family k0");
  const Family& f = sys.families[k0];
  require(!f.empty(), ErrorCode::invalid_argument, "empty family");
  const Rational threshold = degree(f, s0) + delta;
  std::vector<SetWord> out;
  for (SetWord c : candidates) {
    const Rational value(detail::guarded_slice(f, s0, c).size(), f.size());
    if (value >= threshold) out.push_back(c);
  }
  return Family(sys.ground, std::move(out));
}

}  // namespace overlap
