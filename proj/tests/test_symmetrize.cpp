#include <gtest/gtest.h>

#include "overlap/coloring.hpp"
#include "overlap/constructions.hpp"
#include "overlap/symmetrize.hpp"
#include "support.hpp"

using namespace overlap;

namespace {

GroundSet G(int n) { return GroundSet(n); }
Family F(int n, std::vector<SetWord> v) { return Family(G(n), std::move(v)); }

// Steps 1 and 3 by scanning 2^[n].
std::vector<Family> naive_symmetrize(const FamilySystem& sys, int k0, SetWord s0, SetWord s) {
  const int n = sys.ground.n();
  auto stripped = [&](SetWord x, SetWord strip) {
    return (x & strip) == 0 && sys.families[k0].contains(x | strip);
  };
  std::vector<Family> out;
  for (int k = 0; k < sys.ell(); ++k) {
    std::vector<SetWord> kept;
    for (SetWord x : sys.families[k])
      if ((s0 & ~x) != 0) kept.push_back(x);
    if (k == k0)
      for (SetWord x : oracle::all_subsets(n)) {
        bool in_v = stripped(x, s);
        for (SetWord sub : oracle::all_subsets(n))
          if (in_v && (sub & ~s0) == 0 && sub != s0) in_v = stripped(x, sub);
        if (in_v) kept.push_back(x | s0);
      }
    out.emplace_back(sys.ground, kept);
  }
  return out;
}

// Random disjoint centers and a tentacle pair meeting each center equally.
struct RandomRequest {
  std::vector<SetWord> centers;
  SetWord s0 = 0, s = 0;
  int k0 = 0;
  bool ok = false;
};

RandomRequest random_request(oracle::Gen& gen, int n, int ell) {
  RandomRequest r;
  r.centers.assign(ell, 0);
  for (int i = 0; i < n; ++i) {
    const int k = gen.range(-1, ell - 1);
    if (k >= 0) r.centers[k] |= SetWord{1} << i;
  }
  r.k0 = gen.range(0, ell - 1);
  for (int k = 0; k < ell; ++k) {
    if (k == r.k0) continue;
    const auto elems = elements_of(r.centers[k]);
    if (elems.empty()) continue;
    const int take = gen.range(0, std::min<int>(2, elems.size()));
    std::vector<int> perm = gen.permutation(elems.size()), perm2 = gen.permutation(elems.size());
    for (int i = 0; i < take; ++i) {
      r.s0 |= SetWord{1} << (elems[perm[i]] - 1);
      r.s |= SetWord{1} << (elems[perm2[i]] - 1);
    }
  }
  r.ok = r.s0 != 0;
  return r;
}

}  // namespace

TEST(Symmetrize, SelfReplacementIsIdentity) {
  oracle::Gen gen(71);
  int tried = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = gen.range(2, 8), ell = gen.range(2, 3);
    const auto sys = gen.overlapping_system(n, ell, 2, 15);
    auto req = random_request(gen, n, ell);
    if (!req.ok) continue;
    ++tried;
    const auto res = symmetrize({sys, req.k0, req.s0, req.s0, req.centers, std::nullopt});
    EXPECT_FALSE(res.accepted);
    // the k0 family is rebuilt unchanged; other families only lose sets through S0
    EXPECT_EQ(res.new_sys.families[req.k0], sys.families[req.k0]);
    EXPECT_LE(res.new_product, res.old_product);
  }
  EXPECT_GT(tried, 100);
}

TEST(Symmetrize, HandcraftedAccepted) {
  // F1 = {∅,{1},{2}}, F2 = {∅,{1}}; moving the tentacle {2} of F1 to {3} frees {3} for F1.
  const FamilySystem sys(G(3), {F(3, {0, set_of({1}), set_of({2})}), F(3, {0, set_of({1})})},
                         OverlapSpec::uniform(2, 1));
  const std::vector<SetWord> centers = {set_of({1}), set_of({2, 3})};
  EXPECT_LT(degree(sys.families[0], set_of({3})), degree(sys.families[0], set_of({2})));
  const auto res = symmetrize({sys, 0, set_of({3}), set_of({2}), centers, std::nullopt});
  EXPECT_TRUE(res.accepted);
  EXPECT_EQ(res.old_product, 6);
  EXPECT_EQ(res.new_product, 8);
  EXPECT_EQ(res.new_sys.families[0], F(3, {0, set_of({1}), set_of({2}), set_of({3})}));
  EXPECT_EQ(res.new_sys.families[1], sys.families[1]);
}

TEST(Symmetrize, MatchesNaiveAndStaysValid) {
  oracle::Gen gen(72);
  int done = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const int n = gen.range(2, 10), ell = gen.range(2, 3);
    const auto sys = gen.overlapping_system(n, ell, 2, 20);
    auto req = random_request(gen, n, ell);
    if (!req.ok) continue;
    const auto res = symmetrize({sys, req.k0, req.s0, req.s, req.centers, std::nullopt});
    EXPECT_EQ(res.new_sys.families, naive_symmetrize(sys, req.k0, req.s0, req.s));
    EXPECT_TRUE(check_overlap(res.new_sys).ok);
    for (int k = 0; k < ell; ++k) {
      EXPECT_TRUE(oracle::naive_down_closed(res.new_sys.families[k]));
      if (k != req.k0) {
        EXPECT_LE(res.new_sys.families[k].size(), sys.families[k].size());
      }
    }
    EXPECT_EQ(res.accepted, res.new_product > res.old_product);
    EXPECT_EQ(res.new_product, system_product(res.new_sys));
    ++done;
  }
  EXPECT_GT(done, 300);
}

TEST(Symmetrize, GraphRestrictsTentacles) {
  const FamilySystem sys(G(3), {F(3, {0, set_of({1}), set_of({2})}), F(3, {0, set_of({1})})},
                         OverlapSpec::uniform(2, 1));
  const std::vector<SetWord> centers = {set_of({1}), set_of({2, 3})};
  OrientedGraph forward(2), backward(2);
  forward.add_edge(0, 1);
  backward.add_edge(1, 0);
  EXPECT_NO_THROW(symmetrize({sys, 0, set_of({3}), set_of({2}), centers, forward}));
  EXPECT_THROW(symmetrize({sys, 0, set_of({3}), set_of({2}), centers, backward}), Error);
}

TEST(Symmetrize, RejectsBadRequests) {
  const FamilySystem sys(G(3), {F(3, {0, set_of({1}), set_of({2})}), F(3, {0, set_of({1})})},
                         OverlapSpec::uniform(2, 1));
  const std::vector<SetWord> centers = {set_of({1}), set_of({2, 3})};
  EXPECT_THROW(symmetrize({sys, 0, 0, 0, centers, std::nullopt}), Error);
  EXPECT_THROW(symmetrize({sys, 0, set_of({3}), set_of({1}), centers, std::nullopt}), Error);   // S misses C2
  EXPECT_THROW(symmetrize({sys, 0, set_of({1}), set_of({1}), centers, std::nullopt}), Error);   // own center
  EXPECT_THROW(symmetrize({sys, 0, set_of({3}), set_of({2}), {set_of({1, 2}), set_of({2, 3})}, std::nullopt}),
               Error);
  EXPECT_THROW(symmetrize({sys, 2, set_of({3}), set_of({2}), centers, std::nullopt}), Error);
  const FamilySystem open(G(3), {F(3, {set_of({1})}), F(3, {0})}, OverlapSpec::uniform(2, 1));
  EXPECT_THROW(symmetrize({open, 0, set_of({3}), set_of({2}), centers, std::nullopt}), Error);
  const FamilySystem clash(G(3), {F(3, {0, set_of({2}), set_of({3}), set_of({2, 3})}),
                                  F(3, {0, set_of({2}), set_of({3}), set_of({2, 3})})},
                           OverlapSpec::uniform(2, 1));
  EXPECT_THROW(symmetrize({clash, 0, set_of({3}), set_of({2}), centers, std::nullopt}), Error);
}

TEST(Symmetrize, OptimaAreStable) {
  for (auto [n, ell, m] : {std::tuple{5, 2, 1}, std::tuple{5, 3, 1}, std::tuple{4, 3, 1}}) {
    const auto best = exact_search(n, ell, m);
    ASSERT_TRUE(best.exhaustive);
    const FamilySystem sys = families_from_coloring(best.best_coloring, ell);
    ASSERT_EQ(system_product(sys), best.best_value);
    oracle::Gen gen(73 + n + ell);
    int tried = 0;
    for (int trial = 0; trial < 400; ++trial) {
      auto req = random_request(gen, n, ell);
      if (!req.ok) continue;
      ++tried;
      const auto res = symmetrize({sys, req.k0, req.s0, req.s, req.centers, std::nullopt});
      EXPECT_FALSE(res.accepted) << n << " " << ell << " " << format_set(req.s0) << " " << format_set(req.s);
      EXPECT_LE(res.new_product, best.best_value);
    }
    EXPECT_GT(tried, 100);
  }
}

TEST(IDelta, Examples) {
  const FamilySystem sys(G(3), {F(3, {0, set_of({1}), set_of({2})}), F(3, {0, set_of({1})})},
                         OverlapSpec::uniform(2, 1));
  const std::vector<SetWord> centers = {set_of({1}), set_of({2, 3})};
  const Family cands = F(3, {set_of({2}), set_of({3})});
  EXPECT_TRUE(i_delta(sys, 0, set_of({3}), cands, 1, centers).empty());
  EXPECT_EQ(i_delta(sys, 0, set_of({3}), cands, 0, centers), cands);
  EXPECT_EQ(i_delta(sys, 0, set_of({3}), cands, Rational(1, 3), centers), F(3, {set_of({2})}));
  EXPECT_TRUE(i_delta(sys, 0, set_of({3}), cands, Rational(1, 2), centers).empty());
  EXPECT_THROW(i_delta(sys, 0, set_of({3}), F(3, {set_of({2})}), 0, centers), Error);
  EXPECT_THROW(i_delta(sys, 0, set_of({1}), F(3, {set_of({1})}), 0, centers), Error);
}

TEST(IDelta, OctopusSingletonsAreSymmetric) {
  for (int n = 4; n <= 12; ++n) {
    OrientedGraph g(2);
    g.add_edge(0, 1);
    const auto plan = balanced_plan(n, OverlapSpec::uniform(2, 1), g);
    const FamilySystem sys = octopus_system(plan);
    // Each family's center is the block of its own tentacle pair side; the
    // single block here is the center of family 2 and holds family 1's tentacles.
    const std::vector<SetWord> centers = {0, plan.blocks.at({0, 1})};
    std::vector<SetWord> single;
    for (int e : elements_of(centers[1])) single.push_back(set_of({e}));
    const Family cands(sys.ground, single);
    EXPECT_TRUE(i_delta(sys, 0, single.front(), cands, Rational(1, 2 * n), centers).empty()) << n;
    EXPECT_EQ(i_delta(sys, 0, single.front(), cands, 0, centers), cands) << n;
  }
}

TEST(IDelta, AntitoneInDelta) {
  oracle::Gen gen(74);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen.range(2, 9), ell = gen.range(2, 3);
    const auto sys = gen.overlapping_system(n, ell, 2, 20);
    auto req = random_request(gen, n, ell);
    if (!req.ok || sys.families[req.k0].empty()) continue;
    SetWord support = 0;
    for (int k = 0; k < ell; ++k)
      if (k != req.k0) support |= req.centers[k];
    std::vector<SetWord> cands = {req.s0};
    for (SetWord x : oracle::all_subsets(n))
      if (x != 0 && (x & ~support) == 0 && gen.coin(0.4)) cands.push_back(x);
    const Family c(sys.ground, cands);
    Family prev = i_delta(sys, req.k0, req.s0, c, -1, req.centers);
    EXPECT_EQ(prev, c);
    for (int step = 0; step <= 8; ++step) {
      const Family cur = i_delta(sys, req.k0, req.s0, c, Rational(step, 8), req.centers);
      EXPECT_TRUE(family_includes(prev, cur));
      prev = cur;
    }
    EXPECT_TRUE(prev.empty());
  }
}
