#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "overlap/core.hpp"
#include "overlap/shadow.hpp"

namespace overlap {

inline constexpr int kColoringGroundCap = 26;

// Colour of every (m+1)-subset of [n]; colours are 0-based, edges in lex order.
class EdgeColoring {
 public:
  EdgeColoring() = default;
  EdgeColoring(GroundSet ground, int arity, int ell)
      : ground_(ground), arity_(arity), ell_(ell) {
    require(arity >= 1 && arity <= ground.n(), ErrorCode::invalid_argument, "arity must be in [1, n]");
    require(ell >= 1 && ell <= 255, ErrorCode::invalid_argument, "ell must be in [1, 255]");
    require(ground.n() <= kColoringGroundCap, ErrorCode::cap_exceeded,
            "colorings support n <= " + std::to_string(kColoringGroundCap));
    for (LexEnumerator it(ground.n(), arity); !it.done(); it.next()) edges_.push_back(it.current());
    colors_.assign(edges_.size(), 0);
  }
  EdgeColoring(GroundSet ground, int arity, int ell, std::vector<std::uint8_t> colors)
      : EdgeColoring(ground, arity, ell) {
    require(colors.size() == edges_.size(), ErrorCode::invalid_argument, "wrong number of edge colours");
    for (auto c : colors) require(c < ell, ErrorCode::invalid_argument, "colour out of range");
    colors_ = std::move(colors);
  }

  GroundSet ground() const { return ground_; }
  int n() const { return ground_.n(); }
  int arity() const { return arity_; }
  int ell() const { return ell_; }
  const std::vector<SetWord>& edges() const { return edges_; }
  const std::vector<std::uint8_t>& colors() const { return colors_; }
  std::size_t edge_count() const { return edges_.size(); }

  std::size_t index_of(SetWord edge) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), edge,
                               [](SetWord a, SetWord b) { return lex_compare(a, b) < 0; });
    require(it != edges_.end() && *it == edge, ErrorCode::invalid_argument, "not an edge: " + format_set(edge));
    return static_cast<std::size_t>(it - edges_.begin());
  }
  int color_of(SetWord edge) const { return colors_[index_of(edge)]; }
  void set_color(std::size_t index, int c) {
    require(c >= 0 && c < ell_, ErrorCode::invalid_argument, "colour out of range");
    colors_.at(index) = static_cast<std::uint8_t>(c);
  }

  friend bool operator==(const EdgeColoring&, const EdgeColoring&) = default;

 private:
  GroundSet ground_;
  int arity_ = 2;
  int ell_ = 1;
  std::vector<SetWord> edges_;
  std::vector<std::uint8_t> colors_;
};

namespace detail {

// Dense mask -> colour table; entries for non-edges are unused.
inline std::vector<std::uint8_t> color_table(const EdgeColoring& c) {
  std::vector<std::uint8_t> table(std::size_t{1} << c.n(), 0);
  for (std::size_t i = 0; i < c.edge_count(); ++i) table[c.edges()[i]] = c.colors()[i];
  return table;
}

// Clique indicator per subset for one colour. A subset S with top element v and
// R = S \ {v} is monochromatic iff R is, and (|R| = m) S itself has the colour,
// or (|R| > m) each R \ {x} ∪ {v} is for the m+1 lowest x of R.
inline void clique_table(int n, int m, int color, const std::vector<std::uint8_t>& colors,
                         std::vector<std::uint8_t>& cl) {
  const std::size_t total = std::size_t{1} << n;
  cl.assign(total, 0);
  cl[0] = 1;
  for (std::size_t s = 1; s < total; ++s) {
    const SetWord top = SetWord{1} << (63 - std::countl_zero(static_cast<SetWord>(s)));
    const SetWord rest = s & ~top;
    const int size = std::popcount(rest);
    if (size < m) {
      cl[s] = 1;
    } else if (size == m) {
      cl[s] = colors[s] == color;
    } else if (cl[rest]) {
      std::uint8_t ok = 1;
      SetWord probe = rest;
      for (int i = 0; i <= m && ok; ++i) {
        const SetWord x = lowest_bit(probe);
        probe &= probe - 1;
        ok = cl[s & ~x];
      }
      cl[s] = ok;
    }
  }
}

}  // namespace detail

// k_i = number of colour-i cliques; subsets of size <= m count for every colour.
inline std::vector<BigInt> mono_clique_counts(const EdgeColoring& c, int ell) {
  require(ell == c.ell(), ErrorCode::invalid_argument, "colour count mismatch");
  const auto colors = detail::color_table(c);
  std::vector<BigInt> out;
  std::vector<std::uint8_t> cl;
  for (int col = 0; col < ell; ++col) {
    detail::clique_table(c.n(), c.arity() - 1, col, colors, cl);
    std::uint64_t count = 0;
    for (auto v : cl) count += v;
    out.emplace_back(count);
  }
  return out;
}

// Family i = the colour-i cliques; the result is uniformly (arity-1)-overlapping.
inline FamilySystem families_from_coloring(const EdgeColoring& c, int ell) {
  require(ell == c.ell(), ErrorCode::invalid_argument, "colour count mismatch");
  const auto colors = detail::color_table(c);
  std::vector<Family> fams;
  std::vector<std::uint8_t> cl;
  for (int col = 0; col < ell; ++col) {
    detail::clique_table(c.n(), c.arity() - 1, col, colors, cl);
    std::vector<SetWord> sets;
    for (std::size_t s = 0; s < cl.size(); ++s)
      if (cl[s]) sets.push_back(s);
    fams.emplace_back(c.ground(), std::move(sets));
  }
  return FamilySystem(c.ground(), std::move(fams), OverlapSpec::uniform(ell, c.arity() - 1));
}

// Relabels colours by first use in lex edge order (the lex-smallest colouring
// among those equal up to a colour permutation).
inline EdgeColoring canonical_colors(const EdgeColoring& c) {
  std::vector<int> map(c.ell(), -1);
  int next = 0;
  std::vector<std::uint8_t> out(c.edge_count());
  for (std::size_t i = 0; i < c.edge_count(); ++i) {
    int& m = map[c.colors()[i]];
    if (m < 0) m = next++;
    out[i] = static_cast<std::uint8_t>(m);
  }
  return EdgeColoring(c.ground(), c.arity(), c.ell(), std::move(out));
}

// ---------------------------------------------------------------------------
// Search

struct SearchResult {
  BigInt best_value = 0;
  EdgeColoring best_coloring;
  std::vector<BigInt> per_color_counts;
  std::uint64_t nodes_explored = 0;
  bool exhaustive = false;
};

struct ExactOptions {
  std::uint64_t budget = 200'000'000;  // search-tree nodes
  unsigned threads = 1;
  // Search position p holds vertex vertex_order[p] (0-based); identity when empty.
  std::vector<int> vertex_order;
  // Colours are tried in this order; identity when empty.
  std::vector<int> color_order;
};

// OE_BUDGET, when set to a positive integer, overrides a node budget.
inline std::uint64_t budget_from_env(std::uint64_t fallback) {
  if (const char* env = std::getenv("OE_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return fallback;
}

namespace detail {

using Wide = unsigned __int128;

class ExactSearcher {
 public:
  ExactSearcher(int n, int ell, int m, const ExactOptions& opts)
      : n_(n), ell_(ell), m_(m), template_(GroundSet(n), m + 1, ell) {
    order_ = opts.vertex_order;
    if (order_.empty()) {
      order_.resize(n);
      std::iota(order_.begin(), order_.end(), 0);
    }
    colour_order_ = opts.color_order;
    if (colour_order_.empty()) {
      colour_order_.resize(ell);
      std::iota(colour_order_.begin(), colour_order_.end(), 0);
    }
    // Edges in colex order of search positions: grouped by top position.
    by_vertex_.resize(n);
    for (int v = 0; v < n; ++v) {
      const SetWord below = (SetWord{1} << v) - 1;
      std::vector<SetWord> group;
      for_each_subset_of_size(below, m, [&](SetWord r) { group.push_back(r | (SetWord{1} << v)); });
      std::sort(group.begin(), group.end());
      for (SetWord e : group) {
        SetWord actual = 0;
        for (SetWord b = e; b; b &= b - 1) actual |= SetWord{1} << order_[std::countr_zero(b)];
        position_edges_.push_back(e);
        actual_index_.push_back(template_.index_of(actual));
      }
      by_vertex_[v] = position_edges_.size();  // end offset of v's group
    }
  }

  std::size_t edge_count() const { return position_edges_.size(); }

  // Canonical partial colourings: colours in first-use order.
  BigInt tree_size() const {
    const std::size_t e = edge_count();
    std::vector<BigInt> ways(ell_ + 1, 0);  // ways[j]: prefixes using j colours
    ways[0] = 1;
    BigInt total = 0;
    for (std::size_t d = 0; d < e; ++d) {
      std::vector<BigInt> next(ell_ + 1, 0);
      for (int j = 0; j <= ell_; ++j) {
        if (ways[j] == 0) continue;
        next[j] += ways[j] * j;
        if (j < ell_) next[j + 1] += ways[j];
      }
      ways = std::move(next);
      for (const auto& w : ways) total += w;
    }
    return total;
  }

  struct Outcome {
    Wide best = 0;
    std::vector<std::uint8_t> witness;  // lex-canonical, actual edge order
    std::vector<std::uint64_t> counts;
    std::uint64_t nodes = 0;
    bool completed = true;
  };

  // Explores all completions of a forced prefix of canonical colours.
  Outcome run(const std::vector<std::uint8_t>& prefix, std::uint64_t node_limit) const {
    State st(*this);
    st.forced = &prefix;
    st.limit = node_limit;
    st.descend(0, 0, 0);
    st.out.completed = !st.stopped;
    return std::move(st.out);
  }

  // Canonical prefixes of length w.
  std::vector<std::vector<std::uint8_t>> prefixes(std::size_t w) const {
    std::vector<std::vector<std::uint8_t>> out;
    std::vector<std::uint8_t> cur;
    auto rec = [&](auto&& self, int used) -> void {
      if (cur.size() == w) {
        out.push_back(cur);
        return;
      }
      for (int c = 0; c <= std::min(used, ell_ - 1); ++c) {
        cur.push_back(static_cast<std::uint8_t>(c));
        self(self, std::max(used, c + 1));
        cur.pop_back();
      }
    };
    rec(rec, 0);
    return out;
  }

 private:
  struct State {
    const ExactSearcher& s;
    const std::vector<std::uint8_t>* forced = nullptr;
    std::uint64_t limit = 0;
    bool stopped = false;
    std::vector<std::uint8_t> edge_colour;        // per position-mask
    std::vector<std::vector<std::uint8_t>> cl;    // per colour, per position-mask
    std::vector<std::vector<std::uint64_t>> cnt;  // per vertex level, per colour
    std::vector<std::uint8_t> assignment;         // canonical colours per position edge
    Outcome out;

    explicit State(const ExactSearcher& searcher) : s(searcher) {
      const std::size_t total = std::size_t{1} << s.n_;
      edge_colour.assign(total, 0);
      cl.assign(s.ell_, std::vector<std::uint8_t>(total, 0));
      for (auto& t : cl) t[0] = 1;
      cnt.assign(s.n_ + 1, std::vector<std::uint64_t>(s.ell_, 1));
      assignment.assign(s.edge_count(), 0);
    }

    // Fills clique entries for masks whose top position is v.
    void close_vertex(int v) {
      const SetWord top = SetWord{1} << v;
      for (int c = 0; c < s.ell_; ++c) {
        auto& t = cl[c];
        const std::uint8_t actual = static_cast<std::uint8_t>(s.colour_order_[c]);
        std::uint64_t added = 0;
        for (SetWord rest = 0; rest < top; ++rest) {
          const SetWord sm = rest | top;
          const int size = std::popcount(rest);
          std::uint8_t ok;
          if (size < s.m_) {
            ok = 1;
          } else if (size == s.m_) {
            ok = edge_colour[sm] == actual;
          } else if (!t[rest]) {
            ok = 0;
          } else {
            ok = 1;
            SetWord probe = rest;
            for (int i = 0; i <= s.m_ && ok; ++i) {
              const SetWord x = lowest_bit(probe);
              probe &= probe - 1;
              ok = t[sm & ~x];
            }
          }
          t[sm] = ok;
          added += ok;
        }
        cnt[v + 1][c] = cnt[v][c] + added;
      }
    }

    void leaf() {
      Wide prod = 1;
      for (int c = 0; c < s.ell_; ++c) prod *= cnt[s.n_][c];
      if (prod < out.best) return;
      std::vector<std::uint8_t> actual(s.edge_count());
      for (std::size_t i = 0; i < s.edge_count(); ++i)
        actual[s.actual_index_[i]] = static_cast<std::uint8_t>(s.colour_order_[assignment[i]]);
      // relabel by first use in lex edge order
      std::vector<int> map(s.ell_, -1);
      int next = 0;
      for (auto& c : actual) {
        if (map[c] < 0) map[c] = next++;
        c = static_cast<std::uint8_t>(map[c]);
      }
      if (prod > out.best || actual < out.witness) {
        out.best = prod;
        out.witness = std::move(actual);
        // counts follow the relabelled colours
        out.counts.assign(s.ell_, 0);
        for (int c = 0; c < s.ell_; ++c) {
          const int label = map[s.colour_order_[c]];
          if (label >= 0) out.counts[label] = cnt[s.n_][c];
        }
        // unused colours (label < 0) take the remaining slots; their cliques are the small sets
        int slot = next;
        for (int c = 0; c < s.ell_; ++c)
          if (map[s.colour_order_[c]] < 0) out.counts[slot++] = cnt[s.n_][c];
      }
    }

    // Assigns position edge `e`; `used` colours have appeared; `v` is the open vertex.
    void descend(std::size_t e, int used, int v) {
      while (v < s.n_ && e == s.by_vertex_[v]) {
        close_vertex(v);
        ++v;
      }
      if (e == s.edge_count()) {
        while (v < s.n_) close_vertex(v++);
        leaf();
        return;
      }
      const int hi = std::min(used, s.ell_ - 1);
      int lo = 0, top = hi;
      if (e < forced->size()) lo = top = (*forced)[e];
      for (int c = lo; c <= top; ++c) {
        if (stopped) return;
        if (out.nodes == limit) {
          stopped = true;
          return;
        }
        ++out.nodes;
        assignment[e] = static_cast<std::uint8_t>(c);
        edge_colour[s.position_edges_[e]] = static_cast<std::uint8_t>(s.colour_order_[c]);
        descend(e + 1, std::max(used, c + 1), v);
      }
    }
  };

  int n_, ell_, m_;
  EdgeColoring template_;
  std::vector<int> order_;
  std::vector<int> colour_order_;
  std::vector<SetWord> position_edges_;
  std::vector<std::size_t> actual_index_;
  std::vector<std::size_t> by_vertex_;
};

inline BigInt to_big(Wide v) {
  BigInt r = static_cast<std::uint64_t>(v >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(v);
  return r;
}

}  // namespace detail

// Exact maximum of the product of colour-clique counts over all colourings of
// the complete (m+1)-uniform hypergraph on [n] with ell colours.
inline SearchResult exact_search(int n, int ell, int m, const ExactOptions& opts = {}) {
  require(n >= 1 && n <= 20, ErrorCode::invalid_argument, "exact search supports 1 <= n <= 20");
  require(m >= 0 && m + 1 <= n, ErrorCode::invalid_argument, "need 0 <= m < n");
  require(ell >= 1 && ell <= 16, ErrorCode::invalid_argument, "exact search supports 1 <= ell <= 16");
  require(ell * (n + 1) <= 126, ErrorCode::invalid_argument, "product would not fit 126 bits");
  if (!opts.vertex_order.empty()) {
    auto sorted = opts.vertex_order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i)
      require(static_cast<int>(sorted.size()) == n && sorted[i] == i, ErrorCode::invalid_argument,
              "vertex_order must be a permutation of [0, n)");
  }
  if (!opts.color_order.empty()) {
    auto sorted = opts.color_order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < ell; ++i)
      require(static_cast<int>(sorted.size()) == ell && sorted[i] == i, ErrorCode::invalid_argument,
              "color_order must be a permutation of [0, ell)");
  }

  const detail::ExactSearcher searcher(n, ell, m, opts);
  const BigInt tree = searcher.tree_size();
  const bool fits = tree <= BigInt(opts.budget);

  detail::ExactSearcher::Outcome best;
  best.completed = fits;
  if (!fits) {
    best = searcher.run({}, opts.budget);
  } else {
    const unsigned threads = std::max(1u, opts.threads);
    std::size_t w = 0;
    while (w < searcher.edge_count() && searcher.prefixes(w).size() < 8u * threads) ++w;
    const auto tasks = searcher.prefixes(w);
    std::vector<detail::ExactSearcher::Outcome> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();)
        results[i] = searcher.run(tasks[i], ~std::uint64_t{0});
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    // prefix nodes of length w are counted once per task; subtract the shared interior
    std::uint64_t nodes = 0;
    for (auto& r : results) {
      nodes += r.nodes;
      if (r.best > best.best || (r.best == best.best && r.witness < best.witness)) {
        best.best = r.best;
        best.witness = std::move(r.witness);
        best.counts = std::move(r.counts);
      }
    }
    if (w > 0) {
      std::uint64_t interior = 0;
      for (std::size_t d = 1; d < w; ++d) interior += searcher.prefixes(d).size();
      nodes -= static_cast<std::uint64_t>(tasks.size()) * (w - 1);
      nodes += interior;
    }
    best.nodes = nodes;
    best.completed = true;
  }

  SearchResult res;
  res.best_value = detail::to_big(best.best);
  res.best_coloring = EdgeColoring(GroundSet(n), m + 1, ell, best.witness);
  for (auto c : best.counts) res.per_color_counts.emplace_back(c);
  res.nodes_explored = best.nodes;
  res.exhaustive = best.completed;
  return res;
}

// ---------------------------------------------------------------------------
// Annealing

struct AnnealSchedule {
  std::uint64_t iterations = 20000;
  double t_start = 1.0;
  double t_end = 0.01;
  std::optional<EdgeColoring> initial;
};

inline SearchResult anneal_search(int n, int ell, int m, std::uint64_t seed, const AnnealSchedule& schedule = {}) {
  require(n >= 1 && n <= 20, ErrorCode::invalid_argument, "anneal search supports 1 <= n <= 20");
  require(m >= 0 && m + 1 <= n, ErrorCode::invalid_argument, "need 0 <= m < n");
  const GroundSet g(n);
  std::mt19937_64 rng(seed);
  auto uniform01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  EdgeColoring cur(g, m + 1, ell);
  if (schedule.initial) {
    require(schedule.initial->n() == n && schedule.initial->arity() == m + 1 && schedule.initial->ell() == ell,
            ErrorCode::invalid_argument, "initial colouring has different parameters");
    cur = *schedule.initial;
  } else {
    for (std::size_t i = 0; i < cur.edge_count(); ++i) cur.set_color(i, static_cast<int>(rng() % ell));
  }

  auto table = detail::color_table(cur);
  std::vector<std::uint8_t> cl;
  auto count_colour = [&](int c) -> std::uint64_t {
    detail::clique_table(n, m, c, table, cl);
    std::uint64_t total = 0;
    for (auto v : cl) total += v;
    return total;
  };
  std::vector<std::uint64_t> counts(ell);
  for (int c = 0; c < ell; ++c) counts[c] = count_colour(c);
  auto log_value = [&](const std::vector<std::uint64_t>& cs) {
    double s = 0;
    for (auto v : cs) s += std::log(static_cast<double>(v));
    return s;
  };

  SearchResult res;
  double cur_log = log_value(counts);
  double best_log = cur_log;
  EdgeColoring best = cur;
  std::uint64_t nodes = 0;

  if (ell > 1) {
    for (std::uint64_t it = 0; it < schedule.iterations; ++it) {
      ++nodes;
      const double frac = schedule.iterations > 1 ? static_cast<double>(it) / (schedule.iterations - 1) : 1.0;
      const double temp = schedule.t_start * std::pow(schedule.t_end / schedule.t_start, frac);
      const std::size_t e = rng() % cur.edge_count();
      const int old_c = cur.colors()[e];
      int new_c = static_cast<int>(rng() % (ell - 1));
      if (new_c >= old_c) ++new_c;
      const SetWord mask = cur.edges()[e];
      table[mask] = static_cast<std::uint8_t>(new_c);
      auto trial = counts;
      trial[old_c] = count_colour(old_c);
      trial[new_c] = count_colour(new_c);
      const double trial_log = log_value(trial);
      const double delta = trial_log - cur_log;
      if (delta >= 0 || uniform01() < std::exp(delta / temp)) {
        cur.set_color(e, new_c);
        counts = std::move(trial);
        cur_log = trial_log;
        if (cur_log > best_log + 1e-12) {
          best_log = cur_log;
          best = cur;
        }
      } else {
        table[mask] = static_cast<std::uint8_t>(old_c);
      }
    }
  }

  // The reported value always comes from a fresh recount.
  res.best_coloring = best;
  res.per_color_counts = mono_clique_counts(best, ell);
  res.best_value = product(res.per_color_counts);
  res.nodes_explored = nodes;
  res.exhaustive = false;
  return res;
}

}  // namespace overlap
