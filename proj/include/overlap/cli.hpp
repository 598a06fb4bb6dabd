#pragma once

// Subcommand driver behind tools/oe. Exit codes: 0 success, 1 domain error
// (bad input file, violated property, cap exceeded), 2 usage error.

#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "overlap/coloring.hpp"
#include "overlap/conflict.hpp"
#include "overlap/constructions.hpp"
#include "overlap/core.hpp"
#include "overlap/formulas.hpp"
#include "overlap/io.hpp"
#include "overlap/shadow.hpp"
#include "overlap/symmetrize.hpp"
#include "overlap/tournament.hpp"

namespace overlap::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace detail {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Result of one subcommand: key/value rows for the human table, the same
// values as JSON, and an optional payload in one of the text formats.
struct Report {
  ordered_json doc = ordered_json::object();
  std::vector<std::pair<std::string, std::string>> rows;
  std::string payload_key;
  std::string payload;
  int exit_code = 0;

  void put(const std::string& key, const std::string& human, ordered_json value) {
    rows.emplace_back(key, human);
    doc[key] = std::move(value);
  }
  void put(const std::string& key, const std::string& s) { put(key, s, s); }
  void put(const std::string& key, const BigInt& v) { put(key, to_decimal(v), to_decimal(v)); }
  void put(const std::string& key, const Rational& v) { put(key, to_decimal(v), to_decimal(v)); }
  void put_int(const std::string& key, long long v) { put(key, std::to_string(v), v); }
  void put_bool(const std::string& key, bool v) { put(key, v ? "true" : "false", v); }
  void attach(const std::string& key, std::string text) {
    payload_key = key;
    payload = std::move(text);
    doc[key] = payload;
  }
};

inline std::string join_big(const std::vector<BigInt>& vs) {
  std::string out;
  for (const auto& v : vs) out += (out.empty() ? "" : " ") + to_decimal(v);
  return out;
}

inline ordered_json big_array(const std::vector<BigInt>& vs) {
  ordered_json a = ordered_json::array();
  for (const auto& v : vs) a.push_back(to_decimal(v));
  return a;
}

inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& tok : io::detail::split(s, ','))
    out.push_back(static_cast<int>(io::detail::parse_int(tok, "list entry")));
  return out;
}

inline SetWord parse_set_arg(const std::string& s, int n) {
  try {
    return io::parse_set(s, n);
  } catch (const Error& e) {
    throw Usage(e.what());
  }
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::parse_error, "cannot write " + path);
  out << text;
}

inline ordered_json witness_json(const OverlapWitness& w) {
  return {{"k1", w.k1 + 1}, {"k2", w.k2 + 1}, {"set1", io::format_set_line(w.set1)},
          {"set2", io::format_set_line(w.set2)}};
}

inline void put_system_summary(Report& r, const FamilySystem& sys) {
  std::vector<BigInt> sizes;
  for (const auto& f : sys.families) sizes.emplace_back(f.size());
  r.put_int("n", sys.ground.n());
  r.put_int("ell", sys.ell());
  r.put("sizes", join_big(sizes), big_array(sizes));
  r.put("product", system_product(sys));
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using detail::Report;
  using detail::Usage;

  CLI::App app{"Extremal systems of overlapping set families"};
  app.name("oe");
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  unsigned threads = 1;
  app.add_flag("--json", as_json, "Print JSON instead of a table");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));

  std::function<Report()> action;
  std::string out_path;

  // search ------------------------------------------------------------------
  auto* search = app.add_subcommand("search", "Maximize the product of monochromatic clique counts");
  std::string search_mode = "exact", search_mode_opt;
  int s_n = 0, s_ell = 0, s_m = 0;
  std::optional<std::uint64_t> s_seed, s_budget;
  std::uint64_t s_iters = 20000;
  search->add_option("kind", search_mode, "exact | anneal")->check(CLI::IsMember({"exact", "anneal"}));
  search->add_option("--mode", search_mode_opt, "exact | anneal")->check(CLI::IsMember({"exact", "anneal"}));
  search->add_option("--n", s_n)->required();
  search->add_option("--ell", s_ell)->required();
  search->add_option("--m", s_m)->required();
  search->add_option("--seed", s_seed);
  search->add_option("--budget", s_budget, "Node budget (exact) or iterations (anneal)");
  search->add_option("--iterations", s_iters);
  search->add_option("--out", out_path, "Write the best colouring here");
  search->callback([&] {
    action = [&]() -> Report {
      if (!search_mode_opt.empty()) {
        if (search->count("kind") && search_mode != search_mode_opt) throw Usage("conflicting search modes");
        search_mode = search_mode_opt;
      }
      SearchResult res;
      if (search_mode == "exact") {
        ExactOptions opts;
        opts.threads = threads;
        opts.budget = budget_from_env(s_budget.value_or(opts.budget));
        res = exact_search(s_n, s_ell, s_m, opts);
      } else {
        if (!s_seed) throw Usage("search anneal requires --seed");
        AnnealSchedule sched;
        sched.iterations = budget_from_env(s_budget.value_or(s_iters));
        res = anneal_search(s_n, s_ell, s_m, *s_seed, sched);
      }
      Report r;
      r.put("mode", search_mode);
      r.put_int("n", s_n);
      r.put_int("ell", s_ell);
      r.put_int("m", s_m);
      if (s_seed && search_mode == "anneal") r.put("seed", std::to_string(*s_seed));
      r.put("value", res.best_value);
      r.put("per_color_counts", detail::join_big(res.per_color_counts), detail::big_array(res.per_color_counts));
      r.put("nodes", std::to_string(res.nodes_explored));
      r.put_bool("exhaustive", res.exhaustive);
      r.attach("coloring", io::format_coloring(res.best_coloring));
      return r;
    };
  });

  // construct ---------------------------------------------------------------
  auto* construct = app.add_subcommand("construct", "Build extremal constructions");
  construct->require_subcommand(1);
  std::string plan_path, tour_path;
  int c_n = 0, c_m = 1, c_t = 0;
  std::string c_w;
  auto* octo = construct->add_subcommand("octopus", "Octopus system from a plan or a balanced tournament");
  octo->add_option("--plan", plan_path, "Plan JSON");
  octo->add_option("--n", c_n);
  octo->add_option("--tournament", tour_path, "Oriented graph for a balanced plan");
  octo->add_option("--m", c_m, "Uniform overlap bound for a balanced plan");
  octo->add_option("--out", out_path);
  octo->callback([&] {
    action = [&]() -> Report {
      OctopusPlan plan = [&] {
        if (!plan_path.empty()) {
          if (octo->count("--tournament")) throw Usage("give either --plan or --tournament");
          return io::parse_octopus_plan(json::parse(io::read_file(plan_path)));
        }
        if (tour_path.empty() || !octo->count("--n")) throw Usage("construct octopus needs --plan, or --n and --tournament");
        const OrientedGraph g = io::parse_tournament(io::read_file(tour_path));
        return balanced_plan(c_n, OverlapSpec::uniform(g.ell(), c_m), g);
      }();
      const FamilySystem sys = octopus_system(plan);
      Report r;
      detail::put_system_summary(r, sys);
      r.put_bool("overlapping", check_overlap(sys).ok);
      r.doc["plan"] = ordered_json::parse(io::plan_to_json(plan).dump());
      r.attach("system", io::format_system(sys));
      return r;
    };
  });
  auto* l5 = construct->add_subcommand("l5", "The five-family construction");
  l5->add_option("--n", c_n)->required();
  l5->add_option("--w", c_w, "Sizes of W_1, W_2, W_3 as a,b,c");
  l5->add_option("--out", out_path);
  l5->callback([&] {
    action = [&]() -> Report {
      L5Plan plan = [&] {
        if (c_w.empty()) return l5_plan_even(c_n);
        const auto w = detail::parse_int_list(c_w);
        if (w.size() != 3) throw Usage("--w takes three sizes");
        return l5_plan(c_n, {w[0], w[1], w[2]});
      }();
      const FamilySystem sys = l5_system(plan);
      Report r;
      detail::put_system_summary(r, sys);
      r.put_bool("overlapping", check_overlap(sys).ok);
      r.doc["plan"] = ordered_json::parse(io::plan_to_json(plan).dump());
      r.attach("system", io::format_system(sys));
      return r;
    };
  });
  auto* two = construct->add_subcommand("two-family", "2^[n] paired with C([n], <= t)");
  two->add_option("--n", c_n)->required();
  two->add_option("--t", c_t)->required();
  two->add_option("--out", out_path);
  two->callback([&] {
    action = [&]() -> Report {
      const FamilySystem sys = two_family_extremal(c_n, c_t);
      Report r;
      detail::put_system_summary(r, sys);
      r.attach("system", io::format_system(sys));
      return r;
    };
  });

  // tournament --------------------------------------------------------------
  auto* tour = app.add_subcommand("tournament", "Tournament functional r(T)");
  tour->require_subcommand(1);
  int t_ell = 0, t_p = 0;
  std::optional<std::uint64_t> t_seed;
  std::string t_in;
  auto put_tournament = [](Report& r, const OrientedGraph& g) {
    r.put_int("ell", g.ell());
    r.put_int("r", r_functional(g));
    r.attach("tournament", io::format_tournament(g));
  };
  auto* maxr = tour->add_subcommand("max-r", "Maximize r over all tournaments");
  maxr->add_option("--ell", t_ell)->required();
  maxr->callback([&] {
    action = [&]() -> Report {
      const MaxRResult res = max_r(t_ell, threads);
      Report r;
      r.put_int("ell", t_ell);
      r.put_int("r_star", res.r_star);
      r.put("maximizers", std::to_string(res.maximizer_count));
      r.put_int("classes", static_cast<long long>(res.witnesses.size()));
      ordered_json ws = ordered_json::array();
      std::string text;
      for (auto code : res.witnesses) {
        const auto s = io::format_tournament(tournament_from_code(t_ell, code));
        ws.push_back(s);
        text += s;
      }
      r.doc["witnesses"] = ws;
      r.payload = text;
      return r;
    };
  });
  auto* pal = tour->add_subcommand("paley", "Paley tournament on a prime p = 3 mod 4");
  pal->add_option("--p", t_p)->required();
  pal->add_option("--out", out_path);
  pal->callback([&] {
    action = [&]() -> Report {
      Report r;
      put_tournament(r, paley(t_p));
      return r;
    };
  });
  auto* rcmd = tour->add_subcommand("r", "Evaluate r on an oriented graph file");
  rcmd->add_option("--in", t_in)->required();
  rcmd->callback([&] {
    action = [&]() -> Report {
      const OrientedGraph g = io::parse_tournament(io::read_file(t_in));
      Report r;
      r.put_int("ell", g.ell());
      r.put_int("r", r_functional(g));
      r.put_bool("is_tournament", g.is_tournament());
      return r;
    };
  });
  auto* rnd = tour->add_subcommand("random", "Uniformly random tournament");
  rnd->add_option("--ell", t_ell)->required();
  rnd->add_option("--seed", t_seed);
  rnd->add_option("--out", out_path);
  rnd->callback([&] {
    action = [&]() -> Report {
      if (!t_seed) throw Usage("tournament random requires --seed");
      Report r;
      r.put("seed", std::to_string(*t_seed));
      put_tournament(r, random_tournament(t_ell, *t_seed));
      r.put("success_bound", success_probability_bound(t_ell));
      return r;
    };
  });

  // shadow ------------------------------------------------------------------
  auto* shadow = app.add_subcommand("shadow", "Shadows of uniform families");
  shadow->require_subcommand(1);
  std::string sh_in, sh_mode = "exhaustive";
  int sh_n = 0, sh_k = 0;
  std::optional<std::uint64_t> sh_seed, sh_size;
  std::uint64_t sh_samples = 10000;
  auto shadow_cmd = [&](CLI::App* sub, bool upper) {
    sub->add_option("--in", sh_in)->required();
    sub->add_option("--out", out_path);
    sub->callback([&, upper] {
      action = [&, upper]() -> Report {
        const Family f = io::parse_family(io::read_file(sh_in));
        if (f.empty()) throw Error(ErrorCode::invalid_argument, "shadow of an empty family needs a uniformity");
        const UniformFamily u(f.ground(), popcount(f.sets().front()), f);
        const UniformFamily s = upper ? upper_shadow(u) : lower_shadow(u);
        Report r;
        r.put_int("n", f.ground().n());
        r.put_int("k", u.k);
        r.put_int("size", static_cast<long long>(u.size()));
        r.put_int("shadow_size", static_cast<long long>(s.size()));
        r.attach("shadow", io::format_family(s.sets));
        return r;
      };
    });
  };
  shadow_cmd(shadow->add_subcommand("upper", "Upper shadow"), true);
  shadow_cmd(shadow->add_subcommand("lower", "Lower shadow"), false);
  auto* kk = shadow->add_subcommand("kk-verify", "Check that initial lex segments minimize the upper shadow");
  kk->add_option("--n", sh_n)->required();
  kk->add_option("--k", sh_k)->required();
  kk->add_option("--mode", sh_mode)->check(CLI::IsMember({"exhaustive", "sample"}));
  kk->add_option("--seed", sh_seed);
  kk->add_option("--samples", sh_samples);
  kk->add_option("--size", sh_size, "Single family size; all sizes when omitted");
  kk->callback([&] {
    action = [&]() -> Report {
      KKOptions opts;
      opts.mode = sh_mode == "sample" ? KKMode::sample : KKMode::exhaustive;
      if (opts.mode == KKMode::sample) {
        if (!sh_seed) throw Usage("sampled kk-verify requires --seed");
        opts.seed = *sh_seed;
        opts.samples = sh_samples;
      }
      if (sh_n < 1 || sh_n > kMaxGround || sh_k < 0 || sh_k > sh_n) throw Usage("invalid --n/--k");
      const std::uint64_t total = binom_u64(sh_n, sh_k);
      std::uint64_t lo = 0, hi = total;
      if (sh_size) {
        if (*sh_size > total) throw Usage("--size exceeds C(n, k)");
        lo = hi = *sh_size;
      }
      Report r;
      r.put_int("n", sh_n);
      r.put_int("k", sh_k);
      r.put("mode", sh_mode);
      if (opts.mode == KKMode::sample) r.put("seed", std::to_string(opts.seed));
      bool holds = true;
      std::uint64_t checked = 0;
      ordered_json sizes = ordered_json::array();
      for (std::uint64_t size = lo; size <= hi; ++size) {
        const KKReport rep = kk_verify(sh_n, sh_k, size, opts);
        holds = holds && rep.holds;
        checked += rep.families_checked;
        ordered_json row = {{"size", size},
                           {"segment_shadow", rep.segment_shadow},
                           {"min_shadow_seen", rep.min_shadow_seen},
                           {"families_checked", std::to_string(rep.families_checked)},
                           {"holds", rep.holds}};
        if (!rep.holds) {
          ordered_json ce = ordered_json::array();
          for (SetWord s : rep.counterexample) ce.push_back(io::format_set_line(s));
          row["counterexample"] = ce;
        }
        sizes.push_back(std::move(row));
      }
      r.put("families_checked", std::to_string(checked));
      r.put_bool("holds", holds);
      r.doc["sizes"] = sizes;
      if (!holds) r.exit_code = 1;
      return r;
    };
  });

  // symmetrize --------------------------------------------------------------
  auto* sym = app.add_subcommand("symmetrize", "Apply one symmetrization step");
  std::string sy_sys, sy_s0, sy_s, sy_centers, sy_graph;
  int sy_k0 = 0;
  sym->add_option("--sys", sy_sys)->required();
  sym->add_option("--k0", sy_k0)->required();
  sym->add_option("--s0", sy_s0)->required();
  sym->add_option("--s", sy_s)->required();
  sym->add_option("--centers", sy_centers)->required();
  sym->add_option("--tournament", sy_graph, "Restrict S0 to the centers of Out(k0)");
  sym->add_option("--out", out_path);
  sym->callback([&] {
    action = [&]() -> Report {
      SymmetrizationRequest req{io::parse_system(io::read_file(sy_sys)), sy_k0 - 1, 0, 0, {}, std::nullopt};
      const int n = req.sys.ground.n();
      req.s0 = detail::parse_set_arg(sy_s0, n);
      req.s = detail::parse_set_arg(sy_s, n);
      req.centers = io::parse_centers(io::read_file(sy_centers), n);
      if (!sy_graph.empty()) req.graph = io::parse_tournament(io::read_file(sy_graph));
      if (sy_k0 < 1 || sy_k0 > req.sys.ell()) throw Usage("--k0 outside [1, ell]");
      const SymmetrizationResult res = symmetrize(req);
      Report r;
      r.put_int("k0", sy_k0);
      r.put("s0", io::format_set_line(req.s0));
      r.put("s", io::format_set_line(req.s));
      r.put("old_product", res.old_product);
      r.put("new_product", res.new_product);
      r.put_bool("accepted", res.accepted);
      r.attach("system", io::format_system(res.new_sys));
      return r;
    };
  });

  // formula -----------------------------------------------------------------
  auto* formula = app.add_subcommand("formula", "Closed-form estimates");
  formula->require_subcommand(1);
  int f_n = 0, f_ell = 0, f_m = 0;
  std::string f_spec;
  auto* mt = formula->add_subcommand("main-term", "Leading term of s*(n, ell, m)");
  mt->add_option("--n", f_n)->required();
  mt->add_option("--ell", f_ell);
  mt->add_option("--m", f_m);
  mt->add_option("--spec", f_spec, "File with an ell line and the m block");
  mt->callback([&] {
    action = [&]() -> Report {
      OverlapSpec spec = [&] {
        if (!f_spec.empty()) {
          if (mt->count("--ell") || mt->count("--m")) throw Usage("give either --spec or --ell/--m");
          return io::parse_spec(io::read_file(f_spec));
        }
        if (!mt->count("--ell") || !mt->count("--m")) throw Usage("formula main-term needs --ell and --m, or --spec");
        if (f_ell < 1 || f_m < 0) throw Usage("invalid --ell/--m");
        return OverlapSpec::uniform(f_ell, f_m);
      }();
      const MainTerm term = asymptotic_main_term(f_n, spec);
      Report r;
      r.put_int("n", f_n);
      r.put_int("ell", spec.ell());
      r.put("coefficient", term.coefficient);
      r.put_int("power_of_two", term.power_of_two);
      r.put("value", term.value());
      std::ostringstream approx;
      approx << std::setprecision(12) << to_double(term.value());
      r.rows.emplace_back("approx", approx.str());
      if (spec.total() > 0) {
        ordered_json targets = ordered_json::object();
        for (const auto& [pair, v] : block_size_targets(f_n, spec))
          targets[std::to_string(pair.first + 1) + "," + std::to_string(pair.second + 1)] = to_decimal(v);
        r.doc["block_size_targets"] = targets;
      }
      return r;
    };
  });

  // verify ------------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "Check properties of a system");
  verify->require_subcommand(1);
  std::string v_sys;
  auto* vo = verify->add_subcommand("overlap", "m-overlapping property");
  vo->add_option("--sys", v_sys)->required();
  vo->callback([&] {
    action = [&]() -> Report {
      const FamilySystem sys = io::parse_system(io::read_file(v_sys));
      const OverlapReport rep = check_overlap(sys);
      Report r;
      r.put_bool("ok", rep.ok);
      if (rep.witness) {
        const auto& w = *rep.witness;
        r.rows.emplace_back("witness", "family " + std::to_string(w.k1 + 1) + " " + format_set(w.set1) +
                                           ", family " + std::to_string(w.k2 + 1) + " " + format_set(w.set2) +
                                           ", bound " + std::to_string(sys.spec.at(w.k1, w.k2)));
        r.doc["witness"] = detail::witness_json(w);
        r.exit_code = 1;
      }
      return r;
    };
  });
  auto* vd = verify->add_subcommand("down-closed", "Every family closed under subsets");
  vd->add_option("--sys", v_sys)->required();
  vd->callback([&] {
    action = [&]() -> Report {
      const FamilySystem sys = io::parse_system(io::read_file(v_sys));
      Report r;
      bool ok = true;
      ordered_json per = ordered_json::array();
      std::string human;
      for (const auto& f : sys.families) {
        const bool d = is_down_closed(f);
        ok = ok && d;
        per.push_back(d);
        human += std::string(human.empty() ? "" : " ") + (d ? "yes" : "no");
      }
      r.put_bool("ok", ok);
      r.put("families", human, per);
      if (!ok) r.exit_code = 1;
      return r;
    };
  });
  auto* vr = verify->add_subcommand("rinott", "Product versus the layered meet/join bound");
  vr->add_option("--sys", v_sys)->required();
  vr->callback([&] {
    action = [&]() -> Report {
      const FamilySystem sys = io::parse_system(io::read_file(v_sys));
      const RinottReport rep = rinott_check(sys.families);
      Report r;
      r.put("lhs", rep.lhs);
      r.put("rhs", rep.rhs);
      r.put_bool("holds", rep.holds);
      if (!rep.holds) r.exit_code = 1;
      return r;
    };
  });

  // complete ----------------------------------------------------------------
  auto* complete = app.add_subcommand("complete", "Grow families to maximality");
  std::string cp_sys;
  int cp_k = 0;
  bool cp_all = false;
  complete->add_option("--sys", cp_sys)->required();
  auto* cp_k_opt = complete->add_option("--k", cp_k, "Family to complete (1-based)");
  auto* cp_all_opt = complete->add_flag("--all", cp_all, "Round-robin until no family grows");
  cp_k_opt->excludes(cp_all_opt);
  complete->add_option("--out", out_path);
  complete->callback([&] {
    action = [&]() -> Report {
      FamilySystem sys = io::parse_system(io::read_file(cp_sys));
      const BigInt before = system_product(sys);
      if (cp_all) {
        sys = complete_all(std::move(sys));
      } else {
        if (!complete->count("--k")) throw Usage("complete needs --k or --all");
        if (cp_k < 1 || cp_k > sys.ell()) throw Usage("--k outside [1, ell]");
        std::vector<Family> fams = sys.families;
        fams[cp_k - 1] = maximal_completion(sys, cp_k - 1);
        sys = FamilySystem(sys.ground, std::move(fams), sys.spec);
      }
      Report r;
      r.put("old_product", before);
      detail::put_system_summary(r, sys);
      r.attach("system", io::format_system(sys));
      return r;
    };
  });

  std::vector<const char*> argv{"oe"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  Report report;
  try {
    report = action();
    if (!out_path.empty() && !report.payload.empty()) detail::write_file(out_path, report.payload);
  } catch (const Usage& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  if (as_json) {
    out << report.doc.dump(2) << "\n";
  } else {
    std::size_t width = 0;
    for (const auto& [k, v] : report.rows) width = std::max(width, k.size());
    for (const auto& [k, v] : report.rows) out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << "\n";
    if (!report.payload.empty() && out_path.empty()) out << "\n" << report.payload;
  }
  return report.exit_code;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace overlap::cli
