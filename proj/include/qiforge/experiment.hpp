#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qiforge/ball.hpp"
#include "qiforge/bs_model.hpp"
#include "qiforge/folner.hpp"
#include "qiforge/io.hpp"
#include "qiforge/matching.hpp"
#include "qiforge/qi_maps.hpp"
#include "qiforge/specs.hpp"
#include "qiforge/uf_chain.hpp"

namespace qiforge {

using json = nlohmann::ordered_json;

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInconclusive = 2;

/// Resolved run parameters; every command writes these next to its results so
/// a run is reproducible from its output directory alone.
struct RunContext {
  std::filesystem::path out_dir = "out";
  std::size_t budget = kDefaultBallBudget;
  int threads = 1;

  void emit_config(const std::string& command, json args) const {
    json cfg;
    cfg["command"] = command;
    for (auto& [k, v] : args.items()) cfg[k] = v;
    cfg["budget"] = budget;
    cfg["threads"] = threads;
    write_file(out_dir / "resolved_config.json", cfg.dump(2) + "\n");
  }
};

inline void reject_unknown_keys(const json& j, const std::set<std::string>& allowed) {
  for (auto& [k, v] : j.items())
    if (!allowed.contains(k)) throw spec_error("unknown config key '" + k + "'");
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline int run_ball(const std::string& group_spec, int radius, const RunContext& ctx) {
  ctx.emit_config("ball", json{{"group", group_spec}, {"r", radius}});
  AnyGroup g = parse_group(group_spec);
  std::visit(
      [&](const auto& gg) {
        auto b = ball(gg, radius, ctx.budget);
        write_file(ctx.out_dir / "ball.csv", b.to_csv());
      },
      g);
  return kExitOk;
}

/// Folner profile of the standard family; free groups fall back to the ball
/// family as the non-amenability contrast.
inline int run_folner(const std::string& group_spec, long long i_max, const RunContext& ctx) {
  ctx.emit_config("folner", json{{"group", group_spec}, {"i_max", i_max}});
  AnyGroup g = parse_group(group_spec);
  std::vector<ProfileRow> rows = std::visit(
      [&](const auto& gg) {
        using G = std::decay_t<decltype(gg)>;
        if constexpr (std::is_same_v<G, FreeGroup>) {
          return profile(ball_family(gg, ctx.budget), i_max, ctx.threads);
        } else {
          return profile(standard_family(gg, std::min<std::size_t>(ctx.budget, kDefaultSetBudget)),
                         i_max, ctx.threads);
        }
      },
      g);
  write_file(ctx.out_dir / "profile.csv", profile_csv(rows));
  return kExitOk;
}

inline int run_uf_test(const std::string& chain_spec, const std::string& group_spec,
                       long long i_max, const RunContext& ctx) {
  ctx.emit_config("uf_test", json{{"chain", chain_spec}, {"group", group_spec}, {"i_max", i_max}});
  AnyGroup g = parse_group(group_spec);
  auto* fa = std::get_if<FreeAbelianGroup>(&g);
  if (!fa) throw spec_error("uf-test supports free-abelian groups");
  auto chain = parse_chain(chain_spec, *fa, i_max, ctx.budget);
  auto rep = vanishing_report(chain, standard_family(*fa), i_max);
  write_file(ctx.out_dir / "uf_report.csv", rep.to_csv());
  return rep.verdict == "inconclusive" ? kExitInconclusive : kExitOk;
}

/// Claimed-constant audit plus fiber census over symmetric windows of the
/// given radius.
inline int run_qi_audit(const std::string& map_spec, int radius, const RunContext& ctx) {
  ctx.emit_config("qi_audit", json{{"map", map_spec}, {"radius", radius}});
  MapAny m = parse_map(map_spec);
  json out = std::visit(
      [&](const auto& f) {
        auto src = ball(f.source, radius, ctx.budget);
        long long max_image = 0;
        for (const auto& x : src.elements())
          max_image = std::max(max_image, f.target.word_norm(f.eval(x)));
        auto tgt = ball(f.target, static_cast<int>(max_image), ctx.budget);
        auto rep = verify_constants(f, f.K_claimed, f.C_claimed, src, tgt);
        auto census = fiber_census(f, src, tgt);
        long long interior = 0, interior_claimed = 0;
        for (const auto& row : census.rows) {
          if (!row.interior) continue;
          ++interior;
          if (f.fiber_claimed && row.count == *f.fiber_claimed) ++interior_claimed;
        }
        json j = rep.to_json();
        j["interior_fibers"] = interior;
        j["interior_fibers_with_claimed_count"] = interior_claimed;
        return j;
      },
      m);
  write_file(ctx.out_dir / "audit.json", out.dump(2) + "\n");
  return kExitOk;
}

inline int run_rstar(const std::string& map_spec, const std::vector<long long>& L_list,
                     long long R_max, const RunContext& ctx) {
  ctx.emit_config("rstar", json{{"map", map_spec}, {"L_list", L_list}, {"R_max", R_max}});
  MapAny m = parse_map(map_spec);
  GrowthParams params;
  if (R_max > 0) params.r_max_for = [R_max](long long) { return R_max; };
  auto rep = std::visit(
      [&](const auto& f) {
        return classify_growth(f, L_list, params,
                               std::min<std::size_t>(ctx.budget, kDefaultMatchingBudget),
                               ctx.threads);
      },
      m);
  write_file(ctx.out_dir / "rstar.csv", rep.to_csv());
  return rep.verdict == "inconclusive" ? kExitInconclusive : kExitOk;
}

// ---------------------------------------------------------------------------
// Bundled experiments
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = {
      "thm-3.6-zn",   "thm-3.8-kernel", "sec4-floor",      "sec4-extend",
      "sec4-bs",      "thm-3.5-class",  "folner-profiles",
  };
  return ids;
}

inline int run_reproduce(const std::string& id, const RunContext& ctx) {
  RunContext sub = ctx;
  sub.out_dir = ctx.out_dir / id;
  int code = kExitOk;
  auto absorb = [&code](int c) { code = std::max(code, c); };
  const std::vector<long long> Ls = {40, 80, 160};

  if (id == "thm-3.6-zn") {
    sub.emit_config("reproduce", json{{"experiment", id}});
    for (long long n : {2, 3}) {
      auto f = inclusion_map({n}, FreeAbelianGroup(1));
      auto rep = classify_growth(f, Ls, {}, kDefaultMatchingBudget, sub.threads);
      write_file(sub.out_dir / ("incl" + std::to_string(n) + "_rstar.csv"), rep.to_csv());
      if (rep.verdict == "inconclusive") absorb(kExitInconclusive);
    }
  } else if (id == "thm-3.8-kernel") {
    sub.emit_config("reproduce", json{{"experiment", id}});
    auto proj = classify_growth(projection_map(2), Ls, {}, kDefaultMatchingBudget, sub.threads);
    write_file(sub.out_dir / "proj_rstar.csv", proj.to_csv());
    if (proj.verdict == "inconclusive") absorb(kExitInconclusive);
    auto chart = classify_growth(cyclic_chart(2), Ls, {}, kDefaultMatchingBudget, sub.threads);
    write_file(sub.out_dir / "chart_rstar.csv", chart.to_csv());
    if (chart.verdict == "inconclusive") absorb(kExitInconclusive);
  } else if (id == "sec4-floor") {
    sub.emit_config("reproduce", json{{"experiment", id}});
    auto f = floor_map_Z(2);
    auto src = ball(f.source, 500, sub.budget);
    auto tgt = ball(f.target, 501, sub.budget);
    auto rep = verify_constants(f, Ratio(2), Ratio(1), src, tgt);
    write_file(sub.out_dir / "audit.json", rep.to_json().dump(2) + "\n");
  } else if (id == "sec4-extend") {
    sub.emit_config("reproduce", json{{"experiment", id}});
    auto ext = extend_floor(FreeAbelianGroup(1), 2);
    auto flo = floor_map_Z(2);
    long long mismatches = 0, checked = 0;
    for (long long x = -1000; x <= 1000; ++x) {
      ++checked;
      if (!(ext.eval(VecElem{{x}}) == flo.eval(VecElem{{x}}))) ++mismatches;
    }
    json j{{"map", ext.name}, {"reference", flo.name}, {"window", "[-1000,1000]"},
           {"checked", checked}, {"mismatches", mismatches}, {"equal", mismatches == 0}};
    write_file(sub.out_dir / "extend.json", j.dump(2) + "\n");
  } else if (id == "sec4-bs") {
    sub.emit_config("reproduce", json{{"experiment", id}});
    BaumslagSolitarGroup bs(2);
    auto a8 = audit_f_C(bs, 2, 8, Ratio(4), sub.budget);
    auto a6 = audit_f_C(bs, 2, 6, Ratio(4), sub.budget);
    json j{{"map", "fc(2,2)"},
           {"K_emp_r8", a8.K_emp.str()},
           {"K_emp_r6", a6.K_emp.str()},
           {"interior_fibers_r8", a8.interior_targets},
           {"interior_fibers_exactly_n_r8", a8.interior_with_exact_n},
           {"levels_preserved", a8.levels_preserved},
           {"rep_bound_holds", a8.rep_bound_holds}};
    write_file(sub.out_dir / "bs_audit.json", j.dump(2) + "\n");
    write_file(sub.out_dir / "bs_window.csv", bs_window_csv(bs, ball(bs, 4), 2));
  } else if (id == "thm-3.5-class") {
    sub.emit_config("reproduce", json{{"experiment", id}});
    FreeAbelianGroup Z(1);
    auto nonzero = vanishing_report(parse_chain("complement(2)", Z, 100), standard_family(Z), 100);
    write_file(sub.out_dir / "complement2.csv", nonzero.to_csv());
    auto zero = vanishing_report(parse_chain("edgeboundary(pair)", Z, 40), standard_family(Z), 40);
    write_file(sub.out_dir / "telescope.csv", zero.to_csv());
    if (nonzero.verdict == "inconclusive" || zero.verdict == "inconclusive")
      absorb(kExitInconclusive);
  } else if (id == "folner-profiles") {
    sub.emit_config("reproduce", json{{"experiment", id}});
    write_file(sub.out_dir / "z_profile.csv",
               profile_csv(profile(standard_family(FreeAbelianGroup(1)), 100, sub.threads)));
    write_file(sub.out_dir / "z2_profile.csv",
               profile_csv(profile(standard_family(FreeAbelianGroup(2)), 60, sub.threads)));
    write_file(sub.out_dir / "bs12_profile.csv",
               profile_csv(profile(standard_family(BaumslagSolitarGroup(2)), 7, sub.threads)));
    write_file(sub.out_dir / "f2_profile.csv",
               profile_csv(profile(ball_family(FreeGroup(2)), 6, sub.threads)));
  } else {
    throw spec_error("unknown experiment id '" + id + "'");
  }
  return code;
}

// ---------------------------------------------------------------------------
// Config documents
// ---------------------------------------------------------------------------

/// Runs a single JSON config document. Unknown keys are rejected.
inline int run_config(const json& cfg, RunContext ctx) {
  if (!cfg.contains("command")) throw spec_error("config: missing 'command'");
  const std::string cmd = cfg.at("command").get<std::string>();
  const std::set<std::string> common = {"command", "budget", "threads", "out"};
  auto with = [&](std::initializer_list<std::string> extra) {
    std::set<std::string> keys = common;
    for (const auto& k : extra) keys.insert(k);
    return keys;
  };
  if (cfg.contains("budget")) ctx.budget = cfg.at("budget").get<std::size_t>();
  if (cfg.contains("threads")) ctx.threads = cfg.at("threads").get<int>();
  if (cfg.contains("out")) ctx.out_dir = cfg.at("out").get<std::string>();

  if (cmd == "ball") {
    reject_unknown_keys(cfg, with({"group", "r"}));
    return run_ball(cfg.at("group").get<std::string>(), cfg.at("r").get<int>(), ctx);
  }
  if (cmd == "folner") {
    reject_unknown_keys(cfg, with({"group", "i_max"}));
    return run_folner(cfg.at("group").get<std::string>(), cfg.at("i_max").get<long long>(), ctx);
  }
  if (cmd == "uf_test") {
    reject_unknown_keys(cfg, with({"chain", "group", "i_max"}));
    return run_uf_test(cfg.at("chain").get<std::string>(), cfg.at("group").get<std::string>(),
                       cfg.at("i_max").get<long long>(), ctx);
  }
  if (cmd == "qi_audit") {
    reject_unknown_keys(cfg, with({"map", "radius"}));
    return run_qi_audit(cfg.at("map").get<std::string>(), cfg.at("radius").get<int>(), ctx);
  }
  if (cmd == "rstar") {
    reject_unknown_keys(cfg, with({"map", "L_list", "R_max"}));
    return run_rstar(cfg.at("map").get<std::string>(),
                     cfg.at("L_list").get<std::vector<long long>>(),
                     cfg.value("R_max", 0LL), ctx);
  }
  if (cmd == "reproduce") {
    reject_unknown_keys(cfg, with({"experiment"}));
    return run_reproduce(cfg.at("experiment").get<std::string>(), ctx);
  }
  throw spec_error("unknown command '" + cmd + "'");
}

}  // namespace qiforge
