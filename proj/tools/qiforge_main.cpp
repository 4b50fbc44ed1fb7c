#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qiforge/qiforge.hpp"

namespace {

qiforge::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qiforge::spec_error("cannot open config file " + path);
  return qiforge::json::parse(in);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qiforge;

  CLI::App app{"qiforge: word metrics, Folner profiles, uniformly finite 0-chain "
               "statistics, quasi-isometry audits and bounded-displacement matchings"};
  app.require_subcommand(0, 1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string out_dir = "out";
  std::size_t budget = kDefaultBallBudget;
  int threads = 1;
  std::string config_path;
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--budget", budget, "element budget for balls/sets")
      ->envname("QIFORGE_BUDGET")
      ->capture_default_str();
  app.add_option("--threads", threads, "worker threads for sweeps")->capture_default_str();
  app.add_option("--config", config_path, "JSON config document defining the run");

  std::string group_spec, map_spec, chain_spec, experiment_id;
  int radius = 0;
  long long i_max = 0, r_max = 0;
  std::vector<long long> l_list;

  auto* cmd_ball = app.add_subcommand("ball", "BFS ball dump: id, normal_form, distance");
  cmd_ball->add_option("group", group_spec, "group spec, e.g. Z^2, BS(1,3), F_2, ZxC3")
      ->required();
  cmd_ball->add_option("r", radius, "radius")->required();

  auto* cmd_folner = app.add_subcommand("folner", "isoperimetric profile of the standard family");
  cmd_folner->add_option("group", group_spec)->required();
  cmd_folner->add_option("i_max", i_max)->required();

  auto* cmd_uf = app.add_subcommand("uf-test", "Folner statistic of a uniformly finite 0-chain");
  cmd_uf->add_option("chain", chain_spec, "e.g. complement(2), edgeboundary(pair)")->required();
  cmd_uf->add_option("group", group_spec)->required();
  cmd_uf->add_option("i_max", i_max)->required();

  auto* cmd_audit = app.add_subcommand("qi-audit", "exhaustive Eq.-constant audit + fiber census");
  cmd_audit->add_option("map", map_spec, "e.g. floor(2), incl(3), fc(2,2)")->required();
  cmd_audit->add_option("radius", radius)->required();

  auto* cmd_rstar = app.add_subcommand("rstar", "minimal displacement radius growth R*(L)");
  cmd_rstar->add_option("map", map_spec)->required();
  cmd_rstar->add_option("L_list", l_list, "window sizes, increasing")->required()->expected(-3);
  cmd_rstar->add_option("--R-max", r_max, "cap on R (default 2L+4 per window)");

  auto* cmd_repro = app.add_subcommand("reproduce", "run a bundled experiment");
  std::string id_help = "one of:";
  for (const auto& id : experiment_ids()) id_help += " " + id;
  cmd_repro->add_option("experiment", experiment_id, id_help)->required();

  CLI11_PARSE(app, argc, argv);

  RunContext ctx;
  ctx.out_dir = out_dir;
  ctx.budget = budget;
  ctx.threads = threads;

  try {
    if (!config_path.empty()) {
      if (app.get_subcommands().size() > 0)
        throw spec_error("--config and a subcommand are mutually exclusive");
      return run_config(load_json(config_path), ctx);
    }
    if (cmd_ball->parsed()) return run_ball(group_spec, radius, ctx);
    if (cmd_folner->parsed()) return run_folner(group_spec, i_max, ctx);
    if (cmd_uf->parsed()) return run_uf_test(chain_spec, group_spec, i_max, ctx);
    if (cmd_audit->parsed()) return run_qi_audit(map_spec, radius, ctx);
    if (cmd_rstar->parsed()) return run_rstar(map_spec, l_list, r_max, ctx);
    if (cmd_repro->parsed()) return run_reproduce(experiment_id, ctx);
    std::cerr << app.help();
    return kExitError;
  } catch (const budget_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const out_of_window_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const spec_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return kExitError;
  }
}
