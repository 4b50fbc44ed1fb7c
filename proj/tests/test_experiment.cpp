#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "qiforge/experiment.hpp"

using namespace qiforge;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / "qiforge_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("map spec parsing") {
  REQUIRE(map_name(parse_map("floor(2)")) == "floor(2)");
  REQUIRE(map_name(parse_map("incl(3)")) == "incl(3Z<Z)");
  REQUIRE(map_name(parse_map("comp(incl(2),floor(2))")) ==
          "comp(incl(2Z<Z),floor(2))");
  REQUIRE(std::holds_alternative<MapCZ>(parse_map("proj(2)")));
  REQUIRE(std::holds_alternative<MapBB>(parse_map("fc(2,2)")));
  REQUIRE(std::holds_alternative<MapCC>(parse_map("inclc(2,3)")));
  REQUIRE(std::holds_alternative<MapZZ>(parse_map("extendfloor(3)")));
  REQUIRE(std::holds_alternative<MapZZ>(parse_map("id(Z^2)")));

  REQUIRE_THROWS_AS(parse_map("warp(2)"), spec_error);
  REQUIRE_THROWS_AS(parse_map("floor(2"), spec_error);
  REQUIRE_THROWS_AS(parse_map("floor(x)"), spec_error);
  REQUIRE_THROWS_AS(parse_map("comp(proj(2),floor(2))"), spec_error);

  // inclfloor equals the explicit composition pointwise
  auto a = std::get<MapZZ>(parse_map("inclfloor(2)"));
  auto b = std::get<MapZZ>(parse_map("comp(incl(2),floor(2))"));
  for (long long j = -20; j <= 20; ++j)
    REQUIRE(a.eval(VecElem{{j}}) == b.eval(VecElem{{j}}));
}

TEST_CASE("chain spec parsing") {
  FreeAbelianGroup Z(1);
  auto c = parse_chain("complement(2)", Z, 10);
  REQUIRE(c.coeff(VecElem{{3}}) == 1);
  REQUIRE(c.coeff(VecElem{{4}}) == 0);
  REQUIRE_THROWS_AS(parse_chain("nope", Z, 10), spec_error);
  REQUIRE_THROWS_AS(parse_chain("edgeboundary(zig)", Z, 10), spec_error);
  REQUIRE_THROWS_AS(parse_chain("push(proj(2))", Z, 10), spec_error);
}

TEST_CASE("runs emit resolved config and results") {
  RunContext ctx;
  ctx.out_dir = fresh_dir("ball_run");
  REQUIRE(run_ball("BS(1,2)", 2, ctx) == kExitOk);
  REQUIRE(fs::exists(ctx.out_dir / "resolved_config.json"));
  auto cfg = json::parse(slurp(ctx.out_dir / "resolved_config.json"));
  REQUIRE(cfg.at("command") == "ball");
  REQUIRE(cfg.at("group") == "BS(1,2)");
  auto csv = slurp(ctx.out_dir / "ball.csv");
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 18);  // header + 17 rows
}

TEST_CASE("identical configs give byte-identical outputs") {
  RunContext a, b;
  a.out_dir = fresh_dir("det_a");
  b.out_dir = fresh_dir("det_b");
  REQUIRE(run_folner("Z^2", 10, a) == kExitOk);
  REQUIRE(run_folner("Z^2", 10, b) == kExitOk);
  REQUIRE(slurp(a.out_dir / "profile.csv") == slurp(b.out_dir / "profile.csv"));

  RunContext c, d;
  c.out_dir = fresh_dir("det_c");
  d.out_dir = fresh_dir("det_d");
  REQUIRE(run_rstar("incl(2)", {10, 20, 30}, 0, c) == kExitOk);
  REQUIRE(run_rstar("incl(2)", {10, 20, 30}, 0, d) == kExitOk);
  REQUIRE(slurp(c.out_dir / "rstar.csv") == slurp(d.out_dir / "rstar.csv"));
}

TEST_CASE("uf-test and qi-audit runs") {
  RunContext ctx;
  ctx.out_dir = fresh_dir("uf_run");
  REQUIRE(run_uf_test("complement(2)", "Z", 30, ctx) == kExitOk);
  auto csv = slurp(ctx.out_dir / "uf_report.csv");
  REQUIRE(csv.find("# verdict: evidence-nonzero") != std::string::npos);

  ctx.out_dir = fresh_dir("audit_run");
  REQUIRE(run_qi_audit("floor(2)", 60, ctx) == kExitOk);
  auto j = json::parse(slurp(ctx.out_dir / "audit.json"));
  REQUIRE(j.at("pass") == true);
  REQUIRE(j.at("map") == "floor(2)");
}

TEST_CASE("config documents reject unknown keys") {
  RunContext ctx;
  ctx.out_dir = fresh_dir("cfg_run");
  json good{{"command", "folner"}, {"group", "Z"}, {"i_max", 5},
            {"out", (ctx.out_dir / "sub").string()}};
  REQUIRE(run_config(good, ctx) == kExitOk);

  json bad = good;
  bad["surprise"] = 1;
  REQUIRE_THROWS_AS(run_config(bad, ctx), spec_error);

  json nocmd{{"group", "Z"}};
  REQUIRE_THROWS_AS(run_config(nocmd, ctx), spec_error);
}

TEST_CASE("bundled experiment: sec4-extend") {
  RunContext ctx;
  ctx.out_dir = fresh_dir("repro_extend");
  REQUIRE(run_reproduce("sec4-extend", ctx) == kExitOk);
  auto j = json::parse(slurp(ctx.out_dir / "sec4-extend" / "extend.json"));
  REQUIRE(j.at("equal") == true);
  REQUIRE(j.at("checked") == 2001);
  REQUIRE_THROWS_AS(run_reproduce("thm-0", ctx), spec_error);
}

TEST_CASE("rstar run writes verdict rows") {
  RunContext ctx;
  ctx.out_dir = fresh_dir("rstar_run");
  ctx.threads = 2;
  REQUIRE(run_rstar("chart(2)", {10, 20, 30}, 6, ctx) == kExitOk);
  auto csv = slurp(ctx.out_dir / "rstar.csv");
  REQUIRE(csv.find("bounded") != std::string::npos);
  REQUIRE(csv.rfind("L,r_star,slope,verdict\n", 0) == 0);
}
