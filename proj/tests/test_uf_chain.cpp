#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <random>

#include "qiforge/uf_chain.hpp"
#include "oracles.hpp"

using namespace qiforge;

namespace {
const FreeAbelianGroup Z(1);

std::shared_ptr<const Ball<FreeAbelianGroup>> z_window(int radius) {
  return std::make_shared<const Ball<FreeAbelianGroup>>(ball(Z, radius));
}
}  // namespace

TEST_CASE("chain coefficients") {
  auto even = sublattice_indicator(Z, {2});
  REQUIRE(even.coeff(VecElem{{4}}) == 1);
  REQUIRE(even.coeff(VecElem{{3}}) == 0);

  auto complement = difference(fundamental_chain(Z), even);
  REQUIRE(complement.coeff(VecElem{{3}}) == 1);
  REQUIRE(complement.coeff(VecElem{{4}}) == 0);
  REQUIRE(complement.bound == 2);

  auto push = pushforward_chain(floor_map_Z(2), z_window(30));
  REQUIRE(push.coeff(VecElem{{5}}) == 2);  // fiber {10, 11}
  REQUIRE_THROWS_AS(push.coeff(VecElem{{31}}), out_of_window_error);
}

TEST_CASE("boundary of a single edge") {
  auto e = single_edge(Z, VecElem{{2}}, VecElem{{5}}, 1, 3);
  auto c = boundary_1(e, z_window(20));
  REQUIRE(c.coeff(VecElem{{5}}) == 1);
  REQUIRE(c.coeff(VecElem{{2}}) == -1);
  REQUIRE(c.coeff(VecElem{{3}}) == 0);
}

TEST_CASE("telescoping successor chain has zero boundary") {
  auto c = boundary_1(successor_edges(Z), z_window(20));
  for (long long x = -19; x <= 19; ++x) REQUIRE(c.coeff(VecElem{{x}}) == 0);
}

TEST_CASE("paired successor chain boundary is the parity chain") {
  auto c = boundary_1(paired_successor_edges(Z), z_window(20));
  for (long long x = -19; x <= 19; ++x)
    REQUIRE(c.coeff(VecElem{{x}}) == (x % 2 == 0 ? -1 : 1));
}

TEST_CASE("boundary_1 window guards") {
  auto e = single_edge(Z, VecElem{{0}}, VecElem{{3}}, 1, 3);
  REQUIRE_THROWS_AS(boundary_1(e, z_window(2)), spec_error);
  auto c = boundary_1(e, z_window(10));
  REQUIRE_THROWS_AS(c.coeff(VecElem{{9}}), out_of_window_error);  // outside margin
}

TEST_CASE("folner statistic rows for [Z] - [2Z]") {
  auto c = difference(fundamental_chain(Z), sublattice_indicator(Z, {2}));
  auto rows = folner_statistic(c, standard_family(Z), 40);
  for (const auto& r : rows) {
    // odd count in [-i, i] is i for even i, i+1 for odd i
    long long expect = r.i % 2 == 0 ? r.i : r.i + 1;
    REQUIRE(r.sum_abs == expect);
    REQUIRE(r.boundary == 2);
    if (r.i % 2 == 0) REQUIRE(r.ratio == Ratio(r.i, 2));
  }
  REQUIRE(decide_class(rows) == "evidence-nonzero");
}

TEST_CASE("telescoped boundary chain stays bounded") {
  auto c = boundary_1(paired_successor_edges(Z), z_window(45));
  auto rows = folner_statistic(c, standard_family(Z), 40);
  for (const auto& r : rows) REQUIRE(r.sum_abs <= 1);
  REQUIRE(decide_class(rows) == "evidence-zero");
}

TEST_CASE("pushforward of floor minus fundamental grows like the set size") {
  auto push = pushforward_chain(floor_map_Z(2), z_window(45));
  auto c = difference(push, fundamental_chain(Z));
  auto rows = folner_statistic(c, standard_family(Z), 40);
  for (const auto& r : rows) REQUIRE(r.sum_abs == 2 * r.i + 1);
  REQUIRE(decide_class(rows) == "evidence-nonzero");
}

TEST_CASE("[G]-[H] ratio is unbounded for Z^2 with H = 2Z x Z") {
  FreeAbelianGroup Z2(2);
  auto c = difference(fundamental_chain(Z2), sublattice_indicator(Z2, {2, 1}));
  auto rows = folner_statistic(c, standard_family(Z2), 45);
  for (const auto& r : rows) {
    // boxes: sum = (2i+1) * (odd columns in [-i,i]), boundary = 4(2i+1),
    // so the ratio is i/4 at even i and (i+1)/4 at odd i
    long long odd_cols = r.i % 2 == 0 ? r.i : r.i + 1;
    REQUIRE(r.ratio == Ratio(odd_cols, 4));
  }
  REQUIRE(decide_class(rows) == "evidence-nonzero");
}

TEST_CASE("pushforward of an audited n-to-1 map is constant n on the interior") {
  for (long long n : {2, 3}) {
    auto f = floor_map_Z(n);
    auto window = z_window(20);
    auto census = fiber_census(f, ball(f.source, f.covering_source_radius(20)), *window);
    for (std::size_t id = 0; id < window->size(); ++id)
      if (census.rows[id].interior) REQUIRE(census.rows[id].count == n);
  }
}

TEST_CASE("boundary_1 chains obey the M_c R_c boundary control on intervals") {
  // M_c = R_c = 1 for these chains: |sum over S_i| <= |dS_i|
  for (auto make : {+[] { return boundary_1(successor_edges(Z), z_window(40)); },
                    +[] { return boundary_1(paired_successor_edges(Z), z_window(40)); }}) {
    auto c = make();
    auto rows = folner_statistic(c, standard_family(Z), 30);
    for (const auto& r : rows) REQUIRE(r.sum_abs <= r.boundary);
  }
}

TEST_CASE("decide_class rule cases") {
  auto mk = [](std::vector<std::pair<long long, long long>> pairs) {
    std::vector<StatRow> rows;
    long long i = 1;
    for (auto [s, b] : pairs) rows.push_back(StatRow{i++, s, b, Ratio(s, b)});
    return rows;
  };

  // ratio i/2 up to i = 40
  std::vector<std::pair<long long, long long>> lin;
  for (long long i = 1; i <= 40; ++i) lin.push_back({i, 2});
  REQUIRE(decide_class(mk(lin)) == "evidence-nonzero");

  // all ratios <= 1/2
  std::vector<std::pair<long long, long long>> small;
  for (long long i = 1; i <= 10; ++i) small.push_back({1, 2 + i % 3});
  REQUIRE(decide_class(mk(small)) == "evidence-zero");

  // oscillating in [1, 5]
  std::vector<std::pair<long long, long long>> osc;
  for (long long i = 1; i <= 12; ++i) osc.push_back({i % 2 == 0 ? 5LL : 1LL, 1});
  REQUIRE(decide_class(mk(osc)) == "inconclusive");

  REQUIRE_THROWS_AS(decide_class(mk({{1, 1}, {2, 1}})), spec_error);
}

TEST_CASE("decide_class is invariant under common scaling") {
  std::mt19937 rng(31337);
  std::uniform_int_distribution<long long> sums(0, 30), bnds(1, 10), scales(2, 9);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<StatRow> rows, scaled;
    long long k = scales(rng);
    for (long long i = 1; i <= 8; ++i) {
      long long s = sums(rng), b = bnds(rng);
      rows.push_back(StatRow{i, s, b, Ratio(s, b)});
      scaled.push_back(StatRow{i, s * k, b * k, Ratio(s * k, b * k)});
    }
    REQUIRE(decide_class(rows) == decide_class(scaled));
  }
}
