#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "qiforge/folner.hpp"
#include "oracles.hpp"

using namespace qiforge;

TEST_CASE("boundary of an interval in Z") {
  FreeAbelianGroup Z(1);
  auto S = interval_subset(Z, 0, 4);
  auto dS = boundary(S);
  REQUIRE(dS.size() == 2);
  REQUIRE(dS.contains(VecElem{{-1}}));
  REQUIRE(dS.contains(VecElem{{5}}));
}

TEST_CASE("boundary of the 3x3 box in Z^2 against a grid oracle") {
  FreeAbelianGroup Z2(2);
  auto S = box_subset(Z2, {0, 0}, {2, 2});
  auto dS = boundary(S);
  // oracle: scan the surrounding grid for outside points at L1 distance 1
  std::set<std::pair<long long, long long>> expected;
  for (long long x = -2; x <= 4; ++x)
    for (long long y = -2; y <= 4; ++y) {
      bool inside = 0 <= x && x <= 2 && 0 <= y && y <= 2;
      if (inside) continue;
      for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        long long nx = x + dx, ny = y + dy;
        if (0 <= nx && nx <= 2 && 0 <= ny && ny <= 2) expected.insert({x, y});
      }
    }
  REQUIRE(expected.size() == 12);
  REQUIRE(dS.size() == 12);
  for (auto [x, y] : expected) REQUIRE(dS.contains(VecElem{{x, y}}));
}

TEST_CASE("boundary of a free-group ball is the next sphere") {
  FreeGroup f2(2);
  auto S = subset_from_ball(ball(f2, 2));
  REQUIRE(boundary(S).size() == static_cast<std::size_t>(oracle::free_sphere(2, 3)));
  REQUIRE(boundary(S).size() == 36);
}

TEST_CASE("standard family shapes") {
  FreeAbelianGroup Z(1);
  auto fam = standard_family(Z);
  auto S3 = fam.set_at(3);
  REQUIRE(S3.size() == 7);
  REQUIRE(S3.contains(VecElem{{-3}}));
  REQUIRE(S3.contains(VecElem{{3}}));
  REQUIRE(!S3.contains(VecElem{{4}}));

  FreeAbelianGroup Z2(2);
  REQUIRE(standard_family(Z2).set_at(2).size() == 25);

  BaumslagSolitarGroup bs(2);
  auto fam_bs = standard_family(bs);
  REQUIRE(fam_bs.default_i_max == 7);  // largest N with N*4^N <= 2e5
  auto S_2 = fam_bs.set_at(2);
  REQUIRE(S_2.size() == 2 * 16);
  REQUIRE(S_2.contains(bs.make(1, 7, 0)));
  REQUIRE(!S_2.contains(bs.make(2, 0, 0)));

  REQUIRE_THROWS_AS(standard_family(FreeGroup(2)), spec_error);

  CyclicProductGroup zc3(3);
  REQUIRE(standard_family(zc3).set_at(2).size() == 15);
}

TEST_CASE("Z interval profile is exactly 2/(2i+1)") {
  auto rows = profile(standard_family(FreeAbelianGroup(1)), 20);
  for (const auto& r : rows) {
    REQUIRE(r.size == 2 * r.i + 1);
    REQUIRE(r.boundary_size == 2);
    REQUIRE(r.ratio == Ratio(2, 2 * r.i + 1));
  }
  // eventually decreasing and well below half the initial ratio
  REQUIRE(rows.back().ratio < Ratio(rows.front().ratio.num, 2 * rows.front().ratio.den));
}

TEST_CASE("BS(1,2) rectangle boundary matches the counting oracle") {
  BaumslagSolitarGroup bs(2);
  for (int N = 1; N <= 5; ++N) {
    auto S = bs_rectangle(bs, N);
    REQUIRE(BigInt(boundary(S).size()) == oracle::bs_rectangle_boundary(2, N));
  }
  auto rows = profile(standard_family(bs), 5);
  for (std::size_t i = 1; i < rows.size(); ++i) REQUIRE(rows[i].ratio < rows[i - 1].ratio);
}

TEST_CASE("free-group ball family ratios stay large") {
  auto rows = profile(ball_family(FreeGroup(2)), 5);
  for (const auto& r : rows) {
    REQUIRE(r.ratio >= Ratio(3, 2));
    // sphere/ball oracle: ratio = 4*3^i / (2*3^i - 1)
    REQUIRE(r.ratio == Ratio(oracle::free_sphere(2, static_cast<int>(r.i) + 1),
                             oracle::free_ball(2, static_cast<int>(r.i))));
  }
}

TEST_CASE("translation preserves set and boundary sizes") {
  FreeAbelianGroup Z(1);
  auto S = interval_subset(Z, 0, 4);
  auto T = translate(S, VecElem{{-2}});
  REQUIRE(T.size() == 5);
  REQUIRE(T.contains(VecElem{{-2}}));
  REQUIRE(T.contains(VecElem{{2}}));
  REQUIRE(!T.contains(VecElem{{3}}));
  REQUIRE(translate(S, Z.identity()).elements() == S.elements());

  BaumslagSolitarGroup bs(2);
  auto S3 = bs_rectangle(bs, 3);
  auto g = bs.multiply(bs.generator(0), bs.generator(2));  // ab
  auto moved = translate(S3, bs.inverse(g));
  REQUIRE(moved.size() == S3.size());
  REQUIRE(boundary(moved).size() == boundary(S3).size());
}

TEST_CASE("boundary is disjoint from the set") {
  std::mt19937 rng(4);
  BaumslagSolitarGroup bs(2);
  auto fam = standard_family(bs);
  for (long long i = 1; i <= 4; ++i) {
    auto S = fam.set_at(i);
    auto dS = boundary(S);
    for (const auto& x : dS.elements()) REQUIRE(!S.contains(x));
  }
}

TEST_CASE("profile rows are deterministic across thread counts") {
  auto fam = standard_family(FreeAbelianGroup(2));
  auto seq = profile(fam, 8, 1);
  auto par = profile(fam, 8, 3);
  REQUIRE(seq.size() == par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    REQUIRE(seq[i].size == par[i].size);
    REQUIRE(seq[i].boundary_size == par[i].boundary_size);
  }
}

TEST_CASE("family sizes are strictly increasing") {
  auto check = [](const auto& fam, long long upto) {
    std::size_t prev = 0;
    for (long long i = 1; i <= upto; ++i) {
      auto S = fam.set_at(i);
      REQUIRE(S.size() > prev);
      prev = S.size();
    }
  };
  check(standard_family(FreeAbelianGroup(1)), 6);
  check(standard_family(FreeAbelianGroup(2)), 6);
  check(standard_family(BaumslagSolitarGroup(2)), 5);
  check(standard_family(CyclicProductGroup(4)), 6);
}
