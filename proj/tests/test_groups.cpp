#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qiforge/ball.hpp"
#include "qiforge/groups.hpp"
#include "oracles.hpp"

using namespace qiforge;

TEST_CASE("group spec parsing and standard generators") {
  auto z = parse_group("Z");
  REQUIRE(std::get<FreeAbelianGroup>(z).rank() == 1);
  REQUIRE(std::get<FreeAbelianGroup>(z).generator_count() == 2);

  auto z2 = parse_group("Z^2");
  REQUIRE(std::get<FreeAbelianGroup>(z2).generator_count() == 4);

  auto bs = std::get<BaumslagSolitarGroup>(parse_group("BS(1,2)"));
  REQUIRE(bs.generator_count() == 4);
  REQUIRE(bs.generator_label(0) == "a");
  REQUIRE(bs.generator_label(1) == "a^-1");
  REQUIRE(bs.generator_label(2) == "b");
  REQUIRE(bs.generator_label(3) == "b^-1");

  auto f2 = std::get<FreeGroup>(parse_group("F_2"));
  REQUIRE(f2.generator_count() == 4);

  auto zc = std::get<CyclicProductGroup>(parse_group("ZxC3"));
  REQUIRE(zc.generator_count() == 4);

  REQUIRE_THROWS_AS(parse_group("Q"), spec_error);
  REQUIRE_THROWS_AS(parse_group("BS(1,x)"), spec_error);
  REQUIRE_THROWS_AS(BaumslagSolitarGroup(1), spec_error);
  REQUIRE_THROWS_AS(FreeGroup(1), spec_error);
  REQUIRE_THROWS_AS(CyclicProductGroup(0), spec_error);
  REQUIRE_THROWS_AS(FreeAbelianGroup(0), spec_error);
}

TEST_CASE("generator inversion pairing is an involution") {
  auto check = [](const auto& g) {
    for (int i = 0; i < g.generator_count(); ++i) {
      int j = g.inverse_pair(i);
      REQUIRE(g.inverse_pair(j) == i);
      REQUIRE(g.multiply(g.generator(i), g.generator(j)) == g.identity());
    }
  };
  check(FreeAbelianGroup(2));
  check(BaumslagSolitarGroup(3));
  check(FreeGroup(2));
  check(CyclicProductGroup(2));
  check(CyclicProductGroup(5));
}

TEST_CASE("multiplication laws") {
  FreeAbelianGroup Z(1);
  REQUIRE(Z.multiply(VecElem{{3}}, VecElem{{4}}) == VecElem{{7}});

  BaumslagSolitarGroup bs(2);
  BsElem a = bs.generator(0), b = bs.generator(2);
  // the defining relation a b a^-1 = b^m
  BsElem lhs = bs.multiply(bs.multiply(a, b), bs.inverse(a));
  REQUIRE(lhs == bs.make(0, 2, 0));
  // b*a = (1,1) and a*b = (1,2) differ
  REQUIRE(bs.multiply(b, a) == bs.make(1, 1, 0));
  REQUIRE(bs.multiply(a, b) == bs.make(1, 2, 0));

  // affine law vs word rewriting on random instances of a b^j a^-1 = b^{mj}
  std::mt19937 rng(20240811);
  std::uniform_int_distribution<long long> js(-8, 8);
  for (int m : {2, 3}) {
    BaumslagSolitarGroup g(m);
    BsElem ga = g.generator(0);
    for (int trial = 0; trial < 1000; ++trial) {
      long long j = js(rng);
      BsElem bj = g.make(0, j, 0);
      BsElem conj = g.multiply(g.multiply(ga, bj), g.inverse(ga));
      REQUIRE(conj == g.make(0, j * m, 0));
    }
  }
}

TEST_CASE("BS normal form is canonical and products round-trip") {
  BaumslagSolitarGroup g(2);
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> gen(0, 3);
  for (int trial = 0; trial < 500; ++trial) {
    BsElem w = g.identity();
    for (int i = 0; i < 10; ++i) w = g.multiply(w, g.generator(gen(rng)));
    // canonical: num not divisible by m unless exp == 0
    if (w.exp > 0) REQUIRE(w.num % 2 != 0);
    REQUIRE(w.exp >= 0);
    REQUIRE(g.multiply(w, g.inverse(w)) == g.identity());
    REQUIRE(g.multiply(g.inverse(w), w) == g.identity());
  }
}

TEST_CASE("free group reduction") {
  FreeGroup f(2);
  WordElem x = f.generator(0), y = f.generator(2);
  auto w = f.multiply(f.multiply(x, y), f.inverse(y));
  REQUIRE(w == x);
  REQUIRE(f.multiply(w, f.inverse(w)) == f.identity());
  REQUIRE(f.to_string(f.multiply(x, f.inverse(y))) == "aB");
}

TEST_CASE("element printing") {
  BaumslagSolitarGroup g(2);
  REQUIRE(g.to_string(g.make(-1, 1, 1)) == "(-1,1/2)");
  REQUIRE(g.to_string(g.make(1, 5, 0)) == "(1,5)");
  REQUIRE(FreeAbelianGroup(2).to_string(VecElem{{3, -1}}) == "(3,-1)");
  REQUIRE(FreeAbelianGroup(1).to_string(VecElem{{-7}}) == "-7");
  REQUIRE(CyclicProductGroup(3).to_string(CycElem{3, 1}) == "(3,1)");
  REQUIRE(FreeGroup(2).to_string(FreeGroup(2).identity()) == "e");
}

TEST_CASE("closed-form word norms agree with BFS everywhere") {
  auto check = [](const auto& g, int radius) {
    auto b = ball(g, radius);
    for (std::size_t i = 0; i < b.size(); ++i)
      REQUIRE(g.word_norm(b.element(static_cast<int>(i))) == b.distance_by_id(static_cast<int>(i)));
  };
  check(FreeAbelianGroup(2), 6);
  check(FreeAbelianGroup(3), 4);
  check(BaumslagSolitarGroup(2), 9);
  check(BaumslagSolitarGroup(3), 7);
  check(FreeGroup(2), 5);
  check(CyclicProductGroup(2), 7);
  check(CyclicProductGroup(5), 7);
}

TEST_CASE("BS word norm handles pair differences beyond the ball radius") {
  BaumslagSolitarGroup g(2);
  auto b5 = ball(g, 5);
  auto b10 = ball(g, 10);
  for (std::size_t i = 0; i < b5.size(); i += 2) {
    for (std::size_t j = 0; j < b5.size(); j += 2) {
      auto u = g.multiply(g.inverse(b5.element(static_cast<int>(i))),
                          b5.element(static_cast<int>(j)));
      REQUIRE(g.word_norm(u) == b10.word_length(u));
    }
  }
}
