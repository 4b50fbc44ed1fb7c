#include <catch2/catch_amalgamated.hpp>

#include "qiforge/bs_model.hpp"
#include "oracles.hpp"

using namespace qiforge;

namespace {
const BaumslagSolitarGroup bs2(2);
}

TEST_CASE("plane positions") {
  auto p = plane_position(bs2, bs2.make(0, 3, 0));  // b^3
  REQUIRE(p.x_num == 3);
  REQUIRE(p.level == 0);

  auto pa = plane_position(bs2, bs2.make(1, 0, 0));  // a
  REQUIRE(pa.x_num == 0);
  REQUIRE(pa.level == 1);

  auto pab = plane_position(bs2, bs2.multiply(bs2.generator(0), bs2.generator(2)));  // ab
  REQUIRE(pab.x_num == 2);
  REQUIRE(pab.level == 1);

  REQUIRE(plane_position(bs2, bs2.make(-1, 1, 1)).x_str(2) == "1/2");
}

TEST_CASE("cosets of <b>") {
  REQUIRE(coset_of(bs2, bs2.make(0, 5, 0)) == coset_of(bs2, bs2.identity()));
  auto a = bs2.generator(0), b = bs2.generator(2);
  REQUIRE(coset_of(bs2, bs2.multiply(a, b)) == coset_of(bs2, a));
  // ba = (1,1) and a = (1,0) differ by b^{1/2}, which is not in <b>
  REQUIRE(!(coset_of(bs2, bs2.multiply(b, a)) == coset_of(bs2, a)));
  // right multiplication by b preserves the coset and shifts the offset by 1
  const auto window = ball(bs2, 4);
  for (const auto& g : window.elements()) {
    auto gb = bs2.multiply(g, b);
    REQUIRE(coset_of(bs2, gb) == coset_of(bs2, g));
    auto rep = representative_of(bs2, g);
    REQUIRE(decompose(bs2, gb, rep) == decompose(bs2, g, rep) + 1);
  }
}

TEST_CASE("representatives minimize |x| with ties toward positive x") {
  REQUIRE(representative_of(bs2, bs2.identity()).alpha == bs2.identity());

  // coset of (1,5): x-values 5 + 2i, minimum |x| = 1 at both -1 and 1
  auto rep = representative_of(bs2, bs2.make(1, 5, 0));
  REQUIRE(rep.alpha == bs2.make(1, 1, 0));

  // level-0 cosets of integer elements always contain x = 0
  BaumslagSolitarGroup bs3(3);
  REQUIRE(representative_of(bs3, bs3.make(0, 7, 0)).alpha == bs3.identity());

  // tie at exactly m^k/2 goes positive
  auto rep2 = representative_of(bs2, bs2.make(2, 2, 0));
  REQUIRE(rep2.alpha == bs2.make(2, 2, 0));
}

TEST_CASE("decompose is the inverse of alpha * b^i") {
  const auto window = ball(bs2, 6);
  for (const auto& g : window.elements()) {
    auto rep = representative_of(bs2, g);
    BigInt i = decompose(bs2, g, rep);
    REQUIRE(bs2.multiply(rep.alpha, bs2.make(0, i, 0)) == g);
  }
}

TEST_CASE("f_C values") {
  auto f2 = bs_floor_map(bs2, 2);
  REQUIRE(f2.eval(bs2.make(0, 5, 0)) == bs2.make(0, 2, 0));   // b^5 -> b^2
  REQUIRE(f2.eval(bs2.make(1, 5, 0)) == bs2.make(1, 3, 0));   // alpha=(1,1), floor(2/2)=1
  auto f3 = bs_floor_map(bs2, 3);
  REQUIRE(f3.eval(bs2.make(0, -1, 0)) == bs2.make(0, -1, 0)); // floor(-1/3) = -1
}

TEST_CASE("f_C with n=1 is the identity") {
  auto f1 = bs_floor_map(bs2, 1);
  const auto window = ball(bs2, 5);
  for (const auto& g : window.elements()) REQUIRE(f1.eval(g) == g);
  REQUIRE(audit_f_C(bs2, 1, 5, Ratio(0)).K_emp == Ratio(1));
}

TEST_CASE("f_C structure on a window") {
  auto f = bs_floor_map(bs2, 2);
  auto window = ball(bs2, 7);
  for (const auto& g : window.elements()) {
    auto y = f.eval(g);
    REQUIRE(y.level == g.level);                      // level preserved
    REQUIRE(coset_of(bs2, y) == coset_of(bs2, g));    // coset preserved
    auto rep = representative_of(bs2, g);
    BigInt i = decompose(bs2, g, rep);
    REQUIRE(decompose(bs2, y, rep) == floor_div(i, BigInt(2)));
    // a-step moves exactly one level
    REQUIRE(bs2.multiply(g, bs2.generator(0)).level == g.level + 1);
  }
}

TEST_CASE("f_C fibers are n consecutive offsets") {
  auto f = bs_floor_map(bs2, 3);
  const auto window = ball(bs2, 4);
  for (const auto& y : window.elements()) {
    auto fib = f.fiber(y);
    REQUIRE(fib.size() == 3);
    auto rep = representative_of(bs2, y);
    BigInt j = decompose(bs2, y, rep);
    for (std::size_t t = 0; t < fib.size(); ++t) {
      REQUIRE(f.eval(fib[t]) == y);
      REQUIRE(decompose(bs2, fib[t], rep) == 3 * j + static_cast<long long>(t));
    }
  }
}

TEST_CASE("audit over a small ball") {
  auto audit = audit_f_C(bs2, 2, 6, Ratio(4));
  REQUIRE(audit.levels_preserved);
  REQUIRE(audit.rep_bound_holds);
  REQUIRE(audit.interior_targets > 0);
  REQUIRE(audit.interior_with_exact_n == audit.interior_targets);
  REQUIRE(!audit.K_emp.is_infinite());
}

TEST_CASE("window csv dump") {
  auto csv = bs_window_csv(bs2, ball(bs2, 2), 2);
  REQUIRE(csv.rfind("element,level,x,coset,representative,offset,image\n", 0) == 0);
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 18);  // header + 17 rows
}
