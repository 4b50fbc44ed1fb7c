#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "qiforge/ball.hpp"
#include "qiforge/errors.hpp"
#include "qiforge/groups.hpp"
#include "qiforge/io.hpp"
#include "qiforge/qi_maps.hpp"
#include "qiforge/rational.hpp"

namespace qiforge {

/// Plane coordinates of a BS(1,m) element g = (k, q): horizontal position
/// x = q along its horocycle, level k (model height m^k). The identity sits
/// at (x, level) = (0, 0).
struct PlanePoint {
  BigInt x_num;
  int x_exp = 0;  // x = x_num / m^x_exp
  int level = 0;

  std::string x_str(int m) const {
    std::string s = x_num.str();
    if (x_exp > 0) {
      BigInt den = 1;
      for (int i = 0; i < x_exp; ++i) den *= m;
      s += "/" + den.str();
    }
    return s;
  }
};

inline PlanePoint plane_position(const BaumslagSolitarGroup&, const BsElem& g) {
  return PlanePoint{g.num, g.exp, g.level};
}

/// Right coset of <b>: level k together with the residue of x modulo m^k,
/// represented canonically by the x-value in [0, m^k). Two elements share a
/// CosetId iff they differ by a power of b on the right.
struct CosetId {
  int level = 0;
  BigInt res_num;
  int res_exp = 0;

  friend bool operator==(const CosetId& a, const CosetId& b) {
    return a.level == b.level && a.res_exp == b.res_exp && a.res_num == b.res_num;
  }
};

}  // namespace qiforge

template <>
struct std::hash<qiforge::CosetId> {
  std::size_t operator()(const qiforge::CosetId& c) const noexcept {
    std::size_t h = std::hash<int>{}(c.level);
    qiforge::hash_combine(h, std::hash<int>{}(c.res_exp));
    qiforge::hash_combine(h, boost::hash<qiforge::BigInt>{}(c.res_num));
    return h;
  }
};

namespace qiforge {

inline CosetId coset_of(const BaumslagSolitarGroup& g, const BsElem& e) {
  // residue of q modulo m^k over a common denominator m^E with E >= -k
  const int E = std::max(e.exp, -e.level);
  BigInt N = e.num;
  for (int i = e.exp; i < E; ++i) N *= g.m();
  BigInt M = g.pow_m(e.level + E);
  BigInt r = N % M;
  if (r < 0) r += M;
  // canonical reduction of r / m^E
  int exp = E;
  while (exp > 0 && r % g.m() == 0) {
    r /= g.m();
    --exp;
  }
  if (r == 0) exp = 0;
  return CosetId{e.level, r, exp};
}

/// The coset element closest to x = 0 along its horocycle; ties (two closest
/// elements) break toward positive x. Satisfies |x(alpha)| <= m^k / 2.
struct RepChoice {
  CosetId coset;
  BsElem alpha;
};

inline RepChoice representative(const BaumslagSolitarGroup& g, const CosetId& coset) {
  const int E = std::max(coset.res_exp, -coset.level);
  BigInt r = coset.res_num;
  for (int i = coset.res_exp; i < E; ++i) r *= g.m();
  BigInt M = g.pow_m(coset.level + E);
  // candidates r and r - M; prefer nonnegative on ties
  BigInt chosen = (2 * r <= M) ? r : r - M;
  return RepChoice{coset, g.make(coset.level, chosen, E)};
}

/// Offset i in the unique decomposition g = alpha * b^i.
inline BigInt decompose(const BaumslagSolitarGroup& g, const BsElem& e, const RepChoice& rep) {
  const int E = std::max({e.exp, rep.alpha.exp, -e.level});
  BigInt qg = e.num, qa = rep.alpha.num;
  for (int i = e.exp; i < E; ++i) qg *= g.m();
  for (int i = rep.alpha.exp; i < E; ++i) qa *= g.m();
  BigInt D = qg - qa;
  BigInt M = g.pow_m(e.level + E);
  if (D % M != 0)
    throw spec_error("decompose: " + g.to_string(e) + " is not in the coset of " +
                     g.to_string(rep.alpha));
  return D / M;
}

inline RepChoice representative_of(const BaumslagSolitarGroup& g, const BsElem& e) {
  return representative(g, coset_of(g, e));
}

/// The paper-style n-to-1 self map of BS(1,m): write g = alpha b^i with alpha
/// the canonical closest-to-axis representative of its coset, send it to
/// alpha b^{floor(i/n)}. Preserves levels and cosets.
inline QIMap<BaumslagSolitarGroup, BaumslagSolitarGroup> bs_floor_map(
    const BaumslagSolitarGroup& g, long long n) {
  if (n < 1) throw spec_error("bs_floor_map: n >= 1");
  QIMap<BaumslagSolitarGroup, BaumslagSolitarGroup> f;
  f.source = f.target = g;
  f.name = "fc(" + std::to_string(g.m()) + "," + std::to_string(n) + ")";
  f.eval = [g, n](const BsElem& x) {
    RepChoice rep = representative_of(g, x);
    BigInt i = decompose(g, x, rep);
    BigInt j = floor_div(i, BigInt(n));
    return g.multiply(rep.alpha, g.make(0, j, 0));
  };
  f.K_claimed = Ratio(std::max<long long>(n, 2));
  f.C_claimed = Ratio(4);
  f.fiber_claimed = n;
  f.A = Ratio(std::max<long long>(n, 2));
  f.B = Ratio(4);
  f.fiber = [g, n](const BsElem& y) {
    RepChoice rep = representative_of(g, y);
    BigInt j = decompose(g, y, rep);
    std::vector<BsElem> out;
    for (long long t = 0; t < n; ++t)
      out.push_back(g.multiply(rep.alpha, g.make(0, j * n + t, 0)));
    return out;
  };
  return f;
}

/// Empirical audit of bs_floor_map over a BFS ball: fitted K with a fixed
/// additive constant, a fiber census, and the representative displacement
/// bound checked on every coset met by the window.
struct BsAudit {
  int radius = 0;
  long long n = 1;
  Ratio c_fixed;
  Ratio K_emp;
  long long interior_targets = 0;
  long long interior_with_exact_n = 0;
  bool levels_preserved = true;
  bool rep_bound_holds = true;  // |x(alpha)| <= m^k / 2 on every window coset
};

inline BsAudit audit_f_C(const BaumslagSolitarGroup& g, long long n, int radius, Ratio c_fixed,
                         std::size_t budget = kDefaultBallBudget) {
  auto f = bs_floor_map(g, n);
  auto window = ball(g, radius, budget);
  BsAudit audit;
  audit.radius = radius;
  audit.n = n;
  audit.c_fixed = c_fixed;
  audit.K_emp = fit_constants_free_target(f, c_fixed, window);

  auto census = fiber_census(f, window, window);
  for (std::size_t id = 0; id < window.size(); ++id) {
    if (!census.rows[id].interior) continue;
    ++audit.interior_targets;
    if (census.rows[id].count == n) ++audit.interior_with_exact_n;
  }

  std::unordered_map<CosetId, char> seen;
  for (const auto& x : window.elements()) {
    const BsElem y = f.eval(x);
    audit.levels_preserved = audit.levels_preserved && y.level == x.level;
    CosetId c = coset_of(g, x);
    if (seen.emplace(c, 1).second) {
      const BsElem alpha = representative(g, c).alpha;
      bool ok;
      if (alpha.num == 0) {
        ok = true;
      } else if (c.level + alpha.exp < 0) {
        ok = false;
      } else {
        ok = 2 * (alpha.num < 0 ? -alpha.num : alpha.num) <= g.pow_m(c.level + alpha.exp);
      }
      audit.rep_bound_holds = audit.rep_bound_holds && ok;
    }
  }
  return audit;
}

/// CSV window inspection dump: element, level, x, coset id, representative,
/// offset, image.
inline std::string bs_window_csv(const BaumslagSolitarGroup& g, const Ball<BaumslagSolitarGroup>& w,
                                 long long n) {
  auto f = bs_floor_map(g, n);
  std::string out = "element,level,x,coset,representative,offset,image\n";
  for (std::size_t id = 0; id < w.size(); ++id) {
    const BsElem& e = w.element(static_cast<int>(id));
    PlanePoint p = plane_position(g, e);
    CosetId c = coset_of(g, e);
    RepChoice rep = representative(g, c);
    BigInt off = decompose(g, e, rep);
    std::string coset_str =
        "L" + std::to_string(c.level) + ":" +
        PlanePoint{c.res_num, c.res_exp, c.level}.x_str(g.m());
    out += csv_field(g.to_string(e)) + "," + std::to_string(p.level) + "," +
           csv_field(p.x_str(g.m())) + "," + csv_field(coset_str) + "," +
           csv_field(g.to_string(rep.alpha)) + "," + off.str() + "," +
           csv_field(g.to_string(f.eval(e))) + "\n";
  }
  return out;
}

}  // namespace qiforge
