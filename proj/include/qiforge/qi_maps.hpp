#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "qiforge/ball.hpp"
#include "qiforge/errors.hpp"
#include "qiforge/groups.hpp"
#include "qiforge/rational.hpp"

namespace qiforge {

inline long long floor_div(long long a, long long n) {
  long long q = a / n, r = a % n;
  return (r != 0 && (r < 0) != (n < 0)) ? q - 1 : q;
}

inline BigInt floor_div(const BigInt& a, const BigInt& n) {
  BigInt q = a / n, r = a % n;
  if (r != 0 && (r < 0) != (n < 0)) --q;
  return q;
}

/// A quasi-isometry candidate between marked groups: a total deterministic
/// evaluation rule plus claimed Eq.-style constants (K >= 1, C >= 0) and,
/// when the map is n-to-1, the claimed fiber size.
///
/// The extra fields drive finite-window constructions:
///  * fiber(y): the exact (finite) preimage of y, when enumerable;
///  * A, B: |x|_source <= A*|f(x)|_target + B for all x (a consequence of
///    Eq. lower bound once f fixes the identity; kept exact per map);
///  * window_norm / WA, WB: the norm used to cut matching source windows.
///    For a subgroup embedded in its ambient group this is the ambient norm
///    of the embedded point (so windows of different maps are comparable);
///    elsewhere it is the source word norm. WA, WB bound
///    window_norm(x) <= WA*|x|_source + WB, and window_norm(x) >= |x|_source
///    is required (true for every map built here; asserted in tests).
template <class GS, class GT>
struct QIMap {
  using Source = GS;
  using Target = GT;
  using SourceElem = typename GS::Element;
  using TargetElem = typename GT::Element;

  GS source;
  GT target;
  std::string name;
  std::function<TargetElem(const SourceElem&)> eval;

  Ratio K_claimed{1};
  Ratio C_claimed{0};
  std::optional<long long> fiber_claimed;

  Ratio A{1}, B{0};
  Ratio WA{1}, WB{0};
  std::function<long long(const SourceElem&)> window_norm;  // defaults to source word norm
  std::function<std::vector<SourceElem>(const TargetElem&)> fiber;
  // Exact override for window_norm(x) <= PA*|f(x)| + PB when the map knows a
  // tighter relation than the chained WA/A bound (inclusions: PA=1, PB=0).
  std::optional<std::pair<Ratio, Ratio>> partner_override;

  long long window_norm_of(const SourceElem& x) const {
    return window_norm ? window_norm(x) : source.word_norm(x);
  }

  /// (PA, PB) with window_norm(x) <= PA*|f(x)| + PB for every source point.
  std::pair<Ratio, Ratio> partner_bound() const {
    if (partner_override) return *partner_override;
    return {WA * A, WA * B + WB};
  }

  /// Source-ball radius that provably contains the full fiber of every
  /// target with |y| <= target_radius.
  long long covering_source_radius(long long target_radius) const {
    return (A * Ratio(target_radius) + B).ceil();
  }
};

// ---------------------------------------------------------------------------
// Map catalog
// ---------------------------------------------------------------------------

template <class G>
QIMap<G, G> identity_map(const G& g) {
  QIMap<G, G> f;
  f.source = f.target = g;
  f.name = "id(" + g.name() + ")";
  f.eval = [](const typename G::Element& x) { return x; };
  f.K_claimed = Ratio(1);
  f.C_claimed = Ratio(0);
  f.fiber_claimed = 1;
  f.fiber = [](const typename G::Element& y) { return std::vector<typename G::Element>{y}; };
  return f;
}

/// k -> floor(k/n) on Z (floor toward -infinity, so every fiber has exactly
/// n elements). Claimed constants (K=n, C=1).
inline QIMap<FreeAbelianGroup, FreeAbelianGroup> floor_map_Z(long long n) {
  if (n < 1) throw spec_error("floor map needs n >= 1");
  FreeAbelianGroup Z(1);
  QIMap<FreeAbelianGroup, FreeAbelianGroup> f;
  f.source = f.target = Z;
  f.name = "floor(" + std::to_string(n) + ")";
  f.eval = [n](const VecElem& x) { return VecElem{{floor_div(x.v[0], n)}}; };
  f.K_claimed = Ratio(n);
  f.C_claimed = Ratio(1);
  f.fiber_claimed = n;
  f.A = Ratio(n);
  f.B = Ratio(n - 1);
  f.fiber = [n](const VecElem& y) {
    std::vector<VecElem> out;
    for (long long t = 0; t < n; ++t) out.push_back(VecElem{{n * y.v[0] + t}});
    return out;
  };
  return f;
}

/// The floor map applied to one coordinate of Z^m (coord is 1-based).
inline QIMap<FreeAbelianGroup, FreeAbelianGroup> floor_map_Zm(long long n, int coord, int m) {
  if (coord < 1 || coord > m) throw spec_error("floor_map_Zm: coord out of range");
  if (n < 1) throw spec_error("floor map needs n >= 1");
  FreeAbelianGroup G(m);
  QIMap<FreeAbelianGroup, FreeAbelianGroup> f;
  f.source = f.target = G;
  f.name = "floorc(" + std::to_string(n) + "," + std::to_string(coord) + "," + std::to_string(m) +
           ")";
  const int c = coord - 1;
  f.eval = [n, c](const VecElem& x) {
    VecElem out = x;
    out.v[c] = floor_div(out.v[c], n);
    return out;
  };
  f.K_claimed = Ratio(n);
  f.C_claimed = Ratio(1);
  f.fiber_claimed = n;
  f.A = Ratio(n);
  f.B = Ratio(n - 1);
  f.fiber = [n, c](const VecElem& y) {
    std::vector<VecElem> out;
    for (long long t = 0; t < n; ++t) {
      VecElem x = y;
      x.v[c] = n * y.v[c] + t;
      out.push_back(std::move(x));
    }
    return out;
  };
  return f;
}

/// Inclusion of the sublattice scales[0]Z x ... x scales[m-1]Z into Z^m,
/// with the subgroup carrying its intrinsic word metric. Standard cases:
/// nZ in Z and nZ x Z^{m-1} in Z^m.
inline QIMap<FreeAbelianGroup, FreeAbelianGroup> inclusion_map(
    const std::vector<long long>& scales, const FreeAbelianGroup& ambient) {
  const int m = ambient.rank();
  if (static_cast<int>(scales.size()) != m) throw spec_error("inclusion: scale count != rank");
  long long n = 1;
  for (long long s : scales) {
    if (s < 1) throw spec_error("inclusion: scales must be >= 1");
    n = std::max(n, s);
  }
  QIMap<FreeAbelianGroup, FreeAbelianGroup> f;
  f.source = FreeAbelianGroup(m);
  f.target = ambient;
  std::string sub;
  for (int i = 0; i < m; ++i) {
    if (i) sub += "x";
    sub += (scales[i] == 1 ? "Z" : std::to_string(scales[i]) + "Z");
  }
  f.name = "incl(" + sub + "<" + ambient.name() + ")";
  f.eval = [scales, m](const VecElem& h) {
    VecElem out = h;
    for (int i = 0; i < m; ++i) out.v[i] *= scales[i];
    return out;
  };
  f.K_claimed = Ratio(n);
  f.C_claimed = Ratio(0);
  f.fiber_claimed = 1;
  f.A = Ratio(1);  // |h|_H <= |i(h)|_G since all scales are >= 1
  f.B = Ratio(0);
  // window norm = ambient norm of the embedded point, which IS |f(h)|
  f.WA = Ratio(n);
  f.WB = Ratio(0);
  f.partner_override = std::pair<Ratio, Ratio>{Ratio(1), Ratio(0)};
  auto amb = ambient;
  auto ev = f.eval;
  f.window_norm = [amb, ev](const VecElem& h) { return amb.word_norm(ev(h)); };
  f.fiber = [scales, m](const VecElem& y) {
    std::vector<VecElem> out;
    VecElem h = y;
    for (int i = 0; i < m; ++i) {
      if (y.v[i] % scales[i] != 0) return out;
      h.v[i] = y.v[i] / scales[i];
    }
    out.push_back(std::move(h));
    return out;
  };
  return f;
}

/// nZ x Z/k inside Z x Z/k (the cyclic factor is respected).
inline QIMap<CyclicProductGroup, CyclicProductGroup> inclusion_map_cyclic(
    long long n, const CyclicProductGroup& ambient) {
  if (n < 1) throw spec_error("inclusion: n >= 1");
  QIMap<CyclicProductGroup, CyclicProductGroup> f;
  f.source = ambient;
  f.target = ambient;
  f.name = "inclc(" + std::to_string(n) + "Z," + ambient.name() + ")";
  f.eval = [n](const CycElem& h) { return CycElem{n * h.n, h.r}; };
  f.K_claimed = Ratio(n);
  f.C_claimed = Ratio(0);
  f.fiber_claimed = 1;
  f.A = Ratio(1);
  f.B = Ratio(0);
  f.WA = Ratio(n);
  f.WB = Ratio(0);
  f.partner_override = std::pair<Ratio, Ratio>{Ratio(1), Ratio(0)};
  auto amb = ambient;
  f.window_norm = [amb, n](const CycElem& h) { return amb.word_norm(CycElem{n * h.n, h.r}); };
  f.fiber = [n](const CycElem& y) {
    std::vector<CycElem> out;
    if (y.n % n == 0) out.push_back(CycElem{y.n / n, y.r});
    return out;
  };
  return f;
}

/// Projection Z x Z/k -> Z, an index-1-image map with kernel of size k.
inline QIMap<CyclicProductGroup, FreeAbelianGroup> projection_map(int k) {
  CyclicProductGroup G(k);
  QIMap<CyclicProductGroup, FreeAbelianGroup> f;
  f.source = G;
  f.target = FreeAbelianGroup(1);
  f.name = "proj(" + std::to_string(k) + ")";
  f.eval = [](const CycElem& x) { return VecElem{{x.n}}; };
  f.K_claimed = Ratio(1);
  f.C_claimed = Ratio(k / 2);
  f.fiber_claimed = k;
  f.A = Ratio(1);
  f.B = Ratio(k / 2);
  f.fiber = [k](const VecElem& y) {
    std::vector<CycElem> out;
    for (int r = 0; r < k; ++r) out.push_back(CycElem{y.v[0], r});
    return out;
  };
  return f;
}

/// Bijective chart Z x Z/k -> Z, (j, r) -> k*j + r.
inline QIMap<CyclicProductGroup, FreeAbelianGroup> cyclic_chart(int k) {
  CyclicProductGroup G(k);
  QIMap<CyclicProductGroup, FreeAbelianGroup> f;
  f.source = G;
  f.target = FreeAbelianGroup(1);
  f.name = "chart(" + std::to_string(k) + ")";
  f.eval = [k](const CycElem& x) { return VecElem{{k * x.n + x.r}}; };
  f.K_claimed = Ratio(k);
  f.C_claimed = Ratio(k);
  f.fiber_claimed = 1;
  f.A = Ratio(1, k);
  f.B = Ratio(k - 1, k) + Ratio(k, 2);
  f.fiber = [k](const VecElem& y) {
    long long j = floor_div(y.v[0], static_cast<long long>(k));
    int r = static_cast<int>(y.v[0] - j * k);
    return std::vector<CycElem>{CycElem{j, r}};
  };
  return f;
}

/// Composition f o g (apply g first). Claimed constants compose as
/// (K_f K_g, K_f C_g + C_f).
template <class GA, class GB, class GC>
QIMap<GA, GC> compose(const QIMap<GB, GC>& f, const QIMap<GA, GB>& g) {
  if (!(f.source == g.target)) throw spec_error("compose: middle group mismatch");
  QIMap<GA, GC> h;
  h.source = g.source;
  h.target = f.target;
  h.name = "comp(" + f.name + "," + g.name + ")";
  auto fe = f.eval;
  auto ge = g.eval;
  h.eval = [fe, ge](const typename GA::Element& x) { return fe(ge(x)); };
  h.K_claimed = f.K_claimed * g.K_claimed;
  h.C_claimed = f.K_claimed * g.C_claimed + f.C_claimed;
  if (f.fiber_claimed && g.fiber_claimed)
    h.fiber_claimed = *f.fiber_claimed * *g.fiber_claimed;
  h.A = g.A * f.A;
  h.B = g.A * f.B + g.B;
  if constexpr (std::is_same_v<GA, GB>) {
    if (g.source == g.target) {
      // inner self-map: the composite source sits where the outer map put it
      h.WA = f.WA;
      h.WB = f.WB;
      h.window_norm = f.window_norm;
    } else {
      h.WA = g.WA;
      h.WB = g.WB;
      h.window_norm = g.window_norm;
      if (g.partner_override) {
        auto [pa, pb] = *g.partner_override;
        h.partner_override = std::pair<Ratio, Ratio>{pa * f.A, pa * f.B + pb};
      }
    }
  } else {
    h.WA = g.WA;
    h.WB = g.WB;
    h.window_norm = g.window_norm;
    if (g.partner_override) {
      auto [pa, pb] = *g.partner_override;
      h.partner_override = std::pair<Ratio, Ratio>{pa * f.A, pa * f.B + pb};
    }
  }
  if (f.fiber && g.fiber) {
    auto ff = f.fiber;
    auto gf = g.fiber;
    h.fiber = [ff, gf](const typename GC::Element& y) {
      std::vector<typename GA::Element> out;
      for (const auto& mid : ff(y))
        for (auto& x : gf(mid)) out.push_back(std::move(x));
      return out;
    };
  }
  return h;
}

/// Extends a bijection f : G' -> G along a coset decomposition
/// G = union G' g_i to the n-to-1 self map g' g_i -> f(g'). G' is the
/// sublattice fixed by `in_sublattice`, `bij`/`bij_inv` give the bijection on
/// it, and the partition property of the reps is verified exhaustively on a
/// window before the map is returned.
template <class G>
QIMap<G, G> extend_by_cosets(const G& g, std::function<bool(const typename G::Element&)> in_sub,
                             std::function<typename G::Element(const typename G::Element&)> bij,
                             std::function<typename G::Element(const typename G::Element&)> bij_inv,
                             std::vector<typename G::Element> reps, Ratio bij_A, Ratio bij_B,
                             int check_radius = 12, const std::string& label = "extend") {
  using Elem = typename G::Element;
  const auto n = static_cast<long long>(reps.size());
  if (n < 1) throw spec_error("extend_by_cosets: need at least one representative");
  // partition check: every window element lies in exactly one G' g_i
  std::vector<Elem> rep_invs;
  for (const auto& r : reps) rep_invs.push_back(g.inverse(r));
  const auto check_window = ball(g, check_radius);
  for (const auto& x : check_window.elements()) {
    int hits = 0;
    for (const auto& ri : rep_invs)
      if (in_sub(g.multiply(x, ri))) ++hits;
    if (hits != 1)
      throw spec_error("extend_by_cosets: translates do not partition (element " +
                       g.to_string(x) + " has " + std::to_string(hits) + " decompositions)");
  }
  long long max_rep = 0;
  for (const auto& r : reps) max_rep = std::max(max_rep, g.word_norm(r));

  QIMap<G, G> f;
  f.source = f.target = g;
  f.name = label;
  f.eval = [g, in_sub, bij, rep_invs](const Elem& x) {
    for (const auto& ri : rep_invs) {
      Elem core = g.multiply(x, ri);
      if (in_sub(core)) return bij(core);
    }
    throw spec_error("extend_by_cosets: no coset representative matches");
  };
  f.K_claimed = Ratio(n) * bij_A;
  f.C_claimed = bij_B + Ratio(2 * max_rep + 1);
  f.fiber_claimed = n;
  f.A = bij_A;
  f.B = bij_B + Ratio(max_rep);
  if (bij_inv) {
    f.fiber = [g, bij_inv, reps](const Elem& y) {
      std::vector<Elem> out;
      Elem core = bij_inv(y);
      for (const auto& r : reps) out.push_back(g.multiply(core, r));
      return out;
    };
  }
  return f;
}

/// The standard instance: G' = nZ x Z^{m-1} inside Z^m with the isomorphism
/// (n j, x2, ...) -> (j, x2, ...); reproduces the floor map pointwise.
inline QIMap<FreeAbelianGroup, FreeAbelianGroup> extend_floor(const FreeAbelianGroup& g,
                                                              long long n) {
  if (n < 1) throw spec_error("extend_floor: n >= 1");
  std::vector<VecElem> reps;
  for (long long t = 0; t < n; ++t) {
    VecElem r{std::vector<long long>(g.rank(), 0)};
    r.v[0] = t;
    reps.push_back(std::move(r));
  }
  return extend_by_cosets<FreeAbelianGroup>(
      g, [n](const VecElem& x) { return x.v[0] % n == 0; },
      [n](const VecElem& x) {
        VecElem out = x;
        out.v[0] /= n;
        return out;
      },
      [n](const VecElem& y) {
        VecElem out = y;
        out.v[0] *= n;
        return out;
      },
      std::move(reps), Ratio(n), Ratio(0), 12, "extendfloor(" + std::to_string(n) + ")");
}

// ---------------------------------------------------------------------------
// Audits
// ---------------------------------------------------------------------------

/// Result of the exhaustive Eq. (1) window check.
struct DistortionReport {
  std::string map_name;
  std::string window;
  Ratio K_claimed;
  Ratio C_claimed;
  bool pass = false;
  bool has_violation = false;
  std::string worst_x, worst_y;  // first violating pair in ball-id order
  long long worst_d = 0, worst_df = 0;
  Ratio K_emp;  // minimal K for Eq. (1) with C = C_claimed; may be infinite

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["map"] = map_name;
    j["window"] = window;
    j["K_claimed"] = K_claimed.str();
    j["C_claimed"] = C_claimed.str();
    j["pass"] = pass;
    if (has_violation) {
      j["worst_pair"] = {{"x", worst_x}, {"y", worst_y}, {"d", worst_d}, {"df", worst_df}};
    } else {
      j["worst_pair"] = nullptr;
    }
    j["K_emp"] = K_emp.str();
    return j;
  }
};

/// Exhaustive all-pairs Eq. (1) audit over the source window. Distances are
/// exact word norms (the closed forms are BFS-validated in the test suite);
/// every image must land inside the target window or the audit refuses.
template <class GS, class GT>
DistortionReport verify_constants(const QIMap<GS, GT>& f, Ratio K, Ratio C,
                                  const Ball<GS>& source_window, const Ball<GT>& target_window) {
  if (K < Ratio(1)) throw spec_error("verify_constants: K must be >= 1");
  DistortionReport rep;
  rep.map_name = f.name;
  rep.window = "ball(" + f.source.name() + "," + std::to_string(source_window.radius()) + ")";
  rep.K_claimed = K;
  rep.C_claimed = C;

  const auto& xs = source_window.elements();
  std::vector<typename GT::Element> images;
  images.reserve(xs.size());
  for (const auto& x : xs) {
    auto y = f.eval(x);
    if (!target_window.contains(y))
      throw out_of_window_error("target window too small: f(" + f.source.to_string(x) + ") = " +
                                f.target.to_string(y) + " outside ball of radius " +
                                std::to_string(target_window.radius()));
    images.push_back(std::move(y));
  }

  Ratio k_emp(1);
  rep.pass = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const long long d =
          f.source.word_norm(f.source.multiply(f.source.inverse(xs[i]), xs[j]));
      const long long df =
          f.target.word_norm(f.target.multiply(f.target.inverse(images[i]), images[j]));
      // Eq. (1): -C + d/K <= df <= K d + C
      const bool upper = Ratio(df) <= K * Ratio(d) + C;
      const bool lower = Ratio(d) / K - C <= Ratio(df);
      if (!(upper && lower) && !rep.has_violation) {
        rep.has_violation = true;
        rep.pass = false;
        rep.worst_x = f.source.to_string(xs[i]);
        rep.worst_y = f.source.to_string(xs[j]);
        rep.worst_d = d;
        rep.worst_df = df;
      }
      // K_emp with the given C: K >= (df - C)/d and K >= d/(df + C)
      if (d > 0) {
        Ratio up = (Ratio(df) - C) / Ratio(d);
        if (k_emp < up) k_emp = up;
        Ratio denom = Ratio(df) + C;
        if (denom.num == 0) {
          k_emp = Ratio::infinity();
        } else {
          Ratio low = Ratio(d) / denom;
          if (k_emp < low) k_emp = low;
        }
      }
    }
  }
  rep.K_emp = k_emp;
  return rep;
}

/// Minimal rational K >= 1 such that Eq. (1) holds with C = c_fixed over all
/// window pairs; infinite when no finite K works.
template <class GS, class GT>
Ratio fit_constants(const QIMap<GS, GT>& f, Ratio c_fixed, const Ball<GS>& source_window,
                    const Ball<GT>& target_window) {
  auto rep = verify_constants(f, Ratio(1), c_fixed, source_window, target_window);
  return rep.K_emp;
}

/// Fit over a source window only, with image distances taken from exact word
/// norms (no explicit target ball). Used for BS(1,m) audits where the image
/// window is not known a priori.
template <class GS, class GT>
Ratio fit_constants_free_target(const QIMap<GS, GT>& f, Ratio c_fixed,
                                const Ball<GS>& source_window) {
  const auto& xs = source_window.elements();
  std::vector<typename GT::Element> images;
  images.reserve(xs.size());
  for (const auto& x : xs) images.push_back(f.eval(x));
  Ratio k_emp(1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const long long d =
          f.source.word_norm(f.source.multiply(f.source.inverse(xs[i]), xs[j]));
      const long long df =
          f.target.word_norm(f.target.multiply(f.target.inverse(images[i]), images[j]));
      if (d == 0) continue;
      Ratio up = (Ratio(df) - c_fixed) / Ratio(d);
      if (k_emp < up) k_emp = up;
      Ratio denom = Ratio(df) + c_fixed;
      if (denom.num == 0) return Ratio::infinity();
      Ratio low = Ratio(d) / denom;
      if (k_emp < low) k_emp = low;
    }
  }
  return k_emp;
}

/// Per-target fiber counts |f^-1(y) ^ source window|. A target is interior
/// when its full mathematical fiber provably sits inside the source window:
/// via the exact fiber enumerator when the map has one, else via the
/// |x| <= A|y| + B bound.
template <class GS, class GT>
struct FiberCensus {
  struct Row {
    long long count = 0;
    bool interior = false;
  };
  std::vector<Row> rows;  // indexed by target-window id
  const Ball<GT>* window = nullptr;

  long long count_of(const typename GT::Element& y) const {
    auto id = window->id_of(y);
    if (!id) throw out_of_window_error("fiber census: target outside window");
    return rows[*id].count;
  }
};

template <class GS, class GT>
FiberCensus<GS, GT> fiber_census(const QIMap<GS, GT>& f, const Ball<GS>& source_window,
                                 const Ball<GT>& target_window) {
  FiberCensus<GS, GT> census;
  census.window = &target_window;
  census.rows.assign(target_window.size(), {});
  for (const auto& x : source_window.elements()) {
    auto y = f.eval(x);
    if (auto id = target_window.id_of(y)) ++census.rows[*id].count;
  }
  for (std::size_t id = 0; id < target_window.size(); ++id) {
    const auto& y = target_window.element(static_cast<int>(id));
    if (f.fiber) {
      bool all_in = true;
      for (const auto& x : f.fiber(y)) all_in = all_in && source_window.contains(x);
      census.rows[id].interior = all_in;
    } else {
      census.rows[id].interior =
          f.A * Ratio(target_window.distance_by_id(static_cast<int>(id))) + f.B <=
          Ratio(source_window.radius());
    }
  }
  return census;
}

}  // namespace qiforge
