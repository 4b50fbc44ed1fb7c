#pragma once

#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "qiforge/ball.hpp"
#include "qiforge/errors.hpp"
#include "qiforge/folner.hpp"
#include "qiforge/groups.hpp"
#include "qiforge/qi_maps.hpp"
#include "qiforge/rational.hpp"

namespace qiforge {

/// Uniformly finite 0-chain c = sum a_x x given by a coefficient rule with
/// |a_x| <= bound. Chains are rules, not arrays: supports over infinite
/// groups are evaluated lazily inside windows.
template <class G>
struct UFChain {
  G group;
  std::string name;
  long long bound = 1;  // M_c
  std::function<long long(const typename G::Element&)> coeff;
};

/// The fundamental chain [G]: coefficient 1 everywhere.
template <class G>
UFChain<G> fundamental_chain(const G& g) {
  return UFChain<G>{g, "[" + g.name() + "]", 1,
                    [](const typename G::Element&) -> long long { return 1; }};
}

/// Indicator of the sublattice scales[0]Z x ... inside Z^m.
inline UFChain<FreeAbelianGroup> sublattice_indicator(const FreeAbelianGroup& g,
                                                      const std::vector<long long>& scales) {
  if (static_cast<int>(scales.size()) != g.rank())
    throw spec_error("sublattice indicator: scale count != rank");
  std::string name = "[";
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (i) name += "x";
    name += scales[i] == 1 ? "Z" : std::to_string(scales[i]) + "Z";
  }
  name += "]";
  return UFChain<FreeAbelianGroup>{g, name, 1, [scales](const VecElem& x) -> long long {
                                     for (std::size_t i = 0; i < scales.size(); ++i)
                                       if (x.v[i] % scales[i] != 0) return 0;
                                     return 1;
                                   }};
}

/// a - b pointwise.
template <class G>
UFChain<G> difference(const UFChain<G>& a, const UFChain<G>& b) {
  if (!(a.group == b.group)) throw spec_error("chain difference: group mismatch");
  auto ca = a.coeff, cb = b.coeff;
  return UFChain<G>{a.group, a.name + "-" + b.name, a.bound + b.bound,
                    [ca, cb](const typename G::Element& x) { return ca(x) - cb(x); }};
}

/// Finite-support chain from an explicit table; elements off the table have
/// coefficient 0.
template <class G>
UFChain<G> table_chain(const G& g, const std::string& name,
                       std::vector<std::pair<typename G::Element, long long>> entries) {
  auto table = std::make_shared<std::unordered_map<typename G::Element, long long>>();
  long long bound = 1;
  for (auto& [e, c] : entries) {
    (*table)[e] = c;
    bound = std::max(bound, c < 0 ? -c : c);
  }
  return UFChain<G>{g, name, bound, [table](const typename G::Element& x) -> long long {
                      auto it = table->find(x);
                      return it == table->end() ? 0 : it->second;
                    }};
}

/// Bounded 1-chain: rule on ordered pairs, coefficient bound M_c and
/// propagation radius R_c (a_(x,y) = 0 whenever d(x,y) > R_c).
template <class G>
struct EdgeChain {
  G group;
  std::string name;
  long long bound = 1;   // M_c
  int radius = 1;        // R_c
  std::function<long long(const typename G::Element&, const typename G::Element&)> coeff;
};

/// A single edge (x,y) with coefficient c.
template <class G>
EdgeChain<G> single_edge(const G& g, typename G::Element x, typename G::Element y, long long c,
                         int radius) {
  return EdgeChain<G>{g, "edge(" + g.to_string(x) + "," + g.to_string(y) + ")",
                      c < 0 ? -c : c, radius,
                      [x, y, c](const typename G::Element& a, const typename G::Element& b) {
                        return (a == x && b == y) ? c : 0;
                      }};
}

/// (k, k+1) -> 1 for every k in Z; its boundary telescopes to 0.
inline EdgeChain<FreeAbelianGroup> successor_edges(const FreeAbelianGroup& g) {
  if (g.rank() != 1) throw spec_error("successor_edges needs Z");
  return EdgeChain<FreeAbelianGroup>{g, "succ", 1, 1,
                                     [](const VecElem& a, const VecElem& b) -> long long {
                                       return b.v[0] == a.v[0] + 1 ? 1 : 0;
                                     }};
}

/// (2k, 2k+1) -> 1; its boundary is +1 on odds, -1 on evens.
inline EdgeChain<FreeAbelianGroup> paired_successor_edges(const FreeAbelianGroup& g) {
  if (g.rank() != 1) throw spec_error("paired_successor_edges needs Z");
  return EdgeChain<FreeAbelianGroup>{
      g, "pair", 1, 1, [](const VecElem& a, const VecElem& b) -> long long {
        return (a.v[0] % 2 == 0 && b.v[0] == a.v[0] + 1) ? 1 : 0;
      }};
}

/// Boundary map C_1^uf -> C_0^uf: (x,y) -> y - x extended by linearity.
/// The returned 0-chain has coefficient at z equal to
/// sum_y a_(y,z) - sum_y a_(z,y); it is defined on the interior of the given
/// window (margin R_c) and refuses evaluation outside it.
template <class G>
UFChain<G> boundary_1(const EdgeChain<G>& e, std::shared_ptr<const Ball<G>> window) {
  if (window->radius() < e.radius)
    throw spec_error("boundary_1: window radius " + std::to_string(window->radius()) +
                     " smaller than edge propagation radius " + std::to_string(e.radius));
  auto nbr = std::make_shared<Ball<G>>(ball(e.group, e.radius));
  const int interior = window->radius() - e.radius;
  auto rule = e.coeff;
  G g = e.group;
  return UFChain<G>{
      g, "d1(" + e.name + ")", 2 * e.bound * static_cast<long long>(nbr->size()),
      [g, rule, nbr, window, interior](const typename G::Element& z) -> long long {
        auto id = window->id_of(z);
        if (!id || window->distance_by_id(*id) > interior)
          throw out_of_window_error("boundary_1 chain evaluated outside window interior");
        long long total = 0;
        for (const auto& w : nbr->elements()) {
          auto y = g.multiply(z, w);
          total += rule(y, z) - rule(z, y);
        }
        return total;
      }};
}

/// Pushforward chain of a quasi-isometry: coefficient at y is
/// |f^-1(y) ^ source window|, where the source window is sized so that every
/// fiber over the target window is complete. Evaluation outside the target
/// window is refused rather than guessed.
template <class GS, class GT>
UFChain<GT> pushforward_chain(const QIMap<GS, GT>& f, std::shared_ptr<const Ball<GT>> target_window,
                              std::size_t budget = kDefaultBallBudget) {
  const long long src_radius = f.covering_source_radius(target_window->radius());
  auto src = ball(f.source, static_cast<int>(src_radius), budget);
  auto counts = std::make_shared<std::vector<long long>>(target_window->size(), 0);
  long long bound = 1;
  for (const auto& x : src.elements()) {
    if (auto id = target_window->id_of(f.eval(x))) {
      bound = std::max(bound, ++(*counts)[*id]);
    }
  }
  return UFChain<GT>{f.target, "push(" + f.name + ")", bound,
                     [counts, target_window](const typename GT::Element& y) -> long long {
                       auto id = target_window->id_of(y);
                       if (!id)
                         throw out_of_window_error("pushforward chain evaluated outside window");
                       return (*counts)[*id];
                     }};
}

// ---------------------------------------------------------------------------
// The Folner vanishing statistic
// ---------------------------------------------------------------------------

struct StatRow {
  long long i = 0;
  long long sum_abs = 0;   // |sum_{x in S_i} a_x|
  long long boundary = 0;  // |dS_i|
  Ratio ratio;             // sum_abs / boundary
};

/// Exact per-index rows of Theorem-style evidence: |sum over S_i| against
/// |dS_i| for i = 1..i_max.
template <class G>
std::vector<StatRow> folner_statistic(const UFChain<G>& c, const FolnerFamily<G>& family,
                                      long long i_max) {
  std::vector<StatRow> rows;
  rows.reserve(static_cast<std::size_t>(i_max));
  for (long long i = 1; i <= i_max; ++i) {
    FiniteSubset<G> S = family.set_at(i);
    long long sum = 0;
    for (const auto& x : S.elements()) sum += c.coeff(x);
    StatRow row;
    row.i = i;
    row.sum_abs = sum < 0 ? -sum : sum;
    row.boundary = static_cast<long long>(boundary(S).size());
    row.ratio = Ratio(row.sum_abs, row.boundary);
    rows.push_back(row);
  }
  return rows;
}

/// The explicit finite-evidence decision rule. Finite data cannot prove the
/// asymptotic statement, hence the "evidence-" naming.
struct DecisionParams {
  Ratio nonzero_threshold{10};  // final ratio must exceed this
  Ratio zero_threshold{2};      // all ratios at or below this
  int window = 5;               // trailing monotone run
};

inline std::string decide_class(const std::vector<StatRow>& rows,
                                const DecisionParams& params = {}) {
  if (static_cast<int>(rows.size()) < params.window)
    throw spec_error("decide_class needs at least " + std::to_string(params.window) + " rows");
  auto ratio_of = [](const StatRow& r) { return Ratio(r.sum_abs, r.boundary); };

  // monotonically increasing = non-decreasing (parity effects make many
  // genuinely growing statistics plateau every other index)
  bool increasing = true;
  for (std::size_t j = rows.size() - params.window + 1; j < rows.size(); ++j)
    increasing = increasing && ratio_of(rows[j - 1]) <= ratio_of(rows[j]);
  if (increasing && ratio_of(rows.back()) > params.nonzero_threshold) return "evidence-nonzero";

  bool all_small = true;
  for (const auto& r : rows) all_small = all_small && ratio_of(r) <= params.zero_threshold;
  if (all_small) return "evidence-zero";

  return "inconclusive";
}

struct VanishingReport {
  std::string chain_name;
  std::string family_name;
  std::vector<StatRow> rows;
  DecisionParams params;
  std::string verdict;

  std::string to_csv() const {
    std::string out = "i,sum_abs,boundary,ratio\n";
    for (const auto& r : rows)
      out += std::to_string(r.i) + "," + std::to_string(r.sum_abs) + "," +
             std::to_string(r.boundary) + "," + r.ratio.decimal(6) + "\n";
    out += "# verdict: " + verdict + " (chain " + chain_name + ", family " + family_name +
           ", thresholds nonzero>" + params.nonzero_threshold.str() + " zero<=" +
           params.zero_threshold.str() + " window " + std::to_string(params.window) + ")\n";
    return out;
  }
};

template <class G>
VanishingReport vanishing_report(const UFChain<G>& c, const FolnerFamily<G>& family,
                                 long long i_max, const DecisionParams& params = {}) {
  VanishingReport rep;
  rep.chain_name = c.name;
  rep.family_name = family.name;
  rep.rows = folner_statistic(c, family, i_max);
  rep.params = params;
  rep.verdict = decide_class(rep.rows, params);
  return rep;
}

}  // namespace qiforge
