#pragma once

#include <algorithm>
#include <functional>
#include <future>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "qiforge/ball.hpp"
#include "qiforge/errors.hpp"
#include "qiforge/qi_maps.hpp"
#include "qiforge/rational.hpp"

namespace qiforge {

inline constexpr std::size_t kDefaultMatchingBudget = 100'000;

/// Finite bipartite instance for radius-R displacement matching.
///
/// Sources are the domain points whose window norm is at most L, sorted in
/// normal-form order. Targets form the ball of radius L' = max|f(x)| + R, so
/// no source ever sees a truncated candidate set; consequently every source
/// is subject to the saturation requirement. A target is interior (required
/// to be covered) when every potential partner provably lies inside the
/// source window: WA*(A*(|y|+R)+B) + WB <= L.
template <class GS, class GT>
struct MatchingWindow {
  QIMap<GS, GT> map;
  long long L = 0;
  int R = 0;
  std::vector<typename GS::Element> sources;
  std::vector<typename GT::Element> targets;
  std::vector<char> target_interior;
  std::vector<std::vector<int>> adj;  // source id -> sorted target ids with d(y, f(x)) <= R
  long long target_radius = 0;
  long long interior_target_count = 0;
  std::string margin_note;
};

template <class GS, class GT>
MatchingWindow<GS, GT> build_window(const QIMap<GS, GT>& f, long long L, int R,
                                    std::size_t budget = kDefaultMatchingBudget) {
  if (R < 0) throw spec_error("build_window: R >= 0");
  MatchingWindow<GS, GT> w;
  w.map = f;
  w.L = L;
  w.R = R;

  // window_norm dominates the intrinsic norm for every catalog map, so the
  // intrinsic ball of radius L covers all candidates
  const auto source_ball = ball(f.source, static_cast<int>(L), budget);
  for (const auto& x : source_ball.elements())
    if (f.window_norm_of(x) <= L) w.sources.push_back(x);
  std::sort(w.sources.begin(), w.sources.end());
  if (w.sources.empty()) throw spec_error("build_window: no sources at L=" + std::to_string(L));

  long long max_image = 0;
  std::vector<typename GT::Element> images;
  images.reserve(w.sources.size());
  for (const auto& x : w.sources) {
    images.push_back(f.eval(x));
    max_image = std::max(max_image, f.target.word_norm(images.back()));
  }
  w.target_radius = max_image + R;
  auto target_ball = ball(f.target, static_cast<int>(w.target_radius), budget);
  w.targets = target_ball.elements();
  std::sort(w.targets.begin(), w.targets.end());
  if (w.sources.size() + w.targets.size() > budget)
    throw budget_error("matching window exceeds " + std::to_string(budget) + " vertices");

  std::unordered_map<typename GT::Element, int> target_id;
  target_id.reserve(w.targets.size());
  for (std::size_t i = 0; i < w.targets.size(); ++i)
    target_id.emplace(w.targets[i], static_cast<int>(i));

  const auto [pa, pb] = f.partner_bound();
  w.target_interior.assign(w.targets.size(), 0);
  for (std::size_t i = 0; i < w.targets.size(); ++i) {
    Ratio bound = pa * Ratio(f.target.word_norm(w.targets[i]) + R) + pb;
    if (bound <= Ratio(L)) {
      w.target_interior[i] = 1;
      ++w.interior_target_count;
    }
  }
  w.margin_note = "interior targets: PA*(|y|+R)+PB <= L with PA=" + pa.str() + " PB=" + pb.str() +
                  "; target radius L'=max|f|+R=" + std::to_string(w.target_radius);

  // edges via y = f(x) * d for d in ball(R): d(y, f(x)) = |d| exactly
  auto step_ball = ball(f.target, R, budget);
  w.adj.assign(w.sources.size(), {});
  for (std::size_t i = 0; i < w.sources.size(); ++i) {
    for (const auto& d : step_ball.elements()) {
      auto y = f.target.multiply(images[i], d);
      auto it = target_id.find(y);
      if (it != target_id.end()) w.adj[i].push_back(it->second);
    }
    std::sort(w.adj[i].begin(), w.adj[i].end());
  }
  return w;
}

/// Certificate-bearing outcome of the finite matching question.
struct MatchingResult {
  std::string map_name;
  long long L = 0;
  int R = 0;
  long long source_count = 0, target_count = 0, interior_target_count = 0;
  std::vector<std::pair<int, int>> matching;  // (source id, target id)
  bool target_saturated = false;           // every interior target covered
  bool source_interior_saturated = false;  // every source matched
  long long deficiency = 0;
  std::string violator_side;  // "targets", "sources" or ""
  std::vector<int> violator;
  long long violator_neighbor_count = 0;
  std::string margin_note;

  bool feasible() const { return target_saturated && source_interior_saturated; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["map"] = map_name;
    j["L"] = L;
    j["R"] = R;
    j["matched"] = matching.size();
    j["deficiency"] = deficiency;
    j["violator_size"] = violator.size();
    j["violator_side"] = violator_side;
    j["saturations"] = {{"interior_targets", target_saturated},
                        {"sources", source_interior_saturated}};
    j["sources"] = source_count;
    j["targets"] = target_count;
    j["interior_targets"] = interior_target_count;
    j["margin"] = margin_note;
    return j;
  }
};

namespace detail {

// Kuhn augmenting-path matching; deterministic because vertices and
// adjacency lists are processed in sorted order. Path depth is bounded by
// the window size, which the vertex budget keeps small.
inline bool kuhn_augment(int u, const std::vector<std::vector<int>>& adj,
                         std::vector<int>& match_left, std::vector<int>& match_right,
                         std::vector<char>& used) {
  for (int v : adj[u]) {
    if (used[v]) continue;
    used[v] = 1;
    if (match_right[v] == -1 || kuhn_augment(match_right[v], adj, match_left, match_right, used)) {
      match_left[u] = v;
      match_right[v] = u;
      return true;
    }
  }
  return false;
}

inline long long run_matching(const std::vector<std::vector<int>>& adj, int right_size,
                              std::vector<int>& match_left, std::vector<int>& match_right,
                              const std::vector<char>* left_active = nullptr) {
  match_left.assign(adj.size(), -1);
  match_right.assign(right_size, -1);
  long long matched = 0;
  std::vector<char> used;
  for (std::size_t u = 0; u < adj.size(); ++u) {
    if (left_active && !(*left_active)[u]) continue;
    used.assign(right_size, 0);
    if (kuhn_augment(static_cast<int>(u), adj, match_left, match_right, used)) ++matched;
  }
  return matched;
}

// Konig-style certificate: alternating reachability from the unmatched left
// vertices of a maximum matching yields A with |N(A)| = |A| - deficiency.
inline std::pair<std::vector<int>, long long> hall_violator(
    const std::vector<std::vector<int>>& adj, const std::vector<int>& match_left,
    const std::vector<int>& match_right, const std::vector<char>* left_active = nullptr) {
  std::vector<char> left_seen(adj.size(), 0), right_seen(match_right.size(), 0);
  std::vector<int> queue;
  for (std::size_t u = 0; u < adj.size(); ++u) {
    if (left_active && !(*left_active)[u]) continue;
    if (match_left[u] == -1) {
      left_seen[u] = 1;
      queue.push_back(static_cast<int>(u));
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int u = queue[head];
    for (int v : adj[u]) {
      if (right_seen[v]) continue;
      right_seen[v] = 1;
      int u2 = match_right[v];
      if (u2 != -1 && !left_seen[u2]) {
        left_seen[u2] = 1;
        queue.push_back(u2);
      }
    }
  }
  std::vector<int> violator;
  long long neighbors = 0;
  for (std::size_t u = 0; u < adj.size(); ++u)
    if (left_seen[u]) violator.push_back(static_cast<int>(u));
  for (std::size_t v = 0; v < match_right.size(); ++v)
    if (right_seen[v]) ++neighbors;
  return {violator, neighbors};
}

}  // namespace detail

/// Maximum-cardinality matching with saturation analysis on both sides.
/// Interior-target saturation is decided on the subgraph of interior targets
/// (matched from the target side); source saturation on the full graph. When
/// one side fails, a Hall violator certificate for that side is extracted.
/// The reported matching covers every coverable interior target first and is
/// then extended to sources, so both saturation facts are witnessed by it.
template <class GS, class GT>
MatchingResult max_matching(const MatchingWindow<GS, GT>& w) {
  MatchingResult res;
  res.map_name = w.map.name;
  res.L = w.L;
  res.R = w.R;
  res.source_count = static_cast<long long>(w.sources.size());
  res.target_count = static_cast<long long>(w.targets.size());
  res.interior_target_count = w.interior_target_count;
  res.margin_note = w.margin_note;

  // reversed adjacency for the target-side matching
  std::vector<std::vector<int>> radj(w.targets.size());
  for (std::size_t u = 0; u < w.adj.size(); ++u)
    for (int v : w.adj[u]) radj[v].push_back(static_cast<int>(u));

  std::vector<int> match_t_left, match_t_right;  // left = targets, right = sources
  long long matched_t = detail::run_matching(radj, static_cast<int>(w.sources.size()),
                                             match_t_left, match_t_right, &w.target_interior);
  res.target_saturated = matched_t == w.interior_target_count;
  long long target_deficiency = w.interior_target_count - matched_t;

  std::vector<int> match_s_left, match_s_right;  // left = sources, right = targets
  long long matched_s = detail::run_matching(w.adj, static_cast<int>(w.targets.size()),
                                             match_s_left, match_s_right);
  res.source_interior_saturated = matched_s == static_cast<long long>(w.sources.size());
  long long source_deficiency = static_cast<long long>(w.sources.size()) - matched_s;

  res.deficiency = target_deficiency + source_deficiency;

  if (!res.target_saturated) {
    auto [viol, nbrs] = detail::hall_violator(radj, match_t_left, match_t_right,
                                              &w.target_interior);
    res.violator_side = "targets";
    res.violator = std::move(viol);
    res.violator_neighbor_count = nbrs;
  } else if (!res.source_interior_saturated) {
    auto [viol, nbrs] = detail::hall_violator(w.adj, match_s_left, match_s_right);
    res.violator_side = "sources";
    res.violator = std::move(viol);
    res.violator_neighbor_count = nbrs;
  }

  // combined matching: keep the interior-target cover, extend to sources;
  // augmenting never unmatches a matched vertex
  std::vector<int> comb_left(w.sources.size(), -1), comb_right(w.targets.size(), -1);
  for (std::size_t t = 0; t < w.targets.size(); ++t) {
    int s = (w.target_interior[t] && match_t_left[t] != -1) ? match_t_left[t] : -1;
    if (s != -1) {
      comb_left[s] = static_cast<int>(t);
      comb_right[t] = s;
    }
  }
  std::vector<char> used;
  for (std::size_t u = 0; u < w.sources.size(); ++u) {
    if (comb_left[u] != -1) continue;
    used.assign(w.targets.size(), 0);
    detail::kuhn_augment(static_cast<int>(u), w.adj, comb_left, comb_right, used);
  }
  for (std::size_t u = 0; u < w.sources.size(); ++u)
    if (comb_left[u] != -1) res.matching.emplace_back(static_cast<int>(u), comb_left[u]);
  return res;
}

/// Minimal displacement radius R <= R_max making the window-L matching
/// perfect on both interiors; feasibility is monotone in R (edges only grow,
/// requirements only shrink), so binary search applies.
template <class GS, class GT>
std::optional<long long> r_star(const QIMap<GS, GT>& f, long long L, long long R_max,
                                std::size_t budget = kDefaultMatchingBudget) {
  auto feasible = [&](long long R) {
    return max_matching(build_window(f, L, static_cast<int>(R), budget)).feasible();
  };
  if (!feasible(R_max)) return std::nullopt;
  long long lo = 0, hi = R_max;
  while (lo < hi) {
    long long mid = lo + (hi - lo) / 2;
    if (feasible(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

struct GrowthParams {
  Ratio linear_slope_threshold{1, 4};
  long long bounded_slack = 2;
  std::function<long long(long long)> r_max_for = [](long long L) { return 2 * L + 4; };
};

struct RStarReport {
  std::string map_name;
  std::vector<long long> L_values;
  std::vector<std::optional<long long>> r_values;
  bool slope_valid = false;
  Ratio slope;
  std::string verdict;  // "linear", "bounded", "inconclusive"
  std::string note;

  std::string to_csv() const {
    std::string out = "L,r_star,slope,verdict\n";
    for (std::size_t i = 0; i < L_values.size(); ++i) {
      out += std::to_string(L_values[i]) + "," +
             (r_values[i] ? std::to_string(*r_values[i]) : "none") + "," +
             (slope_valid ? slope.str() : "n/a") + "," + verdict + "\n";
    }
    if (!note.empty()) out += "# " + note + "\n";
    return out;
  }
};

/// R*(L) growth classification across increasing window sizes. Least-squares
/// slope in exact rational arithmetic; "bounded"/"linear" are finite-window
/// evidence, never proof.
template <class GS, class GT>
RStarReport classify_growth(const QIMap<GS, GT>& f, const std::vector<long long>& L_list,
                            const GrowthParams& params = {},
                            std::size_t budget = kDefaultMatchingBudget, int threads = 1) {
  if (L_list.size() < 3) throw spec_error("classify_growth needs at least 3 window sizes");
  for (std::size_t i = 1; i < L_list.size(); ++i)
    if (L_list[i] <= L_list[i - 1]) throw spec_error("classify_growth: L_list must increase");

  RStarReport rep;
  rep.map_name = f.name;
  rep.L_values = L_list;
  rep.r_values.resize(L_list.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < L_list.size(); ++i)
      rep.r_values[i] = r_star(f, L_list[i], params.r_max_for(L_list[i]), budget);
  } else {
    std::vector<std::future<void>> work;
    for (int t = 0; t < threads; ++t)
      work.push_back(std::async(std::launch::async, [&, t]() {
        for (std::size_t i = t; i < L_list.size(); i += threads)
          rep.r_values[i] = r_star(f, L_list[i], params.r_max_for(L_list[i]), budget);
      }));
    for (auto& fu : work) fu.get();
  }

  for (std::size_t i = 0; i < L_list.size(); ++i) {
    if (!rep.r_values[i]) {
      rep.verdict = "inconclusive";
      rep.note = "no feasible R <= " + std::to_string(params.r_max_for(L_list[i])) +
                 " at L=" + std::to_string(L_list[i]);
      return rep;
    }
  }

  const auto n = static_cast<long long>(L_list.size());
  long long sum_l = 0, sum_r = 0, sum_ll = 0, sum_lr = 0;
  for (std::size_t i = 0; i < L_list.size(); ++i) {
    sum_l += L_list[i];
    sum_r += *rep.r_values[i];
    sum_ll += L_list[i] * L_list[i];
    sum_lr += L_list[i] * *rep.r_values[i];
  }
  rep.slope = Ratio(n * sum_lr - sum_l * sum_r, n * sum_ll - sum_l * sum_l);
  rep.slope_valid = true;

  bool strictly_increasing = true;
  for (std::size_t i = 1; i < L_list.size(); ++i)
    strictly_increasing = strictly_increasing && *rep.r_values[i] > *rep.r_values[i - 1];

  if (rep.slope >= params.linear_slope_threshold && strictly_increasing) {
    rep.verdict = "linear";
  } else if (*rep.r_values.back() <= *rep.r_values.front() + params.bounded_slack) {
    rep.verdict = "bounded";
  } else {
    rep.verdict = "inconclusive";
  }
  return rep;
}

}  // namespace qiforge
