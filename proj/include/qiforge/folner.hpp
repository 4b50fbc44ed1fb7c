#pragma once

#include <algorithm>
#include <functional>
#include <future>
#include <string>
#include <unordered_set>
#include <vector>

#include "qiforge/ball.hpp"
#include "qiforge/errors.hpp"
#include "qiforge/groups.hpp"
#include "qiforge/io.hpp"
#include "qiforge/rational.hpp"

namespace qiforge {

inline constexpr std::size_t kDefaultSetBudget = 200'000;

/// Finite subset of a marked group: explicit elements in canonical order plus
/// a hash-set membership table.
template <class G>
class FiniteSubset {
 public:
  using Element = typename G::Element;

  FiniteSubset(G group, std::string name, std::vector<Element> elems)
      : group_(std::move(group)), name_(std::move(name)), elements_(std::move(elems)) {
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
    members_.reserve(elements_.size());
    for (const auto& e : elements_) members_.insert(e);
  }

  const G& group() const { return group_; }
  const std::string& name() const { return name_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<Element>& elements() const { return elements_; }
  bool contains(const Element& e) const { return members_.contains(e); }

 private:
  G group_;
  std::string name_;
  std::vector<Element> elements_;
  std::unordered_set<Element> members_;
};

/// Exterior boundary in the word-metric graph:
/// dS = { s*t not in S : s in S, t generator }, i.e. exactly the points at
/// distance 0 < d <= 1 from S. Neighbor enumeration only, no BFS.
template <class G>
FiniteSubset<G> boundary(const FiniteSubset<G>& S) {
  const G& g = S.group();
  std::unordered_set<typename G::Element> out;
  for (const auto& s : S.elements()) {
    for (int i = 0; i < g.generator_count(); ++i) {
      auto n = g.multiply(s, g.generator(i));
      if (!S.contains(n)) out.insert(std::move(n));
    }
  }
  std::vector<typename G::Element> elems(out.begin(), out.end());
  return FiniteSubset<G>(g, "boundary(" + S.name() + ")", std::move(elems));
}

/// Left translate g*S. Left multiplication is an isometry, so |S| and |dS|
/// are preserved exactly.
template <class G>
FiniteSubset<G> translate(const FiniteSubset<G>& S, const typename G::Element& g) {
  const G& grp = S.group();
  std::vector<typename G::Element> elems;
  elems.reserve(S.size());
  for (const auto& s : S.elements()) elems.push_back(grp.multiply(g, s));
  return FiniteSubset<G>(grp, grp.to_string(g) + "*" + S.name(), std::move(elems));
}

// -- subset constructors -----------------------------------------------------

inline FiniteSubset<FreeAbelianGroup> interval_subset(const FreeAbelianGroup& g, long long a,
                                                      long long b) {
  if (g.rank() != 1) throw spec_error("interval_subset needs Z");
  std::vector<VecElem> elems;
  for (long long x = a; x <= b; ++x) elems.push_back(VecElem{{x}});
  return FiniteSubset<FreeAbelianGroup>(
      g, "[" + std::to_string(a) + "," + std::to_string(b) + "]", std::move(elems));
}

/// Product of coordinate ranges [lo_i, hi_i].
inline FiniteSubset<FreeAbelianGroup> box_subset(const FreeAbelianGroup& g,
                                                 const std::vector<long long>& lo,
                                                 const std::vector<long long>& hi) {
  std::vector<VecElem> elems;
  VecElem cur{std::vector<long long>(g.rank(), 0)};
  std::function<void(int)> rec = [&](int coord) {
    if (coord == g.rank()) {
      elems.push_back(cur);
      return;
    }
    for (long long x = lo[coord]; x <= hi[coord]; ++x) {
      cur.v[coord] = x;
      rec(coord + 1);
    }
  };
  rec(0);
  std::string name = "box";
  for (int i = 0; i < g.rank(); ++i)
    name += "[" + std::to_string(lo[i]) + "," + std::to_string(hi[i]) + "]";
  return FiniteSubset<FreeAbelianGroup>(g, name, std::move(elems));
}

/// The BS(1,m) Folner rectangle S_N = { b^j a^k : 0 <= k < N, 0 <= j < m^2N },
/// i.e. normal forms (k, j). The a-sides contribute O(m^2N) boundary and the
/// b-sides O(m^N), so |dS_N|/|S_N| ~ 2/N.
inline FiniteSubset<BaumslagSolitarGroup> bs_rectangle(const BaumslagSolitarGroup& g, int N,
                                                       std::size_t budget = kDefaultSetBudget) {
  BigInt width = g.pow_m(2 * N);
  BigInt total = width * N;
  if (total > BigInt(budget))
    throw budget_error("BS rectangle N=" + std::to_string(N) + " has " + total.str() +
                       " elements");
  std::vector<BsElem> elems;
  elems.reserve(static_cast<std::size_t>(total));
  for (int k = 0; k < N; ++k)
    for (BigInt j = 0; j < width; ++j) elems.push_back(g.make(k, j, 0));
  return FiniteSubset<BaumslagSolitarGroup>(g, "bsrect(" + std::to_string(N) + ")",
                                            std::move(elems));
}

inline FiniteSubset<CyclicProductGroup> cyc_interval_subset(const CyclicProductGroup& g,
                                                            long long i) {
  std::vector<CycElem> elems;
  for (long long n = -i; n <= i; ++n)
    for (int r = 0; r < g.k(); ++r) elems.push_back(CycElem{n, r});
  return FiniteSubset<CyclicProductGroup>(g, "[-" + std::to_string(i) + "," + std::to_string(i) +
                                                 "]xC" + std::to_string(g.k()),
                                          std::move(elems));
}

template <class G>
FiniteSubset<G> subset_from_ball(const Ball<G>& b) {
  return FiniteSubset<G>(b.group(), "ball(" + std::to_string(b.radius()) + ")", b.elements());
}

// -- Folner families ----------------------------------------------------------

/// Indexed family i -> S_i with |S_i| strictly increasing.
template <class G>
struct FolnerFamily {
  G group;
  std::string name;
  std::function<FiniteSubset<G>(long long)> set_at;
  long long default_i_max;
};

/// Standard Folner sets. Free groups are rejected: they admit none.
inline FolnerFamily<FreeAbelianGroup> standard_family(const FreeAbelianGroup& g,
                                                      std::size_t budget = kDefaultSetBudget) {
  long long i_max = 1;
  auto size_at = [m = g.rank()](long long i) {
    long long s = 1;
    for (int c = 0; c < m; ++c) s *= 2 * i + 1;
    return s;
  };
  while (size_at(i_max + 1) <= static_cast<long long>(budget)) ++i_max;
  return FolnerFamily<FreeAbelianGroup>{
      g, "boxes",
      [g, budget, size_at](long long i) {
        if (size_at(i) > static_cast<long long>(budget))
          throw budget_error("box i=" + std::to_string(i));
        std::vector<long long> lo(g.rank(), -i), hi(g.rank(), i);
        return box_subset(g, lo, hi);
      },
      i_max};
}

inline FolnerFamily<BaumslagSolitarGroup> standard_family(const BaumslagSolitarGroup& g,
                                                          std::size_t budget = kDefaultSetBudget) {
  long long i_max = 1;
  while (BigInt(i_max + 1) * g.pow_m(2 * static_cast<int>(i_max) + 2) <= BigInt(budget)) ++i_max;
  return FolnerFamily<BaumslagSolitarGroup>{
      g, "bsrect",
      [g, budget](long long i) { return bs_rectangle(g, static_cast<int>(i), budget); }, i_max};
}

inline FolnerFamily<CyclicProductGroup> standard_family(const CyclicProductGroup& g,
                                                        std::size_t budget = kDefaultSetBudget) {
  long long i_max = 1;
  while ((2 * (i_max + 1) + 1) * g.k() <= static_cast<long long>(budget)) ++i_max;
  return FolnerFamily<CyclicProductGroup>{
      g, "cyl",
      [g, budget](long long i) {
        if ((2 * i + 1) * g.k() > static_cast<long long>(budget))
          throw budget_error("cyl i=" + std::to_string(i));
        return cyc_interval_subset(g, i);
      },
      i_max};
}

inline FolnerFamily<FreeGroup> standard_family(const FreeGroup& g, std::size_t = kDefaultSetBudget) {
  throw spec_error(g.name() + " is not amenable: no standard Folner family");
}

/// Ball family S_i = B(i); used as the non-amenability contrast (free groups)
/// where the ratio stays bounded away from zero.
template <class G>
FolnerFamily<G> ball_family(const G& g, std::size_t budget = kDefaultBallBudget) {
  return FolnerFamily<G>{
      g, "balls",
      [g, budget](long long i) { return subset_from_ball(ball(g, static_cast<int>(i), budget)); },
      10};
}

// -- isoperimetric profile -----------------------------------------------------

struct ProfileRow {
  long long i = 0;
  long long size = 0;
  long long boundary_size = 0;
  Ratio ratio;  // |dS_i| / |S_i|
};

template <class G>
ProfileRow profile_row(const FolnerFamily<G>& fam, long long i) {
  FiniteSubset<G> S = fam.set_at(i);
  auto dS = boundary(S);
  ProfileRow row;
  row.i = i;
  row.size = static_cast<long long>(S.size());
  row.boundary_size = static_cast<long long>(dS.size());
  row.ratio = Ratio(row.boundary_size, row.size);
  return row;
}

/// Exact rows for i = 1..i_max; rows may be computed in parallel, output is
/// ordered by i either way.
template <class G>
std::vector<ProfileRow> profile(const FolnerFamily<G>& fam, long long i_max, int threads = 1) {
  std::vector<ProfileRow> rows(static_cast<std::size_t>(i_max));
  if (threads <= 1) {
    for (long long i = 1; i <= i_max; ++i) rows[i - 1] = profile_row(fam, i);
    return rows;
  }
  std::vector<std::future<void>> work;
  for (int t = 0; t < threads; ++t) {
    work.push_back(std::async(std::launch::async, [&, t]() {
      for (long long i = 1 + t; i <= i_max; i += threads) rows[i - 1] = profile_row(fam, i);
    }));
  }
  for (auto& f : work) f.get();
  return rows;
}

inline std::string profile_csv(const std::vector<ProfileRow>& rows) {
  std::string out = "i,size,boundary_size,ratio,ratio_decimal\n";
  for (const auto& r : rows) {
    out += std::to_string(r.i) + "," + std::to_string(r.size) + "," +
           std::to_string(r.boundary_size) + "," + r.ratio.str() + "," + r.ratio.decimal(6) + "\n";
  }
  return out;
}

}  // namespace qiforge
