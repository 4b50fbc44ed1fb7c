#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qiforge/errors.hpp"
#include "qiforge/groups.hpp"
#include "qiforge/io.hpp"

namespace qiforge {

inline constexpr std::size_t kDefaultBallBudget = 2'000'000;

/// BFS-computed window of a marked group: every element of word length <= r
/// with its exact distance, plus an element <-> dense-id table. Ids follow
/// BFS discovery order (identity first, then generator order), which makes
/// downstream reports deterministic.
template <class G>
class Ball {
 public:
  using Element = typename G::Element;

  Ball(const G& group, int radius, std::size_t budget = kDefaultBallBudget)
      : group_(group), radius_(radius) {
    if (radius < 0) throw spec_error("ball radius must be >= 0");
    elements_.push_back(group_.identity());
    dist_.push_back(0);
    index_.emplace(elements_[0], 0);
    std::size_t head = 0;
    while (head < elements_.size()) {
      const int d = dist_[head];
      if (d == radius_) break;  // BFS order: all later entries are at >= d
      // copy, not reference: push_back below may reallocate
      const Element cur = elements_[head];
      ++head;
      for (int i = 0; i < group_.generator_count(); ++i) {
        Element next = group_.multiply(cur, group_.generator(i));
        if (index_.contains(next)) continue;
        if (elements_.size() >= budget)
          throw budget_error("ball(" + group_.name() + ", r=" + std::to_string(radius_) +
                             ") exceeds " + std::to_string(budget) + " elements");
        index_.emplace(next, static_cast<int>(elements_.size()));
        elements_.push_back(std::move(next));
        dist_.push_back(d + 1);
      }
    }
  }

  const G& group() const { return group_; }
  int radius() const { return radius_; }
  std::size_t size() const { return elements_.size(); }

  const Element& element(int id) const { return elements_[id]; }
  const std::vector<Element>& elements() const { return elements_; }

  bool contains(const Element& e) const { return index_.contains(e); }

  std::optional<int> id_of(const Element& e) const {
    auto it = index_.find(e);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int distance_by_id(int id) const { return dist_[id]; }

  /// Exact word length of an element of this window.
  int word_length(const Element& e) const {
    auto it = index_.find(e);
    if (it == index_.end())
      throw out_of_window_error(group_.to_string(e) + " outside ball of radius " +
                                std::to_string(radius_));
    return dist_[it->second];
  }

  /// d(x, y) = |x^-1 y|; both the lookup key and the answer must fit in the
  /// ball, otherwise this throws.
  int distance(const Element& x, const Element& y) const {
    return word_length(group_.multiply(group_.inverse(x), y));
  }

  /// CSV rows: id, normal_form, distance.
  std::string to_csv() const {
    std::string out = "id,normal_form,distance\n";
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      out += std::to_string(i) + "," + csv_field(group_.to_string(elements_[i])) + "," +
             std::to_string(dist_[i]) + "\n";
    }
    return out;
  }

 private:
  G group_;
  int radius_;
  std::vector<Element> elements_;
  std::vector<int> dist_;
  std::unordered_map<Element, int> index_;
};

template <class G>
Ball<G> ball(const G& group, int radius, std::size_t budget = kDefaultBallBudget) {
  return Ball<G>(group, radius, budget);
}

/// The <= |gens| right-neighbors g*t of an element.
template <class G>
std::vector<typename G::Element> neighbors(const G& group, const typename G::Element& g) {
  std::vector<typename G::Element> out;
  out.reserve(group.generator_count());
  for (int i = 0; i < group.generator_count(); ++i) {
    typename G::Element n = group.multiply(g, group.generator(i));
    bool seen = false;
    for (const auto& o : out) seen = seen || o == n;
    if (!seen && !(n == g)) out.push_back(std::move(n));
  }
  return out;
}

}  // namespace qiforge
