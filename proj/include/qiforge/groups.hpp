#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <boost/functional/hash.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "qiforge/errors.hpp"

namespace qiforge {

using BigInt = boost::multiprecision::cpp_int;

inline void hash_combine(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

/// Z^m element: integer coordinate vector.
struct VecElem {
  std::vector<long long> v;

  friend bool operator==(const VecElem& a, const VecElem& b) { return a.v == b.v; }
  friend bool operator<(const VecElem& a, const VecElem& b) { return a.v < b.v; }
};

/// BS(1,m) element in the affine normal form g : x -> m^k x + q.
/// q = num / base^exp with exp >= 0 and (num not divisible by base unless
/// num == 0 and exp == 0), so equal elements are bitwise equal.
struct BsElem {
  int level = 0;   // k
  BigInt num = 0;  // numerator of q
  int exp = 0;     // q = num / base^exp
  int base = 2;    // m; carried for printing and ordering

  friend bool operator==(const BsElem& a, const BsElem& b) {
    return a.level == b.level && a.exp == b.exp && a.num == b.num;
  }
  friend bool operator<(const BsElem& a, const BsElem& b) {
    if (a.level != b.level) return a.level < b.level;
    // compare q = num / base^exp exactly via cross multiplication
    BigInt lhs = a.num, rhs = b.num;
    for (int i = 0; i < b.exp; ++i) lhs *= a.base;
    for (int i = 0; i < a.exp; ++i) rhs *= a.base;
    return lhs < rhs;
  }
};

/// Free group element: reduced word, lowercase = generator, uppercase = inverse.
struct WordElem {
  std::string w;

  friend bool operator==(const WordElem& a, const WordElem& b) { return a.w == b.w; }
  friend bool operator<(const WordElem& a, const WordElem& b) {
    if (a.w.size() != b.w.size()) return a.w.size() < b.w.size();
    return a.w < b.w;
  }
};

/// Z x Z/k element.
struct CycElem {
  long long n = 0;
  int r = 0;

  friend bool operator==(const CycElem& a, const CycElem& b) { return a.n == b.n && a.r == b.r; }
  friend bool operator<(const CycElem& a, const CycElem& b) {
    if (a.n != b.n) return a.n < b.n;
    return a.r < b.r;
  }
};

}  // namespace qiforge

template <>
struct std::hash<qiforge::VecElem> {
  std::size_t operator()(const qiforge::VecElem& e) const noexcept {
    std::size_t h = e.v.size();
    for (long long x : e.v) qiforge::hash_combine(h, std::hash<long long>{}(x));
    return h;
  }
};

template <>
struct std::hash<qiforge::BsElem> {
  std::size_t operator()(const qiforge::BsElem& e) const noexcept {
    std::size_t h = std::hash<int>{}(e.level);
    qiforge::hash_combine(h, std::hash<int>{}(e.exp));
    qiforge::hash_combine(h, boost::hash<qiforge::BigInt>{}(e.num));
    return h;
  }
};

template <>
struct std::hash<qiforge::WordElem> {
  std::size_t operator()(const qiforge::WordElem& e) const noexcept {
    return std::hash<std::string>{}(e.w);
  }
};

template <>
struct std::hash<qiforge::CycElem> {
  std::size_t operator()(const qiforge::CycElem& e) const noexcept {
    std::size_t h = std::hash<long long>{}(e.n);
    qiforge::hash_combine(h, std::hash<int>{}(e.r));
    return h;
  }
};

namespace qiforge {

// ---------------------------------------------------------------------------
// Group models
//
// Each model carries a labeled symmetric generating set; `generators()[i]`
// pairs with `generators()[inverse_pair(i)]`. Word metrics are taken with
// respect to exactly this list, neighbors are right multiplications g*t.
// All models are immutable value types; operations are pure.
// ---------------------------------------------------------------------------

/// Z^m with unit-vector generators.
class FreeAbelianGroup {
 public:
  using Element = VecElem;

  FreeAbelianGroup() : rank_(1) {}
  explicit FreeAbelianGroup(int rank) : rank_(rank) {
    if (rank < 1) throw spec_error("FreeAbelian rank must be >= 1");
  }

  int rank() const { return rank_; }
  std::string name() const { return rank_ == 1 ? "Z" : "Z^" + std::to_string(rank_); }

  Element identity() const { return Element{std::vector<long long>(rank_, 0)}; }

  Element multiply(const Element& a, const Element& b) const {
    Element out = a;
    for (int i = 0; i < rank_; ++i) out.v[i] += b.v[i];
    return out;
  }

  Element inverse(const Element& a) const {
    Element out = a;
    for (auto& x : out.v) x = -x;
    return out;
  }

  int generator_count() const { return 2 * rank_; }

  Element generator(int i) const {
    Element e = identity();
    e.v[i / 2] = (i % 2 == 0) ? 1 : -1;
    return e;
  }

  int inverse_pair(int i) const { return i ^ 1; }

  std::string generator_label(int i) const {
    std::string base = "x" + std::to_string(i / 2 + 1);
    return (i % 2 == 0) ? base : base + "^-1";
  }

  long long word_norm(const Element& a) const {
    long long s = 0;
    for (long long x : a.v) s += x < 0 ? -x : x;
    return s;
  }

  std::string to_string(const Element& a) const {
    if (rank_ == 1) return std::to_string(a.v[0]);
    std::string s = "(";
    for (int i = 0; i < rank_; ++i) {
      if (i) s += ",";
      s += std::to_string(a.v[i]);
    }
    return s + ")";
  }

  friend bool operator==(const FreeAbelianGroup& a, const FreeAbelianGroup& b) {
    return a.rank_ == b.rank_;
  }

 private:
  int rank_;
};

/// BS(1,m) = <a,b | a b a^-1 = b^m>, m >= 2, modeled by affine maps
/// a : x -> m x and b : x -> x + 1, which gives the closed multiplication law
/// (k1,q1)(k2,q2) = (k1+k2, q1 + m^k1 q2).
class BaumslagSolitarGroup {
 public:
  using Element = BsElem;

  BaumslagSolitarGroup() : m_(2) {}
  explicit BaumslagSolitarGroup(int m) : m_(m) {
    if (m < 2) throw spec_error("BS(1,m) requires m >= 2");
  }

  int m() const { return m_; }
  std::string name() const { return "BS(1," + std::to_string(m_) + ")"; }

  Element identity() const { return Element{0, 0, 0, m_}; }

  Element make(int level, BigInt num, int exp) const {
    Element e{level, std::move(num), exp, m_};
    canonicalize(e);
    return e;
  }

  Element multiply(const Element& a, const Element& b) const {
    // q = q_a + m^{k_a} q_b, as (num,exp) with exp >= 0
    BigInt num_b = b.num;
    int exp_b = b.exp - a.level;
    if (exp_b < 0) {
      num_b *= pow_m(-exp_b);
      exp_b = 0;
    }
    int exp = std::max(a.exp, exp_b);
    BigInt num = a.num * pow_m(exp - a.exp) + num_b * pow_m(exp - exp_b);
    return make(a.level + b.level, std::move(num), exp);
  }

  Element inverse(const Element& a) const {
    // (k,q)^-1 = (-k, -q/m^k)
    return make(-a.level, -a.num, a.exp + a.level);
  }

  int generator_count() const { return 4; }

  Element generator(int i) const {
    switch (i) {
      case 0: return Element{1, 0, 0, m_};   // a
      case 1: return Element{-1, 0, 0, m_};  // a^-1
      case 2: return Element{0, 1, 0, m_};   // b
      default: return Element{0, -1, 0, m_}; // b^-1
    }
  }

  int inverse_pair(int i) const { return i ^ 1; }

  std::string generator_label(int i) const {
    static const char* names[4] = {"a", "a^-1", "b", "b^-1"};
    return names[i];
  }

  /// Exact rational q of the affine normal form.
  /// Denominator is pow_m(exp).
  BigInt q_numerator(const Element& a) const { return a.num; }
  BigInt q_denominator(const Element& a) const { return pow_m(a.exp); }

  /// Exact word length via the geodesic walk/digit decomposition.
  ///
  /// Any word spelling (k,q) is a walk on levels (a-steps) that starts at 0,
  /// ends at k, and deposits b-steps along the way; a deposit of c at level l
  /// contributes c*m^l to q. Hence
  ///   |(k,q)| = min over base-m digit expansions q = sum c_l m^l of
  ///             sum|c_l| + |k| + 2*(levels used below min(0,k))
  ///                      + 2*(levels used above max(0,k)).
  /// The minimum is found by a carry DP with digits bounded by 2m (larger
  /// digits can always be carried at no extra cost). Cross-checked against
  /// BFS distances in the test suite.
  long long word_norm(const Element& g) const {
    const long long absk = g.level < 0 ? -g.level : g.level;
    if (g.num == 0) return absk;
    const int lo_k = std::min(0, g.level), hi_k = std::max(0, g.level);

    // base-m digits of |num| placed at levels (-exp, -exp+1, ...)
    BigInt N = g.num < 0 ? -g.num : g.num;  // b -> b^-1 is an automorphism fixing a
    std::vector<int> digit;
    {
      BigInt t = N;
      while (t != 0) {
        digit.push_back(static_cast<int>(t % m_));
        t /= m_;
      }
    }
    const int lo = -g.exp;
    const int msb = lo + static_cast<int>(digit.size()) - 1;
    const int cap = std::max(hi_k, msb) + 2;

    // S_clamp[i] = remaining raw value at level lo+i, clamped; a state with
    // shift delta is settled once S + delta == 0.
    const long long kClamp = 1000;
    std::vector<long long> s_clamp(cap - lo + 2, 0);
    {
      BigInt t = N;
      for (int i = 0; i < static_cast<int>(s_clamp.size()); ++i) {
        s_clamp[i] = t > kClamp ? kClamp : static_cast<long long>(t);
        t /= m_;
      }
    }

    constexpr int kDeltaMax = 4;
    constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
    // best[delta + kDeltaMax][started]
    std::array<std::array<long long, 2>, 2 * kDeltaMax + 1> best;
    for (auto& row : best) row = {kInf, kInf};
    best[kDeltaMax][0] = 0;
    long long settled = kInf;

    for (int level = lo; level <= cap; ++level) {
      const int idx = level - lo;
      const int raw = (idx < static_cast<int>(digit.size())) ? digit[idx] : 0;
      decltype(best) next;
      for (auto& row : next) row = {kInf, kInf};

      for (int d = -kDeltaMax; d <= kDeltaMax; ++d) {
        for (int started = 0; started < 2; ++started) {
          long long cost = best[d + kDeltaMax][started];
          if (cost >= kInf) continue;
          if (s_clamp[idx] + d == 0) {
            if (started) settled = std::min(settled, cost);
            continue;  // nothing left above this level
          }
          if (level > hi_k) cost += 2;  // walk must climb through this level
          const int val = raw + d;
          // digit choices val - j*m with |digit| <= 2m
          for (int j = -kDeltaMax; j <= kDeltaMax; ++j) {
            const long long dig = static_cast<long long>(val) - static_cast<long long>(j) * m_;
            if (dig > 2 * m_ || dig < -2 * m_) continue;
            long long c = cost + (dig < 0 ? -dig : dig);
            int started2 = started;
            if (dig != 0 && !started) {
              started2 = 1;
              if (level < lo_k) c += 2LL * (lo_k - level);  // walk dips below
            }
            auto& slot = next[j + kDeltaMax][started2];
            slot = std::min(slot, c);
          }
        }
      }
      best = next;
    }
    for (int d = -kDeltaMax; d <= kDeltaMax; ++d) {
      long long cost = best[d + kDeltaMax][1];
      if (cost < kInf && s_clamp[cap - lo + 1] + d == 0) settled = std::min(settled, cost);
    }
    return absk + settled;
  }

  std::string to_string(const Element& a) const {
    std::string q = a.num.str();
    if (a.exp > 0) q += "/" + pow_m(a.exp).str();
    return "(" + std::to_string(a.level) + "," + q + ")";
  }

  BigInt pow_m(int e) const {
    BigInt p = 1;
    for (int i = 0; i < e; ++i) p *= m_;
    return p;
  }

  friend bool operator==(const BaumslagSolitarGroup& a, const BaumslagSolitarGroup& b) {
    return a.m_ == b.m_;
  }

 private:
  void canonicalize(Element& e) const {
    e.base = m_;
    if (e.num == 0) {
      e.exp = 0;
      return;
    }
    while (e.exp < 0) {
      e.num *= m_;
      ++e.exp;
    }
    while (e.exp > 0 && e.num % m_ == 0) {
      e.num /= m_;
      --e.exp;
    }
  }

  int m_;
};

/// Free group of rank r >= 2 on letters a, b, c, ... (uppercase = inverse).
class FreeGroup {
 public:
  using Element = WordElem;

  FreeGroup() : rank_(2) {}
  explicit FreeGroup(int rank) : rank_(rank) {
    if (rank < 2) throw spec_error("Free rank must be >= 2");
    if (rank > 26) throw spec_error("Free rank capped at 26");
  }

  int rank() const { return rank_; }
  std::string name() const { return "F_" + std::to_string(rank_); }

  Element identity() const { return Element{}; }

  Element multiply(const Element& a, const Element& b) const {
    Element out = a;
    for (char c : b.w) {
      if (!out.w.empty() && is_inverse_pair(out.w.back(), c)) {
        out.w.pop_back();
      } else {
        out.w.push_back(c);
      }
    }
    return out;
  }

  Element inverse(const Element& a) const {
    Element out;
    out.w.reserve(a.w.size());
    for (auto it = a.w.rbegin(); it != a.w.rend(); ++it) out.w.push_back(flip(*it));
    return out;
  }

  int generator_count() const { return 2 * rank_; }

  Element generator(int i) const {
    char c = static_cast<char>('a' + i / 2);
    return Element{std::string(1, i % 2 == 0 ? c : static_cast<char>(std::toupper(c)))};
  }

  int inverse_pair(int i) const { return i ^ 1; }

  std::string generator_label(int i) const {
    std::string base(1, static_cast<char>('a' + i / 2));
    return (i % 2 == 0) ? base : base + "^-1";
  }

  long long word_norm(const Element& a) const { return static_cast<long long>(a.w.size()); }

  std::string to_string(const Element& a) const { return a.w.empty() ? "e" : a.w; }

  friend bool operator==(const FreeGroup& a, const FreeGroup& b) { return a.rank_ == b.rank_; }

 private:
  static bool is_inverse_pair(char x, char y) {
    return x != y && std::tolower(x) == std::tolower(y);
  }
  static char flip(char c) {
    return std::isupper(c) ? static_cast<char>(std::tolower(c))
                           : static_cast<char>(std::toupper(c));
  }

  int rank_;
};

/// Z x Z/k with generators s = (1,0) and t = (0,1); t is listed once when
/// it is its own inverse (k == 2) and dropped when trivial (k == 1).
class CyclicProductGroup {
 public:
  using Element = CycElem;

  CyclicProductGroup() : k_(1) {}
  explicit CyclicProductGroup(int k) : k_(k) {
    if (k < 1) throw spec_error("ZxC_k requires k >= 1");
  }

  int k() const { return k_; }
  std::string name() const { return "ZxC" + std::to_string(k_); }

  Element identity() const { return Element{0, 0}; }

  Element multiply(const Element& a, const Element& b) const {
    return Element{a.n + b.n, static_cast<int>((a.r + b.r) % k_)};
  }

  Element inverse(const Element& a) const {
    return Element{-a.n, a.r == 0 ? 0 : k_ - a.r};
  }

  int generator_count() const { return k_ == 1 ? 2 : (k_ == 2 ? 3 : 4); }

  Element generator(int i) const {
    switch (i) {
      case 0: return Element{1, 0};
      case 1: return Element{-1, 0};
      case 2: return Element{0, 1};
      default: return Element{0, k_ - 1};
    }
  }

  int inverse_pair(int i) const {
    if (i < 2) return i ^ 1;
    if (k_ == 2) return 2;  // t = t^-1
    return i ^ 1;
  }

  std::string generator_label(int i) const {
    static const char* names[4] = {"s", "s^-1", "t", "t^-1"};
    return names[i];
  }

  long long word_norm(const Element& a) const {
    long long cyc = std::min<long long>(a.r, k_ - a.r);
    return (a.n < 0 ? -a.n : a.n) + cyc;
  }

  std::string to_string(const Element& a) const {
    return "(" + std::to_string(a.n) + "," + std::to_string(a.r) + ")";
  }

  friend bool operator==(const CyclicProductGroup& a, const CyclicProductGroup& b) {
    return a.k_ == b.k_;
  }

 private:
  int k_;
};

// ---------------------------------------------------------------------------
// Runtime dispatch over the supported families
// ---------------------------------------------------------------------------

using AnyGroup =
    std::variant<FreeAbelianGroup, BaumslagSolitarGroup, FreeGroup, CyclicProductGroup>;

/// Parses "Z", "Z^2", "BS(1,3)", "F_2", "ZxC3".
inline AnyGroup parse_group(const std::string& spec) {
  auto fail = [&]() -> AnyGroup { throw spec_error("unrecognized group spec '" + spec + "'"); };
  auto parse_int = [&](const std::string& s) {
    if (s.empty()) fail();
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) fail();
    return std::stoi(s);
  };
  if (spec == "Z") return FreeAbelianGroup(1);
  if (spec.rfind("Z^", 0) == 0) return FreeAbelianGroup(parse_int(spec.substr(2)));
  if (spec.rfind("BS(1,", 0) == 0 && spec.back() == ')')
    return BaumslagSolitarGroup(parse_int(spec.substr(5, spec.size() - 6)));
  if (spec.rfind("F_", 0) == 0) return FreeGroup(parse_int(spec.substr(2)));
  if (spec.rfind("ZxC", 0) == 0) return CyclicProductGroup(parse_int(spec.substr(3)));
  return fail();
}

inline std::string group_name(const AnyGroup& g) {
  return std::visit([](const auto& gg) { return gg.name(); }, g);
}

}  // namespace qiforge
