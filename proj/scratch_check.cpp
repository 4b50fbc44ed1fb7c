#include <cstdio>
#include "qiforge/ball.hpp"
#include "qiforge/groups.hpp"

using namespace qiforge;

int main() {
  for (int m : {2, 3}) {
    BaumslagSolitarGroup G(m);
    int radius = m == 2 ? 10 : 8;
    auto B = ball(G, radius);
    std::printf("BS(1,%d): ball sizes up to r=%d:", m, radius);
    std::vector<size_t> count(radius + 1, 0);
    for (size_t i = 0; i < B.size(); ++i) count[B.distance_by_id((int)i)]++;
    size_t cum = 0;
    for (int r = 0; r <= radius; ++r) {
      cum += count[r];
      std::printf(" %zu", cum);
    }
    std::printf("\n");
    size_t bad = 0;
    for (size_t i = 0; i < B.size(); ++i) {
      long long dp = G.word_norm(B.element((int)i));
      if (dp != B.distance_by_id((int)i)) {
        if (bad < 10)
          std::printf("  MISMATCH %s bfs=%d dp=%lld\n", G.to_string(B.element((int)i)).c_str(),
                      B.distance_by_id((int)i), dp);
        ++bad;
      }
    }
    std::printf("  mismatches: %zu / %zu\n", bad, B.size());
  }
  // also check pair products stay canonical + norm agrees on random products
  BaumslagSolitarGroup G(2);
  auto B6 = ball(G, 6);
  auto B12 = ball(G, 12);
  size_t bad = 0, checked = 0;
  for (size_t i = 0; i < B6.size(); i += 3)
    for (size_t j = 0; j < B6.size(); j += 3) {
      auto u = G.multiply(G.inverse(B6.element((int)i)), B6.element((int)j));
      long long dp = G.word_norm(u);
      int bfs = B12.word_length(u);
      if (dp != bfs) ++bad;
      ++checked;
    }
  std::printf("pair diffs checked=%zu mismatches=%zu\n", checked, bad);
  return 0;
}
