// Audits the 2-to-1 floor map of Z and asks whether it is a bounded distance
// from a bijection at growing window sizes (it is not: R*(L) grows linearly).
#include <iostream>

#include "qiforge/matching.hpp"
#include "qiforge/qi_maps.hpp"

int main() {
  using namespace qiforge;

  auto f = floor_map_Z(2);
  auto src = ball(f.source, 100);
  auto tgt = ball(f.target, 101);
  auto audit = verify_constants(f, Ratio(2), Ratio(1), src, tgt);
  std::cout << audit.to_json().dump(2) << "\n";

  auto growth = classify_growth(f, {20, 40, 80});
  std::cout << growth.to_csv();

  auto fix = compose(inclusion_map({2}, FreeAbelianGroup(1)), floor_map_Z(2));
  auto fixed = classify_growth(fix, {20, 40, 80});
  std::cout << fixed.to_csv();
  return 0;
}
