// Prints isoperimetric profiles for Z, BS(1,2) and the free-group contrast.
#include <iostream>

#include "qiforge/folner.hpp"

int main() {
  using namespace qiforge;

  std::cout << "Z, intervals [-i,i]:\n";
  std::cout << profile_csv(profile(standard_family(FreeAbelianGroup(1)), 8));

  std::cout << "\nBS(1,2), rectangles {b^j a^k : 0<=k<N, 0<=j<4^N}:\n";
  std::cout << profile_csv(profile(standard_family(BaumslagSolitarGroup(2)), 6));

  std::cout << "\nF_2, balls (no Folner sequence exists; ratio stays >= 2):\n";
  std::cout << profile_csv(profile(ball_family(FreeGroup(2)), 6));
  return 0;
}
