// Where the entropy turns negative, for a few sphere sizes.
#include <cstdio>

#include "casimir/casimir.hpp"

int main() {
  using namespace casimir;
  const auto [z1, z2] = find_entropy_zeros();
  std::printf("dipole limit: S < 0 for %.4f < z < %.4f\n", z1, z2);
  for (double r : {0.1, 0.3, 0.4, 0.42}) {
    const auto rep = scan_entropy_features(r, ZGrid{0.05, 20.0, 120});
    if (rep.has_negative_interval) {
      std::printf("r=%.2f: S < 0 for %.3f < z < %.3f, min S/S_cl = %.4f\n", r, rep.interval->first,
                  rep.interval->second, rep.min_S_over_Scl);
    } else {
      std::printf("r=%.2f: no negative entropy, min S/S_cl = %.4f at z = %.3f\n", r, rep.min_S_over_Scl, rep.z_at_min);
    }
  }
}
