// Free energy of two spheres R = 0.2 um, d = 1 um against temperature,
// numeric sum next to the dipole closed form.
#include <cmath>
#include <cstdio>

#include "casimir/casimir.hpp"

int main() {
  using namespace casimir;
  const double d = 1e-6;
  const auto g = Geometry::from_ratio(0.2, d);
  const double r6 = std::pow(g.r(), 6);
  std::printf("%10s %14s %14s %14s\n", "T [K]", "E [J]", "E_dipole [J]", "ratio");
  for (double T : {0.0, 30.0, 100.0, 300.0, 1000.0, 3000.0}) {
    const auto th = ThermalPoint::from_temperature(T, d);
    const auto res = free_energy(g, th, 1e-9);
    const double dip = si::hbar_c * r6 * e_ad(th.z) / (2.0 * pi * d);
    std::printf("%10.1f %14.6e %14.6e %14.6f\n", T, res.energy, dip, res.energy / dip);
  }
}
