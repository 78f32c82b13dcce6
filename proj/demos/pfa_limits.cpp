// Proximity approximation for close spheres: quantum and classical limits
// against the full plate sum.
#include <cstdio>

#include "casimir/casimir.hpp"

int main() {
  using namespace casimir;
  const double R = 50e-6;
  const double ell = 1e-6;
  std::printf("%10s %14s %14s %14s\n", "T [K]", "E_pfa [J]", "E/E_quantum", "E/E_classical");
  for (double T : {1.0, 10.0, 100.0, 300.0, 3000.0, 30000.0}) {
    const auto p = PfaPoint::make(ell, R, T);
    const double E = pfa_energy_sum(p);
    std::printf("%10.1f %14.6e %14.6f %14.6f\n", T, E, E / pfa_quantum_limit(ell, R),
                E / pfa_classical_limit(ell, R, T));
  }
  std::printf("finite-R integral at 300 K: %.6e J\n", pfa_finite_R_integral(ell, R, 300.0));
}
