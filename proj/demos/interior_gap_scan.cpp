// Exact, asymptotic and PFA energies for a cylinder inside a cylinder.
// Prints E_exact / E_leading - 1 next to the predicted bracket * d.

#include <cstdio>

#include "cascyl/asymptotics.hpp"
#include "cascyl/scattering.hpp"

using namespace cascyl;

int main() {
  const CylinderPair base{Kind::Interior, 1.0, 2.0, 0.0};
  std::printf("%-6s %-4s %14s %14s %12s %12s\n", "d", "bc", "E_exact", "E_asym", "R-1", "theta1*d");
  for (Bc bc : {Bc::DD, Bc::DN})
    for (double d : {0.4, 0.2}) {
      const auto p = base.with_gap(d);
      const auto ex = scatter::casimir_energy_exact(p, bc, 1e-6);
      const auto as = asym::energy_expansion(p, bc);
      std::printf("%-6.2f %-4s %14.8f %14.8f %12.6f %12.6f\n", d, std::string(to_string(bc)).c_str(),
                  ex.value_per_length, as.value(d), ex.value_per_length / as.amplitude - 1, as.bracket * d);
    }
}
