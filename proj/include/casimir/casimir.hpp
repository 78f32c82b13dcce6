#pragma once

// Casimir free energy, entropy and force between two equal perfectly
// conducting spheres at finite temperature.

#include "casimir/asymptotics.hpp"
#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/geometry.hpp"
#include "casimir/matsubara.hpp"
#include "casimir/pfa.hpp"
#include "casimir/polylog.hpp"
#include "casimir/roundtrip.hpp"
#include "casimir/scattering.hpp"
#include "casimir/specfun.hpp"
#include "casimir/thermo.hpp"
#include "casimir/translation.hpp"
#include "casimir/version.hpp"
#include "casimir/wigner.hpp"
