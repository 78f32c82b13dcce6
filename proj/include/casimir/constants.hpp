#pragma once

#include <numbers>

namespace casimir {

inline constexpr double pi = std::numbers::pi;

/// Apery's constant.
inline constexpr double zeta3 = 1.2020569031595942853997381615114499907650;
inline constexpr double zeta2 = pi * pi / 6.0;
inline constexpr double zeta4 = pi * pi * pi * pi / 90.0;

namespace si {
// SI 2019 exact values.
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double c = 299792458.0;             // m / s
inline constexpr double k_B = 1.380649e-23;          // J / K
inline constexpr double hbar_c = hbar * c;           // J m (197.3269804 MeV fm)
}  // namespace si

}  // namespace casimir
