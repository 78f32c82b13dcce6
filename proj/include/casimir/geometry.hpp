#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"

namespace casimir {

/// Two equal spheres of radius R with centres a distance d apart.
struct Geometry {
  double R = 0.0;
  double d = 0.0;
  double ell = 0.0;  ///< surface gap d - 2R

  Geometry() = default;
  Geometry(double radius, double distance) : R(radius), d(distance), ell(distance - 2.0 * radius) {
    if (!(R > 0.0) || !(d > 0.0) || !std::isfinite(R) || !std::isfinite(d)) {
      throw DomainError("geometry: R and d must be finite and > 0");
    }
    if (!(ell > 0.0)) {
      std::ostringstream os;
      os.precision(6);
      os << "geometry: spheres overlap or touch (need d > 2R, got R=" << R << ", d=" << d << ")";
      throw DomainError(os.str());
    }
  }

  /// Unit centre distance, R = r.
  static Geometry from_ratio(double r, double distance = 1.0) { return Geometry(r * distance, distance); }
  static Geometry from_gap(double radius, double gap) { return Geometry(radius, gap + 2.0 * radius); }

  double r() const { return R / d; }
};

/// Temperature expressed through the thermal wavelength lambda_T = hbar c / (2 pi k_B T)
/// and z = d / lambda_T.
struct ThermalPoint {
  double T = 0.0;
  double lambda_T = std::numeric_limits<double>::infinity();
  double z = 0.0;

  static ThermalPoint from_temperature(double T, double d) {
    if (!(T >= 0.0) || !std::isfinite(T)) throw DomainError("thermal point: T must be finite and >= 0");
    ThermalPoint p;
    p.T = T;
    if (T > 0.0) {
      p.lambda_T = si::hbar_c / (2.0 * pi * si::k_B * T);
      p.z = d / p.lambda_T;
    }
    return p;
  }

  static ThermalPoint from_z(double z, double d) {
    if (!(z >= 0.0) || !std::isfinite(z)) throw DomainError("thermal point: z must be finite and >= 0");
    auto p = from_temperature(z * si::hbar_c / (2.0 * pi * si::k_B * d), d);
    p.z = z;
    return p;
  }
};

}  // namespace casimir
