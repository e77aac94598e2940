#pragma once

#include <string>

namespace wrcouple {

/// Thermal coefficients of the material filling one subdomain.
///
/// `alpha` (volumetric heat capacity) and `diffusivity` are derived on
/// construction and never set independently.
struct Material {
  std::string name;
  double lambda_cond = 0.0;  ///< thermal conductivity, W/(m K)
  double rho = 0.0;          ///< density, kg/m^3
  double cp = 0.0;           ///< specific heat capacity, J/(kg K)
  double alpha = 0.0;        ///< rho * cp, J/(K m^3)
  double diffusivity = 0.0;  ///< lambda_cond / alpha, m^2/s

  /// Throws std::invalid_argument unless all three coefficients are positive and finite.
  static Material make(std::string name, double lambda_cond, double rho, double cp);

  /// Same material with both lambda and rho scaled; used by scaling tests.
  [[nodiscard]] Material scaled(double lambda_factor, double alpha_factor) const;
};

bool operator==(const Material& a, const Material& b);

}  // namespace wrcouple
