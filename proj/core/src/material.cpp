#include "wrcouple/material.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace wrcouple {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string("material coefficient ") + what +
                                " must be positive and finite");
  }
}

}  // namespace

Material Material::make(std::string name, double lambda_cond, double rho, double cp) {
  require_positive(lambda_cond, "lambda");
  require_positive(rho, "rho");
  require_positive(cp, "cp");
  Material m;
  m.name = std::move(name);
  m.lambda_cond = lambda_cond;
  m.rho = rho;
  m.cp = cp;
  m.alpha = rho * cp;
  m.diffusivity = lambda_cond / m.alpha;
  return m;
}

Material Material::scaled(double lambda_factor, double alpha_factor) const {
  return make(name, lambda_cond * lambda_factor, rho * alpha_factor, cp);
}

bool operator==(const Material& a, const Material& b) {
  return a.lambda_cond == b.lambda_cond && a.rho == b.rho && a.cp == b.cp;
}

}  // namespace wrcouple
