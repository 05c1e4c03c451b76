#pragma once

#include <cmath>
#include <numbers>

#include "grushin/coefficient.hpp"
#include "grushin/config.hpp"
#include "grushin/geometry.hpp"
#include "grushin/operator.hpp"

namespace grushin {

/// Closed-form sources selectable from a config.
inline Coefficient make_source(const ExperimentConfig& cfg) {
  const double c = cfg.source_value;
  switch (cfg.source) {
    case SourceKind::constant:
      return Coefficient(c);
    case SourceKind::radial_power: {
      const double g = cfg.source_gamma, x0 = cfg.source_center_x, y0 = cfg.source_center_y;
      return Coefficient(Coefficient::Rule(
          [c, g, x0, y0](double x, double y) { return c * std::pow(std::hypot(x - x0, y - y0), -g); }));
    }
    case SourceKind::sine_product: {
      const Box d = cfg.domain;
      return Coefficient(Coefficient::Rule([c, d](double x, double y) {
        return c * std::sin(std::numbers::pi * (x - d.ax) / (d.bx - d.ax)) *
               std::sin(std::numbers::pi * (y - d.ay) / (d.by - d.ay));
      }));
    }
    case SourceKind::indicator: {
      const Domain box = cfg.source_box.domain();
      return Coefficient(Coefficient::Rule([c, box](double x, double y) { return box.contains(x, y) ? c : 0.0; }));
    }
  }
  return Coefficient(c);
}

/// nu_inside on the closed zone, nu_outside elsewhere.
inline Coefficient two_zone_exponent(const Domain& zone, double nu_inside, double nu_outside) {
  return Coefficient(Coefficient::Rule(
      [zone, nu_inside, nu_outside](double x, double y) { return zone.contains(x, y) ? nu_inside : nu_outside; }));
}

inline Coefficient make_exponent(const ExperimentConfig& cfg) {
  if (cfg.two_zone) return two_zone_exponent(cfg.nu_zone.domain(), cfg.nu_inside, cfg.nu_outside);
  return Coefficient(cfg.nu.value_or(1.0));
}

/// Manufactured pair for the linear Dirichlet problem on a rectangle:
///   u*(x,y) = (x - ax)(bx - x) sin(pi (y - ay)/Ly),
///   f*      = -(u*_xx + |x|^{2 lambda} u*_yy)
///           = [2 + |x|^{2 lambda} (pi/Ly)^2 (x - ax)(bx - x)] sin(pi (y - ay)/Ly).
/// On [-1,1]x[0,1] this is u* = (1 - x^2) sin(pi y).
struct ManufacturedSolution {
  Domain domain;
  double lambda;

  double exact(double x, double y) const {
    return (x - domain.ax()) * (domain.bx() - x) * std::sin(std::numbers::pi * (y - domain.ay()) / domain.height());
  }

  double source(double x, double y) const {
    const double k = std::numbers::pi / domain.height();
    const double s = std::sin(k * (y - domain.ay()));
    return (2.0 + grushin_weight(x, lambda) * k * k * (x - domain.ax()) * (domain.bx() - x)) * s;
  }
};

}  // namespace grushin
