#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "grushin/field.hpp"
#include "grushin/geometry.hpp"
#include "grushin/operator.hpp"

namespace grushin {

// ---------------------------------------------------------------------------
// Exponents of the Grushin geometry.

/// Homogeneous dimension Q = (m+1) + lambda*m together with the critical
/// Sobolev exponent 2Q/(Q-2) when Q > 2.
struct Exponents {
  int m = 1;
  double lambda = 0.0;
  double Q = 0.0;
  std::optional<double> two_star;
};

inline double homogeneous_dimension(int m, double lambda) {
  if (m < 1) throw std::invalid_argument("homogeneous_dimension: m must be >= 1");
  if (!(lambda >= 0.0)) throw std::invalid_argument("homogeneous_dimension: lambda must be >= 0");
  return static_cast<double>(m + 1) + lambda * static_cast<double>(m);
}

inline double critical_exponent(double Q) {
  if (!(Q > 2.0)) throw std::domain_error("critical_exponent: requires Q > 2");
  return 2.0 * Q / (Q - 2.0);
}

inline Exponents make_exponents(int m, double lambda) {
  Exponents e;
  e.m = m;
  e.lambda = lambda;
  e.Q = homogeneous_dimension(m, lambda);
  if (e.Q > 2.0) e.two_star = critical_exponent(e.Q);
  return e;
}

/// r/(r-1); r = 1 maps to +infinity.
inline double holder_conjugate(double r) {
  if (!(r >= 1.0)) throw std::domain_error("holder_conjugate: requires r >= 1");
  if (r == 1.0) return std::numeric_limits<double>::infinity();
  return r / (r - 1.0);
}

enum class RegularityCase { nu_eq_1, nu_gt_1, nu_lt_1, sobolev_q };

inline const char* to_string(RegularityCase c) {
  switch (c) {
    case RegularityCase::nu_eq_1: return "nu_eq_1";
    case RegularityCase::nu_gt_1: return "nu_gt_1";
    case RegularityCase::nu_lt_1: return "nu_lt_1";
    case RegularityCase::sobolev_q: return "sobolev_q";
  }
  return "?";
}

inline std::optional<RegularityCase> parse_regularity_case(const std::string& s) {
  if (s == "nu_eq_1") return RegularityCase::nu_eq_1;
  if (s == "nu_gt_1") return RegularityCase::nu_gt_1;
  if (s == "nu_lt_1") return RegularityCase::nu_lt_1;
  if (s == "sobolev_q") return RegularityCase::sobolev_q;
  return std::nullopt;
}

/// Outcome of a regularity query: either a finite integrability exponent or
/// the bounded (L-infinity) regime, which applies once r > Q/2.
struct RegularityExponent {
  bool bounded = false;
  double value = 0.0;
};

/// Lower end (2*/(1-nu))' of the admissible r-range for 0 < nu < 1.
inline double sublinear_source_threshold(double nu, double Q) {
  if (!(nu > 0.0 && nu < 1.0)) throw std::domain_error("sublinear_source_threshold: requires 0 < nu < 1");
  return holder_conjugate(critical_exponent(Q) / (1.0 - nu));
}

/// Upper end 2Q/((Q+2) + nu(Q-2)) of the r-range giving a W^{1,q} solution.
inline double sobolev_source_limit(double nu, double Q) {
  return 2.0 * Q / ((Q + 2.0) + nu * (Q - 2.0));
}

inline RegularityExponent regularity_exponent(RegularityCase c, double nu, double r, double Q) {
  if (!(Q > 0.0)) throw std::domain_error("regularity_exponent: Q must be positive");
  if (!(r >= 1.0)) throw std::domain_error("regularity_exponent: requires r >= 1");

  if (c == RegularityCase::sobolev_q) {
    if (!(nu > 0.0 && nu < 1.0)) throw std::domain_error("regularity_exponent: sobolev_q requires 0 < nu < 1");
    if (!(r < sobolev_source_limit(nu, Q))) {
      throw std::domain_error("regularity_exponent: sobolev_q requires r < 2Q/((Q+2)+nu(Q-2))");
    }
    return {false, Q * r * (nu + 1.0) / (Q - r * (1.0 - nu))};
  }

  switch (c) {
    case RegularityCase::nu_eq_1:
      if (nu != 1.0) throw std::domain_error("regularity_exponent: nu_eq_1 requires nu == 1");
      break;
    case RegularityCase::nu_gt_1:
      if (!(nu > 1.0)) throw std::domain_error("regularity_exponent: nu_gt_1 requires nu > 1");
      break;
    case RegularityCase::nu_lt_1:
      if (!(nu > 0.0 && nu < 1.0)) throw std::domain_error("regularity_exponent: nu_lt_1 requires 0 < nu < 1");
      if (r < sublinear_source_threshold(nu, Q)) {
        throw std::domain_error("regularity_exponent: nu_lt_1 requires r >= (2*/(1-nu))'");
      }
      break;
    default: break;
  }

  const double half_q = Q / 2.0;
  if (r > half_q) return {true, std::numeric_limits<double>::infinity()};
  if (r == half_q) throw std::domain_error("regularity_exponent: r = Q/2 is not covered");

  if (c == RegularityCase::nu_eq_1) return {false, 2.0 * Q * r / (Q - 2.0 * r)};
  return {false, Q * r * (nu + 1.0) / (Q - 2.0 * r)};
}

// ---------------------------------------------------------------------------
// Quadrature on node fields.

inline double lp_norm(const Field& u, double p) {
  const Grid& g = u.grid();
  if (std::isinf(p) && p > 0) {
    double m = 0.0;
    for (double v : u.values()) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1.0)) throw std::domain_error("lp_norm: requires p >= 1");
  double s = 0.0;
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      s += g.trapezoid_weight(i, j) * std::pow(std::abs(u(i, j)), p);
    }
  }
  return std::pow(s, 1.0 / p);
}

/// Trapezoid integral of a node field.
inline double integrate(const Field& u) {
  const Grid& g = u.grid();
  double s = 0.0;
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) s += g.trapezoid_weight(i, j) * u(i, j);
  }
  return s;
}

/// Discrete Dirichlet form sum over grid edges of the weighted products of
/// difference quotients, scaled by the cell measure. With u = v this is the
/// energy; for Dirichlet fields it equals hx*hy*<L u, v>.
inline double energy_form(const Field& u, const Field& v, double lambda) {
  require_same_grid(u, v, "energy_form");
  const Grid& g = u.grid();
  const double ax = g.hy() / g.hx();
  const double ay = g.hx() / g.hy();
  double sx = 0.0;
  for (std::size_t j = 1; j + 1 < g.ny(); ++j) {
    for (std::size_t i = 0; i + 1 < g.nx(); ++i) {
      sx += (u(i + 1, j) - u(i, j)) * (v(i + 1, j) - v(i, j));
    }
  }
  double sy = 0.0;
  for (std::size_t i = 1; i + 1 < g.nx(); ++i) {
    const double w = grushin_weight(g.x(i), lambda);
    if (w == 0.0) continue;
    double col = 0.0;
    for (std::size_t j = 0; j + 1 < g.ny(); ++j) {
      col += (u(i, j + 1) - u(i, j)) * (v(i, j + 1) - v(i, j));
    }
    sy += w * col;
  }
  return ax * sx + ay * sy;
}

inline double energy(const Field& u, double lambda) {
  if (!u.is_dirichlet()) throw std::invalid_argument("energy: field must vanish on the boundary");
  return energy_form(u, u, lambda);
}

/// Trapezoid measure of {u >= k}.
inline double level_set_measure(const Field& u, double k) {
  const Grid& g = u.grid();
  double s = 0.0;
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      if (u(i, j) >= k) s += g.trapezoid_weight(i, j);
    }
  }
  return s;
}

/// min of u over nodes lying in the closed sub-rectangle.
inline double window_min(const Field& u, const Domain& window) {
  const Grid& g = u.grid();
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      if (window.contains(g.x(i), g.y(j))) m = std::min(m, u(i, j));
    }
  }
  if (std::isinf(m)) throw std::invalid_argument("window_min: sub-rectangle contains no grid node");
  return m;
}

/// Level k0 + d beyond which a nonnegative nonincreasing phi with
/// phi(h) <= C/(h-k)^alpha * phi(k)^beta vanishes, where
/// d^alpha = C * 2^{alpha beta/(beta-1)} * phi(k0)^{beta-1}.
inline double stampacchia_threshold(double C, double alpha, double beta, double k0, double phi_k0) {
  if (!(beta > 1.0)) throw std::domain_error("stampacchia_threshold: requires beta > 1");
  if (!(C > 0.0) || !(alpha > 0.0)) throw std::domain_error("stampacchia_threshold: requires C > 0 and alpha > 0");
  if (!(phi_k0 >= 0.0)) throw std::domain_error("stampacchia_threshold: requires phi(k0) >= 0");
  const double d_alpha = C * std::pow(2.0, alpha * beta / (beta - 1.0)) * std::pow(phi_k0, beta - 1.0);
  return k0 + std::pow(d_alpha, 1.0 / alpha);
}

// ---------------------------------------------------------------------------
// Reports.

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// lhs <= rhs up to a relative slack of 1e-8.
inline BoundCheck make_bound_check(std::string name, double lhs, double rhs) {
  return {std::move(name), lhs, rhs, lhs <= rhs * (1.0 + 1e-8)};
}

struct SolveReport {
  std::map<double, double> lp_norms;
  double energy = 0.0;
  double sup_norm = 0.0;
  double interior_min = 0.0;
  std::vector<std::pair<double, double>> level_sets;
  std::vector<BoundCheck> bound_checks;
};

/// Norms, energy, interior minimum and level-set measures of a Dirichlet field.
inline SolveReport describe(const Field& u, double lambda, const Domain& window,
                            const std::vector<double>& ps = {1.0, 2.0},
                            const std::vector<double>& levels = {}) {
  SolveReport rep;
  for (double p : ps) rep.lp_norms[p] = lp_norm(u, p);
  rep.energy = energy(u, lambda);
  rep.sup_norm = lp_norm(u, std::numeric_limits<double>::infinity());
  rep.interior_min = window_min(u, window);
  for (double k : levels) rep.level_sets.emplace_back(k, level_set_measure(u, k));
  return rep;
}

/// Middle half of the domain in each direction; default interior window.
inline Domain central_window(const Domain& d) {
  return Domain(d.ax() + 0.25 * d.width(), d.bx() - 0.25 * d.width(), d.ay() + 0.25 * d.height(),
                d.by() - 0.25 * d.height());
}

}  // namespace grushin
