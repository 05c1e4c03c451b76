#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "grushin/analysis.hpp"
#include "grushin/field.hpp"
#include "grushin/semilinear.hpp"

namespace grushin {

class RegimeMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline double require_constant_exponent(const ProblemSpec& spec, const char* who) {
  const auto nu = spec.exponent.constant();
  if (!nu) throw RegimeMismatch(std::string(who) + ": requires a constant exponent");
  return *nu;
}

}  // namespace detail

/// nu = 1: energy(u_n) <= int f. Testing the discrete equation with u_n
/// gives hx*hy*<L u, u> = sum f_n u/(u + 1/n) <= sum f exactly.
inline BoundCheck check_energy_bound(const ApproxSolution& sol, const Field& f, const ProblemSpec& spec) {
  const double nu = detail::require_constant_exponent(spec, "check_energy_bound");
  if (nu != 1.0) throw RegimeMismatch("check_energy_bound: applies to nu = 1 only");
  return make_bound_check("energy_bound_nu_eq_1", energy(sol.u, spec.lambda), integrate(f));
}

/// nu > 1: energy(u_n^{(nu+1)/2}) <= (nu+1)^2/(4 nu) * int f.
///
/// Holds edge by edge: (a^p - b^p)^2 <= p^2/nu * (a - b)(a^nu - b^nu) for
/// p = (nu+1)/2, and the discrete equation tested with u^nu is bounded by int f.
inline BoundCheck check_power_energy_bound(const ApproxSolution& sol, const Field& f, const ProblemSpec& spec) {
  const double nu = detail::require_constant_exponent(spec, "check_power_energy_bound");
  if (!(nu > 1.0)) throw RegimeMismatch("check_power_energy_bound: applies to nu > 1 only");
  const double p = 0.5 * (nu + 1.0);
  const Field power = sol.u.map([p](double v) { return std::pow(v, p); });
  const double factor = (nu + 1.0) * (nu + 1.0) / (4.0 * nu);
  return make_bound_check("power_energy_bound_nu_gt_1", energy(power, spec.lambda), factor * integrate(f));
}

/// 0 < nu < 1, constant-free Hoelder chain:
/// energy(u_n) <= ||f||_r * (int u^{2*})^{(1-nu)/2*} with r = (2*/(1-nu))'.
inline BoundCheck check_holder_chain(const ApproxSolution& sol, const Field& f, const ProblemSpec& spec,
                                     const Exponents& exps) {
  const double nu = detail::require_constant_exponent(spec, "check_holder_chain");
  if (!(nu > 0.0 && nu < 1.0)) throw RegimeMismatch("check_holder_chain: applies to 0 < nu < 1 only");
  if (!exps.two_star) throw RegimeMismatch("check_holder_chain: requires Q > 2");
  const double two_star = *exps.two_star;
  const double r = holder_conjugate(two_star / (1.0 - nu));
  const double rhs = lp_norm(f, r) * std::pow(lp_norm(sol.u, two_star), 1.0 - nu);
  return make_bound_check("holder_chain_nu_lt_1", energy(sol.u, spec.lambda), rhs);
}

/// Report for a converged solution with the lemma verdict of its exponent
/// regime. For nu < 1 the raw data ||f||_r and ||u||_{2*} are added to
/// lp_norms, since the embedding-constant bound itself is not computable.
inline SolveReport check_bounds(const ApproxSolution& sol, const Field& f, const ProblemSpec& spec,
                                const Exponents& exps) {
  const double nu = detail::require_constant_exponent(spec, "check_bounds");
  SolveReport rep = sol.report;
  if (nu == 1.0) {
    rep.bound_checks.push_back(check_energy_bound(sol, f, spec));
  } else if (nu > 1.0) {
    rep.bound_checks.push_back(check_power_energy_bound(sol, f, spec));
  } else {
    rep.bound_checks.push_back(check_holder_chain(sol, f, spec, exps));
    const double two_star = *exps.two_star;
    rep.lp_norms[two_star] = lp_norm(sol.u, two_star);
  }
  return rep;
}

}  // namespace grushin
