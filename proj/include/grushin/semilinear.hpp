#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "grushin/analysis.hpp"
#include "grushin/coefficient.hpp"
#include "grushin/field.hpp"
#include "grushin/geometry.hpp"
#include "grushin/linsolve.hpp"
#include "grushin/operator.hpp"

namespace grushin {

/// One instance of the truncated singular problem
///   -Delta_lambda u = min(f, n) / (u + 1/n)^nu,  u = 0 on the boundary.
struct ProblemSpec {
  double lambda = 1.0;
  Coefficient exponent = 1.0;  // nu > 0, constant or nodewise
  Coefficient source = 1.0;    // f >= 0, not identically zero
  double n = 1.0;              // truncation level, >= 1
  double picard_tol = 1e-9;
  std::size_t picard_maxiter = 2000;
  std::optional<double> relaxation;  // omega in (0, 1]; default from the exponent
  double linear_tol = 1e-10;
  std::optional<std::size_t> linear_maxiter;
  std::optional<Domain> window;  // sub-rectangle for interior minima; default central half
};

class PicardError : public std::runtime_error {
public:
  PicardError(const std::string& what, std::size_t iterations, double last_increment)
      : std::runtime_error(what), iterations_(iterations), last_increment_(last_increment) {}
  std::size_t iterations() const { return iterations_; }
  double last_increment() const { return last_increment_; }

private:
  std::size_t iterations_;
  double last_increment_;
};

struct ApproxSolution {
  Field u;
  double n = 1.0;
  std::size_t picard_iterations = 0;
  std::size_t linear_iterations = 0;
  double nonlinear_residual = 0.0;  // sup|u - T(u)| / (1 + sup u)
  double min_iterate = 0.0;         // smallest nodal value over all iterates
  SolveReport report;
};

/// min(f, n) nodewise.
inline Field truncate_source(const Field& f, double n) {
  if (!(n >= 1.0)) throw std::invalid_argument("truncate_source: n must be >= 1");
  for (double v : f.values()) {
    if (!(v >= 0.0)) throw std::invalid_argument("truncate_source: source must be nonnegative");
  }
  return f.map([n](double v) { return std::min(v, n); });
}

namespace detail {

struct ResolvedProblem {
  Field source;
  Field exponent;
  double max_exponent;
};

inline ResolvedProblem resolve(const ProblemSpec& spec, const Grid& grid) {
  if (!(spec.lambda >= 0.0)) throw std::invalid_argument("ProblemSpec: lambda must be >= 0");
  if (!(spec.n >= 1.0)) throw std::invalid_argument("ProblemSpec: truncation level n must be >= 1");
  if (!(spec.picard_tol > 0.0)) throw std::invalid_argument("ProblemSpec: picard_tol must be > 0");
  if (!(spec.linear_tol > 0.0)) throw std::invalid_argument("ProblemSpec: linear_tol must be > 0");
  if (spec.picard_maxiter == 0) throw std::invalid_argument("ProblemSpec: picard_maxiter must be >= 1");
  if (spec.relaxation && !(*spec.relaxation > 0.0 && *spec.relaxation <= 1.0)) {
    throw std::invalid_argument("ProblemSpec: relaxation must lie in (0, 1]");
  }

  ResolvedProblem p{spec.source.on(grid), spec.exponent.on(grid), 0.0};
  for (double v : p.exponent.values()) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("ProblemSpec: exponent nu must be positive");
    p.max_exponent = std::max(p.max_exponent, v);
  }
  bool interior_positive = false;
  for (std::size_t k = 0; k < p.source.size(); ++k) {
    const double v = p.source[k];
    if (!(v >= 0.0)) throw std::invalid_argument("ProblemSpec: source f must be nonnegative");
    const auto [i, j] = grid.node_index(k);
    if (v > 0.0 && !grid.is_boundary(i, j)) interior_positive = true;
  }
  if (!interior_positive) throw std::invalid_argument("ProblemSpec: source f is identically zero");
  return p;
}

}  // namespace detail

/// Relaxation used when the spec leaves it unset.
///
/// The Picard map is order-reversing; near the boundary its linearization
/// has spectrum in roughly [-nu, 0], and omega = 2/(2 + nu) balances the two
/// ends of the damped spectrum.
inline double default_relaxation(double max_exponent) { return 2.0 / (2.0 + max_exponent); }

/// Damped Picard iteration for the truncated problem at level spec.n.
///
/// Each step solves -Delta_lambda v = f_n / (max(u,0) + 1/n)^nu and sets
/// u <- omega v + (1 - omega) u. The iteration stops once the relative
/// increment sup|u_{k+1} - u_k| / (1 + sup u_{k+1}) is below picard_tol and
/// the relative fixed-point residual of the returned iterate is too.
inline ApproxSolution picard_solve(const ProblemSpec& spec, const Grid& grid,
                                   const std::optional<Field>& init = std::nullopt) {
  const detail::ResolvedProblem prob = detail::resolve(spec, grid);
  const double omega = spec.relaxation.value_or(default_relaxation(prob.max_exponent));
  const double shift = 1.0 / spec.n;
  const SparseOperator op = assemble_grushin(grid, spec.lambda);
  const Field fn = truncate_source(prob.source, spec.n);

  Field u(grid);
  if (init) {
    if (!(init->grid() == grid)) throw std::invalid_argument("picard_solve: initial field lives on another grid");
    if (!init->is_dirichlet()) throw std::invalid_argument("picard_solve: initial field must vanish on the boundary");
    if (init->min() < 0.0) throw std::invalid_argument("picard_solve: initial field must be nonnegative");
    u = *init;
  }

  LinearSolveOptions lin;
  lin.tol = spec.linear_tol;
  lin.maxiter = spec.linear_maxiter;

  Field rhs(grid);
  auto step = [&](const Field& w) {
    for (std::size_t j = 1; j + 1 < grid.ny(); ++j) {
      for (std::size_t i = 1; i + 1 < grid.nx(); ++i) {
        rhs(i, j) = fn(i, j) / std::pow(std::max(w(i, j), 0.0) + shift, prob.exponent(i, j));
      }
    }
    LinearSolution s = solve_spd(op, rhs, lin);
    return s;
  };

  ApproxSolution out{u, spec.n};
  out.min_iterate = u.min();
  bool increment_small = false;
  double increment = std::numeric_limits<double>::infinity();

  for (std::size_t it = 0;; ++it) {
    LinearSolution target = step(u);
    out.linear_iterations += target.stats.iterations;
    lin.initial_guess = target.solution;

    const double scale = 1.0 + lp_norm(u, std::numeric_limits<double>::infinity());
    const double residual = sup_distance(u, target.solution) / scale;
    if (!std::isfinite(residual)) {
      throw PicardError("picard_solve: iteration diverged at n = " + std::to_string(spec.n), it, residual);
    }
    if (increment_small && residual <= spec.picard_tol) {
      out.nonlinear_residual = residual;
      break;
    }
    if (it == spec.picard_maxiter) {
      std::ostringstream msg;
      msg << "picard_solve: no convergence after " << it << " iterations at n = " << spec.n
          << " (last relative increment " << increment << ")";
      throw PicardError(msg.str(), it, increment);
    }

    Field next(grid);
    for (std::size_t k = 0; k < next.size(); ++k) {
      next[k] = omega * target.solution[k] + (1.0 - omega) * u[k];
    }
    increment = sup_distance(next, u) / (1.0 + lp_norm(next, std::numeric_limits<double>::infinity()));
    increment_small = increment <= spec.picard_tol;
    out.min_iterate = std::min(out.min_iterate, next.min());
    u = std::move(next);
    out.picard_iterations = it + 1;
  }

  out.u = u.map([](double v) { return std::max(v, 0.0); });
  const Domain window = spec.window.value_or(central_window(grid.domain()));
  out.report = describe(out.u, spec.lambda, window);
  return out;
}

class SequenceError : public std::runtime_error {
public:
  SequenceError(const std::string& what, double failed_n) : std::runtime_error(what), failed_n_(failed_n) {}
  double failed_n() const { return failed_n_; }

private:
  double failed_n_;
};

struct SequenceResult {
  std::vector<ApproxSolution> solutions;
  std::vector<double> monotonicity_defects;  // interior min(u_{k+1} - u_k), one per consecutive pair
  std::vector<double> interior_minima;       // min of u_k over the window
};

/// Solves for every level of n_list in order, warm-starting each solve from
/// the previous solution.
inline SequenceResult solve_sequence(const ProblemSpec& spec_base, const Grid& grid,
                                     const std::vector<double>& n_list,
                                     const std::optional<Domain>& window = std::nullopt) {
  if (n_list.empty()) throw std::invalid_argument("solve_sequence: empty n_list");
  for (std::size_t k = 1; k < n_list.size(); ++k) {
    if (!(n_list[k] > n_list[k - 1])) throw std::invalid_argument("solve_sequence: n_list must be strictly increasing");
  }
  const Domain win = window.value_or(spec_base.window.value_or(central_window(grid.domain())));

  SequenceResult out;
  std::optional<Field> warm;
  for (double n : n_list) {
    ProblemSpec spec = spec_base;
    spec.n = n;
    spec.window = win;
    try {
      out.solutions.push_back(picard_solve(spec, grid, warm));
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "solve_sequence: failed at n = " << n << ": " << e.what();
      throw SequenceError(msg.str(), n);
    }
    const ApproxSolution& s = out.solutions.back();
    out.interior_minima.push_back(window_min(s.u, win));
    if (out.solutions.size() > 1) {
      out.monotonicity_defects.push_back(interior_min_difference(s.u, out.solutions[out.solutions.size() - 2].u));
    }
    warm = s.u;
  }
  return out;
}

/// Last field as the limit proxy and the sup-norm gap to its predecessor.
inline std::pair<Field, double> limit_estimate(const std::vector<ApproxSolution>& solutions) {
  if (solutions.size() < 2) throw std::invalid_argument("limit_estimate: need at least two solutions");
  const Field& last = solutions.back().u;
  return {last, sup_distance(last, solutions[solutions.size() - 2].u)};
}

/// sup|u_a - u_b| for two solves of the same problem from different starts.
inline double uniqueness_probe(const ProblemSpec& spec, const Grid& grid, const Field& init_a, const Field& init_b) {
  const ApproxSolution a = picard_solve(spec, grid, init_a);
  const ApproxSolution b = picard_solve(spec, grid, init_b);
  return sup_distance(a.u, b.u);
}

struct ScalingResult {
  double factor = 1.0;     // t^{1/(1+nu)}
  double deviation = 0.0;  // ||u_{tf} - factor u_f||_inf / ||factor u_f||_inf
};

/// Compares the solve with source t*f and level t*n against the rescaled
/// solve with source f and level n. Requires a constant exponent.
inline ScalingResult scaling_result(const ProblemSpec& spec, const Grid& grid, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("scaling_check: t must be > 0");
  const auto nu = spec.exponent.constant();
  if (!nu) throw std::invalid_argument("scaling_check: requires a constant exponent");

  ScalingResult out;
  out.factor = std::pow(t, 1.0 / (1.0 + *nu));
  const ApproxSolution base = picard_solve(spec, grid);
  if (t == 1.0) return out;

  ProblemSpec scaled = spec;
  scaled.source = spec.source.scaled(t);
  scaled.n = t * spec.n;
  const ApproxSolution other = picard_solve(scaled, grid);

  const Field predicted = base.u.map([f = out.factor](double v) { return f * v; });
  out.deviation = sup_distance(other.u, predicted) / lp_norm(predicted, std::numeric_limits<double>::infinity());
  return out;
}

inline double scaling_check(const ProblemSpec& spec, const Grid& grid, double t) {
  return scaling_result(spec, grid, t).deviation;
}

}  // namespace grushin
