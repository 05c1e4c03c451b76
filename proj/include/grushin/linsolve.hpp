#pragma once

#include <cmath>
#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grushin/field.hpp"
#include "grushin/operator.hpp"

namespace grushin {

struct LinearSolveStats {
  std::size_t iterations = 0;
  double final_residual = 0.0;  // ||b - A x|| / ||b||
  bool converged = false;
};

class LinearSolveError : public std::runtime_error {
public:
  LinearSolveError(const std::string& what, LinearSolveStats stats)
      : std::runtime_error(what), stats_(stats) {}
  const LinearSolveStats& stats() const { return stats_; }

private:
  LinearSolveStats stats_;
};

struct LinearSolveOptions {
  double tol = 1e-10;
  std::optional<std::size_t> maxiter;  // default: 20 * ceil(sqrt(N))
  std::optional<Field> initial_guess;
};

struct LinearSolution {
  Field solution;
  LinearSolveStats stats;
};

inline std::size_t default_cg_maxiter(std::size_t dimension) {
  return 20 * static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(dimension))));
}

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace detail

/// Jacobi-preconditioned conjugate gradients for A x = b, where A is the
/// assembled SPD stencil and b the interior values of rhs.
///
/// A caller-supplied initial guess is dropped in favour of zero when its
/// residual exceeds ||b||. Convergence is declared on the true residual: when the recurrence
/// residual reaches tol, the residual is recomputed from scratch and the
/// iteration restarts from it if the two disagree.
inline LinearSolution solve_spd(const SparseOperator& op, const Field& rhs,
                                const LinearSolveOptions& options = {}) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("solve_spd: tol must be > 0");
  if (!(rhs.grid() == op.grid())) throw std::invalid_argument("solve_spd: rhs grid differs from operator grid");

  const std::size_t n = op.dimension();
  const std::size_t maxiter = options.maxiter.value_or(default_cg_maxiter(n));
  const std::vector<double> b = rhs.interior();
  const double bnorm = detail::norm2(b);

  LinearSolveStats stats;
  if (bnorm == 0.0) {
    stats.converged = true;
    return {Field(op.grid()), stats};
  }

  std::vector<double> x(n, 0.0);
  if (options.initial_guess) {
    if (!(options.initial_guess->grid() == op.grid())) {
      throw std::invalid_argument("solve_spd: initial guess grid differs from operator grid");
    }
    x = options.initial_guess->interior();
  }

  const auto diag = op.diagonal();
  std::vector<double> r(n), z(n), p(n), q(n);

  auto true_residual = [&] {
    op.multiply(x, q);
    for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - q[k];
    return detail::norm2(r) / bnorm;
  };

  double rel = true_residual();
  if (options.initial_guess && rel > 1.0) {
    // A guess worse than zero only lengthens the solve.
    std::fill(x.begin(), x.end(), 0.0);
    rel = true_residual();
  }
  std::size_t it = 0;
  while (rel > options.tol && it < maxiter) {
    for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / diag[k];
    p = z;
    double rz = detail::dot(r, z);
    while (it < maxiter) {
      op.multiply(p, q);
      const double alpha = rz / detail::dot(p, q);
      for (std::size_t k = 0; k < n; ++k) {
        x[k] += alpha * p[k];
        r[k] -= alpha * q[k];
      }
      ++it;
      if (detail::norm2(r) / bnorm <= options.tol) break;
      for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / diag[k];
      const double rz_next = detail::dot(r, z);
      const double beta = rz_next / rz;
      rz = rz_next;
      for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
    }
    rel = true_residual();
  }

  stats.iterations = it;
  stats.final_residual = rel;
  stats.converged = rel <= options.tol;
  if (!stats.converged) {
    throw LinearSolveError("solve_spd: no convergence after " + std::to_string(it) +
                               " iterations (relative residual " + std::to_string(rel) + ")",
                           stats);
  }
  return {Field::from_interior(op.grid(), x), stats};
}

}  // namespace grushin
