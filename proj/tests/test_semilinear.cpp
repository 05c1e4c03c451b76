#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "grushin/catalog.hpp"
#include "grushin/semilinear.hpp"

using namespace grushin;

namespace {

const Domain kDomain(-1, 1, 0, 1);

ProblemSpec spec_for(double nu, double n, double tol = 1e-10) {
  ProblemSpec s;
  s.lambda = 1.0;
  s.exponent = nu;
  s.source = 1.0;
  s.n = n;
  s.picard_tol = tol;
  s.linear_tol = 1e-12;
  return s;
}

}  // namespace

TEST(TruncateSource, Examples) {
  const Grid g(kDomain, 5, 5);
  const Field f = Field::sample(g, [](double x, double) { return 3.0 + 2.0 * x; });  // 1 .. 5
  const Field t = truncate_source(f, 2.0);
  for (std::size_t k = 0; k < f.size(); ++k) EXPECT_EQ(t[k], std::min(f[k], 2.0));
  EXPECT_EQ(truncate_source(Field(g, 0.5), 4.0).max(), 0.5);
  EXPECT_THROW(truncate_source(Field(g, -1.0), 4.0), std::invalid_argument);
  EXPECT_THROW(truncate_source(f, 0.5), std::invalid_argument);
}

TEST(Picard, RejectsInvalidProblems) {
  const Grid g(kDomain, 9, 9);
  ProblemSpec s = spec_for(1.0, 4.0);
  s.source = 0.0;
  EXPECT_THROW(picard_solve(s, g), std::invalid_argument);
  s = spec_for(0.0, 4.0);
  EXPECT_THROW(picard_solve(s, g), std::invalid_argument);
  s = spec_for(1.0, 0.5);
  EXPECT_THROW(picard_solve(s, g), std::invalid_argument);
  s = spec_for(1.0, 4.0);
  s.relaxation = 1.5;
  EXPECT_THROW(picard_solve(s, g), std::invalid_argument);
}

TEST(Picard, IterationCapRaisesWithProgress) {
  const Grid g(kDomain, 17, 17);
  ProblemSpec s = spec_for(1.0, 16.0);
  s.picard_maxiter = 3;
  try {
    picard_solve(s, g);
    FAIL() << "expected PicardError";
  } catch (const PicardError& e) {
    EXPECT_EQ(e.iterations(), 3u);
    EXPECT_GT(e.last_increment(), s.picard_tol);
  }
}

// The discrete equation L u = f_n / (u + 1/n)^nu holds to the Picard tolerance.
TEST(Picard, SatisfiesTheDiscreteEquation) {
  for (double nu : {0.5, 1.0, 3.0}) {
    const Grid g(kDomain, 33, 33);
    const ProblemSpec s = spec_for(nu, 16.0);
    const ApproxSolution sol = picard_solve(s, g);
    const Field lu = apply(assemble_grushin(g, s.lambda), sol.u);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.interior_count(); ++k) {
      const auto [i, j] = g.interior_node(k);
      const double rhs = std::min(1.0, s.n) / std::pow(sol.u(i, j) + 1.0 / s.n, nu);
      worst = std::max(worst, std::abs(lu(i, j) - rhs) / rhs);
    }
    EXPECT_LT(worst, 1e-6) << "nu = " << nu;
    EXPECT_LE(sol.nonlinear_residual, s.picard_tol);
    EXPECT_TRUE(sol.u.is_dirichlet());
  }
}

// For nu = 1 the equation reads L u * (u + 1/n) = f_n, and L u * u -> 1 away
// from the boundary layer as n grows.
TEST(Picard, SelfConsistencyForNuOne) {
  const Grid g(Domain(0, 1, 0, 1), 33, 33);
  ProblemSpec s = spec_for(1.0, 1e6);
  s.lambda = 0.0;
  const ApproxSolution sol = picard_solve(s, g);
  const Field lu = apply(assemble_grushin(g, 0.0), sol.u);
  double exact_gap = 0.0, limit_gap = 0.0;
  for (std::size_t j = 8; j <= 24; ++j) {
    for (std::size_t i = 8; i <= 24; ++i) {
      exact_gap = std::max(exact_gap, std::abs(lu(i, j) * (sol.u(i, j) + 1.0 / s.n) - 1.0));
      limit_gap = std::max(limit_gap, std::abs(lu(i, j) * sol.u(i, j) - 1.0));
    }
  }
  EXPECT_LE(exact_gap, 1e-7);
  EXPECT_LE(limit_gap, 1e-7 + 1.0 / (s.n * window_min(sol.u, Domain(0.25, 0.75, 0.25, 0.75))));
}

TEST(Picard, NonnegativeIteratesAndSolution) {
  for (double nu : {0.5, 1.0, 3.0}) {
    const Grid g(kDomain, 33, 33);
    const ApproxSolution sol = picard_solve(spec_for(nu, 64.0), g);
    EXPECT_GE(sol.min_iterate, -1e-12);
    EXPECT_GE(sol.u.min(), 0.0);
    EXPECT_GT(sol.report.interior_min, 0.0);
  }
}

TEST(Picard, EvenSourceGivesEvenSolution) {
  const Grid g(kDomain, 33, 17);
  ProblemSpec s = spec_for(1.0, 16.0);
  s.source = Coefficient::Rule([](double x, double y) { return 1.0 + x * x + y; });
  const ApproxSolution sol = picard_solve(s, g);
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      EXPECT_NEAR(sol.u(i, j), sol.u(g.nx() - 1 - i, j), 1e-9);
    }
  }
}

TEST(Picard, VariableExponentConverges) {
  const Grid g(kDomain, 33, 33);
  ProblemSpec s = spec_for(1.0, 16.0);
  s.exponent = two_zone_exponent(Domain(-0.5, 0.5, 0.25, 0.75), 3.0, 0.5);
  const ApproxSolution sol = picard_solve(s, g);
  EXPECT_TRUE(std::isfinite(sol.report.energy));
  EXPECT_GT(sol.report.interior_min, 0.0);
}

TEST(Picard, IsBitwiseDeterministic) {
  const Grid g(kDomain, 17, 17);
  const ApproxSolution a = picard_solve(spec_for(3.0, 8.0), g);
  const ApproxSolution b = picard_solve(spec_for(3.0, 8.0), g);
  EXPECT_EQ(a.picard_iterations, b.picard_iterations);
  for (std::size_t k = 0; k < a.u.size(); ++k) ASSERT_EQ(a.u[k], b.u[k]);
}

TEST(Sequence, MonotoneInN) {
  for (double nu : {0.5, 1.0, 3.0}) {
    const Grid g(kDomain, 33, 33);
    const SequenceResult r = solve_sequence(spec_for(nu, 1.0), g, {1, 2, 4, 8, 16});
    ASSERT_EQ(r.monotonicity_defects.size(), 4u);
    for (double d : r.monotonicity_defects) EXPECT_GE(d, -1e-10) << "nu = " << nu;
    for (std::size_t k = 1; k < r.interior_minima.size(); ++k) {
      EXPECT_GE(r.interior_minima[k], r.interior_minima[k - 1] - 1e-10);
    }
    EXPECT_GT(r.interior_minima.front(), 0.0);
  }
}

TEST(Sequence, DoublingFromAWarmStartIsMonotone) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> nu_d(0.3, 3.0), n_d(1.0, 30.0);
  const Grid g(kDomain, 17, 17);
  for (int trial = 0; trial < 6; ++trial) {
    const double nu = nu_d(rng), n = n_d(rng);
    const ApproxSolution lo = picard_solve(spec_for(nu, n), g);
    const ApproxSolution hi = picard_solve(spec_for(nu, 2 * n), g, lo.u);
    EXPECT_GE(min_difference(hi.u, lo.u), -1e-10) << "nu = " << nu << " n = " << n;
  }
}

TEST(Sequence, SingletonAndErrors) {
  const Grid g(kDomain, 9, 9);
  const SequenceResult r = solve_sequence(spec_for(1.0, 1.0), g, {1});
  EXPECT_EQ(r.solutions.size(), 1u);
  EXPECT_TRUE(r.monotonicity_defects.empty());
  EXPECT_THROW(solve_sequence(spec_for(1.0, 1.0), g, {}), std::invalid_argument);
  EXPECT_THROW(solve_sequence(spec_for(1.0, 1.0), g, {1, 4, 2}), std::invalid_argument);

  ProblemSpec s = spec_for(1.0, 1.0);
  s.picard_maxiter = 2;
  try {
    solve_sequence(s, g, {1, 2});
    FAIL() << "expected SequenceError";
  } catch (const SequenceError& e) {
    EXPECT_EQ(e.failed_n(), 1.0);
  }
}

TEST(LimitEstimate, GapsShrinkAlongTheSequence) {
  const Grid g(kDomain, 17, 17);
  const SequenceResult r = solve_sequence(spec_for(1.0, 1.0), g, {4, 16, 64, 256});
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k = 2; k <= r.solutions.size(); ++k) {
    const std::vector<ApproxSolution> head(r.solutions.begin(), r.solutions.begin() + static_cast<long>(k));
    const double gap = limit_estimate(head).second;
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  const std::vector<ApproxSolution> same{r.solutions[0], r.solutions[0]};
  EXPECT_EQ(limit_estimate(same).second, 0.0);
  EXPECT_THROW(limit_estimate({r.solutions[0]}), std::invalid_argument);
}

TEST(Uniqueness, DifferentStartsAgree) {
  const Grid g(kDomain, 33, 33);
  for (double nu : {0.5, 1.0, 3.0}) {
    ProblemSpec s = spec_for(nu, 16.0, 1e-9);
    const Field a(g);
    const Field b = Field::sample_dirichlet(g, [](double, double) { return 1.0; });
    EXPECT_LE(uniqueness_probe(s, g, a, b), 10 * s.picard_tol) << "nu = " << nu;
    EXPECT_EQ(uniqueness_probe(s, g, b, b), 0.0);
  }
}

TEST(Scaling, IdentityAndHomogeneity) {
  const Grid g(kDomain, 17, 17);
  EXPECT_EQ(scaling_check(spec_for(1.0, 100.0), g, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(scaling_result(spec_for(1.0, 100.0), g, 16.0).factor, 4.0);
  EXPECT_DOUBLE_EQ(scaling_result(spec_for(3.0, 100.0), g, 16.0).factor, 2.0);
  EXPECT_THROW(scaling_check(spec_for(1.0, 100.0), g, 0.0), std::invalid_argument);
}

TEST(Scaling, DeviationHalvesWhenNDoubles) {
  const Grid g(kDomain, 17, 17);
  for (double nu : {1.0, 3.0}) {
    const double a = scaling_check(spec_for(nu, 200.0), g, 16.0);
    const double b = scaling_check(spec_for(nu, 400.0), g, 16.0);
    EXPECT_GT(a / b, 1.8) << "nu = " << nu;
    EXPECT_LT(a / b, 2.2) << "nu = " << nu;
  }
}
