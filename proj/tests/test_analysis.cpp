#include <gtest/gtest.h>

#include <boost/rational.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "grushin/analysis.hpp"

using namespace grushin;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
using Frac = boost::rational<long long>;

double to_double(const Frac& f) { return boost::rational_cast<double>(f); }

Field sine_mode(const Grid& g) {
  return Field::sample_dirichlet(g, [](double x, double y) { return std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y); });
}

}  // namespace

TEST(Exponents, PinnedValues) {
  const Exponents e = make_exponents(1, 1.0);
  EXPECT_EQ(e.Q, 3.0);
  EXPECT_EQ(*e.two_star, 6.0);
  EXPECT_EQ(homogeneous_dimension(2, 0.5), 4.0);
  EXPECT_EQ(critical_exponent(4.0), 4.0);
  EXPECT_FALSE(make_exponents(1, 0.0).two_star.has_value());  // Q = 2
  EXPECT_THROW(critical_exponent(2.0), std::domain_error);
  EXPECT_THROW(homogeneous_dimension(0, 1.0), std::invalid_argument);
  EXPECT_THROW(homogeneous_dimension(1, -1.0), std::invalid_argument);
}

TEST(Exponents, HolderConjugate) {
  EXPECT_EQ(holder_conjugate(2.0), 2.0);
  EXPECT_EQ(holder_conjugate(1.0), inf);
  EXPECT_DOUBLE_EQ(holder_conjugate(3.0), 1.5);
  EXPECT_THROW(holder_conjugate(0.5), std::domain_error);
}

TEST(Exponents, RegularityPinnedValues) {
  // Q = 3, r = 1.
  EXPECT_DOUBLE_EQ(regularity_exponent(RegularityCase::nu_eq_1, 1.0, 1.0, 3.0).value, 6.0);
  EXPECT_DOUBLE_EQ(regularity_exponent(RegularityCase::nu_gt_1, 3.0, 1.0, 3.0).value, 12.0);
  EXPECT_TRUE(regularity_exponent(RegularityCase::nu_gt_1, 3.0, 2.0, 3.0).bounded);
  EXPECT_TRUE(regularity_exponent(RegularityCase::nu_eq_1, 1.0, 1.6, 3.0).bounded);
  EXPECT_THROW(regularity_exponent(RegularityCase::nu_eq_1, 1.0, 1.5, 3.0), std::domain_error);
  EXPECT_THROW(regularity_exponent(RegularityCase::nu_eq_1, 2.0, 1.0, 3.0), std::domain_error);
  EXPECT_THROW(regularity_exponent(RegularityCase::nu_gt_1, 1.0, 1.0, 3.0), std::domain_error);
  EXPECT_THROW(regularity_exponent(RegularityCase::nu_eq_1, 1.0, 0.9, 3.0), std::domain_error);
  // nu = 1/2, Q = 3: threshold (6/(1/2))' = 12/11, Sobolev limit 6/5.5.
  EXPECT_DOUBLE_EQ(sublinear_source_threshold(0.5, 3.0), 12.0 / 11.0);
  EXPECT_DOUBLE_EQ(sobolev_source_limit(0.5, 3.0), 6.0 / 5.5);
  EXPECT_THROW(regularity_exponent(RegularityCase::nu_lt_1, 0.5, 1.0, 3.0), std::domain_error);
  EXPECT_DOUBLE_EQ(regularity_exponent(RegularityCase::sobolev_q, 0.5, 1.0, 3.0).value, 4.5 / 2.5);
  EXPECT_THROW(regularity_exponent(RegularityCase::sobolev_q, 0.5, 1.2, 3.0), std::domain_error);
}

TEST(Exponents, CaseNamesRoundTrip) {
  for (auto c : {RegularityCase::nu_eq_1, RegularityCase::nu_gt_1, RegularityCase::nu_lt_1, RegularityCase::sobolev_q}) {
    EXPECT_EQ(parse_regularity_case(to_string(c)), c);
  }
  EXPECT_FALSE(parse_regularity_case("nu_eq_2").has_value());
}

// Exact-fraction oracle over random rational tuples.
TEST(Exponents, AgreeWithRationalArithmetic) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> m_d(1, 4), num(0, 8), den(1, 4), step(1, 9);
  int checked = 0;
  while (checked < 100) {
    const int m = m_d(rng);
    const Frac lambda(num(rng), den(rng));
    const Frac Q = Frac(m + 1) + lambda * m;
    if (Q <= 2) continue;
    const Frac two_star = 2 * Q / (Q - 2);
    const double Qd = to_double(Q);
    ASSERT_NEAR(homogeneous_dimension(m, to_double(lambda)), Qd, 1e-14 * Qd);
    ASSERT_NEAR(critical_exponent(Qd), to_double(two_star), 1e-13 * to_double(two_star));

    const Frac half = Q / 2;
    const Frac t(step(rng), 10);
    // nu = 1, r between 1 and Q/2
    {
      const Frac r = 1 + (half - 1) * t;
      const Frac s = 2 * Q * r / (Q - 2 * r);
      const auto got = regularity_exponent(RegularityCase::nu_eq_1, 1.0, to_double(r), Qd);
      ASSERT_FALSE(got.bounded);
      ASSERT_NEAR(got.value, to_double(s), 1e-11 * to_double(s));
    }
    // nu > 1
    {
      const Frac nu = 1 + Frac(num(rng) + 1, den(rng));
      const Frac r = 1 + (half - 1) * t;
      const Frac s = Q * r * (nu + 1) / (Q - 2 * r);
      const auto got = regularity_exponent(RegularityCase::nu_gt_1, to_double(nu), to_double(r), Qd);
      ASSERT_NEAR(got.value, to_double(s), 1e-11 * to_double(s));
      ASSERT_TRUE(regularity_exponent(RegularityCase::nu_gt_1, to_double(nu), to_double(half + t), Qd).bounded);
    }
    // 0 < nu < 1: both the L^s case and the W^{1,q} case
    {
      const Frac nu(step(rng), 10);
      const Frac x = two_star / (1 - nu);
      const Frac thr = x / (x - 1);
      ASSERT_NEAR(sublinear_source_threshold(to_double(nu), Qd), to_double(thr), 1e-13 * to_double(thr));
      if (thr < half) {
        const Frac r = thr + (half - thr) * t;
        const Frac s = Q * r * (nu + 1) / (Q - 2 * r);
        const auto got = regularity_exponent(RegularityCase::nu_lt_1, to_double(nu), to_double(r), Qd);
        ASSERT_NEAR(got.value, to_double(s), 1e-11 * to_double(s));
      }
      const Frac lim = 2 * Q / ((Q + 2) + nu * (Q - 2));
      if (lim > 1) {
        const Frac r = 1 + (lim - 1) * t;
        const Frac q = Q * r * (nu + 1) / (Q - r * (1 - nu));
        const auto got = regularity_exponent(RegularityCase::sobolev_q, to_double(nu), to_double(r), Qd);
        ASSERT_NEAR(got.value, to_double(q), 1e-12 * to_double(q));
      }
    }
    ++checked;
  }
}

TEST(Quadrature, NormsOfSimpleFields) {
  const Grid g(Domain(0, 1, 0, 1), 65, 65);
  EXPECT_NEAR(lp_norm(Field(g, 1.0), 1.0), 1.0, 1e-14);
  EXPECT_NEAR(lp_norm(Field(g, -2.0), 2.0), 2.0, 1e-14);
  EXPECT_EQ(lp_norm(Field(g, -3.0), inf), 3.0);
  EXPECT_NEAR(lp_norm(sine_mode(g), 2.0), 0.5, 1e-3);
  EXPECT_NEAR(integrate(sine_mode(g)), 4.0 / (std::numbers::pi * std::numbers::pi), 1e-3);
  EXPECT_THROW(lp_norm(Field(g), 0.5), std::domain_error);
}

TEST(Quadrature, LpNormIsNondecreasingInPOnTheUnitSquare) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const Grid g(Domain(0, 1, 0, 1), 17, 17);
  for (int trial = 0; trial < 30; ++trial) {
    const Field f = Field::sample(g, [&](double, double) { return u(rng); });
    double prev = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 6.0, inf}) {
      const double v = lp_norm(f, p);
      EXPECT_GE(v, prev * (1 - 1e-12));
      prev = v;
    }
  }
}

TEST(Energy, SineModeOnTheUnitSquare) {
  double prev = 0.0;
  for (std::size_t n : {17u, 33u, 65u}) {
    const Grid g(Domain(0, 1, 0, 1), n, n);
    const double err = std::abs(energy(sine_mode(g), 0.0) - std::numbers::pi * std::numbers::pi / 2.0);
    EXPECT_LT(err, 20.0 * g.hx() * g.hx());
    if (prev > 0.0) EXPECT_GT(prev / err, 3.0);
    prev = err;
  }
}

TEST(Energy, FormIsSymmetricAndBilinear) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Grid g(Domain(-1, 1, 0, 1), 13, 11);
  for (int trial = 0; trial < 20; ++trial) {
    const Field a = Field::sample_dirichlet(g, [&](double, double) { return u(rng); });
    const Field b = Field::sample_dirichlet(g, [&](double, double) { return u(rng); });
    EXPECT_NEAR(energy_form(a, b, 1.0), energy_form(b, a, 1.0), 1e-12);
    Field sum = a;
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += b[k];
    EXPECT_NEAR(energy(sum, 1.0), energy(a, 1.0) + 2 * energy_form(a, b, 1.0) + energy(b, 1.0), 1e-10);
    EXPECT_GE(energy(a, 1.0), 0.0);
  }
  EXPECT_THROW(energy(Field(g, 1.0), 1.0), std::invalid_argument);
}

TEST(LevelSets, LinearRamp) {
  const Grid g(Domain(0, 1, 0, 1), 65, 65);
  const Field ramp = Field::sample(g, [](double x, double) { return x; });
  EXPECT_NEAR(level_set_measure(ramp, 0.5), 0.5, g.hx());
  EXPECT_EQ(level_set_measure(ramp, 2.0), 0.0);
  EXPECT_NEAR(level_set_measure(ramp, -1.0), 1.0, 1e-14);
}

TEST(LevelSets, NonincreasingInK) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Grid g(Domain(-1, 1, 0, 1), 15, 9);
  for (int trial = 0; trial < 20; ++trial) {
    const Field f = Field::sample(g, [&](double, double) { return u(rng); });
    double prev = inf;
    for (double k = -0.1; k <= 1.1; k += 0.05) {
      const double v = level_set_measure(f, k);
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(Window, MinimumOverSubRectangle) {
  const Grid g(Domain(-1, 1, 0, 1), 9, 9);
  const Field f = Field::sample(g, [](double x, double y) { return x + y; });
  EXPECT_DOUBLE_EQ(window_min(f, Domain(-0.5, 0.5, 0.25, 0.75)), -0.25);
  EXPECT_THROW(window_min(f, Domain(0.01, 0.02, 0.3, 0.31)), std::invalid_argument);
  const Domain c = central_window(Domain(-1, 1, 0, 1));
  EXPECT_EQ(c, Domain(-0.5, 0.5, 0.25, 0.75));
}

TEST(Stampacchia, PinnedValues) {
  // alpha = 1, beta = 2: d = C * 4 * phi.
  EXPECT_DOUBLE_EQ(stampacchia_threshold(1.0, 1.0, 2.0, 0.0, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(stampacchia_threshold(0.5, 1.0, 2.0, 1.0, 2.0), 5.0);
  // alpha = 2, beta = 3: d^2 = C * 2^3 * phi^2.
  EXPECT_DOUBLE_EQ(stampacchia_threshold(2.0, 2.0, 3.0, 0.0, 1.0), 4.0);
  EXPECT_EQ(stampacchia_threshold(1.0, 1.0, 2.0, 0.3, 0.0), 0.3);
  EXPECT_THROW(stampacchia_threshold(1.0, 1.0, 1.0, 0.0, 1.0), std::domain_error);
  EXPECT_THROW(stampacchia_threshold(0.0, 1.0, 2.0, 0.0, 1.0), std::domain_error);
  EXPECT_THROW(stampacchia_threshold(1.0, 1.0, 2.0, 0.0, -1.0), std::domain_error);
}

TEST(Stampacchia, MonotoneInTheData) {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> pos(0.1, 3.0), beta_d(1.1, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double C = pos(rng), alpha = pos(rng), beta = beta_d(rng), phi = pos(rng);
    const double base = stampacchia_threshold(C, alpha, beta, 0.0, phi);
    EXPECT_GT(base, 0.0);
    EXPECT_GE(stampacchia_threshold(1.5 * C, alpha, beta, 0.0, phi), base);
    EXPECT_GE(stampacchia_threshold(C, alpha, beta, 0.0, 1.5 * phi), base);
    EXPECT_DOUBLE_EQ(stampacchia_threshold(C, alpha, beta, 2.0, phi), base + 2.0);
  }
}

TEST(Stampacchia, IterationOnASaturatingSequenceVanishesBeforeThreshold) {
  // phi(h) = C/(h-k)^alpha phi(k)^beta with equality along k_j = k0 + d(1 - 2^-j)
  // stays positive for every j but tends to zero as k_j -> k0 + d.
  const double C = 1.0, alpha = 1.0, beta = 2.0, phi0 = 0.5;
  const double d = stampacchia_threshold(C, alpha, beta, 0.0, phi0);
  double k = 0.0, phi = phi0;
  for (int j = 1; j <= 30; ++j) {
    const double next = d * (1.0 - std::pow(2.0, -j));
    phi = C / std::pow(next - k, alpha) * std::pow(phi, beta);
    k = next;
    EXPECT_LE(phi, phi0 * std::pow(2.0, -j * alpha / (beta - 1.0)) * (1 + 1e-9));
  }
  EXPECT_LT(phi, 1e-8);
}

TEST(Describe, CollectsRequestedQuantities) {
  const Grid g(Domain(0, 1, 0, 1), 33, 33);
  const Field u = sine_mode(g);
  const SolveReport r = describe(u, 0.0, Domain(0.25, 0.75, 0.25, 0.75), {1.0, 2.0}, {0.5});
  EXPECT_EQ(r.lp_norms.size(), 2u);
  EXPECT_DOUBLE_EQ(r.lp_norms.at(2.0), lp_norm(u, 2.0));
  EXPECT_DOUBLE_EQ(r.sup_norm, 1.0);
  EXPECT_NEAR(r.interior_min, 0.5, 1e-12);
  ASSERT_EQ(r.level_sets.size(), 1u);
  EXPECT_DOUBLE_EQ(r.level_sets[0].second, level_set_measure(u, 0.5));
}
