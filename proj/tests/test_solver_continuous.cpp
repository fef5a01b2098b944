#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "iterem/errors.hpp"
#include "iterem/solver_continuous.hpp"
#include "oracles.hpp"

using namespace iterem;

namespace {

// x^(m) = (scale e^{-t}) f(t, x), y = level.
OdeProblem exp_problem(double scale, std::function<double(double, double)> f, int order = 1,
                       double level = 0.0) {
  OdeProblem eq;
  eq.order = order;
  eq.t0 = 0.0;
  eq.a = [scale](double t) { return scale * std::exp(-t); };
  eq.a_env = DecayEnvelope::geometric(scale, std::exp(-1.0));
  eq.b = [](double) { return 0.0; };
  eq.y = [level](double) { return level; };
  eq.f = std::move(f);
  eq.bound = 1.0;
  eq.margin = 1.0;
  return eq;
}

const HypothesisCheck& check_named(const HypothesisReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("no check " + name);
}

double max_abs_error(const GridFunction& x, const std::function<double(double)>& exact) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(x.values()[i] - exact(x.grid()[i])));
  }
  return worst;
}

}  // namespace

TEST(Grid, ShapeAndGrowth) {
  const auto g = make_grid(0.0, GridSpec{0.01, 0.05, 10.0});
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 10.0);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
  for (std::size_t i = 2; i + 1 < g.size(); ++i) {
    EXPECT_NEAR((g[i] - g[i - 1]) / (g[i - 1] - g[i - 2]), 1.05, 1e-9);
  }
}

TEST(Grid, GeometricFromPositiveStart) {
  // first_step = growth * t0 gives t_i = t0 (1 + growth)^i.
  const auto g = make_grid(2.0, GridSpec{0.02, 0.01, 100.0});
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    EXPECT_NEAR(g[i], 2.0 * std::pow(1.01, static_cast<double>(i)), 1e-10 * g[i]);
  }
  EXPECT_EQ(g.back(), 100.0);
}

TEST(Grid, NoSliverAtTheEnd) {
  const auto g = make_grid(0.0, GridSpec{1.0, 0.0, 10.1});
  ASSERT_GE(g.size(), 3u);
  EXPECT_GT(g[g.size() - 1] - g[g.size() - 2], 0.25);
}

TEST(Grid, RejectsBadSpecs) {
  EXPECT_THROW(make_grid(0.0, GridSpec{0.0, 0.1, 1.0}), std::invalid_argument);
  EXPECT_THROW(make_grid(0.0, GridSpec{0.1, -0.1, 1.0}), std::invalid_argument);
  EXPECT_THROW(make_grid(2.0, GridSpec{0.1, 0.1, 1.0}), std::invalid_argument);
  EXPECT_THROW(make_grid(0.0, GridSpec{1e-9, 0.0, 10.0}), std::invalid_argument);
}

TEST(OdeHypotheses, ExponentialInstancePasses) {
  const auto r = check_hypotheses_ode(exp_problem(1.0, [](double, double) { return 1.0; }));
  EXPECT_TRUE(r.passed()) << (r.first_failure() ? r.first_failure()->detail : "");
  EXPECT_NEAR(r.forcing_bound, 1.0, 1e-9);
  EXPECT_GE(r.forcing_bound, 1.0 - 1e-12);
  EXPECT_NEAR(r.slope_bound, 1.0, 1e-15);
}

TEST(OdeHypotheses, MarginTooSmall) {
  auto eq = exp_problem(1.0, [](double, double) { return 1.0; });
  eq.margin = 0.9;
  const auto r = check_hypotheses_ode(eq);
  ASSERT_NE(r.first_failure(), nullptr);
  EXPECT_EQ(r.first_failure()->name, kForcingBoundCheck);
}

TEST(OdeHypotheses, ApproximantOutsideFramedInterior) {
  auto eq = exp_problem(0.25, [](double, double) { return 1.0; }, 1, 0.8);
  eq.domain = Interval::closed(-1.0, 1.0);
  eq.margin = 0.5;
  const auto r = check_hypotheses_ode(eq);
  EXPECT_TRUE(check_named(r, kForcingBoundCheck).passed);
  EXPECT_FALSE(check_named(r, kInteriorCheck).passed);
}

TEST(OdeHypotheses, ApproximantDerivativeChecked) {
  auto eq = exp_problem(0.25, [](double, double) { return 1.0; }, 2);
  eq.y = [](double t) { return std::sin(t); };
  eq.domain = Interval::real_line();
  EXPECT_FALSE(check_named(check_hypotheses_ode(eq), kApproximantCheck).passed);
  eq.b = [](double t) { return -std::sin(t); };
  EXPECT_TRUE(check_named(check_hypotheses_ode(eq), kApproximantCheck).passed);
}

TEST(OdeHypotheses, SampledBound) {
  auto eq = exp_problem(0.25, [](double, double x) { return 2.0 * std::cos(x); });
  EXPECT_FALSE(check_named(check_hypotheses_ode(eq), kBoundSampleCheck).passed);
}

TEST(OdeHypotheses, SlopeBoundForHigherOrder) {
  // M * integral_0^inf s |a| for m = 3 with a = e^{-s}/4: 1/4.
  const auto r = check_hypotheses_ode(exp_problem(0.25, [](double, double) { return 1.0; }, 3));
  EXPECT_NEAR(r.slope_bound, 0.25, 1e-9);
}

TEST(OdeHypotheses, DivergentEnvelope) {
  auto eq = exp_problem(1.0, [](double, double) { return 1.0; });
  eq.t0 = 1.0;
  eq.a = [](double t) { return 1.0 / t; };
  eq.a_env = DecayEnvelope::power(1.0, 1.0);
  EXPECT_THROW(check_hypotheses_ode(eq), NonSummableError);
}

TEST(OdeHypotheses, Validation) {
  auto eq = exp_problem(1.0, [](double, double) { return 1.0; });
  auto bad = eq;
  bad.bound = 0.9;
  EXPECT_THROW(validate(bad), std::invalid_argument);
  bad = eq;
  bad.t0 = -1.0;
  EXPECT_THROW(validate(bad), std::invalid_argument);
  bad = eq;
  bad.f = nullptr;
  EXPECT_THROW(validate(bad), std::invalid_argument);
}

TEST(ApplyAOde, ConstantNonlinearity) {
  const auto eq = exp_problem(1.0, [](double, double) { return 1.0; });
  const auto grid = make_grid(eq.t0, eq.grid);
  const auto y = GridFunction::sample(grid, eq.y);
  const auto ax = apply_A_ode(eq, y);
  EXPECT_LT(max_abs_error(ax.x, [](double t) { return -std::exp(-t); }), 1e-12);
  EXPECT_LT(ax.error_bound, 1e-10);
  const auto other = GridFunction::sample(grid, [](double t) { return std::sin(t); });
  const auto ax2 = apply_A_ode(eq, other);
  EXPECT_EQ(ax.x.values(), ax2.x.values());
}

TEST(ApplyAOde, ZeroForcing) {
  auto eq = exp_problem(0.0, [](double, double x) { return std::sin(x); }, 2, 0.3);
  eq.a_env = DecayEnvelope::zero();
  const auto grid = make_grid(eq.t0, eq.grid);
  const auto ax = apply_A_ode(eq, GridFunction::sample(grid, [](double) { return 0.1; }));
  for (double v : ax.x.values()) EXPECT_EQ(v, 0.3);
}

TEST(ApplyAOde, DomainAndPrecisionErrors) {
  auto eq = exp_problem(1.0, [](double, double) { return 1.0; });
  eq.domain = Interval::closed(-1.0, 1.0);
  const auto grid = make_grid(eq.t0, eq.grid);
  EXPECT_THROW(apply_A_ode(eq, GridFunction::sample(grid, [](double t) { return t; })),
               DomainViolationError);

  auto rough = exp_problem(1.0, [](double t, double) { return std::sin(40.0 * t); });
  rough.grid = GridSpec{2.0, 0.5, 40.0};
  const auto coarse = make_grid(rough.t0, rough.grid);
  EXPECT_THROW(apply_A_ode(rough, GridFunction::sample(coarse, rough.y)), PrecisionError);
}

TEST(ApplyAOde, SerialAndParallelAgree) {
  const auto eq = exp_problem(0.25, [](double, double x) { return std::sin(x); }, 2, 0.5);
  const auto grid = make_grid(eq.t0, eq.grid);
  const auto x = GridFunction::sample(grid, [](double t) { return 0.5 + 0.1 * std::exp(-t); });
  EXPECT_EQ(apply_A_ode(eq, x, Execution::serial).x.values(),
            apply_A_ode(eq, x, Execution::parallel).x.values());
}

TEST(ApplyAOde, QStability) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int m = 1; m <= 3; ++m) {
    const auto eq = exp_problem(0.25, [](double t, double x) { return std::cos(3.0 * t + x); }, m);
    const auto grid = make_grid(eq.t0, eq.grid);
    // M r^m|a|(t) = e^{-t}/4 for every m.
    for (int trial = 0; trial < 5; ++trial) {
      const double c = u(rng);
      const auto x = GridFunction::sample(grid, [&](double t) { return c * 0.25 * std::exp(-t); });
      const auto ax = apply_A_ode(eq, x);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_LE(std::abs(ax.x.values()[i]), 0.25 * std::exp(-grid[i]) + ax.error_bound + 1e-15);
      }
    }
  }
}

TEST(SolveOde, LinearExampleConverges) {
  auto eq = exp_problem(1.0, [](double, double) { return 1.0; });
  // The residual floor is set by the grid spacing; this one reaches 1e-6.
  eq.grid = GridSpec{0.001, 0.002, 40.0};
  const auto r = solve_ode(eq);
  EXPECT_EQ(r.status, SolveStatus::converged);
  EXPECT_LE(r.iterations, 2);
  EXPECT_LT(max_abs_error(r.x, [](double t) { return -std::exp(-t); }), 1e-12);
  EXPECT_LT(r.residual.max, 1e-6);
  EXPECT_EQ(r.residual.accuracy_order, 2);
  EXPECT_LE(r.slope_modulus, eq.margin + 1e-9);
  EXPECT_LE(r.slope_modulus, r.hypotheses.slope_bound + 1e-9);
}

TEST(SolveOde, ZeroForcing) {
  auto eq = exp_problem(0.0, [](double, double x) { return std::sin(x); }, 1, -0.4);
  eq.a_env = DecayEnvelope::zero();
  const auto r = solve_ode(eq);
  EXPECT_EQ(r.status, SolveStatus::converged);
  for (double v : r.x.values()) EXPECT_EQ(v, -0.4);
}

TEST(SolveOde, ContractiveSineMatchesBackwardShot) {
  for (int m = 1; m <= 2; ++m) {
    for (double level : {0.0, 0.5}) {
      const auto eq = exp_problem(0.25, [](double, double x) { return std::sin(x); }, m, level);
      const auto r = solve_ode(eq);
      ASSERT_EQ(r.status, SolveStatus::converged) << m << " " << level;
      std::vector<double> points;
      for (std::size_t i = 0; i < r.x.size() && r.x.grid()[i] <= 10.0; ++i) points.push_back(r.x.grid()[i]);
      const auto shot = oracle::backward_shot(m, eq.a, eq.y, eq.f, 60.0, 1e-3, points);
      for (std::size_t i = 0; i < points.size(); ++i) {
        EXPECT_NEAR(r.x.values()[i], shot[i], 1e-6) << m << " " << level << " " << points[i];
      }
      EXPECT_LT(r.residual.max, 1e-4);
      EXPECT_LE(r.slope_modulus, r.hypotheses.slope_bound + 1e-9);
    }
  }
}

TEST(SolveOde, DeviationDecaysForNegativeAlpha) {
  OdeProblem eq;
  eq.order = 1;
  eq.t0 = 1.0;
  eq.a = [](double t) { return 0.5 * std::pow(t, -4.0); };
  eq.a_env = DecayEnvelope::power(0.5, 4.0);
  eq.b = [](double) { return 0.0; };
  eq.y = [](double) { return 1.0; };
  eq.f = [](double, double x) { return std::sin(x); };
  eq.alpha = -1.0;
  eq.margin = 1.0;
  eq.grid = GridSpec{0.01, 0.01, 5000.0};
  const auto r = solve_ode(eq);
  ASSERT_EQ(r.status, SolveStatus::converged);
  std::vector<double> points;
  for (int i = 1; i <= 8; ++i) points.push_back(std::ldexp(1.0, i));
  const auto profile = asymptotic_deviation_ode(r.x, eq.y, eq.alpha, points);
  for (std::size_t i = 1; i < profile.size(); ++i) EXPECT_LT(profile[i].value, profile[i - 1].value);
  EXPECT_LT(profile.back().value, 0.5 * profile.front().value);
}

TEST(SolveOde, HypothesisFailureDoesNotIterate) {
  auto eq = exp_problem(1.0, [](double, double) { return 1.0; });
  eq.margin = 0.5;
  const auto r = solve_ode(eq);
  EXPECT_EQ(r.status, SolveStatus::hypothesis_failed);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_TRUE(r.trace.empty());
}

TEST(SolveOde, MaxIterations) {
  const auto eq = exp_problem(0.25, [](double, double x) { return std::sin(x); }, 1, 0.5);
  const auto r = solve_ode(eq, OdeSolveOptions{1e-16, 2, 1e-3, Execution::serial});
  EXPECT_EQ(r.status, SolveStatus::max_iterations);
  EXPECT_EQ(r.trace.size(), 2u);
}

TEST(ResidualOde, ExactSolutionIsSecondOrder) {
  const auto eq = exp_problem(1.0, [](double, double) { return 1.0; });
  const auto exact = [](double t) { return -std::exp(-t); };
  const std::vector<double> samples = {0.5, 1.0, 2.0};
  const double r1 = residual_ode(eq, exact, samples, 1e-2).max;
  const double r2 = residual_ode(eq, exact, samples, 5e-3).max;
  EXPECT_LT(r1, 1e-4);
  EXPECT_NEAR(r1 / r2, 4.0, 0.05);
}

TEST(ResidualOde, ApproximantLeavesForcing) {
  const auto eq = exp_problem(1.0, [](double, double) { return 1.0; }, 1, 0.0);
  const double r = residual_ode(eq, eq.y, {0.0, 1.0, 2.0}, 1e-3).max;
  EXPECT_NEAR(r, 1.0, 1e-15);  // |a(0) f| = 1
}

TEST(ResidualOde, StencilMustFitGrid) {
  const auto eq = exp_problem(1.0, [](double, double) { return 1.0; });
  const GridFunction x({0.0, 1.0, 2.0}, {0.0, 0.0, 0.0});
  EXPECT_THROW(residual_ode(eq, x, {0.0}, 1e-2), InsufficientDataError);
  EXPECT_NO_THROW(residual_ode(eq, x, {1.0}, 1e-2));
  const GridFunction wide({0.0, 1.0, 2.0, 3.0, 4.0}, {0.0, 0.0, 0.0, 0.0, 0.0});
  EXPECT_EQ(residual_samples(wide, 1, 1e-2), (std::vector<double>{2.0}));
  EXPECT_TRUE(residual_samples(x, 1, 1e-2).empty());
}

TEST(Equicontinuity, Examples) {
  const std::vector<double> grid = {0.0, 0.25, 0.5, 1.0};
  EXPECT_EQ(equicontinuity_modulus({GridFunction(grid, {3.0, 3.0, 3.0, 3.0})}), 0.0);
  const auto t = GridFunction::sample(grid, [](double s) { return s; });
  const auto t2 = GridFunction::sample(grid, [](double s) { return 2.0 * s; });
  EXPECT_DOUBLE_EQ(equicontinuity_modulus({t, t2}), 2.0);
  EXPECT_EQ(equicontinuity_modulus({}), 0.0);
  const GridFunction other({0.0, 1.0}, {0.0, 0.0});
  EXPECT_THROW(equicontinuity_modulus({t, other}), ShapeError);
}

TEST(Deviation, OdeCheckpoints) {
  const std::vector<double> grid = {1.0, 2.0, 4.0};
  const GridFunction x(grid, {1.0, 0.5, 0.25});
  const auto p = asymptotic_deviation_ode(x, [](double) { return 0.0; }, -1.0, {1.0, 4.0});
  EXPECT_DOUBLE_EQ(p[0].value, 1.0);
  EXPECT_DOUBLE_EQ(p[1].value, 1.0);
  EXPECT_THROW(asymptotic_deviation_ode(x, [](double) { return 0.0; }, 0.0, {5.0}), IndexError);
}
