#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "iterem/errors.hpp"
#include "iterem/remainder_discrete.hpp"
#include "oracles.hpp"

using namespace iterem;

namespace {

SequenceWindow halving(Index last) {
  return SequenceWindow::generate(1, last, [](Index j) { return std::ldexp(1.0, -static_cast<int>(j)); });
}

RemainderInput halving_input(int m, Index last = 200) {
  return RemainderInput(halving(last), DecayEnvelope::geometric(1.0, 0.5), m);
}

}  // namespace

TEST(RmValue, GeometricOrderOne) {
  const auto v = rm_value(halving_input(1), 4);
  EXPECT_NEAR(v.value, 0.125, 1e-16);
  EXPECT_LT(v.error_bound, 1e-50);
}

TEST(RmValue, GeometricOrderTwo) {
  const auto v = rm_value(halving_input(2), 3);
  EXPECT_NEAR(v.value, 0.5, 1e-15);
  const auto fn = [](std::int64_t j) { return std::pow(2.0L, -j); };
  EXPECT_NEAR(v.value, static_cast<double>(oracle::brute_remainder(fn, 2, 3, 10000)), 1e-15);
}

TEST(RmValue, ZeroInput) {
  const RemainderInput in(SequenceWindow::zeros(1, 10), DecayEnvelope::zero_beyond(10), 3);
  const auto v = rm_value(in, 5);
  EXPECT_EQ(v.value, 0.0);
  EXPECT_EQ(v.error_bound, 0.0);
}

TEST(RmValue, Errors) {
  const RemainderInput in(SequenceWindow::generate(3, 20, [](Index) { return 1.0; }),
                          DecayEnvelope::zero_beyond(20), 1);
  EXPECT_THROW(rm_value(in, 2), IndexError);
  // Power envelope j^-2 is not summable against j^1.
  EXPECT_THROW(RemainderInput(halving(20), DecayEnvelope::power(1.0, 2.0), 2), NonSummableError);
  EXPECT_NO_THROW(RemainderInput(halving(20), DecayEnvelope::power(1.0, 2.0), 1));
}

TEST(RmValue, PastTheWindowReportsOnlyTheTail) {
  const auto v = rm_value(halving_input(1, 30), 40);
  EXPECT_EQ(v.value, 0.0);
  EXPECT_GE(v.error_bound, std::ldexp(1.0, -39));
}

TEST(RmWindow, Examples) {
  const auto w = rm_window(halving_input(1), 1, 5);
  ASSERT_EQ(w.size(), 5u);
  for (Index n = 1; n <= 5; ++n) EXPECT_NEAR(w[n], std::ldexp(1.0, 1 - static_cast<int>(n)), 1e-16);

  const RemainderInput zero(SequenceWindow::zeros(1, 30), DecayEnvelope::zero(), 4);
  const auto zw = rm_window(zero, 1, 30);
  for (double v : zw.values()) EXPECT_EQ(v, 0.0);

  const auto one = rm_window(halving_input(3), 3, 3);
  EXPECT_NEAR(one[3], 1.0, 1e-15);
}

TEST(RmWindow, RangeMustLieInWindow) {
  const auto in = halving_input(1, 20);
  EXPECT_THROW(rm_window(in, 0, 5), IndexError);
  EXPECT_THROW(rm_window(in, 5, 21), IndexError);
  EXPECT_THROW(rm_window(in, 6, 5), IndexError);
}

TEST(RmWindow, SerialAndParallelMatch) {
  const auto in = halving_input(3, 500);
  const auto s = rm_window(in, 1, 400, Execution::serial);
  const auto p = rm_window(in, 1, 400, Execution::parallel);
  for (Index n = 1; n <= 400; ++n) EXPECT_EQ(s[n], p[n]);
}

TEST(RmWindow, GeometricClosedForm) {
  for (int m = 1; m <= 4; ++m) {
    const auto w = rm_window(halving_input(m), 1, 20);
    for (Index n = 1; n <= 20; ++n) {
      const double expect = std::ldexp(1.0, m - static_cast<int>(n));
      EXPECT_LT(std::abs(w[n] - expect) / expect, 1e-12) << m << " " << n;
    }
  }
}

TEST(DifferenceIdentity, ZeroOrderIsExact) {
  const auto d = check_difference_identity(halving_input(3), 0, 1, 50);
  EXPECT_EQ(d.max_deviation, 0.0);
}

TEST(DifferenceIdentity, GeometricFirstOrder) {
  const auto d = check_difference_identity(halving_input(1), 1, 1, 50);
  EXPECT_LE(d.max_deviation, 1e-16);
  EXPECT_LE(d.max_deviation, d.error_bound + 1e-16);
}

TEST(DifferenceIdentity, WeightedGeometricAgainstOracle) {
  const auto fn = [](std::int64_t j) { return static_cast<long double>(j) * std::pow(3.0L, -j); };
  const SequenceWindow x = SequenceWindow::generate(1, 120, [&](Index j) { return static_cast<double>(fn(j)); });
  // j 3^-j = (2/3)^j j 2^-j <= 2^-j for every j >= 1.
  const RemainderInput in(x, DecayEnvelope::geometric(1.0, 0.5), 3);
  const auto d = check_difference_identity(in, 2, 1, 20);
  EXPECT_LT(d.max_deviation, 1e-10);
  // Independent route: second difference of brute-force r^3 against r^1.
  for (Index n = 1; n <= 20; ++n) {
    const long double r3 = oracle::brute_remainder(fn, 3, n, 400);
    const long double r3b = oracle::brute_remainder(fn, 3, n + 1, 400);
    const long double r3c = oracle::brute_remainder(fn, 3, n + 2, 400);
    const long double r1 = oracle::brute_remainder(fn, 1, n, 400);
    EXPECT_NEAR(static_cast<double>(r3c - 2 * r3b + r3), static_cast<double>(r1), 1e-14);
  }
}

TEST(DifferenceIdentity, NeedsRoomForDifferences) {
  const auto in = halving_input(2, 30);
  EXPECT_THROW(check_difference_identity(in, 2, 1, 29), InsufficientDataError);
  EXPECT_NO_THROW(check_difference_identity(in, 2, 1, 28));
  EXPECT_THROW(check_difference_identity(in, 3, 1, 10), std::invalid_argument);
}

TEST(DifferenceIdentity, SignIdentityOnRandomInputs) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> rate(0.2, 0.8);
  std::uniform_real_distribution<double> beta(6.0, 9.0);
  for (int trial = 0; trial < 20; ++trial) {
    for (int m = 1; m <= 4; ++m) {
      const double c = coef(rng);
      const double q = rate(rng);
      const auto geo = SequenceWindow::generate(1, 200, [&](Index j) { return c * std::pow(q, static_cast<double>(j)); });
      const RemainderInput g(geo, DecayEnvelope::geometric(std::abs(c), q), m);
      const auto dg = check_difference_identity(g, m, 1, 50);
      EXPECT_LE(dg.max_deviation, dg.error_bound + 1e-12) << q << " " << m;

      const double b = beta(rng);
      const auto pw = SequenceWindow::generate(1, 200, [&](Index j) { return c * std::pow(static_cast<double>(j), -b); });
      const RemainderInput p(pw, DecayEnvelope::power(std::abs(c), b), m);
      const auto dp = check_difference_identity(p, m, 1, 50);
      EXPECT_LE(dp.max_deviation, dp.error_bound + 1e-12) << b << " " << m;
    }
  }
}

TEST(RemainderProperties, TailBoundMajorant) {
  // r^m|x|_n <= sum_{j >= n} j^(m-1)|x_j|
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 1 + trial % 4;
    const auto x = SequenceWindow::generate(1, 150, [&](Index j) { return u(rng) * std::pow(0.7, static_cast<double>(j)); });
    const auto absx = SequenceWindow::generate(1, 150, [&](Index j) { return std::abs(x[j]); });
    const auto env = DecayEnvelope::geometric(1.0, 0.7);
    const RemainderInput in(absx, env, m);
    const auto r = rm_window(in, 1, 150);
    for (Index n = 1; n <= 150; n += 7) {
      const TailSum t = weighted_tail_sum(absx, env, m - 1, n);
      EXPECT_LE(r[n], t.upper() * (1 + 1e-14)) << m << " " << n;
    }
  }
}

TEST(RemainderProperties, Linearity) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int m = 1; m <= 4; ++m) {
    const double lambda = u(rng) * 3.0;
    const auto x = SequenceWindow::generate(1, 200, [&](Index j) { return u(rng) * std::pow(0.6, static_cast<double>(j)); });
    const auto y = SequenceWindow::generate(1, 200, [&](Index j) { return u(rng) * std::pow(static_cast<double>(j), -7.0); });
    const auto z = SequenceWindow::generate(1, 200, [&](Index j) { return lambda * x[j] + y[j]; });
    const RemainderInput ix(x, DecayEnvelope::geometric(1.0, 0.6), m);
    const RemainderInput iy(y, DecayEnvelope::power(1.0, 7.0), m);
    const RemainderInput iz(z, DecayEnvelope::power(std::abs(lambda) + 1.0, 7.0), m);
    const auto rx = rm_window(ix, 1, 100);
    const auto ry = rm_window(iy, 1, 100);
    const auto rz = rm_window(iz, 1, 100);
    const double slack = std::abs(lambda) * truncation_bound(ix) + truncation_bound(iy) +
                         truncation_bound(iz) + 1e-13;
    for (Index n = 1; n <= 100; ++n) EXPECT_NEAR(rz[n], lambda * rx[n] + ry[n], slack) << m << " " << n;
  }
}

TEST(RemainderProperties, VanishingWithRate) {
  // x_j = j^-4, m = 1, alpha = -1: n * r x_n decays.
  const auto x = SequenceWindow::generate(1, 20000, [](Index j) { return std::pow(static_cast<double>(j), -4.0); });
  const RemainderInput in(x, DecayEnvelope::power(1.0, 4.0), 1);
  ASSERT_TRUE(summability_certificate(in.envelope(), x, 1, -1.0).certified());
  std::vector<double> profile;
  for (int i = 3; i <= 10; ++i) {
    const Index n = Index{1} << i;
    const auto v = rm_value(in, n);
    profile.push_back(static_cast<double>(n) * std::abs(v.value));
  }
  for (std::size_t i = 1; i < profile.size(); ++i) EXPECT_LT(profile[i], profile[i - 1]);
  EXPECT_LT(profile.back(), 0.5 * profile.front());
}

TEST(Summability, ZetaTwoBracket) {
  const auto x = SequenceWindow::generate(1, 10000, [](Index j) { return std::pow(static_cast<double>(j), -2.0); });
  const auto r = summability_certificate(DecayEnvelope::power(1.0, 2.0), x, 1, 0.0);
  ASSERT_TRUE(r.certified());
  const double z2 = std::numbers::pi * std::numbers::pi / 6.0;
  EXPECT_LE(r.partial, z2);
  EXPECT_GE(r.upper_bound().value(), z2);
  EXPECT_NEAR(r.upper_bound().value(), z2, 2e-4);

  const auto env_only = summability_certificate(DecayEnvelope::power(1.0, 2.0), 1, 0.0);
  EXPECT_TRUE(env_only.certified());
  EXPECT_GE(env_only.upper_bound().value(), z2);
}

TEST(Summability, Verdicts) {
  const auto h = summability_certificate(DecayEnvelope::power(1.0, 1.0), 1, 0.0);
  EXPECT_FALSE(h.certified());
  EXPECT_TRUE(h.upper_bound().is_infinite());
  const auto g = summability_certificate(DecayEnvelope::geometric(5.0, 0.9), 4, -2.0);
  EXPECT_TRUE(g.certified());
  EXPECT_DOUBLE_EQ(g.exponent, 5.0);
  EXPECT_THROW(summability_certificate(DecayEnvelope::zero(), 1, 0.5), std::invalid_argument);
}
