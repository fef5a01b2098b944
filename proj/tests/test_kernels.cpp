#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "iterem/kernels.hpp"
#include "iterem/quadrature.hpp"
#include "oracles.hpp"

using namespace iterem::kernels;

namespace {

std::vector<double> random_decaying(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = u(rng) * std::pow(0.9, static_cast<double>(j));
  return x;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST(Coefficients, MatchProductForm) {
  for (int m = 1; m <= 6; ++m) {
    const auto c = remainder_coefficients(m, 300);
    for (std::size_t k = 0; k < c.size(); ++k) {
      const long double expect = oracle::remainder_weight(static_cast<std::int64_t>(k), m);
      EXPECT_NEAR(c[k], static_cast<double>(expect), 1e-15 * static_cast<double>(expect))
          << m << " " << k;
    }
  }
}

TEST(Coefficients, OrderOneIsAllOnes) {
  for (double c : remainder_coefficients(1, 50)) EXPECT_EQ(c, 1.0);
  EXPECT_TRUE(remainder_coefficients(3, 0).empty());
  EXPECT_THROW(remainder_coefficients(0, 4), std::invalid_argument);
}

TEST(RemainderKernel, SerialAndParallelAgreeBitwise) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {1u, 2u, 31u, 257u, 1000u}) {
    for (int m = 1; m <= 4; ++m) {
      const auto x = random_decaying(rng, n);
      std::vector<double> s(n), p(n);
      remainder_direct_serial(x, m, s);
      remainder_direct_parallel(x, m, p);
      EXPECT_TRUE(bitwise_equal(s, p)) << n << " " << m;
    }
  }
}

TEST(RemainderKernel, DirectAgreesWithSuffixSums) {
  std::mt19937_64 rng(12);
  for (int m = 1; m <= 5; ++m) {
    const auto x = random_decaying(rng, 400);
    std::vector<double> direct(x.size()), suffix(x.size());
    remainder_direct(x, m, direct, Execution::serial);
    remainder_suffix(x, m, suffix);
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_NEAR(direct[i], suffix[i], 1e-11 * (1.0 + std::abs(suffix[i]))) << m << " " << i;
    }
  }
}

TEST(RemainderKernel, AgreesWithBruteForceOracle) {
  const auto fn = [](std::int64_t j) { return static_cast<long double>(j) * std::pow(3.0L, -j); };
  const std::size_t n = 120;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(fn(static_cast<std::int64_t>(i) + 1));
  for (int m = 1; m <= 4; ++m) {
    std::vector<double> out(n);
    remainder_direct(x, m, out, Execution::parallel);
    for (std::size_t i = 0; i < 30; ++i) {
      const auto start = static_cast<std::int64_t>(i) + 1;
      const long double expect = oracle::brute_remainder(fn, m, start, static_cast<std::int64_t>(n) - start + 1);
      EXPECT_NEAR(out[i], static_cast<double>(expect), 1e-14 * std::abs(static_cast<double>(expect)))
          << m << " " << i;
    }
  }
}

TEST(RemainderKernel, SizeMismatchRejected) {
  std::vector<double> x(5, 1.0), out(4);
  EXPECT_THROW(remainder_direct_serial(x, 1, out), std::invalid_argument);
  EXPECT_THROW(remainder_suffix(x, 1, out), std::invalid_argument);
}

TEST(PanelRule, LayoutAndWeights) {
  const std::vector<double> grid = {0.0, 0.5, 2.0};
  const PanelRule rule = gauss_kronrod_panels(grid);
  ASSERT_EQ(rule.panel_count(), 2u);
  double w0 = 0.0, w1 = 0.0, g0 = 0.0;
  for (std::size_t q = 0; q < 15; ++q) {
    w0 += rule.weights[q];
    g0 += rule.check_weights[q];
    EXPECT_GT(rule.nodes[q], 0.0);
    EXPECT_LT(rule.nodes[q], 0.5);
  }
  for (std::size_t q = 15; q < 30; ++q) w1 += rule.weights[q];
  EXPECT_NEAR(w0, 0.5, 1e-15);
  EXPECT_NEAR(g0, 0.5, 1e-15);
  EXPECT_NEAR(w1, 1.5, 1e-15);
  for (std::size_t q = 1; q < rule.nodes.size(); ++q) EXPECT_LT(rule.nodes[q - 1], rule.nodes[q]);
}

TEST(GridRemainder, ExponentialEigenfunction) {
  // integral_t^T (s-t)^(m-1)/(m-1)! e^{-s} ds = e^{-t} Q(m, T-t) for the
  // regularized upper gamma; with T large the remainder is e^{-t}.
  std::vector<double> grid;
  for (double t = 0.0; t <= 60.0 + 1e-12; t += 0.25) grid.push_back(t);
  const PanelRule rule = gauss_kronrod_panels(grid);
  std::vector<double> values(rule.nodes.size());
  for (std::size_t q = 0; q < values.size(); ++q) values[q] = std::exp(-rule.nodes[q]);
  for (int m = 1; m <= 3; ++m) {
    std::vector<double> out(grid.size()), err(grid.size());
    grid_remainder(grid, rule, values, m, out, err, Execution::serial);
    for (std::size_t i = 0; i < grid.size(); i += 8) {
      if (grid[i] > 20.0) break;
      EXPECT_NEAR(out[i], std::exp(-grid[i]), 1e-12) << m << " " << grid[i];
      EXPECT_LT(err[i], 1e-10);
    }
  }
}

TEST(GridRemainder, SerialAndParallelAgreeBitwise) {
  std::vector<double> grid = {1.0};
  while (grid.back() < 30.0) grid.push_back(grid.back() * 1.03);
  const PanelRule rule = gauss_kronrod_panels(grid);
  std::vector<double> values(rule.nodes.size());
  for (std::size_t q = 0; q < values.size(); ++q) values[q] = std::sin(rule.nodes[q]) / (rule.nodes[q] * rule.nodes[q]);
  for (int m = 1; m <= 3; ++m) {
    std::vector<double> s(grid.size()), se(grid.size()), p(grid.size()), pe(grid.size());
    grid_remainder_serial(grid, rule, values, m, s, se);
    grid_remainder_parallel(grid, rule, values, m, p, pe);
    EXPECT_TRUE(bitwise_equal(s, p));
    EXPECT_TRUE(bitwise_equal(se, pe));
  }
}

TEST(GridRemainder, ArgumentChecks) {
  const std::vector<double> grid = {0.0, 1.0};
  const PanelRule rule = gauss_kronrod_panels(grid);
  std::vector<double> values(rule.nodes.size(), 1.0), out(2), err(2), short_out(1);
  EXPECT_THROW(grid_remainder_serial(grid, rule, values, 0, out, err), std::invalid_argument);
  EXPECT_THROW(grid_remainder_serial(grid, rule, values, 1, short_out, err), std::invalid_argument);
  std::vector<double> few(3, 1.0);
  EXPECT_THROW(grid_remainder_serial(grid, rule, few, 1, out, err), std::invalid_argument);
  grid_remainder_serial(grid, rule, values, 2, out, err);
  EXPECT_NEAR(out[0], 0.5, 1e-15);  // integral_0^1 s ds
  EXPECT_EQ(out[1], 0.0);
}
