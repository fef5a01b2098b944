#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Inner loops of the remainder operators. Each kernel has a serial reference
// and an OpenMP variant computing the same sums in the same order per output
// element, so the two agree bitwise. Tests hold them to that.
namespace iterem::kernels {

enum class Execution { serial, parallel };

bool parallel_available() noexcept;
int max_threads() noexcept;

// Coefficients C(k + order - 1, order - 1), k = 0..count-1, built by the
// recurrence c_k = c_{k-1} (k + order - 1) / k. Exact while below 2^53.
std::vector<double> remainder_coefficients(int order, std::size_t count);

// out[i] = sum_{j >= i} C(j - i + order - 1, order - 1) x[j] over the stored
// values (local indexing). Summed from the far end toward i.
void remainder_direct_serial(std::span<const double> x, int order, std::span<double> out);
void remainder_direct_parallel(std::span<const double> x, int order, std::span<double> out);
void remainder_direct(std::span<const double> x, int order, std::span<double> out,
                      Execution exec);

// Same quantity via `order` nested suffix sums; O(order * n).
void remainder_suffix(std::span<const double> x, int order, std::span<double> out);

// Composite-rule nodes for a grid: panel j spans [grid[j], grid[j+1]] and
// owns nodes [j * per_panel, (j + 1) * per_panel).
struct PanelRule {
  std::vector<double> nodes;
  std::vector<double> weights;        // high-order rule
  std::vector<double> check_weights;  // embedded low-order rule (0 where unused)
  std::size_t per_panel = 0;

  std::size_t panel_count() const { return per_panel ? nodes.size() / per_panel : 0; }
};

// Gauss-Kronrod 7/15 on every panel of `grid`.
PanelRule gauss_kronrod_panels(std::span<const double> grid);

// out[i]  = sum over panels j >= i of the rule applied to
//           (s - grid[i])^(order-1) / (order-1)! * values(s)
// err[i]  = sum over the same panels of |high - low| rule differences.
// `values` holds the integrand at rule.nodes.
void grid_remainder_serial(std::span<const double> grid, const PanelRule& rule,
                           std::span<const double> values, int order, std::span<double> out,
                           std::span<double> err);
void grid_remainder_parallel(std::span<const double> grid, const PanelRule& rule,
                             std::span<const double> values, int order,
                             std::span<double> out, std::span<double> err);
void grid_remainder(std::span<const double> grid, const PanelRule& rule,
                    std::span<const double> values, int order, std::span<double> out,
                    std::span<double> err, Execution exec);

}  // namespace iterem::kernels
