#pragma once

// Brute-force cross-checks of the analytic results.
//
// The oracle only borrows eval_point/quantile/sample from the demand module. Tail integrals
// are computed with a composite Simpson rule written here, not with the catalog closed forms
// or the adaptive quadrature behind partial_expectation.

#include "stocournot/equilibrium.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace stocournot {

enum class OracleQuantity { r_star, pou_max, expected_profit };
enum class OracleMethod { grid, monte_carlo };

[[nodiscard]] std::string_view to_string(OracleQuantity q) noexcept;
[[nodiscard]] std::string_view to_string(OracleMethod m) noexcept;

struct OracleReport {
  OracleQuantity quantity;
  double analytic;
  double oracle;
  double abs_error;
  OracleMethod method;
  std::size_t samples_or_points;
  std::optional<std::uint64_t> seed;
  /// Standard error of the Monte-Carlo estimate.
  std::optional<double> std_error;
  /// Accepted |analytic - oracle|: one grid step (r_star), 1e-8 (pou_max) or 4 standard errors.
  double tolerance;
  /// pou_max only: location of the grid maximum, of the closed-form maximizer, and the
  /// accepted distance between them (one grid step).
  std::optional<double> oracle_argmax;
  std::optional<double> analytic_argmax;
  std::optional<double> argmax_tolerance;

  [[nodiscard]] bool within_tolerance() const noexcept;
};

/// Maximizes the expected supplier profit over a uniform price grid on [lo, hi] and compares the
/// argmax with the fixed-point solver's r*. Throws SolverError if the maximum sits on the boundary.
[[nodiscard]] OracleReport grid_argmax_price(const MarketConfig& cfg, double lo, double hi, std::size_t points);

/// Monte-Carlo estimate of n/(n+1) r E(a - r)^+ against the analytic expected supplier profit.
[[nodiscard]] OracleReport mc_expected_profit(const MarketConfig& cfg, double r, std::size_t samples,
                                              std::uint64_t seed);

/// Grid maximum of pou_ratio over (r*, alpha_hi_mult r*] against 1 + 1/(n^2 + 2n).
[[nodiscard]] OracleReport scan_pou_max(int n, double r_star, double alpha_hi_mult, std::size_t points);

/// Pairwise (cascade) sum; the reduction order depends only on the input length.
[[nodiscard]] double pairwise_sum(std::span<const double> values);

}  // namespace stocournot
