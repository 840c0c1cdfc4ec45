#pragma once

// Realized efficiency ratios of the two-stage market.
//
// With the supplier's uncertain-demand equilibrium price r*, every ratio below depends on the
// realized demand a only through a / r* and on n; none depends on the demand distribution.
//
//   pou_ratio      aggregate profit, supplier prices before vs. after demand is realized
//   poa_ratio      integrated-firm profit over decentralized aggregate profit (a > r*)
//   supplier_ratio supplier profit with vs. without demand uncertainty
//   retailer_ratio per-retailer profit with vs. without demand uncertainty

#include "stocournot/equilibrium.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace stocournot {

enum class Metric { pou, poa, supplier_ratio, retailer_ratio };

[[nodiscard]] std::string_view to_string(Metric m) noexcept;
/// Accepts "pou", "poa", "supplier-ratio", "retailer-ratio".
[[nodiscard]] Metric parse_metric(std::string_view text);

[[nodiscard]] double pou_ratio(double alpha, double r_star, int n);
/// Throws DomainError for a <= r*, where both chains earn nothing.
[[nodiscard]] double poa_ratio(double alpha, double r_star, int n);
/// Throws DomainError for a <= 0.
[[nodiscard]] double supplier_ratio(double alpha, double r_star);
/// Throws DomainError for a <= 0.
[[nodiscard]] double retailer_ratio(double alpha, double r_star);
/// Integrated over decentralized profit when the supplier observes a; constant in a > 0.
[[nodiscard]] double poa_deterministic_ratio(double alpha, int n);

enum class BoundMetric { pou, poa, poa_deterministic };
enum class Attainment {
  at_alpha,          ///< attained at argmax_alpha
  limit_above_rstar, ///< approached as a decreases to r*, never attained
  every_alpha,       ///< ratio is constant in a
};

[[nodiscard]] std::string_view to_string(BoundMetric m) noexcept;
[[nodiscard]] std::string_view to_string(Attainment a) noexcept;

struct EfficiencyBound {
  BoundMetric metric;
  int n;
  double value;
  Attainment attainment;
  /// Set when attainment is at_alpha.
  std::optional<double> argmax_alpha;
  bool distribution_free;
};

/// 1 + 1/(n^2 + 2n), attained at a = 2n r*/(n - 1). Requires n >= 2.
[[nodiscard]] EfficiencyBound pou_supremum(int n, double r_star);

struct Interval {
  double low;
  double high;  ///< may be +inf
};

/// Demand levels where pou_ratio >= 1. Requires n >= 2.
[[nodiscard]] Interval pou_exceedance_range(int n, double r_star);

struct PoaBounds {
  EfficiencyBound stochastic;
  EfficiencyBound deterministic;
};

[[nodiscard]] PoaBounds poa_bounds(int n);

/// Pointwise value of `metric`; pou/supplier/retailer ratios are 0 at a = 0.
[[nodiscard]] double ratio_value(Metric metric, double alpha, double r_star, int n);

struct RatioCurve {
  Metric metric;
  int n;
  double r_star;
  std::vector<double> alphas;
  std::vector<double> values;
};

struct SweepOptions {
  /// Worker threads for evaluating the grid; output is identical for any count.
  unsigned threads = 1;
};

/// Uniform grid of `points` demand levels over `range`, evaluated pointwise.
///
/// For poa the grid starts at max(range.low, r*(1 + 1e-9)).
[[nodiscard]] RatioCurve sweep(Metric metric, const MarketConfig& cfg, double r_star, Interval range,
                               std::size_t points, const SweepOptions& options = {});

}  // namespace stocournot
