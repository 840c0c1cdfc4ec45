#pragma once

// Reliability functions of the demand belief:
//   mean residual life       m(r) = E(a - r | a > r)
//   generalized MRL          e(r) = m(r) / r
//   hazard rate              h(r) = f(r) / survival(r)
//   generalized failure rate g(r) = r h(r)
// and numeric certification of the DGMRL (e decreasing) and IGFR (g increasing) classes.

#include "stocournot/demand.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace stocournot {

struct MrlValue {
  double value;
  /// survival(r) fell below 1e-300; value forced to 0 as if r >= support_high.
  bool survival_underflow;
};

[[nodiscard]] MrlValue mrl_detail(const DemandDistribution& d, double r);

/// m(r); 0 for r >= support_high.
[[nodiscard]] double mrl(const DemandDistribution& d, double r);

/// e(r) = m(r) / r for r > 0; DomainError at r <= 0.
[[nodiscard]] double gmrl(const DemandDistribution& d, double r);

struct HazardGfr {
  double hazard;
  double gfr;
};

/// Requires support_low < r < support_high.
[[nodiscard]] HazardGfr hazard_and_gfr(const DemandDistribution& d, double r);

struct ReliabilityCurves {
  std::vector<double> grid;
  std::vector<double> mrl;
  std::vector<double> gmrl;
  std::vector<double> hazard;
  std::vector<double> gfr;
};

/// Samples all four curves on a strictly increasing grid of positive points.
///
/// Hazard and GFR are NaN at grid points outside the open support.
[[nodiscard]] ReliabilityCurves reliability_curves(const DemandDistribution& d, std::span<const double> grid);

/// `points` geometrically spaced values from lo to hi inclusive (0 < lo < hi).
[[nodiscard]] std::vector<double> geometric_grid(double lo, double hi, std::size_t points);

enum class ReliabilityProperty { dgmrl, igfr };
enum class Verdict { holds, strictly_holds, fails };

[[nodiscard]] std::string_view to_string(ReliabilityProperty p) noexcept;
[[nodiscard]] std::string_view to_string(Verdict v) noexcept;

struct ClassificationReport {
  ReliabilityProperty property;
  Verdict verdict;
  /// Grid pair (r_i, r_j), r_i < r_j, with the worst monotonicity violation; set iff verdict is fails.
  std::optional<std::pair<double, double>> witness;
  /// Smallest monotonicity margin between consecutive evaluated points.
  double slack;
  double grid_low;
  double grid_high;
  std::size_t points_evaluated;
};

struct ClassifyOptions {
  std::size_t grid_size = 256;
  /// Grid bounds; default to quantile(1e-6) and quantile(1 - 1e-6).
  std::optional<double> lower;
  std::optional<double> upper;
  /// Margins above this count as strict; below its negative count as violations.
  double strictness = 1e-9;
};

[[nodiscard]] ClassificationReport classify(const DemandDistribution& d, ReliabilityProperty property,
                                            const ClassifyOptions& options);
[[nodiscard]] ClassificationReport classify(const DemandDistribution& d, ReliabilityProperty property,
                                            std::size_t grid_size = 256);

}  // namespace stocournot
