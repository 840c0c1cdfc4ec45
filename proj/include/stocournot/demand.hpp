#pragma once

// Supplier's belief about the demand level: a continuous nonnegative distribution.
//
// Catalog entries carry closed forms for the CDF, density, quantile, moments and the
// partial expectation E(a - r)^+. Two-parameter families use the (shape, scale)
// convention throughout.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace stocournot {

enum class DistributionKind { uniform, exponential, weibull, gamma, lognormal, empirical };

[[nodiscard]] std::string_view to_string(DistributionKind kind) noexcept;

/// Text form `name:key=value(,key=value)*`.
///
/// Values are decimals. List-valued keys (empirical grids only) separate their
/// entries with ';'. Keys are case-sensitive and keep their written order.
struct DistributionSpec {
  std::string name;
  std::vector<std::pair<std::string, std::vector<double>>> params;

  [[nodiscard]] static DistributionSpec parse(std::string_view text);
  /// Canonical form; values printed with 17 significant digits.
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

namespace params {
struct Uniform {
  double low;
  double high;
};
struct Exponential {
  double scale;
};
struct Weibull {
  double shape;
  double scale;
};
struct Gamma {
  double shape;
  double scale;
};
/// shape = sigma of log(a), scale = exp(mu).
struct Lognormal {
  double shape;
  double scale;
};
/// Piecewise-linear CDF through (x[j], cdf[j]); x strictly increasing, cdf from 0 to 1.
struct Empirical {
  std::vector<double> x;
  std::vector<double> cdf;
};
}  // namespace params

using DistributionParams = std::variant<params::Uniform, params::Exponential, params::Weibull,
                                        params::Gamma, params::Lognormal, params::Empirical>;

/// Immutable demand distribution with precomputed support and moments.
class DemandDistribution {
public:
  /// Validates the parameters; throws InvalidArgument on nonpositive or degenerate input.
  explicit DemandDistribution(DistributionParams params);

  static DemandDistribution uniform(double low, double high);
  static DemandDistribution exponential(double scale);
  static DemandDistribution weibull(double shape, double scale);
  static DemandDistribution gamma(double shape, double scale);
  static DemandDistribution lognormal(double shape, double scale);
  static DemandDistribution empirical(std::vector<double> x, std::vector<double> cdf);

  [[nodiscard]] DistributionKind kind() const noexcept;
  [[nodiscard]] const DistributionParams& params() const noexcept { return params_; }

  [[nodiscard]] double support_low() const noexcept { return support_low_; }
  /// +inf for unbounded families.
  [[nodiscard]] double support_high() const noexcept { return support_high_; }
  [[nodiscard]] double mean() const noexcept { return mean_; }
  /// E a^2; +inf when it diverges.
  [[nodiscard]] double second_moment() const noexcept { return second_moment_; }

  [[nodiscard]] DistributionSpec spec() const;

private:
  DistributionParams params_;
  double support_low_ = 0.0;
  double support_high_ = 0.0;
  double mean_ = 0.0;
  double second_moment_ = 0.0;
};

/// Builds a catalog distribution from its text spec.
[[nodiscard]] DemandDistribution make_distribution(const DistributionSpec& spec);
[[nodiscard]] DemandDistribution make_distribution(std::string_view spec_text);

/// The distribution of c * a for c > 0.
[[nodiscard]] DemandDistribution scaled(const DemandDistribution& d, double c);

struct PointEval {
  double pdf;
  double cdf;
  double survival;
};

/// Density, CDF and survival at x. Total: outside the support the values saturate.
[[nodiscard]] PointEval eval_point(const DemandDistribution& d, double x);

[[nodiscard]] inline double survival(const DemandDistribution& d, double x) {
  return eval_point(d, x).survival;
}

enum class Integration {
  closed_form,  ///< catalog formula
  quadrature,   ///< adaptive Gauss-Kronrod on [r, quantile(1 - 1e-12)]
};

/// E(a - r)^+ = integral of the survival function over [r, inf).
[[nodiscard]] double partial_expectation(const DemandDistribution& d, double r,
                                         Integration method = Integration::closed_form);

/// Adaptive quadrature of the survival function over [a, b], b clipped to the tail cutoff.
[[nodiscard]] double integrate_survival(const DemandDistribution& d, double a, double b);

/// Inverse CDF on the open interval (0, 1); throws DomainError otherwise.
[[nodiscard]] double quantile(const DemandDistribution& d, double p);

/// Upper integration limit for tail integrals: support_high if finite, else quantile(1 - 1e-12).
[[nodiscard]] double tail_cutoff(const DemandDistribution& d);

/// k inverse-transform draws from the counter-based stream of `seed`.
[[nodiscard]] std::vector<double> sample(const DemandDistribution& d, std::uint64_t seed,
                                         std::size_t k);

}  // namespace stocournot
