#pragma once

// Two-stage market: a supplier sets the wholesale price r before demand is realized,
// then n symmetric Cournot retailers order after observing r and the demand level a.
// Marginal production cost is normalized to zero; retail price is (a - q)^+.

#include "stocournot/demand.hpp"

#include <cstddef>
#include <string_view>
#include <utility>

namespace stocournot {

class MarketConfig {
public:
  /// n >= 2 unless `allow_single_retailer` is set, in which case n >= 1.
  MarketConfig(int retailers, DemandDistribution demand, bool allow_single_retailer = false);

  [[nodiscard]] int retailers() const noexcept { return retailers_; }
  [[nodiscard]] const DemandDistribution& demand() const noexcept { return demand_; }

private:
  int retailers_;
  DemandDistribution demand_;
};

struct EquilibriumSolution {
  double r_star;
  /// |r* - m(r*)|
  double residual;
  int iterations;
  std::pair<double, double> bracket;
  /// Demand classified strictly DGMRL and E a^2 finite.
  bool uniqueness_certified;
};

struct SolverOptions {
  double tolerance = 1e-9;
  int max_expansions = 200;
  int max_iterations = 200;
  std::size_t classification_grid = 256;
};

/// Wholesale price under demand uncertainty: the fixed point r = m(r), by bisection.
///
/// Throws SolverError when no sign change of m(r) - r exists below the tail cutoff.
[[nodiscard]] EquilibriumSolution solve_wholesale_price(const MarketConfig& cfg, const SolverOptions& options);
[[nodiscard]] EquilibriumSolution solve_wholesale_price(const MarketConfig& cfg, double tol = 1e-9);

/// Optimal wholesale price when the supplier observes a: a / 2.
[[nodiscard]] double deterministic_price(double alpha);

struct CournotOutcome {
  double alpha;
  double r;
  double q_individual;
  double q_total;
  double retail_price;
};

/// Symmetric second-stage Cournot equilibrium at wholesale price r.
[[nodiscard]] CournotOutcome cournot_stage(double alpha, double r, int n);

enum class Scenario { uncertain, deterministic };

[[nodiscard]] std::string_view to_string(Scenario s) noexcept;

struct ProfitBreakdown {
  Scenario scenario;
  double supplier;
  double retailer_each;
  /// supplier + n * retailer_each
  double aggregate;
  /// Realized profit of a single firm running both echelons.
  double integrated;
};

struct RealizedProfits {
  ProfitBreakdown uncertain;
  ProfitBreakdown deterministic;
};

/// Realized equilibrium profits at demand level a, with the supplier pricing at r* (uncertain)
/// or at a / 2 (deterministic).
[[nodiscard]] RealizedProfits realized_profits(double alpha, int n, double r_star);
[[nodiscard]] RealizedProfits realized_profits(double alpha, const MarketConfig& cfg, double r_star);

/// n/(n+1) r E(a - r)^+
[[nodiscard]] double expected_supplier_profit(const MarketConfig& cfg, double r);

/// r E(a - r)^+
[[nodiscard]] double expected_integrated_profit(const DemandDistribution& d, double r);

}  // namespace stocournot
