#include "stocournot/equilibrium.hpp"

#include "stocournot/errors.hpp"
#include "stocournot/reliability.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace stocournot {

namespace {

double positive_part(double v) { return v > 0.0 ? v : 0.0; }

void require_retailers(int n, int minimum) {
  if (n < minimum) throw InvalidArgument(fmt::format("number of retailers must be >= {}, got {}", minimum, n));
}

}  // namespace

MarketConfig::MarketConfig(int retailers, DemandDistribution demand, bool allow_single_retailer)
    : retailers_(retailers), demand_(std::move(demand)) {
  if (retailers == 1 && !allow_single_retailer) {
    throw InvalidArgument("n = 1 requires the explicit single-retailer opt-in");
  }
  require_retailers(retailers, 1);
}

EquilibriumSolution solve_wholesale_price(const MarketConfig& cfg, const SolverOptions& options) {
  const DemandDistribution& d = cfg.demand();
  if (!std::isfinite(d.mean())) throw DomainError("wholesale price needs a demand distribution with finite mean");
  if (!(options.tolerance > 0.0)) throw InvalidArgument("solver tolerance must be positive");

  auto psi = [&d](double r) { return mrl(d, r) - r; };
  const double cap = tail_cutoff(d);

  // psi(0) = mean > 0 and psi < 0 once r passes the tail cutoff, so expand until the sign flips.
  double lo = 0.5 * d.mean();
  double hi = lo;
  double psi_lo = psi(lo);
  double psi_hi = psi_lo;
  int expansions = 0;
  if (psi_lo > 0.0) {
    while (psi_hi > 0.0) {
      if (hi >= cap || ++expansions > options.max_expansions) {
        throw SolverError(fmt::format("no interior fixed point of the mean residual life below {} "
                                      "(second moment may be infinite)",
                                      cap));
      }
      lo = hi;
      psi_lo = psi_hi;
      hi = std::min(2.0 * hi, cap);
      psi_hi = psi(hi);
    }
  } else if (psi_lo < 0.0) {
    while (psi_lo < 0.0) {
      if (++expansions > options.max_expansions) {
        throw SolverError("no sign change of m(r) - r found while shrinking toward 0");
      }
      hi = lo;
      psi_hi = psi_lo;
      lo = 0.5 * lo;
      psi_lo = psi(lo);
    }
  }

  const std::pair<double, double> bracket{lo, hi};
  double r = lo;
  double residual = std::abs(psi_lo);
  int iterations = 0;
  if (psi_lo != 0.0) {
    r = hi;
    residual = std::abs(psi_hi);
    while (iterations < options.max_iterations) {
      ++iterations;
      const double mid = 0.5 * (lo + hi);
      const double value = psi(mid);
      r = mid;
      residual = std::abs(value);
      if (value == 0.0 || mid == lo || mid == hi) break;
      (value > 0.0 ? lo : hi) = mid;
      if (hi - lo <= options.tolerance && residual <= options.tolerance) break;
    }
  }
  if (residual > options.tolerance) {
    throw SolverError(fmt::format("bisection stalled with residual {} above tolerance {}", residual,
                                  options.tolerance));
  }

  const auto report = classify(d, ReliabilityProperty::dgmrl, options.classification_grid);
  const bool certified = report.verdict == Verdict::strictly_holds && std::isfinite(d.second_moment());
  return {r, residual, iterations, bracket, certified};
}

EquilibriumSolution solve_wholesale_price(const MarketConfig& cfg, double tol) {
  SolverOptions options;
  options.tolerance = tol;
  return solve_wholesale_price(cfg, options);
}

double deterministic_price(double alpha) {
  if (!(alpha >= 0.0)) throw DomainError(fmt::format("demand level must be >= 0, got {}", alpha));
  return 0.5 * alpha;
}

CournotOutcome cournot_stage(double alpha, double r, int n) {
  if (!(alpha >= 0.0) || !(r >= 0.0)) throw DomainError("demand level and wholesale price must be >= 0");
  require_retailers(n, 1);
  const double q_i = positive_part(alpha - r) / (n + 1);
  const double q = n * q_i;
  return {alpha, r, q_i, q, positive_part(alpha - q)};
}

std::string_view to_string(Scenario s) noexcept {
  return s == Scenario::uncertain ? "uncertain" : "deterministic";
}

RealizedProfits realized_profits(double alpha, int n, double r_star) {
  if (!(alpha >= 0.0) || !(r_star >= 0.0)) throw DomainError("demand level and wholesale price must be >= 0");
  require_retailers(n, 1);
  const double share = static_cast<double>(n) / (n + 1);
  const double margin = positive_part(alpha - r_star);
  const double half = 0.5 * alpha;

  ProfitBreakdown u{Scenario::uncertain, share * r_star * margin, margin * margin / ((n + 1.0) * (n + 1.0)), 0.0,
                    r_star * margin};
  u.aggregate = u.supplier + n * u.retailer_each;

  ProfitBreakdown det{Scenario::deterministic, share * half * half, half * half / ((n + 1.0) * (n + 1.0)), 0.0,
                      half * half};
  det.aggregate = det.supplier + n * det.retailer_each;
  return {u, det};
}

RealizedProfits realized_profits(double alpha, const MarketConfig& cfg, double r_star) {
  return realized_profits(alpha, cfg.retailers(), r_star);
}

double expected_supplier_profit(const MarketConfig& cfg, double r) {
  const int n = cfg.retailers();
  return static_cast<double>(n) / (n + 1) * r * partial_expectation(cfg.demand(), r);
}

double expected_integrated_profit(const DemandDistribution& d, double r) { return r * partial_expectation(d, r); }

}  // namespace stocournot
