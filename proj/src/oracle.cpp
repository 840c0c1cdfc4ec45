#include "stocournot/oracle.hpp"

#include "stocournot/efficiency.hpp"
#include "stocournot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

namespace stocournot {

namespace {

constexpr std::size_t kPairwiseBlock = 128;
constexpr std::size_t kTailPanels = 1 << 16;
constexpr double kPouValueTolerance = 1e-8;

// Composite Simpson rule for the survival function on [a, b].
double simpson_survival(const DemandDistribution& d, double a, double b, std::size_t panels) {
  if (!(b > a)) return 0.0;
  const double h = (b - a) / static_cast<double>(panels);
  std::vector<double> terms;
  terms.reserve(2 * panels + 1);
  for (std::size_t i = 0; i < panels; ++i) {
    const double x0 = a + h * static_cast<double>(i);
    terms.push_back(eval_point(d, x0).survival);
    terms.push_back(4.0 * eval_point(d, x0 + 0.5 * h).survival);
    terms.push_back(eval_point(d, x0 + h).survival);
  }
  return h / 6.0 * pairwise_sum(terms);
}

}  // namespace

std::string_view to_string(OracleQuantity q) noexcept {
  switch (q) {
    case OracleQuantity::r_star: return "r_star";
    case OracleQuantity::pou_max: return "pou_max";
    case OracleQuantity::expected_profit: return "expected_profit";
  }
  return "unknown";
}

std::string_view to_string(OracleMethod m) noexcept {
  return m == OracleMethod::grid ? "grid" : "monte-carlo";
}

bool OracleReport::within_tolerance() const noexcept {
  if (!(abs_error <= tolerance)) return false;
  if (oracle_argmax && analytic_argmax && argmax_tolerance) {
    return std::abs(*oracle_argmax - *analytic_argmax) <= *argmax_tolerance;
  }
  return true;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= kPairwiseBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

OracleReport grid_argmax_price(const MarketConfig& cfg, double lo, double hi, std::size_t points) {
  if (!(lo >= 0.0 && hi > lo)) throw InvalidArgument(fmt::format("price grid needs 0 <= lo < hi, got [{}, {}]", lo, hi));
  if (points < 1000) throw InvalidArgument("price grid needs at least 1000 points");
  const DemandDistribution& d = cfg.demand();
  const double step = (hi - lo) / static_cast<double>(points - 1);

  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) grid[i] = lo + step * static_cast<double>(i);
  grid.back() = hi;

  // tail[i] = integral of the survival function over [grid[i], inf), accumulated right to left.
  std::vector<double> tail(points);
  tail.back() = simpson_survival(d, hi, std::max(hi, tail_cutoff(d)), kTailPanels);
  for (std::size_t i = points - 1; i-- > 0;) {
    tail[i] = tail[i + 1] + simpson_survival(d, grid[i], grid[i + 1], 1);
  }

  const double share = static_cast<double>(cfg.retailers()) / (cfg.retailers() + 1);
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double profit = share * grid[i] * tail[i];
    if (profit > best_value) {
      best_value = profit;
      best = i;
    }
  }
  if (best == 0 || best + 1 == points) {
    throw SolverError(fmt::format("grid maximum of the expected supplier profit lies on the boundary r = {}; "
                                  "widen the price bracket",
                                  grid[best]));
  }

  const double analytic = solve_wholesale_price(cfg).r_star;
  const double oracle = grid[best];
  return {OracleQuantity::r_star, analytic, oracle, std::abs(analytic - oracle), OracleMethod::grid, points,
          std::nullopt, std::nullopt, step, std::nullopt, std::nullopt, std::nullopt};
}

OracleReport mc_expected_profit(const MarketConfig& cfg, double r, std::size_t samples, std::uint64_t seed) {
  if (samples < 1000) throw InvalidArgument("Monte-Carlo estimate needs at least 1000 samples");
  if (!(r >= 0.0)) throw DomainError(fmt::format("wholesale price must be >= 0, got {}", r));

  std::vector<double> excess = sample(cfg.demand(), seed, samples);
  for (double& a : excess) a = std::max(0.0, a - r);
  const double count = static_cast<double>(samples);
  const double mean = pairwise_sum(excess) / count;
  std::vector<double> sq(samples);
  std::transform(excess.begin(), excess.end(), sq.begin(), [mean](double v) { return (v - mean) * (v - mean); });
  const double sample_sd = std::sqrt(pairwise_sum(sq) / (count - 1.0));

  const double share = static_cast<double>(cfg.retailers()) / (cfg.retailers() + 1);
  const double oracle = share * r * mean;
  const double std_error = share * r * sample_sd / std::sqrt(count);
  const double analytic = expected_supplier_profit(cfg, r);
  return {OracleQuantity::expected_profit, analytic, oracle, std::abs(analytic - oracle), OracleMethod::monte_carlo,
          samples, seed, std_error, 4.0 * std_error, std::nullopt, std::nullopt, std::nullopt};
}

OracleReport scan_pou_max(int n, double r_star, double alpha_hi_mult, std::size_t points) {
  if (!(alpha_hi_mult >= 4.0)) throw InvalidArgument("PoU scan needs alpha_hi_mult >= 4");
  if (points < 10000) throw InvalidArgument("PoU scan needs at least 10^4 points");
  const EfficiencyBound bound = pou_supremum(n, r_star);

  const double step = (alpha_hi_mult - 1.0) * r_star / static_cast<double>(points);
  double best_alpha = r_star;
  double best_value = -1.0;
  std::size_t best = 0;
  for (std::size_t i = 1; i <= points; ++i) {
    const double alpha = i == points ? alpha_hi_mult * r_star : r_star + step * static_cast<double>(i);
    const double v = pou_ratio(alpha, r_star, n);
    if (v > best_value) {
      best_value = v;
      best_alpha = alpha;
      best = i;
    }
  }
  if (best == points) {
    throw SolverError(fmt::format("PoU grid maximum at the upper end {} r*; increase alpha_hi_mult", alpha_hi_mult));
  }
  return {OracleQuantity::pou_max, bound.value, best_value, std::abs(bound.value - best_value), OracleMethod::grid,
          points, std::nullopt, std::nullopt, kPouValueTolerance, best_alpha, bound.argmax_alpha, step};
}

}  // namespace stocournot
