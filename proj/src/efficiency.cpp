#include "stocournot/efficiency.hpp"

#include "stocournot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include <fmt/format.h>

namespace stocournot {

namespace {

constexpr double kPoaBoundaryOffset = 1e-9;

void require_price(double r_star) {
  if (!(r_star > 0.0) || !std::isfinite(r_star)) {
    throw DomainError(fmt::format("equilibrium price must be positive and finite, got {}", r_star));
  }
}

void require_retailers(int n, int minimum) {
  if (n < minimum) throw DomainError(fmt::format("this bound needs n >= {}, got {}", minimum, n));
}

// 1 + 1/(n(n+2)); (n+1)^2 = n(n+2) + 1, so this is also (n+1)^2 / (n(n+2)).
double one_plus_inverse_n_n_plus_2(int n) {
  return 1.0 + 1.0 / (static_cast<double>(n) * static_cast<double>(n + 2));
}

}  // namespace

std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::pou: return "pou";
    case Metric::poa: return "poa";
    case Metric::supplier_ratio: return "supplier-ratio";
    case Metric::retailer_ratio: return "retailer-ratio";
  }
  return "unknown";
}

Metric parse_metric(std::string_view text) {
  for (Metric m : {Metric::pou, Metric::poa, Metric::supplier_ratio, Metric::retailer_ratio}) {
    if (text == to_string(m)) return m;
  }
  throw InvalidArgument(fmt::format("unknown metric '{}' (pou | poa | supplier-ratio | retailer-ratio)", text));
}

std::string_view to_string(BoundMetric m) noexcept {
  switch (m) {
    case BoundMetric::pou: return "pou";
    case BoundMetric::poa: return "poa";
    case BoundMetric::poa_deterministic: return "poa-deterministic";
  }
  return "unknown";
}

std::string_view to_string(Attainment a) noexcept {
  switch (a) {
    case Attainment::at_alpha: return "at-alpha";
    case Attainment::limit_above_rstar: return "limit-alpha-down-to-rstar";
    case Attainment::every_alpha: return "every-alpha";
  }
  return "unknown";
}

double pou_ratio(double alpha, double r_star, int n) {
  require_price(r_star);
  require_retailers(n, 1);
  if (!(alpha >= 0.0)) throw DomainError(fmt::format("demand level must be >= 0, got {}", alpha));
  if (alpha == 0.0) return 0.0;
  const double margin = std::max(0.0, alpha - r_star);
  return 4.0 * margin * (alpha + n * r_star) / ((n + 2) * alpha * alpha);
}

double poa_ratio(double alpha, double r_star, int n) {
  require_price(r_star);
  require_retailers(n, 1);
  if (!(alpha > r_star)) {
    throw DomainError(fmt::format("price of anarchy needs a > r* = {} (a = {} is a stockout: both chains earn 0)",
                                  r_star, alpha));
  }
  const double np1 = n + 1.0;
  return np1 * np1 / (n * (n + alpha / r_star));
}

double supplier_ratio(double alpha, double r_star) {
  require_price(r_star);
  if (!(alpha > 0.0)) throw DomainError(fmt::format("supplier ratio needs a > 0, got {}", alpha));
  const double x = r_star / alpha;
  return 4.0 * x * std::max(0.0, 1.0 - x);
}

double retailer_ratio(double alpha, double r_star) {
  require_price(r_star);
  if (!(alpha > 0.0)) throw DomainError(fmt::format("retailer ratio needs a > 0, got {}", alpha));
  const double keep = std::max(0.0, 1.0 - r_star / alpha);
  return 4.0 * keep * keep;
}

double poa_deterministic_ratio(double alpha, int n) {
  if (!(alpha > 0.0)) throw DomainError(fmt::format("deterministic ratio needs a > 0, got {}", alpha));
  const auto profits = realized_profits(alpha, n, 0.0).deterministic;
  return profits.integrated / profits.aggregate;
}

EfficiencyBound pou_supremum(int n, double r_star) {
  require_retailers(n, 2);
  require_price(r_star);
  return {BoundMetric::pou,
          n,
          one_plus_inverse_n_n_plus_2(n),
          Attainment::at_alpha,
          2.0 * n * r_star / (n - 1),
          true};
}

Interval pou_exceedance_range(int n, double r_star) {
  require_retailers(n, 2);
  require_price(r_star);
  if (n == 2) return {2.0 * r_star, std::numeric_limits<double>::infinity()};
  return {2.0 * r_star, 2.0 * n * r_star / (n - 2)};
}

PoaBounds poa_bounds(int n) {
  require_retailers(n, 1);
  return {
      {BoundMetric::poa, n, 1.0 + 1.0 / n, Attainment::limit_above_rstar, std::nullopt, true},
      {BoundMetric::poa_deterministic, n, one_plus_inverse_n_n_plus_2(n), Attainment::every_alpha, std::nullopt,
       true},
  };
}

double ratio_value(Metric metric, double alpha, double r_star, int n) {
  switch (metric) {
    case Metric::pou: return pou_ratio(alpha, r_star, n);
    case Metric::poa: return poa_ratio(alpha, r_star, n);
    case Metric::supplier_ratio: return alpha == 0.0 ? 0.0 : supplier_ratio(alpha, r_star);
    case Metric::retailer_ratio: return alpha == 0.0 ? 0.0 : retailer_ratio(alpha, r_star);
  }
  throw InvalidArgument("unknown metric");
}

RatioCurve sweep(Metric metric, const MarketConfig& cfg, double r_star, Interval range, std::size_t points,
                 const SweepOptions& options) {
  require_price(r_star);
  if (points < 2) throw InvalidArgument("sweep needs at least 2 points");
  double lo = range.low;
  if (metric == Metric::poa) lo = std::max(lo, r_star * (1.0 + kPoaBoundaryOffset));
  const double hi = range.high;
  if (!(lo >= 0.0) || !std::isfinite(hi) || !(hi > lo)) {
    throw InvalidArgument(fmt::format("empty or invalid demand range [{}, {}]", lo, hi));
  }

  RatioCurve curve{metric, cfg.retailers(), r_star, std::vector<double>(points), std::vector<double>(points)};
  const double width = hi - lo;
  const double last = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) curve.alphas[i] = lo + width * (static_cast<double>(i) / last);
  curve.alphas.back() = hi;

  auto evaluate = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) curve.values[i] = ratio_value(metric, curve.alphas[i], r_star, curve.n);
  };
  const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, points);
  if (workers == 1) {
    evaluate(0, points);
    return curve;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(workers);
  const std::size_t chunk = (points + workers - 1) / workers;
  for (std::size_t w = 0, begin = 0; begin < points; ++w, begin += chunk) {
    pool.emplace_back([&, w, begin] {
      try {
        evaluate(begin, std::min(points, begin + chunk));
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return curve;
}

}  // namespace stocournot
