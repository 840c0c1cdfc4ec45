#include "stocournot/reliability.hpp"

#include "stocournot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace stocournot {

namespace {

constexpr double kSurvivalFloor = 1e-300;
constexpr std::size_t kRefinementPoints = 9;

double curve_value(const DemandDistribution& d, ReliabilityProperty property, double r) {
  return property == ReliabilityProperty::dgmrl ? gmrl(d, r) : hazard_and_gfr(d, r).gfr;
}

// Monotonicity margin between consecutive values: positive when the property holds.
double margin(ReliabilityProperty property, double left, double right) {
  return property == ReliabilityProperty::dgmrl ? left - right : right - left;
}

}  // namespace

MrlValue mrl_detail(const DemandDistribution& d, double r) {
  if (!(r >= 0.0)) throw DomainError(fmt::format("mean residual life needs r >= 0, got {}", r));
  if (r >= d.support_high()) return {0.0, false};
  const double s = survival(d, r);
  if (s < kSurvivalFloor) return {0.0, true};
  return {std::max(0.0, partial_expectation(d, r) / s), false};
}

double mrl(const DemandDistribution& d, double r) { return mrl_detail(d, r).value; }

double gmrl(const DemandDistribution& d, double r) {
  if (!(r > 0.0)) throw DomainError(fmt::format("generalized mean residual life is defined for r > 0, got {}", r));
  return mrl(d, r) / r;
}

HazardGfr hazard_and_gfr(const DemandDistribution& d, double r) {
  if (!(r > d.support_low() && r < d.support_high())) {
    throw DomainError(fmt::format("hazard rate needs r inside the open support ({}, {}), got {}", d.support_low(),
                                  d.support_high(), r));
  }
  const PointEval pe = eval_point(d, r);
  if (!(pe.survival > 0.0)) throw DomainError(fmt::format("survival underflow at r = {}", r));
  const double hazard = pe.pdf / pe.survival;
  return {hazard, r * hazard};
}

ReliabilityCurves reliability_curves(const DemandDistribution& d, std::span<const double> grid) {
  ReliabilityCurves c;
  c.grid.assign(grid.begin(), grid.end());
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    const double r = c.grid[i];
    if (!(r > 0.0) || (i > 0 && !(r > c.grid[i - 1]))) {
      throw InvalidArgument("reliability grid must be positive and strictly increasing");
    }
    const double m = mrl(d, r);
    c.mrl.push_back(m);
    c.gmrl.push_back(m / r);
    if (r > d.support_low() && r < d.support_high() && survival(d, r) > 0.0) {
      const double h = hazard_and_gfr(d, r).hazard;
      c.hazard.push_back(h);
      c.gfr.push_back(r * h);
    } else {
      c.hazard.push_back(std::numeric_limits<double>::quiet_NaN());
      c.gfr.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return c;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0 && hi > lo) || points < 2) {
    throw InvalidArgument(fmt::format("geometric grid needs 0 < lo < hi and at least 2 points, got [{}, {}] x {}",
                                      lo, hi, points));
  }
  std::vector<double> g(points);
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo * std::exp(step * static_cast<double>(i));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::string_view to_string(ReliabilityProperty p) noexcept {
  return p == ReliabilityProperty::dgmrl ? "DGMRL" : "IGFR";
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::strictly_holds: return "strictly-holds";
    case Verdict::fails: return "fails";
  }
  return "unknown";
}

ClassificationReport classify(const DemandDistribution& d, ReliabilityProperty property,
                              const ClassifyOptions& options) {
  if (options.grid_size < 16) throw InvalidArgument("classification grid needs at least 16 points");
  const double lo = options.lower.value_or(quantile(d, 1e-6));
  const double hi = options.upper.value_or(quantile(d, 1.0 - 1e-6));
  const auto grid = geometric_grid(lo, hi, options.grid_size);

  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = curve_value(d, property, grid[i]);

  double slack = std::numeric_limits<double>::infinity();
  std::pair<double, double> worst{grid[0], grid[1]};
  std::size_t worst_index = 0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double m = margin(property, values[i], values[i + 1]);
    if (m < slack) {
      slack = m;
      worst = {grid[i], grid[i + 1]};
      worst_index = i;
    }
  }

  // Refine the tightest interval; sub-margins are part of the certificate.
  const auto fine = geometric_grid(grid[worst_index], grid[worst_index + 1], kRefinementPoints);
  double prev = values[worst_index];
  for (std::size_t j = 1; j < fine.size(); ++j) {
    const double v = j + 1 == fine.size() ? values[worst_index + 1] : curve_value(d, property, fine[j]);
    const double m = margin(property, prev, v);
    if (m < slack) {
      slack = m;
      worst = {fine[j - 1], fine[j]};
    }
    prev = v;
  }

  ClassificationReport report{property, Verdict::holds, std::nullopt, slack, lo, hi,
                              grid.size() + kRefinementPoints - 2};
  if (slack < -options.strictness) {
    report.verdict = Verdict::fails;
    report.witness = worst;
  } else if (slack > options.strictness) {
    report.verdict = Verdict::strictly_holds;
  }
  return report;
}

ClassificationReport classify(const DemandDistribution& d, ReliabilityProperty property, std::size_t grid_size) {
  ClassifyOptions options;
  options.grid_size = grid_size;
  return classify(d, property, options);
}

}  // namespace stocournot
