#pragma once

// Shared fixtures and independent numeric oracles for the unit tests.

#include "stocournot/demand.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace test_support {

struct NamedDistribution {
  std::string spec;
  stocournot::DemandDistribution dist;
};

inline std::vector<NamedDistribution> catalog() {
  std::vector<NamedDistribution> out;
  for (const char* s : {"uniform:low=0,high=1", "uniform:low=1,high=3", "exponential:scale=2", "weibull:shape=1,scale=2",
                        "weibull:shape=2,scale=1.5", "gamma:shape=2,scale=2", "gamma:shape=3.5,scale=0.5",
                        "lognormal:shape=0.5,scale=1"}) {
    out.push_back({s, stocournot::make_distribution(s)});
  }
  return out;
}

/// Composite Simpson rule with `panels` panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 20000) {
  if (!(b > a)) return 0.0;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Integral of the survival function over [a, b] by Simpson, using only eval_point.
/// Splits at the support ends, where the survival function has kinks.
inline double survival_integral(const stocournot::DemandDistribution& d, double a, double b, int panels = 20000) {
  auto s = [&d](double u) { return stocournot::eval_point(d, u).survival; };
  std::vector<double> cuts{a};
  for (double c : {d.support_low(), d.support_high()}) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += simpson(s, cuts[i], cuts[i + 1], panels);
  return total;
}

/// Upper end for tail integrals: support end, or where the survival is below 1e-16.
inline double far_tail(const stocournot::DemandDistribution& d) {
  if (std::isfinite(d.support_high())) return d.support_high();
  double x = d.mean();
  while (stocournot::eval_point(d, x).survival > 1e-16) x *= 1.5;
  return x;
}

}  // namespace test_support
