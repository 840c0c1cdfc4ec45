#include "stocournot/errors.hpp"
#include "stocournot/reliability.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace stocournot;
using doctest::Approx;

namespace {
const char* const kFlatMiddle = "empirical:x=0.5;1;10;11,cdf=0;0.9;0.9;1";
}

TEST_CASE("mrl: closed-form examples") {
  const auto e = make_distribution("exponential:scale=2");
  for (double r : {0.0, 1.0, 5.0}) CHECK(mrl(e, r) == Approx(2.0).epsilon(1e-14));

  // m(r) = 2(r + 4)/(r + 2) from survival (1 + r/2) e^{-r/2}.
  const auto g = make_distribution("gamma:shape=2,scale=2");
  CHECK(mrl(g, 2.0) == Approx(3.0).epsilon(1e-14));
  for (double r : {0.1, 1.0, 4.0, 12.0}) CHECK(mrl(g, r) == Approx(2 * (r + 4) / (r + 2)).epsilon(1e-12));

  const auto u = make_distribution("uniform:low=0,high=1");
  CHECK(mrl(u, 0.5) == Approx(0.25).epsilon(1e-15));
  CHECK(mrl(u, 1.0) == 0.0);
  CHECK(mrl(u, 2.0) == 0.0);
  CHECK_THROWS_AS((void)mrl(u, -0.1), DomainError);
}

TEST_CASE("mrl: survival underflow is flagged and treated as past the support") {
  const auto e = make_distribution("exponential:scale=1");
  const auto far = mrl_detail(e, 800.0);
  CHECK(far.survival_underflow);
  CHECK(far.value == 0.0);
  CHECK_FALSE(mrl_detail(e, 10.0).survival_underflow);
}

TEST_CASE("gmrl and hazard: examples and domain errors") {
  const auto e = make_distribution("exponential:scale=2");
  CHECK(gmrl(e, 2.0) == Approx(1.0).epsilon(1e-14));
  CHECK(gmrl(e, 4.0) == Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS((void)gmrl(e, 0.0), DomainError);

  const auto g = make_distribution("gamma:shape=2,scale=2");
  CHECK(gmrl(g, 2.0 * std::sqrt(2.0)) == Approx(1.0).epsilon(1e-13));

  const auto he = hazard_and_gfr(e, 3.0);
  CHECK(he.hazard == Approx(0.5).epsilon(1e-14));
  CHECK(he.gfr == Approx(1.5).epsilon(1e-14));

  const auto u = make_distribution("uniform:low=0,high=1");
  const auto hu = hazard_and_gfr(u, 0.5);
  CHECK(hu.hazard == Approx(2.0));
  CHECK(hu.gfr == Approx(1.0));
  CHECK_THROWS_AS((void)hazard_and_gfr(u, 0.0), DomainError);
  CHECK_THROWS_AS((void)hazard_and_gfr(u, 1.0), DomainError);

  // h = (r e^{-r/2}/4) / ((1 + r/2) e^{-r/2}) = 0.25 at r = 2.
  CHECK(hazard_and_gfr(g, 2.0).hazard == Approx(0.25).epsilon(1e-13));
}

TEST_CASE("mrl times survival is the tail integral") {
  for (const auto& [name, d] : test_support::catalog()) {
    CAPTURE(name);
    const double hi = test_support::far_tail(d);
    const double top = quantile(d, 0.999);
    for (int i = 0; i < 200; ++i) {
      const double r = top * i / 200.0;
      const double tail = test_support::survival_integral(d, r, hi, 4000);
      CHECK(std::abs(mrl(d, r) * survival(d, r) - tail) <= 1e-8);
    }
  }
}

TEST_CASE("exponential mrl is constant") {
  const auto e = make_distribution("exponential:scale=0.7");
  const auto grid = geometric_grid(1e-3, 30.0, 500);
  for (double r : grid) CHECK(std::abs(mrl(e, r) - 0.7) <= 1e-10);
}

TEST_CASE("reliability_curves: derived columns use the same arithmetic") {
  const auto g = make_distribution("gamma:shape=2,scale=2");
  const auto grid = geometric_grid(0.01, 40.0, 300);
  const auto c = reliability_curves(g, grid);
  REQUIRE(c.grid.size() == 300);
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    CHECK(c.mrl[i] >= 0.0);
    CHECK(c.gmrl[i] == c.mrl[i] / c.grid[i]);
    CHECK(c.gmrl[i] == gmrl(g, c.grid[i]));
    CHECK(c.gfr[i] == c.grid[i] * c.hazard[i]);
    // m/r*r returns m up to one rounding.
    CHECK(std::abs(gmrl(g, c.grid[i]) * c.grid[i] - mrl(g, c.grid[i])) <= 2.3e-16 * c.mrl[i]);
  }

  const auto u = make_distribution("uniform:low=0,high=1");
  const std::vector<double> past{0.5, 1.0, 1.5};
  const auto cu = reliability_curves(u, past);
  CHECK(cu.mrl[1] == 0.0);
  CHECK(cu.mrl[2] == 0.0);
  CHECK(std::isnan(cu.hazard[2]));
  CHECK_THROWS_AS((void)reliability_curves(u, std::vector<double>{0.5, 0.4}), InvalidArgument);
}

TEST_CASE("classify: catalog entries are strictly DGMRL") {
  for (const char* s : {"exponential:scale=2", "uniform:low=0,high=1", "gamma:shape=2,scale=2", "weibull:shape=1,scale=2",
                        "weibull:shape=2,scale=1.5", "lognormal:shape=0.5,scale=1"}) {
    CAPTURE(s);
    const auto rep = classify(make_distribution(s), ReliabilityProperty::dgmrl);
    CHECK(rep.verdict == Verdict::strictly_holds);
    CHECK_FALSE(rep.witness.has_value());
    CHECK(rep.slack > 1e-9);
  }
}

TEST_CASE("classify: gamma(2,2) verdict agrees with the derivative sign of e(r)") {
  // e(r) = 2(r + 4)/(r(r + 2)); e'(r) = -2 (r^2 + 8r + 8) / (r^2 (r + 2)^2) < 0.
  const auto g = make_distribution("gamma:shape=2,scale=2");
  for (double r : geometric_grid(1e-3, 50.0, 200)) {
    const double derivative = -2.0 * (r * r + 8 * r + 8) / (r * r * (r + 2) * (r + 2));
    CHECK(derivative < 0.0);
    const double h = 1e-6 * r;
    CHECK((gmrl(g, r + h) - gmrl(g, r - h)) / (2 * h) == Approx(derivative).epsilon(1e-4));
  }
  CHECK(classify(g, ReliabilityProperty::dgmrl).verdict == Verdict::strictly_holds);
}

TEST_CASE("classify: IGFR examples") {
  CHECK(classify(make_distribution("uniform:low=0,high=1"), ReliabilityProperty::igfr).verdict == Verdict::strictly_holds);
  CHECK(classify(make_distribution("gamma:shape=2,scale=2"), ReliabilityProperty::igfr).verdict == Verdict::strictly_holds);
  CHECK(classify(make_distribution("exponential:scale=2"), ReliabilityProperty::igfr).verdict == Verdict::strictly_holds);
  // Weibull with shape < 1 has g(r) = k (r/l)^k, still increasing.
  CHECK(classify(make_distribution("weibull:shape=0.5,scale=1"), ReliabilityProperty::igfr).verdict == Verdict::strictly_holds);
}

TEST_CASE("classify: a flat CDF segment breaks DGMRL with a witness") {
  const auto d = make_distribution(kFlatMiddle);
  const auto rep = classify(d, ReliabilityProperty::dgmrl, 64);
  CHECK(rep.verdict == Verdict::fails);
  REQUIRE(rep.witness.has_value());
  const auto [a, b] = *rep.witness;
  CHECK(a < b);
  CHECK(gmrl(d, b) > gmrl(d, a));
  CHECK(rep.slack < -1e-9);
}

TEST_CASE("classify: weak monotonicity is 'holds', not 'strictly-holds'") {
  // On a grid this narrow e(r) moves by ~1e-13 between points, below the strictness threshold.
  ClassifyOptions opt;
  opt.grid_size = 16;
  opt.lower = 5.0;
  opt.upper = 5.0 * (1 + 1e-12);
  const auto rep = classify(make_distribution("exponential:scale=2"), ReliabilityProperty::dgmrl, opt);
  CHECK(rep.verdict == Verdict::holds);
  CHECK_FALSE(rep.witness.has_value());
  CHECK_THROWS_AS((void)classify(make_distribution("exponential:scale=2"), ReliabilityProperty::dgmrl, 8), InvalidArgument);
}

TEST_CASE("classify: verdicts are invariant under rescaling demand") {
  std::vector<DemandDistribution> dists;
  for (const auto& nd : test_support::catalog()) dists.push_back(nd.dist);
  dists.push_back(make_distribution(kFlatMiddle));
  for (const auto& d : dists) {
    for (auto prop : {ReliabilityProperty::dgmrl, ReliabilityProperty::igfr}) {
      const auto base = classify(d, prop, 128).verdict;
      for (double c : {0.5, 2.0, 10.0}) {
        CAPTURE(c);
        CHECK(classify(scaled(d, c), prop, 128).verdict == base);
      }
    }
  }
}
