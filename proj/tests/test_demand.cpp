#include "stocournot/demand.hpp"
#include "stocournot/errors.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

using namespace stocournot;
using doctest::Approx;

TEST_CASE("make_distribution: catalog moments and support") {
  const auto u = make_distribution("uniform:low=0,high=1");
  CHECK(u.kind() == DistributionKind::uniform);
  CHECK(u.mean() == 0.5);
  CHECK(u.support_low() == 0.0);
  CHECK(u.support_high() == 1.0);

  const auto g = make_distribution("gamma:shape=2,scale=2");
  CHECK(g.mean() == Approx(4.0).epsilon(1e-15));
  CHECK(g.second_moment() == Approx(24.0).epsilon(1e-15));
  CHECK(std::isinf(g.support_high()));

  const auto w = make_distribution("weibull:shape=1,scale=2");
  const auto e = make_distribution("exponential:scale=2");
  CHECK(w.mean() == Approx(2.0).epsilon(1e-14));
  CHECK(w.mean() == Approx(e.mean()).epsilon(1e-14));
  CHECK(w.second_moment() == Approx(8.0).epsilon(1e-14));
  for (double x : {0.1, 1.0, 2.0, 7.5}) {
    CHECK(eval_point(w, x).survival == Approx(eval_point(e, x).survival).epsilon(1e-14));
    CHECK(partial_expectation(w, x) == Approx(partial_expectation(e, x)).epsilon(1e-12));
  }

  const auto ln = make_distribution("lognormal:shape=0.5,scale=1");
  CHECK(ln.mean() == Approx(std::exp(0.125)).epsilon(1e-15));
}

TEST_CASE("make_distribution: rejects malformed and invalid specs") {
  CHECK_THROWS_AS((void)make_distribution("cauchy:scale=1"), InvalidArgument);
  CHECK_THROWS_AS((void)make_distribution("gamma:shape=0,scale=2"), InvalidArgument);
  CHECK_THROWS_AS((void)make_distribution("gamma:shape=2,scale=-1"), InvalidArgument);
  CHECK_THROWS_AS((void)make_distribution("exponential:scale=abc"), InvalidArgument);
  CHECK_THROWS_AS((void)make_distribution("exponential:rate=2"), InvalidArgument);
  CHECK_THROWS_AS((void)make_distribution("exponential:scale=2,scale=3"), InvalidArgument);
  CHECK_THROWS_AS((void)make_distribution("gamma:shape=2"), InvalidArgument);
  CHECK_THROWS_AS((void)make_distribution("gamma"), InvalidArgument);
  CHECK_THROWS_AS((void)make_distribution("gamma:"), InvalidArgument);
  CHECK_THROWS_AS((void)make_distribution("gamma:shape=2,"), InvalidArgument);
  CHECK_THROWS_AS((void)make_distribution("uniform:low=1,high=1"), InvalidArgument);
  CHECK_THROWS_AS((void)make_distribution("uniform:low=-1,high=1"), InvalidArgument);
  CHECK_THROWS_AS((void)make_distribution("empirical:x=0;2;1,cdf=0;0.5;1"), InvalidArgument);
  CHECK_THROWS_AS((void)make_distribution("empirical:x=0;1;2,cdf=0;0.7;0.5"), InvalidArgument);
  CHECK_THROWS_AS((void)make_distribution("empirical:x=0;1;2,cdf=0;0.5;0.9"), InvalidArgument);
  CHECK_THROWS_AS((void)make_distribution("empirical:x=0;1,cdf=0;0.5;1"), InvalidArgument);
}

TEST_CASE("DistributionSpec: canonical form round-trips") {
  const auto spec = DistributionSpec::parse("gamma:shape=2.0,scale=+2");
  CHECK(spec.name == "gamma");
  CHECK(spec.to_string() == "gamma:shape=2,scale=2");
  CHECK(DistributionSpec::parse(spec.to_string()) == spec);

  const auto emp = DistributionSpec::parse("empirical:x=0.5;1;10;11,cdf=0;0.9;0.9;1");
  REQUIRE(emp.params.size() == 2);
  CHECK(emp.params[0].second.size() == 4);
  CHECK(DistributionSpec::parse(emp.to_string()) == emp);

  // Property: random positive parameters survive formatting and parsing bit for bit.
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> pick(1e-3, 1e3);
  for (int i = 0; i < 200; ++i) {
    const auto d = DemandDistribution::gamma(pick(gen), pick(gen));
    const auto text = d.spec().to_string();
    const auto back = make_distribution(text);
    CHECK(back.spec() == d.spec());
    CHECK(back.mean() == d.mean());
  }
}

TEST_CASE("eval_point: examples and edge of support") {
  const auto e = make_distribution("exponential:scale=2");
  CHECK(eval_point(e, 2.0).survival == Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(eval_point(e, 2.0).survival == Approx(0.367879).epsilon(1e-6));

  const auto g = make_distribution("gamma:shape=2,scale=2");
  CHECK(eval_point(g, 0.0).survival == 1.0);
  CHECK(eval_point(g, 0.0).cdf == 0.0);
  CHECK(eval_point(g, -1.0).cdf == 0.0);
  for (double x : {0.5, 2.0, 9.0}) {
    CHECK(eval_point(g, x).survival == Approx((1 + x / 2) * std::exp(-x / 2)).epsilon(1e-14));
    CHECK(eval_point(g, x).pdf == Approx(x * std::exp(-x / 2) / 4).epsilon(1e-14));
  }

  const auto u = make_distribution("uniform:low=0,high=1");
  CHECK(eval_point(u, 0.25).cdf == 0.25);
  CHECK(eval_point(u, 0.25).pdf == 1.0);
  CHECK(eval_point(u, 1.0).survival == 0.0);
  CHECK(eval_point(u, 3.0).survival == 0.0);
}

TEST_CASE("eval_point: survival is the CDF complement and the CDF is monotone") {
  for (const auto& [name, d] : test_support::catalog()) {
    CAPTURE(name);
    const double hi = test_support::far_tail(d);
    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double x = hi * i / 1000.0;
      const auto p = eval_point(d, x);
      CHECK(std::abs(p.survival - (1.0 - p.cdf)) <= 1e-12);
      CHECK(p.pdf >= 0.0);
      CHECK(p.cdf >= prev);
      prev = p.cdf;
    }
  }
}

TEST_CASE("partial_expectation: closed-form examples") {
  const auto e = make_distribution("exponential:scale=2");
  CHECK(partial_expectation(e, 2.0) == Approx(2.0 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(partial_expectation(e, 2.0) == Approx(0.735759).epsilon(1e-6));

  const auto u = make_distribution("uniform:low=0,high=1");
  CHECK(partial_expectation(u, 0.5) == Approx(0.125).epsilon(1e-15));
  CHECK(partial_expectation(u, 1.0) == 0.0);
  CHECK(partial_expectation(u, 5.0) == 0.0);

  const auto g = make_distribution("gamma:shape=2,scale=2");
  CHECK(partial_expectation(g, 0.0) == 4.0);
  for (double r : {0.5, 2.0, 2.8284271247461903, 10.0}) {
    CHECK(partial_expectation(g, r) == Approx((r + 4.0) * std::exp(-r / 2.0)).epsilon(1e-13));
  }

  CHECK_THROWS_AS((void)partial_expectation(g, -1.0), DomainError);
}

TEST_CASE("partial_expectation: closed form, adaptive quadrature and Simpson agree") {
  for (const auto& [name, d] : test_support::catalog()) {
    CAPTURE(name);
    const double hi = test_support::far_tail(d);
    CHECK(std::abs(test_support::survival_integral(d, 0.0, hi) - d.mean()) <= 1e-8 * (1.0 + d.mean()));
    CHECK(partial_expectation(d, 0.0) == Approx(d.mean()).epsilon(1e-12));
    double prev = partial_expectation(d, 0.0);
    for (int i = 1; i <= 40; ++i) {
      const double r = hi * i / 41.0;
      const double closed = partial_expectation(d, r);
      const double quad = partial_expectation(d, r, Integration::quadrature);
      CHECK(std::abs(closed - quad) <= 1e-8 * (1.0 + closed));
      CHECK(closed <= prev);
      const double head = test_support::survival_integral(d, 0.0, r);
      CHECK(std::abs((partial_expectation(d, 0.0) - closed) - head) <= 1e-8);
      prev = closed;
    }
  }
}

TEST_CASE("empirical grid: piecewise-linear CDF") {
  const auto d = make_distribution("empirical:x=0.5;1;10;11,cdf=0;0.9;0.9;1");
  CHECK(d.support_low() == 0.5);
  CHECK(d.support_high() == 11.0);
  CHECK(eval_point(d, 0.75).cdf == Approx(0.45));
  CHECK(eval_point(d, 0.75).pdf == Approx(1.8));
  CHECK(eval_point(d, 5.0).pdf == 0.0);
  CHECK(eval_point(d, 5.0).survival == Approx(0.1));
  // Mean: 0.5 + 0.5 * (1 + 0.1) / 2 + 9 * 0.1 + 1 * 0.05.
  CHECK(d.mean() == Approx(0.5 + 0.275 + 0.9 + 0.05).epsilon(1e-15));
  CHECK(d.second_moment() == Approx(0.9 * (0.25 + 0.5 + 1) / 3 + 0.1 * (100 + 110 + 121) / 3).epsilon(1e-15));
  CHECK(quantile(d, 0.45) == Approx(0.75));
  CHECK(quantile(d, 0.95) == Approx(10.5));
  CHECK(partial_expectation(d, 10.5) == Approx(0.5 * 0.5 * 0.05));
  CHECK(std::abs(partial_expectation(d, 3.0) - test_support::survival_integral(d, 3.0, 11.0)) < 1e-10);
}

TEST_CASE("quantile: examples, inversion and domain") {
  const auto u = make_distribution("uniform:low=0,high=1");
  CHECK(quantile(u, 0.3) == Approx(0.3).epsilon(1e-15));
  const auto e = make_distribution("exponential:scale=2");
  CHECK(quantile(e, 1.0 - std::exp(-1.0)) == Approx(2.0).epsilon(1e-14));
  const auto g = make_distribution("gamma:shape=2,scale=2");
  CHECK(std::abs(eval_point(g, quantile(g, 0.5)).cdf - 0.5) <= 1e-10);

  for (double p : {0.0, 1.0, -0.1, 1.5, std::numeric_limits<double>::quiet_NaN()}) {
    CHECK_THROWS_AS((void)quantile(g, p), DomainError);
  }

  for (const auto& [name, d] : test_support::catalog()) {
    CAPTURE(name);
    for (double p : {1e-6, 0.01, 0.2, 0.5, 0.8, 0.99, 1 - 1e-6}) {
      CHECK(std::abs(eval_point(d, quantile(d, p)).cdf - p) <= 1e-10);
    }
    for (int i = 1; i < 20; ++i) {
      const double x = quantile(d, 0.01) + (quantile(d, 0.99) - quantile(d, 0.01)) * i / 20.0;
      CHECK(std::abs(quantile(d, eval_point(d, x).cdf) - x) <= 1e-8 * (1.0 + x));
    }
  }
}

TEST_CASE("sample: deterministic per seed, mean converges") {
  const auto g = make_distribution("gamma:shape=2,scale=2");
  const auto a = sample(g, 42, 5);
  const auto b = sample(g, 42, 5);
  CHECK(a == b);
  CHECK(sample(g, 43, 5) != a);

  const auto u = sample(make_distribution("uniform:low=0,high=1"), 1, 100000);
  CHECK(std::abs(std::accumulate(u.begin(), u.end(), 0.0) / u.size() - 0.5) < 0.01);
  const auto e = sample(make_distribution("exponential:scale=2"), 1, 100000);
  CHECK(std::abs(std::accumulate(e.begin(), e.end(), 0.0) / e.size() - 2.0) < 0.03);
}

TEST_CASE("scaled: scale family") {
  for (const auto& [name, d] : test_support::catalog()) {
    CAPTURE(name);
    const auto s = scaled(d, 2.5);
    CHECK(s.kind() == d.kind());
    CHECK(s.mean() == Approx(2.5 * d.mean()).epsilon(1e-13));
    CHECK(eval_point(s, 2.5).survival == Approx(eval_point(d, 1.0).survival).epsilon(1e-12));
  }
  CHECK_THROWS_AS((void)scaled(make_distribution("exponential:scale=1"), 0.0), InvalidArgument);
}
