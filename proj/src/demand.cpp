#include "stocournot/demand.hpp"

#include "stocournot/errors.hpp"
#include "stocournot/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

namespace stocournot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailProbability = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

double parse_decimal(std::string_view text, std::string_view key) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw InvalidArgument(fmt::format("invalid decimal '{}' for key '{}'", text, key));
  }
  return value;
}

void require_positive(double v, std::string_view what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(fmt::format("{} must be a positive finite number, got {}", what, v));
  }
}

double std_normal_survival(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

void validate(const params::Empirical& e) {
  if (e.x.size() < 2 || e.x.size() != e.cdf.size()) {
    throw InvalidArgument("empirical grid needs at least two knots and one cdf value per knot");
  }
  if (e.x.front() < 0.0) throw InvalidArgument("empirical grid must be nonnegative");
  for (std::size_t j = 0; j < e.x.size(); ++j) {
    if (!std::isfinite(e.x[j]) || !std::isfinite(e.cdf[j])) {
      throw InvalidArgument("empirical grid values must be finite");
    }
    if (j > 0 && !(e.x[j] > e.x[j - 1])) {
      throw InvalidArgument("empirical knots must be strictly increasing");
    }
    if (j > 0 && e.cdf[j] < e.cdf[j - 1]) {
      throw InvalidArgument("empirical cdf must be nondecreasing");
    }
  }
  if (e.cdf.front() != 0.0 || e.cdf.back() != 1.0) {
    throw InvalidArgument("empirical cdf must start at 0 and end at 1");
  }
}

// Index j of the segment [x_j, x_{j+1}) containing v; requires x_0 <= v < x_last.
std::size_t segment_of(const std::vector<double>& x, double v) {
  auto it = std::upper_bound(x.begin(), x.end(), v);
  return static_cast<std::size_t>(it - x.begin()) - 1;
}

PointEval eval_empirical(const params::Empirical& e, double x) {
  if (x < e.x.front()) return {0.0, 0.0, 1.0};
  if (x >= e.x.back()) return {0.0, 1.0, 0.0};
  const std::size_t j = segment_of(e.x, x);
  const double width = e.x[j + 1] - e.x[j];
  const double t = (x - e.x[j]) / width;
  const double mass = e.cdf[j + 1] - e.cdf[j];
  const double cdf = e.cdf[j] + t * mass;
  const double survival = (1.0 - e.cdf[j]) - t * mass;
  return {mass / width, cdf, survival};
}

// Integral of the piecewise-linear survival over [r, inf).
double empirical_tail(const params::Empirical& e, double r) {
  double total = 0.0;
  if (r < e.x.front()) {
    total += e.x.front() - r;
    r = e.x.front();
  }
  if (r >= e.x.back()) return total;
  const std::size_t j0 = segment_of(e.x, r);
  for (std::size_t j = j0; j + 1 < e.x.size(); ++j) {
    const double a = std::max(r, e.x[j]);
    const double b = e.x[j + 1];
    const double sa = eval_empirical(e, a).survival;
    const double sb = 1.0 - e.cdf[j + 1];
    total += 0.5 * (b - a) * (sa + sb);
  }
  return total;
}

double bisect_quantile(const DemandDistribution& d, double p) {
  double lo = d.support_low();
  double hi = std::isfinite(d.support_high()) ? d.support_high() : std::max(1.0, d.mean());
  while (eval_point(d, hi).cdf < p) hi *= 2.0;
  for (int i = 0; i < 400 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (eval_point(d, mid).cdf < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string_view to_string(DistributionKind kind) noexcept {
  switch (kind) {
    case DistributionKind::uniform: return "uniform";
    case DistributionKind::exponential: return "exponential";
    case DistributionKind::weibull: return "weibull";
    case DistributionKind::gamma: return "gamma";
    case DistributionKind::lognormal: return "lognormal";
    case DistributionKind::empirical: return "empirical";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// DistributionSpec

DistributionSpec DistributionSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw InvalidArgument(fmt::format("distribution spec '{}' must look like name:key=value,...", text));
  }
  DistributionSpec spec;
  spec.name = std::string(text.substr(0, colon));
  std::string_view rest = text.substr(colon + 1);
  if (rest.empty()) throw InvalidArgument(fmt::format("distribution spec '{}' has no parameters", text));

  while (true) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw InvalidArgument(fmt::format("malformed parameter '{}' in '{}'", item, text));
    }
    std::string key(item.substr(0, eq));
    for (const auto& [existing, _] : spec.params) {
      if (existing == key) throw InvalidArgument(fmt::format("duplicate key '{}' in '{}'", key, text));
    }
    std::vector<double> values;
    std::string_view list = item.substr(eq + 1);
    while (true) {
      const auto semi = list.find(';');
      values.push_back(parse_decimal(list.substr(0, semi), key));
      if (semi == std::string_view::npos) break;
      list = list.substr(semi + 1);
    }
    spec.params.emplace_back(std::move(key), std::move(values));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return spec;
}

std::string DistributionSpec::to_string() const {
  std::string out = name;
  out += ':';
  bool first_param = true;
  for (const auto& [key, values] : params) {
    if (!first_param) out += ',';
    first_param = false;
    out += key;
    out += '=';
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i > 0) out += ';';
      out += format_number(values[i]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// DemandDistribution

DemandDistribution::DemandDistribution(DistributionParams p) : params_(std::move(p)) {
  std::visit(
      Overloaded{
          [this](const params::Uniform& u) {
            if (!std::isfinite(u.low) || !std::isfinite(u.high) || u.low < 0.0) {
              throw InvalidArgument("uniform bounds must be finite and nonnegative");
            }
            if (!(u.high > u.low)) {
              throw InvalidArgument("uniform requires low < high (degenerate demand is not a distribution)");
            }
            support_low_ = u.low;
            support_high_ = u.high;
            mean_ = 0.5 * (u.low + u.high);
            second_moment_ = (u.low * u.low + u.low * u.high + u.high * u.high) / 3.0;
          },
          [this](const params::Exponential& e) {
            require_positive(e.scale, "exponential scale");
            support_high_ = kInf;
            mean_ = e.scale;
            second_moment_ = 2.0 * e.scale * e.scale;
          },
          [this](const params::Weibull& w) {
            require_positive(w.shape, "weibull shape");
            require_positive(w.scale, "weibull scale");
            support_high_ = kInf;
            mean_ = w.scale * boost::math::tgamma(1.0 + 1.0 / w.shape);
            second_moment_ = w.scale * w.scale * boost::math::tgamma(1.0 + 2.0 / w.shape);
          },
          [this](const params::Gamma& g) {
            require_positive(g.shape, "gamma shape");
            require_positive(g.scale, "gamma scale");
            support_high_ = kInf;
            mean_ = g.shape * g.scale;
            second_moment_ = g.shape * (g.shape + 1.0) * g.scale * g.scale;
          },
          [this](const params::Lognormal& l) {
            require_positive(l.shape, "lognormal shape");
            require_positive(l.scale, "lognormal scale");
            const double mu = std::log(l.scale);
            const double s2 = l.shape * l.shape;
            support_high_ = kInf;
            mean_ = std::exp(mu + 0.5 * s2);
            second_moment_ = std::exp(2.0 * mu + 2.0 * s2);
          },
          [this](const params::Empirical& e) {
            validate(e);
            std::size_t lo = 0;
            while (e.cdf[lo + 1] == 0.0) ++lo;
            std::size_t hi = e.x.size() - 1;
            while (e.cdf[hi - 1] == 1.0) --hi;
            support_low_ = e.x[lo];
            support_high_ = e.x[hi];
            mean_ = empirical_tail(e, 0.0);
            double m2 = 0.0;
            for (std::size_t j = 0; j + 1 < e.x.size(); ++j) {
              const double a = e.x[j];
              const double b = e.x[j + 1];
              m2 += (e.cdf[j + 1] - e.cdf[j]) * (a * a + a * b + b * b) / 3.0;
            }
            second_moment_ = m2;
          },
      },
      params_);
}

DemandDistribution DemandDistribution::uniform(double low, double high) {
  return DemandDistribution(params::Uniform{low, high});
}
DemandDistribution DemandDistribution::exponential(double scale) {
  return DemandDistribution(params::Exponential{scale});
}
DemandDistribution DemandDistribution::weibull(double shape, double scale) {
  return DemandDistribution(params::Weibull{shape, scale});
}
DemandDistribution DemandDistribution::gamma(double shape, double scale) {
  return DemandDistribution(params::Gamma{shape, scale});
}
DemandDistribution DemandDistribution::lognormal(double shape, double scale) {
  return DemandDistribution(params::Lognormal{shape, scale});
}
DemandDistribution DemandDistribution::empirical(std::vector<double> x, std::vector<double> cdf) {
  return DemandDistribution(params::Empirical{std::move(x), std::move(cdf)});
}

DistributionKind DemandDistribution::kind() const noexcept {
  return static_cast<DistributionKind>(params_.index());
}

DistributionSpec DemandDistribution::spec() const {
  DistributionSpec s;
  s.name = std::string(to_string(kind()));
  std::visit(Overloaded{
                 [&](const params::Uniform& u) { s.params = {{"low", {u.low}}, {"high", {u.high}}}; },
                 [&](const params::Exponential& e) { s.params = {{"scale", {e.scale}}}; },
                 [&](const params::Weibull& w) { s.params = {{"shape", {w.shape}}, {"scale", {w.scale}}}; },
                 [&](const params::Gamma& g) { s.params = {{"shape", {g.shape}}, {"scale", {g.scale}}}; },
                 [&](const params::Lognormal& l) { s.params = {{"shape", {l.shape}}, {"scale", {l.scale}}}; },
                 [&](const params::Empirical& e) { s.params = {{"x", e.x}, {"cdf", e.cdf}}; },
             },
             params_);
  return s;
}

DemandDistribution make_distribution(const DistributionSpec& spec) {
  std::vector<bool> used(spec.params.size(), false);
  auto vector_of = [&](std::string_view key) -> const std::vector<double>& {
    for (std::size_t i = 0; i < spec.params.size(); ++i) {
      if (spec.params[i].first == key) {
        used[i] = true;
        return spec.params[i].second;
      }
    }
    throw InvalidArgument(fmt::format("'{}' requires parameter '{}'", spec.name, key));
  };
  auto scalar = [&](std::string_view key) {
    const auto& v = vector_of(key);
    if (v.size() != 1) throw InvalidArgument(fmt::format("parameter '{}' takes a single value", key));
    return v.front();
  };

  DistributionParams p;
  if (spec.name == "uniform") {
    p = params::Uniform{scalar("low"), scalar("high")};
  } else if (spec.name == "exponential") {
    p = params::Exponential{scalar("scale")};
  } else if (spec.name == "weibull") {
    p = params::Weibull{scalar("shape"), scalar("scale")};
  } else if (spec.name == "gamma") {
    p = params::Gamma{scalar("shape"), scalar("scale")};
  } else if (spec.name == "lognormal") {
    p = params::Lognormal{scalar("shape"), scalar("scale")};
  } else if (spec.name == "empirical") {
    p = params::Empirical{vector_of("x"), vector_of("cdf")};
  } else {
    throw InvalidArgument(fmt::format("unknown distribution kind '{}'", spec.name));
  }
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (!used[i]) {
      throw InvalidArgument(fmt::format("unknown parameter '{}' for '{}'", spec.params[i].first, spec.name));
    }
  }
  return DemandDistribution(std::move(p));
}

DemandDistribution make_distribution(std::string_view spec_text) {
  return make_distribution(DistributionSpec::parse(spec_text));
}

DemandDistribution scaled(const DemandDistribution& d, double c) {
  require_positive(c, "scale factor");
  return std::visit(
      Overloaded{
          [c](const params::Uniform& u) { return DemandDistribution::uniform(c * u.low, c * u.high); },
          [c](const params::Exponential& e) { return DemandDistribution::exponential(c * e.scale); },
          [c](const params::Weibull& w) { return DemandDistribution::weibull(w.shape, c * w.scale); },
          [c](const params::Gamma& g) { return DemandDistribution::gamma(g.shape, c * g.scale); },
          [c](const params::Lognormal& l) { return DemandDistribution::lognormal(l.shape, c * l.scale); },
          [c](const params::Empirical& e) {
            std::vector<double> x = e.x;
            for (double& v : x) v *= c;
            return DemandDistribution::empirical(std::move(x), e.cdf);
          },
      },
      d.params());
}

// ---------------------------------------------------------------------------
// Point evaluation

PointEval eval_point(const DemandDistribution& d, double x) {
  return std::visit(
      Overloaded{
          [x](const params::Uniform& u) -> PointEval {
            if (x < u.low) return {0.0, 0.0, 1.0};
            if (x >= u.high) return {0.0, 1.0, 0.0};
            const double w = u.high - u.low;
            return {1.0 / w, (x - u.low) / w, (u.high - x) / w};
          },
          [x](const params::Exponential& e) -> PointEval {
            if (x < 0.0) return {0.0, 0.0, 1.0};
            const double s = std::exp(-x / e.scale);
            return {s / e.scale, -std::expm1(-x / e.scale), s};
          },
          [x](const params::Weibull& w) -> PointEval {
            if (x < 0.0) return {0.0, 0.0, 1.0};
            if (x == 0.0) {
              const double pdf = w.shape < 1.0 ? kInf : (w.shape == 1.0 ? 1.0 / w.scale : 0.0);
              return {pdf, 0.0, 1.0};
            }
            const double z = std::pow(x / w.scale, w.shape);
            const double s = std::exp(-z);
            return {w.shape / x * z * s, -std::expm1(-z), s};
          },
          [x](const params::Gamma& g) -> PointEval {
            if (x < 0.0) return {0.0, 0.0, 1.0};
            if (x == 0.0) {
              const double pdf = g.shape < 1.0 ? kInf : (g.shape == 1.0 ? 1.0 / g.scale : 0.0);
              return {pdf, 0.0, 1.0};
            }
            const double z = x / g.scale;
            return {boost::math::gamma_p_derivative(g.shape, z) / g.scale, boost::math::gamma_p(g.shape, z),
                    boost::math::gamma_q(g.shape, z)};
          },
          [x](const params::Lognormal& l) -> PointEval {
            if (x <= 0.0) return {0.0, 0.0, 1.0};
            const double z = (std::log(x) - std::log(l.scale)) / l.shape;
            const double pdf = std::exp(-0.5 * z * z) / (x * l.shape * std::sqrt(2.0 * std::numbers::pi));
            return {pdf, std_normal_cdf(z), std_normal_survival(z)};
          },
          [x](const params::Empirical& e) { return eval_empirical(e, x); },
      },
      d.params());
}

// ---------------------------------------------------------------------------
// Integrals

double tail_cutoff(const DemandDistribution& d) {
  if (std::isfinite(d.support_high())) return d.support_high();
  return quantile(d, 1.0 - kTailProbability);
}

double integrate_survival(const DemandDistribution& d, double a, double b) {
  b = std::min(b, tail_cutoff(d));
  if (!(b > a)) return 0.0;

  // Kinks of the survival function, integrated piecewise.
  std::vector<double> breaks{a};
  auto add_break = [&](double v) {
    if (v > a && v < b) breaks.push_back(v);
  };
  add_break(d.support_low());
  if (const auto* e = std::get_if<params::Empirical>(&d.params())) {
    for (double v : e->x) add_break(v);
  }
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  auto f = [&d](double u) { return survival(d, u); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, breaks[i], breaks[i + 1], 20,
                                                                          1e-12);
  }
  if (!std::isfinite(total)) throw Error("integral of the survival function is not finite (non-finite mean)");
  return total;
}

double partial_expectation(const DemandDistribution& d, double r, Integration method) {
  if (!(r >= 0.0) || std::isnan(r)) throw DomainError(fmt::format("partial expectation needs r >= 0, got {}", r));
  if (r >= d.support_high()) return 0.0;
  if (method == Integration::quadrature) return integrate_survival(d, r, kInf);

  return std::visit(
      Overloaded{
          [&](const params::Uniform& u) {
            if (r <= u.low) return d.mean() - r;
            return (u.high - r) * (u.high - r) / (2.0 * (u.high - u.low));
          },
          [&](const params::Exponential& e) { return e.scale * std::exp(-r / e.scale); },
          [&](const params::Weibull& w) {
            const double z = std::pow(r / w.scale, w.shape);
            return d.mean() * boost::math::gamma_q(1.0 / w.shape, z);
          },
          [&](const params::Gamma& g) {
            if (r == 0.0) return d.mean();
            const double z = r / g.scale;
            return d.mean() * boost::math::gamma_q(g.shape + 1.0, z) - r * boost::math::gamma_q(g.shape, z);
          },
          [&](const params::Lognormal& l) {
            if (r == 0.0) return d.mean();
            const double d1 = (std::log(l.scale) + l.shape * l.shape - std::log(r)) / l.shape;
            return d.mean() * std_normal_cdf(d1) - r * std_normal_cdf(d1 - l.shape);
          },
          [&](const params::Empirical& e) { return empirical_tail(e, r); },
      },
      d.params());
}

// ---------------------------------------------------------------------------
// Quantiles and sampling

double quantile(const DemandDistribution& d, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError(fmt::format("quantile needs 0 < p < 1, got {}", p));
  const double q = std::visit(
      Overloaded{
          [p](const params::Uniform& u) { return u.low + p * (u.high - u.low); },
          [p](const params::Exponential& e) { return -e.scale * std::log1p(-p); },
          [p](const params::Weibull& w) { return w.scale * std::pow(-std::log1p(-p), 1.0 / w.shape); },
          [p](const params::Gamma& g) { return g.scale * boost::math::gamma_p_inv(g.shape, p); },
          [p](const params::Lognormal& l) {
            const double z = -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
            return l.scale * std::exp(l.shape * z);
          },
          [p](const params::Empirical& e) {
            const auto it = std::lower_bound(e.cdf.begin(), e.cdf.end(), p);
            const auto i = static_cast<std::size_t>(it - e.cdf.begin());
            const double t = (p - e.cdf[i - 1]) / (e.cdf[i] - e.cdf[i - 1]);
            return e.x[i - 1] + t * (e.x[i] - e.x[i - 1]);
          },
      },
      d.params());
  if (std::isfinite(q)) return q;
  return bisect_quantile(d, p);
}

std::vector<double> sample(const DemandDistribution& d, std::uint64_t seed, std::size_t k) {
  const CounterRng rng(seed);
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = quantile(d, rng.uniform(i));
  return out;
}

}  // namespace stocournot
