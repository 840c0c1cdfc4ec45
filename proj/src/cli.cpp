#include "stocournot/cli.hpp"

#include "stocournot/demand.hpp"
#include "stocournot/efficiency.hpp"
#include "stocournot/equilibrium.hpp"
#include "stocournot/errors.hpp"
#include "stocournot/oracle.hpp"
#include "stocournot/reliability.hpp"
#include "stocournot/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

namespace stocournot::cli {

namespace {

constexpr double kPoaBoundaryOffset = 1e-9;
constexpr double kAutoRangeMultiple = 6.0;

struct Request {
  std::string dist;
  int n = 2;
  std::string n_list;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  std::string alpha_range = "auto";
  std::string metric;
  std::string format;
  std::string output;
  double tolerance = 1e-9;
  std::size_t points = 601;
  std::string property = "both";
  std::size_t grid_size = 256;
  double grid_low = std::numeric_limits<double>::quiet_NaN();
  double grid_high = std::numeric_limits<double>::quiet_NaN();
  bool strict = false;
  bool allow_single_retailer = false;
  std::size_t samples = 1000000;
  std::uint64_t seed = 1;
  std::size_t grid_points = 100000;
  std::string price_range = "auto";
  std::size_t pou_points = 100000;
  double pou_mult = 10.0;
};

struct Outcome {
  ResultDocument doc;
  int exit_code = 0;
  std::string err;
};

int parse_int(std::string_view text) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InvalidArgument(fmt::format("'{}' is not an integer", text));
  }
  return v;
}

double parse_double(std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InvalidArgument(fmt::format("'{}' is not a number", text));
  }
  return v;
}

/// "a..b" inclusive, "a,b,c", or a single integer.
std::vector<int> parse_n_list(std::string_view text) {
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const int a = parse_int(text.substr(0, dots));
    const int b = parse_int(text.substr(dots + 2));
    if (b < a) throw InvalidArgument(fmt::format("empty n-list '{}'", text));
    for (int n = a; n <= b; ++n) out.push_back(n);
    return out;
  }
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_int(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

/// "lo:hi"
Interval parse_range(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InvalidArgument(fmt::format("range '{}' must be 'auto' or lo:hi", text));
  return {parse_double(text.substr(0, colon)), parse_double(text.substr(colon + 1))};
}

unsigned sweep_threads() {
  const char* env = std::getenv("STOCOURNOT_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  const int v = parse_int(env);
  if (v < 1) throw InvalidArgument("STOCOURNOT_THREADS must be a positive integer");
  return static_cast<unsigned>(v);
}

std::string join(const std::vector<std::string>& args) {
  std::string out;
  for (const auto& a : args) {
    if (!out.empty()) out += ' ';
    out += a;
  }
  return out;
}

ResultDocument base_document(const std::string& request, const std::string& command) {
  ResultDocument doc;
  doc.meta("tool", kToolName);
  doc.meta("version", kVersion);
  doc.meta("command", command);
  doc.meta("request", request);
  return doc;
}

std::vector<int> retailer_counts(const Request& req) {
  return req.n_list.empty() ? std::vector<int>{req.n} : parse_n_list(req.n_list);
}

MarketConfig market(const Request& req, int n, const DemandDistribution& d) {
  return MarketConfig(n, d, req.allow_single_retailer);
}

Outcome run_solve(const Request& req, ResultDocument doc) {
  const auto d = make_distribution(req.dist);
  const auto sol = solve_wholesale_price(market(req, req.n, d), req.tolerance);
  if (req.strict && !sol.uniqueness_certified) {
    return {{}, 2, "demand is not certified strictly DGMRL with finite second moment; the fixed point may not be the unique equilibrium"};
  }
  doc.meta("dist", d.spec().to_string());
  doc.meta("r_star", format_number(sol.r_star));
  doc.field("n", req.n);
  doc.field("r_star", sol.r_star);
  doc.field("residual", sol.residual);
  doc.field("iterations", sol.iterations);
  doc.field("bracket", std::vector<Value>{sol.bracket.first, sol.bracket.second});
  doc.field("uniqueness_certified", sol.uniqueness_certified);
  doc.field("mean", d.mean());
  doc.field("second_moment", d.second_moment());
  return {std::move(doc), 0, {}};
}

Outcome run_classify(const Request& req, ResultDocument doc) {
  const auto d = make_distribution(req.dist);
  doc.meta("dist", d.spec().to_string());
  ClassifyOptions options;
  options.grid_size = req.grid_size;
  if (!std::isnan(req.grid_low)) options.lower = req.grid_low;
  if (!std::isnan(req.grid_high)) options.upper = req.grid_high;

  std::vector<ReliabilityProperty> properties;
  if (req.property != "igfr") properties.push_back(ReliabilityProperty::dgmrl);
  if (req.property != "dgmrl") properties.push_back(ReliabilityProperty::igfr);

  doc.columns = {"property", "verdict", "slack", "witness_low", "witness_high", "grid_low", "grid_high", "points"};
  bool dgmrl_strict = false;
  for (auto p : properties) {
    const auto rep = classify(d, p, options);
    if (p == ReliabilityProperty::dgmrl) dgmrl_strict = rep.verdict == Verdict::strictly_holds;
    doc.rows.push_back({to_string(p), to_string(rep.verdict), rep.slack,
                        rep.witness ? Value(rep.witness->first) : Value(), rep.witness ? Value(rep.witness->second) : Value(),
                        rep.grid_low, rep.grid_high, rep.points_evaluated});
  }
  if (req.strict && !dgmrl_strict) {
    return {std::move(doc), 2, "demand distribution is not strictly DGMRL on the classification grid"};
  }
  return {std::move(doc), 0, {}};
}

Outcome run_profits(const Request& req, ResultDocument doc) {
  if (std::isnan(req.alpha)) throw InvalidArgument("profits requires --alpha");
  const auto d = make_distribution(req.dist);
  const auto cfg = market(req, req.n, d);
  const double r_star = solve_wholesale_price(cfg, req.tolerance).r_star;
  const auto cournot = cournot_stage(req.alpha, r_star, req.n);
  const auto profits = realized_profits(req.alpha, cfg, r_star);
  doc.meta("dist", d.spec().to_string());
  doc.meta("r_star", format_number(r_star));
  doc.field("n", req.n);
  doc.field("alpha", req.alpha);
  doc.field("r_star", r_star);
  doc.field("deterministic_price", deterministic_price(req.alpha));
  doc.field("q_individual", cournot.q_individual);
  doc.field("q_total", cournot.q_total);
  doc.field("retail_price", cournot.retail_price);
  doc.columns = {"scenario", "wholesale_price", "supplier", "retailer_each", "aggregate", "integrated"};
  for (const auto& [p, price] : {std::pair{profits.uncertain, r_star}, std::pair{profits.deterministic, deterministic_price(req.alpha)}}) {
    doc.rows.push_back({to_string(p.scenario), price, p.supplier, p.retailer_each, p.aggregate, p.integrated});
  }
  return {std::move(doc), 0, {}};
}

Outcome run_pou(const Request& req, ResultDocument doc) {
  const auto unit = pou_supremum(req.n, 1.0);
  const auto unit_range = pou_exceedance_range(req.n, 1.0);
  doc.field("n", req.n);
  doc.field("bound", unit.value);
  doc.field("argmax_alpha_over_rstar", *unit.argmax_alpha);
  doc.field("range", std::vector<Value>{unit_range.low, unit_range.high});
  doc.field("attainment", to_string(unit.attainment));
  doc.field("distribution_free", unit.distribution_free);
  if (!req.dist.empty()) {
    const auto d = make_distribution(req.dist);
    const double r_star = solve_wholesale_price(market(req, req.n, d), req.tolerance).r_star;
    const auto bound = pou_supremum(req.n, r_star);
    const auto range = pou_exceedance_range(req.n, r_star);
    doc.meta("dist", d.spec().to_string());
    doc.meta("r_star", format_number(r_star));
    doc.field("r_star", r_star);
    doc.field("argmax_alpha", *bound.argmax_alpha);
    doc.field("range_alpha", std::vector<Value>{range.low, range.high});
  }
  return {std::move(doc), 0, {}};
}

Outcome run_poa(const Request& req, ResultDocument doc) {
  if (req.n == 1 && !req.allow_single_retailer) throw InvalidArgument("n = 1 requires --allow-single-retailer");
  const auto bounds = poa_bounds(req.n);
  const double near = 1.0 + kPoaBoundaryOffset;
  doc.field("n", req.n);
  doc.field("stochastic_bound", bounds.stochastic.value);
  doc.field("stochastic_attainment", to_string(bounds.stochastic.attainment));
  doc.field("near_boundary_alpha_over_rstar", near);
  doc.field("stochastic_near_boundary", poa_ratio(near, 1.0, req.n));
  doc.field("deterministic_bound", bounds.deterministic.value);
  doc.field("deterministic_attainment", to_string(bounds.deterministic.attainment));
  if (req.n >= 2) doc.field("deterministic_equals_pou_bound", bounds.deterministic.value == pou_supremum(req.n, 1.0).value);
  if (!req.dist.empty()) {
    const auto d = make_distribution(req.dist);
    const double r_star = solve_wholesale_price(market(req, req.n, d), req.tolerance).r_star;
    doc.meta("dist", d.spec().to_string());
    doc.meta("r_star", format_number(r_star));
    doc.field("r_star", r_star);
    doc.field("near_boundary_alpha", r_star * near);
  }
  return {std::move(doc), 0, {}};
}

Outcome run_sweep(const Request& req, ResultDocument doc, std::string& svg) {
  if (req.metric.empty()) throw InvalidArgument("sweep requires --metric");
  const Metric metric = parse_metric(req.metric);
  const auto d = make_distribution(req.dist);
  const auto ns = retailer_counts(req);
  const double r_star = solve_wholesale_price(market(req, ns.front(), d), req.tolerance).r_star;

  Interval range{};
  if (req.alpha_range == "auto") {
    range = {metric == Metric::poa ? r_star * (1.0 + kPoaBoundaryOffset) : 0.0, kAutoRangeMultiple * r_star};
  } else {
    range = parse_range(req.alpha_range);
  }

  SweepOptions options;
  options.threads = sweep_threads();
  std::vector<RatioCurve> curves;
  for (int n : ns) curves.push_back(sweep(metric, market(req, n, d), r_star, range, req.points, options));

  doc.meta("dist", d.spec().to_string());
  doc.meta("r_star", format_number(r_star));
  doc.meta("metric", std::string(to_string(metric)));
  if (req.format == "svg") {
    svg = emit_svg(curves);
    return {std::move(doc), 0, {}};
  }
  doc.columns = {"metric", "n", "alpha", "alpha_over_rstar", "value"};
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.alphas.size(); ++i) {
      doc.rows.push_back({to_string(metric), c.n, c.alphas[i], c.alphas[i] / r_star, c.values[i]});
    }
  }
  return {std::move(doc), 0, {}};
}

Outcome run_verify(const Request& req, ResultDocument doc) {
  const auto d = make_distribution(req.dist);
  const auto cfg = market(req, req.n, d);
  const double r_star = solve_wholesale_price(cfg, req.tolerance).r_star;
  const Interval prices = req.price_range == "auto" ? Interval{0.05 * r_star, 4.0 * r_star} : parse_range(req.price_range);

  std::vector<OracleReport> reports;
  reports.push_back(grid_argmax_price(cfg, prices.low, prices.high, req.grid_points));
  reports.push_back(mc_expected_profit(cfg, r_star, req.samples, req.seed));
  if (req.n >= 2) reports.push_back(scan_pou_max(req.n, r_star, req.pou_mult, req.pou_points));

  doc.meta("dist", d.spec().to_string());
  doc.meta("r_star", format_number(r_star));
  doc.columns = {"quantity", "method",    "analytic", "oracle", "abs_error", "tolerance", "samples_or_points",
                 "seed",     "std_error", "oracle_argmax", "analytic_argmax", "pass"};
  bool all_pass = true;
  auto opt = [](const std::optional<double>& v) { return v ? Value(*v) : Value(); };
  for (const auto& r : reports) {
    all_pass = all_pass && r.within_tolerance();
    doc.rows.push_back({to_string(r.quantity), to_string(r.method), r.analytic, r.oracle, r.abs_error, r.tolerance,
                        r.samples_or_points, r.seed ? Value(static_cast<std::int64_t>(*r.seed)) : Value(),
                        opt(r.std_error), opt(r.oracle_argmax), opt(r.analytic_argmax), r.within_tolerance()});
  }
  doc.field("all_pass", all_pass);
  if (!all_pass) return {std::move(doc), 2, "an oracle check exceeded its tolerance"};
  return {std::move(doc), 0, {}};
}

void add_format(CLI::App* sub, Request& req, bool allow_svg, const char* default_format) {
  std::vector<std::string> formats{"json", "csv"};
  if (allow_svg) formats.emplace_back("svg");
  sub->add_option("--format", req.format, "Output format")->check(CLI::IsMember(formats))->default_str(default_format);
  sub->add_option("-o,--output", req.output, "Write the document to this file instead of stdout");
}

}  // namespace

CliResult run(const std::vector<std::string>& args) {
  CLI::App app{"Equilibrium pricing and realized efficiency of a supplier / Cournot-retailer market", kToolName};
  app.require_subcommand(1);
  Request req;

  auto* solve = app.add_subcommand("solve", "Solve the supplier's wholesale price r* = m(r*)");
  auto* classify_cmd = app.add_subcommand("classify", "Classify the demand distribution as DGMRL / IGFR");
  auto* profits = app.add_subcommand("profits", "Realized equilibrium profits at a demand level");
  auto* pou = app.add_subcommand("pou", "Realized price of uncertainty bound");
  auto* poa = app.add_subcommand("poa", "Realized price of anarchy bounds");
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep an efficiency ratio over demand levels");
  auto* verify = app.add_subcommand("verify", "Brute-force oracle checks of the analytic results");

  for (auto* sub : {solve, classify_cmd, profits, sweep_cmd, verify}) {
    sub->add_option("--dist", req.dist, "Demand distribution, e.g. gamma:shape=2,scale=2")->required();
  }
  for (auto* sub : {pou, poa}) sub->add_option("--dist", req.dist, "Demand distribution (adds absolute values)");
  for (auto* sub : {solve, profits, pou, poa, verify}) {
    sub->add_option("--n", req.n, "Number of retailers")->capture_default_str();
  }
  for (auto* sub : {solve, profits, pou, poa, sweep_cmd, verify}) {
    sub->add_option("--tol", req.tolerance, "Fixed-point tolerance")->capture_default_str();
    sub->add_flag("--allow-single-retailer", req.allow_single_retailer, "Permit n = 1");
  }
  for (auto* sub : {solve, classify_cmd, profits, pou, poa, verify}) add_format(sub, req, false, "json");
  add_format(sweep_cmd, req, true, "csv");

  solve->add_flag("--strict", req.strict, "Exit 2 unless uniqueness is certified");
  classify_cmd->add_option("--property", req.property, "dgmrl | igfr | both")
      ->check(CLI::IsMember({"dgmrl", "igfr", "both"}))
      ->capture_default_str();
  classify_cmd->add_option("--grid-size", req.grid_size, "Classification grid points")->capture_default_str();
  classify_cmd->add_option("--grid-low", req.grid_low, "Lower grid bound (default quantile 1e-6)");
  classify_cmd->add_option("--grid-high", req.grid_high, "Upper grid bound (default quantile 1-1e-6)");
  classify_cmd->add_flag("--strict", req.strict, "Exit 2 unless strictly DGMRL");
  profits->add_option("--alpha", req.alpha, "Realized demand level")->required();

  sweep_cmd->add_option("--metric", req.metric, "pou | poa | supplier-ratio | retailer-ratio")->required();
  auto* n_opt = sweep_cmd->add_option("--n", req.n, "Number of retailers");
  sweep_cmd->add_option("--n-list", req.n_list, "Retailer counts: a..b, a,b,c or a")->excludes(n_opt);
  sweep_cmd->add_option("--alpha-range", req.alpha_range, "auto or lo:hi")->capture_default_str();
  sweep_cmd->add_option("--points", req.points, "Grid points per curve")->capture_default_str();

  verify->add_option("--samples", req.samples, "Monte-Carlo samples")->capture_default_str();
  verify->add_option("--seed", req.seed, "Monte-Carlo seed")->capture_default_str();
  verify->add_option("--grid-points", req.grid_points, "Price grid points")->capture_default_str();
  verify->add_option("--price-range", req.price_range, "auto or lo:hi")->capture_default_str();
  verify->add_option("--pou-points", req.pou_points, "PoU scan points")->capture_default_str();
  verify->add_option("--pou-mult", req.pou_mult, "PoU scan upper end in units of r*")->capture_default_str();

  CliResult result;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    const int code = app.exit(e, out, err);
    result.exit_code = code == 0 ? 0 : 1;
    result.out = out.str();
    result.err = err.str();
    return result;
  }

  const std::string request = join(args);
  CLI::App* active = app.get_subcommands().front();
  const std::string command = active->get_name();
  if (req.format.empty()) req.format = active == sweep_cmd ? "csv" : "json";
  std::string svg;
  try {
    Outcome outcome;
    ResultDocument doc = base_document(request, command);
    if (active == solve) outcome = run_solve(req, std::move(doc));
    else if (active == classify_cmd) outcome = run_classify(req, std::move(doc));
    else if (active == profits) outcome = run_profits(req, std::move(doc));
    else if (active == pou) outcome = run_pou(req, std::move(doc));
    else if (active == poa) outcome = run_poa(req, std::move(doc));
    else if (active == sweep_cmd) outcome = run_sweep(req, std::move(doc), svg);
    else outcome = run_verify(req, std::move(doc));

    result.exit_code = outcome.exit_code;
    if (!outcome.err.empty()) result.err = outcome.err + "\n";
    if (outcome.exit_code == 0 || !outcome.doc.metadata.empty()) {
      const std::string bytes = !svg.empty() ? svg
                                : req.format == "csv" ? emit_csv(outcome.doc)
                                                      : emit_json(outcome.doc);
      if (req.output.empty()) {
        result.out = bytes;
      } else {
        std::ofstream file(req.output, std::ios::binary);
        if (!file || !(file << bytes)) throw InvalidArgument(fmt::format("cannot write '{}'", req.output));
      }
    }
  } catch (const InvalidArgument& e) {
    result.exit_code = 1;
    result.out.clear();
    result.err = fmt::format("error: {}\n{}", e.what(), active->help());
  } catch (const std::exception& e) {
    result.exit_code = 2;
    result.out.clear();
    result.err = fmt::format("error: {}\n", e.what());
  }
  return result;
}

}  // namespace stocournot::cli
