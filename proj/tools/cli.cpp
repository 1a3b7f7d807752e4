// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "poshrink.h"

namespace poshrink::cli {

namespace {

using Json = nlohmann::ordered_json;

struct ProblemDeleter {
  void operator()(poshrink_problem* p) const { poshrink_problem_free(p); }
};
struct PriorDeleter {
  void operator()(poshrink_prior* p) const { poshrink_prior_free(p); }
};
struct StringDeleter {
  void operator()(char* p) const { poshrink_string_free(p); }
};
using ProblemPtr = std::unique_ptr<poshrink_problem, ProblemDeleter>;
using PriorPtr = std::unique_ptr<poshrink_prior, PriorDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

int exit_code_for(poshrink_status status) {
  switch (status) {
    case POSHRINK_OK:
      return exit_ok;
    case POSHRINK_E_INVALID_ARGUMENT:
    case POSHRINK_E_PARSE:
    case POSHRINK_E_UNSUPPORTED_DIMENSION:
    case POSHRINK_E_COST:
      return exit_invalid;
    case POSHRINK_E_DOMAIN:
    case POSHRINK_E_INTEGRABILITY:
    case POSHRINK_E_SINGULARITY:
      return exit_numerical;
    case POSHRINK_E_IO:
      return exit_io;
    case POSHRINK_E_INTERNAL:
      break;
  }
  return exit_internal;
}

void check(poshrink_status status) {
  if (status != POSHRINK_OK) {
    throw CliError{exit_code_for(status),
                   std::string(poshrink_status_name(status)) + ": " + poshrink_last_error()};
  }
}

std::string take(char* raw) {
  StringPtr owned(raw);
  return owned ? std::string(owned.get()) : std::string();
}

/// NaN and infinities serialize as null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

const char* method_text(poshrink_risk_method m) {
  switch (m) {
    case POSHRINK_EXACT_SUM:
      return "exact_sum";
    case POSHRINK_MONTE_CARLO:
      return "monte_carlo";
    case POSHRINK_HYBRID:
      return "hybrid";
  }
  return "unknown";
}

std::vector<double> broadcast(std::vector<double> v, std::size_t d, const char* flag) {
  if (v.size() == 1 && d > 1) v.assign(d, v[0]);
  if (v.size() != d) {
    throw CliError{exit_invalid, fmt::format("{} has {} entries, expected {}", flag, v.size(), d)};
  }
  return v;
}

std::vector<std::int64_t> parse_counts(const std::string& text, const char* flag) {
  std::vector<std::int64_t> out;
  for (double v : parse_reals(text, flag)) {
    if (v < 0.0 || v != std::floor(v) || v > 9.0e15) {
      throw CliError{exit_invalid, fmt::format("{}: counts must be nonnegative integers", flag)};
    }
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

ProblemPtr make_problem(const std::vector<double>& r, const std::vector<double>& s) {
  poshrink_problem* raw = nullptr;
  check(poshrink_problem_create(r.data(), s.data(), r.size(), &raw));
  return ProblemPtr(raw);
}

PriorPtr make_prior(const std::string& text, std::size_t d, bool checked) {
  poshrink_prior* raw = nullptr;
  check(poshrink_prior_parse(text.c_str(), d, checked ? 1 : 0, &raw));
  return PriorPtr(raw);
}

std::string describe(const poshrink_prior* prior) {
  char* raw = nullptr;
  check(poshrink_prior_describe(prior, &raw));
  return take(raw);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{exit_io, "cannot write '" + path + "'"};
  out << text;
  if (!out) throw CliError{exit_io, "write to '" + path + "' failed"};
}

void emit_json(const Json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

// Shared flag storage; each subcommand binds the subset it accepts.
struct Args {
  std::string prior;
  std::string priors;
  std::string x;
  std::string y;
  std::string lambda;
  std::string r;
  std::string s;
  std::string r_grid;
  std::string grid;
  std::string data;
  std::string emit = "mean";
  std::string out;
  std::size_t n = 0;
  std::size_t inner_n = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int z_max = 5;
  double tol = 1e-6;
  int trunc = 20;
  int experiment = 0;
  bool unchecked = false;
  std::size_t d = 0;
};

poshrink_mc_options mc_options(const Args& a, CLI::App* cmd) {
  poshrink_mc_options opt;
  poshrink_mc_options_default(&opt);
  if (cmd->count("--n") > 0) opt.outer_n = a.n;
  if (cmd->count("--inner-n") > 0) opt.inner_n = a.inner_n;
  if (cmd->count("--seed") > 0) opt.seed = a.seed;
  return opt;
}

Json risk_json(const char* command, const std::string& prior, const std::vector<double>& lambda,
               const std::vector<double>& r, const std::vector<double>& s,
               const poshrink_risk& risk) {
  Json j;
  j["command"] = command;
  j["prior"] = prior;
  j["d"] = lambda.size();
  j["lambda"] = lambda;
  j["r"] = r;
  j["s"] = s;
  j["value"] = risk.infinite ? Json(nullptr) : number(risk.value);
  j["std_error"] = number(risk.std_error);
  j["infinite"] = risk.infinite != 0;
  j["method"] = method_text(risk.method);
  j["n"] = risk.outer_n;
  j["inner_n"] = risk.inner_n;
  j["seed"] = risk.seed;
  return j;
}

int cmd_risk(const Args& a, CLI::App* cmd, bool difference, std::ostream& out) {
  auto lambda = parse_reals(a.lambda, "--lambda");
  auto r = parse_reals(a.r, "--r");
  auto s = parse_reals(a.s, "--s");
  // d is the longest list; single values broadcast.
  const std::size_t d = std::max({lambda.size(), r.size(), s.size()});
  lambda = broadcast(std::move(lambda), d, "--lambda");
  r = broadcast(std::move(r), d, "--r");
  s = broadcast(std::move(s), d, "--s");
  const auto problem = make_problem(r, s);
  const auto prior = make_prior(a.prior, d, !a.unchecked);
  const auto opt = mc_options(a, cmd);
  poshrink_risk risk{};
  if (difference) {
    check(poshrink_risk_reduction(prior.get(), problem.get(), lambda.data(), &opt, &risk));
  } else {
    check(poshrink_risk_eval(prior.get(), problem.get(), lambda.data(), &opt, &risk));
  }
  const char* name = difference ? "risk-diff" : "risk";
  const Json j = risk_json(name, describe(prior.get()), lambda, r, s, risk);
  if (!a.out.empty()) emit_json(j, a.out, out);
  const char* label = difference ? "reduction" : "risk";
  if (risk.infinite) {
    out << fmt::format("{}=inf method={}\n", label, method_text(risk.method));
  } else {
    out << fmt::format("{}={:.7g} se={:.3g} method={}\n", label, risk.value, risk.std_error,
                       method_text(risk.method));
  }
  return exit_ok;
}

int cmd_bounds(const Args& a, std::ostream& out) {
  const auto r = parse_reals(a.r, "--r");
  const auto s = broadcast(parse_reals(a.s, "--s"), r.size(), "--s");
  const auto problem = make_problem(r, s);
  double lower = 0.0, upper = 0.0, ratio = 0.0;
  check(poshrink_bounds(problem.get(), &lower, &upper, &ratio));
  if (!a.out.empty()) {
    Json j;
    j["command"] = "bounds";
    j["d"] = r.size();
    j["r"] = r;
    j["s"] = s;
    j["lower"] = lower;
    j["upper"] = upper;
    j["ratio"] = ratio;
    emit_json(j, a.out, out);
  }
  out << fmt::format("lower={:.8g} upper={:.8g} ratio={:.8g}\n", lower, upper, ratio);
  return exit_ok;
}

int cmd_lemma(const Args& a, std::ostream& out) {
  const auto lambda = parse_reals(a.lambda, "--lambda");
  Json rows = Json::array();
  for (double l : lambda) {
    double L = 0.0, f = 0.0;
    check(poshrink_lemma_L(l, a.trunc, &L));
    check(poshrink_lemma_f(l, &f));
    rows.push_back({{"lambda", l}, {"L", L}, {"f", f}});
    out << fmt::format("lambda={:.8g} L={:.8g} f={:.8g}\n", l, L, f);
  }
  if (!a.out.empty()) {
    Json j;
    j["command"] = "lemma-l";
    j["truncation"] = a.trunc;
    j["values"] = rows;
    emit_json(j, a.out, out);
  }
  return exit_ok;
}

std::vector<std::vector<double>> parse_grid_lists(const std::string& text) {
  std::vector<std::vector<double>> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) grid.push_back(parse_reals(item, "--r-grid"));
  if (grid.empty()) throw CliError{exit_invalid, "--r-grid: empty"};
  return grid;
}

int cmd_check(const Args& a, CLI::App* cmd, std::ostream& out) {
  auto grid = parse_grid_lists(a.r_grid);
  std::size_t d = a.d;
  if (d == 0 && !a.r.empty()) d = parse_reals(a.r, "--r").size();
  if (d == 0) {
    for (const auto& g : grid) d = std::max(d, g.size());
  }
  std::vector<double> flat;
  for (auto& g : grid) {
    g = broadcast(g, d, "--r-grid entry");
    flat.insert(flat.end(), g.begin(), g.end());
  }
  const auto r = broadcast(parse_reals(a.r.empty() ? "1" : a.r, "--r"), d, "--r");
  const auto s = broadcast(parse_reals(a.s.empty() ? "1" : a.s, "--s"), d, "--s");
  const auto problem = make_problem(r, s);
  // Certification reports violations itself, so parsing never rejects here.
  const auto prior = make_prior(a.prior, d, false);
  const auto opt = mc_options(a, cmd);
  int pass = 0;
  char* raw = nullptr;
  check(poshrink_check_fineq(prior.get(), problem.get(), flat.data(), grid.size(), a.z_max,
                             a.tol, &opt, &pass, &raw));
  Json report = Json::parse(take(raw));
  char* cert_raw = nullptr;
  check(poshrink_prior_certify(prior.get(), &cert_raw));
  Json j;
  j["command"] = "check";
  j["d"] = d;
  j["r"] = r;
  j["s"] = s;
  j["report"] = report;
  j["certification"] = Json::parse(take(cert_raw));
  if (!a.out.empty()) emit_json(j, a.out, out);
  out << fmt::format("fineq={} min_lhs={:.6g} min_threshold={:.6g} certified={}\n",
                     pass ? "pass" : "fail", report["min_lhs"].is_number()
                                                 ? report["min_lhs"].get<double>()
                                                 : NAN,
                     report["min_threshold"].is_number() ? report["min_threshold"].get<double>()
                                                         : NAN,
                     j["certification"]["certified"].get<bool>() ? "yes" : "no");
  return exit_ok;
}

int cmd_experiment(const Args& a, CLI::App* cmd, std::ostream& out) {
  std::vector<double> grid;
  if (!a.grid.empty()) {
    const auto g = parse_reals(a.grid, "--grid");
    if (g.size() != 3 || g[2] < 1.0 || g[2] != std::floor(g[2])) {
      throw CliError{exit_invalid, "--grid expects a,b,k with integer k >= 1"};
    }
    const std::size_t k = static_cast<std::size_t>(g[2]);
    if (!(g[0] > 0.0) || !(g[1] >= g[0])) {
      throw CliError{exit_invalid, "--grid needs 0 < a <= b"};
    }
    grid.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      grid[j] = k == 1 ? g[0]
                       : std::exp(std::log(g[0]) + (std::log(g[1]) - std::log(g[0])) *
                                                       static_cast<double>(j) /
                                                       static_cast<double>(k - 1));
    }
    grid.front() = g[0];
    if (k > 1) grid.back() = g[1];
  }
  const auto opt = mc_options(a, cmd);
  char* csv_raw = nullptr;
  char* sidecar_raw = nullptr;
  check(poshrink_experiment(a.experiment, grid.empty() ? nullptr : grid.data(), grid.size(), &opt,
                            &csv_raw, &sidecar_raw));
  const std::string csv = take(csv_raw);
  const std::string sidecar = take(sidecar_raw);
  if (a.out.empty()) {
    out << csv;
    return exit_ok;
  }
  std::error_code ec;
  std::filesystem::create_directories(a.out, ec);
  if (ec) throw CliError{exit_io, "cannot create directory '" + a.out + "': " + ec.message()};
  const std::string stem = (std::filesystem::path(a.out) /
                            fmt::format("experiment{}", a.experiment))
                               .string();
  write_file(stem + ".csv", csv);
  write_file(stem + ".json", sidecar);
  out << fmt::format("wrote {}.csv and {}.json\n", stem, stem);
  return exit_ok;
}

std::vector<std::string> split_priors(const std::string& text) {
  // Top-level ';' separates priors; ';' inside parentheses belongs to a sum.
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ';' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  for (const auto& p : out) {
    if (p.find_first_not_of(" \t") == std::string::npos) {
      throw CliError{exit_invalid, "--priors contains an empty entry"};
    }
  }
  return out;
}

int cmd_evaluate(const Args& a, CLI::App* cmd, std::ostream& out) {
  const CountTable table = ingest_counts(a.data);
  if (!table.y) throw CliError{exit_invalid, a.data + ": evaluate needs a y column"};
  const std::size_t d = table.x.size();
  const auto r = broadcast(parse_reals(a.r, "--r"), d, "--r");
  const auto s = broadcast(parse_reals(a.s, "--s"), d, "--s");
  const auto problem = make_problem(r, s);
  const auto opt = mc_options(a, cmd);
  Json results = Json::array();
  for (const auto& text : split_priors(a.priors)) {
    const auto prior = make_prior(text, d, !a.unchecked);
    poshrink_metrics m{};
    check(poshrink_eval_metrics(prior.get(), problem.get(), table.x.data(), table.y->data(), &opt,
                                &m));
    const std::string name = describe(prior.get());
    Json row;
    row["prior"] = name;
    row["kl_dist"] = m.kl_infinite ? Json(nullptr) : number(m.kl_dist);
    row["kl_infinite"] = m.kl_infinite != 0;
    row["ws_dist"] = number(m.ws_dist);
    row["loglik"] = number(m.loglik);
    row["loglik_se"] = number(m.loglik_se);
    results.push_back(row);
    out << fmt::format("{}: kl_dist={:.6g} ws_dist={:.6g} loglik={:.6g} se={:.3g}\n", name,
                       m.kl_infinite ? INFINITY : m.kl_dist, m.ws_dist, m.loglik, m.loglik_se);
  }
  Json j;
  j["command"] = "evaluate";
  j["data"] = std::filesystem::path(a.data).filename().string();
  j["d"] = d;
  j["skipped_rows"] = table.skipped_rows;
  j["r"] = r;
  j["s"] = s;
  j["seed"] = opt.seed;
  j["inner_n"] = opt.inner_n;
  j["results"] = results;
  if (!a.out.empty()) emit_json(j, a.out, out);
  return exit_ok;
}

int cmd_predict(const Args& a, CLI::App* cmd, std::ostream& out) {
  std::vector<std::int64_t> x;
  std::optional<std::vector<std::int64_t>> y;
  std::vector<std::string> ids;
  std::error_code ec;
  if (std::filesystem::is_regular_file(a.x, ec)) {
    CountTable table = ingest_counts(a.x);
    x = std::move(table.x);
    y = std::move(table.y);
    ids = std::move(table.ids);
  } else {
    x = parse_counts(a.x, "--x");
  }
  if (!a.y.empty()) y = parse_counts(a.y, "--y");
  const std::size_t d = x.size();
  const auto r = broadcast(parse_reals(a.r, "--r"), d, "--r");
  const auto s = broadcast(parse_reals(a.s, "--s"), d, "--s");
  const auto problem = make_problem(r, s);
  const auto prior = make_prior(a.prior, d, !a.unchecked);
  const auto opt = mc_options(a, cmd);

  Json j;
  j["command"] = "predict";
  j["prior"] = describe(prior.get());
  j["d"] = d;
  if (!ids.empty()) j["ids"] = ids;
  j["x"] = x;
  j["r"] = r;
  j["s"] = s;
  j["emit"] = a.emit;
  if (a.emit == "mean") {
    std::vector<double> mean(d);
    check(poshrink_predictive_mean(prior.get(), problem.get(), x.data(), &opt, mean.data()));
    j["mean"] = mean;
    std::string line = "mean=";
    for (std::size_t i = 0; i < d; ++i) line += fmt::format("{}{:.7g}", i ? "," : "", mean[i]);
    out << line << "\n";
  } else if (a.emit == "loglik") {
    if (!y) throw CliError{exit_invalid, "--emit loglik needs y (CSV column or --y)"};
    if (y->size() != d) throw CliError{exit_invalid, "y and x lengths differ"};
    double value = 0.0, se = 0.0;
    check(poshrink_log_predictive(prior.get(), problem.get(), x.data(), y->data(), &opt, &value,
                                  &se));
    j["y"] = *y;
    j["loglik"] = number(value);
    j["std_error"] = number(se);
    out << fmt::format("loglik={:.10g} se={:.3g}\n", value, se);
  } else if (a.emit == "sample") {
    const std::size_t n = cmd->count("--n") > 0 ? a.n : 1000;
    std::vector<std::int64_t> draws(n * d);
    check(poshrink_sample_predictive(prior.get(), problem.get(), x.data(), n, opt.seed,
                                     draws.data()));
    Json samples = Json::array();
    for (std::size_t k = 0; k < n; ++k) {
      samples.push_back(std::vector<std::int64_t>(draws.begin() + static_cast<long>(k * d),
                                                  draws.begin() + static_cast<long>((k + 1) * d)));
    }
    j["n"] = n;
    j["seed"] = opt.seed;
    j["samples"] = samples;
    out << fmt::format("drew {} samples\n", n);
  } else {
    throw CliError{exit_invalid, "--emit must be mean, loglik or sample"};
  }
  if (!a.out.empty()) emit_json(j, a.out, out);
  return exit_ok;
}

void add_mc_flags(CLI::App* cmd, Args& a) {
  cmd->add_option("--n", a.n, "Outer Monte Carlo draws (or samples for --emit sample)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--inner-n", a.inner_n, "Samples per Monte Carlo F evaluation")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed, "Random seed");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian prediction of independent Poisson processes under K-L loss", "poshrink"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker cap (0 keeps POSHRINK_THREADS or all cores)");
  app.set_version_flag("--version", std::string(poshrink_version()));
  Args a;

  auto* predict = app.add_subcommand("predict", "Predictive mean, log-likelihood or samples");
  predict->add_option("--x", a.x, "Observed counts: CSV path or inline list")->required();
  predict->add_option("--y", a.y, "Future counts for --emit loglik");
  predict->add_option("--r", a.r, "Observation durations")->required();
  predict->add_option("--s", a.s, "Prediction durations")->required();
  predict->add_option("--prior", a.prior, "Prior grammar")->required();
  predict->add_option("--emit", a.emit, "mean, loglik or sample");
  predict->add_option("--out", a.out, "JSON output path (stdout when absent)");
  predict->add_flag("--unchecked", a.unchecked, "Skip dominance hypothesis checks");
  add_mc_flags(predict, a);

  CLI::App* risk_cmds[2];
  const char* risk_names[2] = {"risk", "risk-diff"};
  const char* risk_help[2] = {"K-L risk of a prior's predictive at lambda",
                              "Risk reduction relative to the matching power prior"};
  for (int k = 0; k < 2; ++k) {
    auto* c = app.add_subcommand(risk_names[k], risk_help[k]);
    c->add_option("--prior", a.prior, "Prior grammar")->required();
    c->add_option("--lambda", a.lambda, "True intensities")->required();
    c->add_option("--r", a.r, "Observation durations")->required();
    c->add_option("--s", a.s, "Prediction durations")->required();
    c->add_option("--out", a.out, "JSON output path");
    c->add_flag("--unchecked", a.unchecked, "Skip dominance hypothesis checks");
    add_mc_flags(c, a);
    risk_cmds[k] = c;
  }

  auto* bounds = app.add_subcommand("bounds", "Minimax lower bound and Jeffreys upper bound");
  bounds->add_option("--r", a.r, "Observation durations")->required();
  bounds->add_option("--s", a.s, "Prediction durations")->required();
  bounds->add_option("--out", a.out, "JSON output path");

  auto* checkc = app.add_subcommand("check", "Verify the F-inequality on a lattice");
  checkc->add_option("--prior", a.prior, "Prior grammar")->required();
  checkc->add_option("--r-grid", a.r_grid, "Semicolon-separated r vectors")->required();
  checkc->add_option("--zmax", a.z_max, "Largest lattice coordinate")->required();
  checkc->add_option("--tol", a.tol, "Relative tolerance");
  checkc->add_option("--r", a.r, "Durations r defining gamma (default 1)");
  checkc->add_option("--s", a.s, "Durations s defining gamma (default 1)");
  checkc->add_option("--d", a.d, "Dimension when the grid uses scalars");
  checkc->add_option("--out", a.out, "JSON output path");
  add_mc_flags(checkc, a);

  auto* exp = app.add_subcommand("experiment", "Risk-reduction curves for experiments 1 to 4");
  exp->add_option("id", a.experiment, "Experiment id")->required()->check(CLI::Range(1, 4));
  exp->add_option("--grid", a.grid, "Log-spaced Lambda grid a,b,k");
  exp->add_option("--out", a.out, "Output directory (CSV to stdout when absent)");
  add_mc_flags(exp, a);

  auto* evaluate = app.add_subcommand("evaluate", "Held-out metrics for a list of priors");
  evaluate->add_option("--data", a.data, "CSV with unit_id,x,y")->required();
  evaluate->add_option("--r", a.r, "Observation durations")->required();
  evaluate->add_option("--s", a.s, "Prediction durations")->required();
  evaluate->add_option("--priors", a.priors, "Priors separated by ';'")->required();
  evaluate->add_option("--out", a.out, "JSON output path");
  evaluate->add_flag("--unchecked", a.unchecked, "Skip dominance hypothesis checks");
  add_mc_flags(evaluate, a);

  auto* lemma = app.add_subcommand("lemma-l", "Truncated-sum values of L and f");
  lemma->add_option("--lambda", a.lambda, "Points to evaluate")->required();
  lemma->add_option("--trunc", a.trunc, "Truncation order")->check(CLI::PositiveNumber);
  lemma->add_option("--out", a.out, "JSON output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_invalid;
  }

  try {
    if (app.count("--threads") > 0) poshrink_set_threads(threads);
    if (*predict) return cmd_predict(a, predict, out);
    if (*risk_cmds[0]) return cmd_risk(a, risk_cmds[0], false, out);
    if (*risk_cmds[1]) return cmd_risk(a, risk_cmds[1], true, out);
    if (*bounds) return cmd_bounds(a, out);
    if (*checkc) return cmd_check(a, checkc, out);
    if (*exp) return cmd_experiment(a, exp, out);
    if (*evaluate) return cmd_evaluate(a, evaluate, out);
    if (*lemma) return cmd_lemma(a, out);
  } catch (const CliError& e) {
    err << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_internal;
  }
  return exit_invalid;
}

}  // namespace poshrink::cli
