// Copyright 2026 The mdl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdl/bounds.hpp"
#include "mdl/dynamics.hpp"
#include "mdl/io.hpp"
#include "mdl/monte_carlo.hpp"
#include "mdl/oracle.hpp"
#include "mdl/rng.hpp"

namespace {

constexpr char kToolVersion[] = "0.1.0";

using json = nlohmann::ordered_json;

int run_cli(const std::vector<std::string>& args);

// ---------------------------------------------------------------------------
// Small CLI plumbing

[[noreturn]] void fail_flag(const std::string& message) {
  throw CLI::ValidationError(message);
}

// Grid syntax: a single value, "a,b,c", "lo:hi:logB" (multiply by B) or
// "lo:hi:+S" (add S).
std::vector<double> parse_grid(const std::string& text, const char* flag) {
  std::vector<double> values;
  const auto parse_one = [&](const std::string& tok) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      fail_flag(std::string(flag) + ": cannot parse number '" + tok + "'");
    }
  };
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string lo_s, hi_s, step_s;
    if (!std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s, ':') ||
        !std::getline(ss, step_s)) {
      fail_flag(std::string(flag) + ": grid must be lo:hi:logB or lo:hi:+S");
    }
    const double lo = parse_one(lo_s);
    const double hi = parse_one(hi_s);
    if (step_s.rfind("log", 0) == 0) {
      const double base = parse_one(step_s.substr(3));
      if (!(base > 1.0) || !(lo > 0.0)) {
        fail_flag(std::string(flag) + ": log grid needs base > 1 and lo > 0");
      }
      for (double v = lo; v <= hi * (1.0 + 1e-12); v *= base) values.push_back(v);
    } else if (step_s.rfind('+', 0) == 0) {
      const double step = parse_one(step_s.substr(1));
      if (!(step > 0.0)) fail_flag(std::string(flag) + ": step must be positive");
      for (double v = lo; v <= hi + 1e-12 * step; v += step) values.push_back(v);
    } else {
      fail_flag(std::string(flag) + ": grid step must be logB or +S");
    }
  } else if (text.find(',') != std::string::npos) {
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) values.push_back(parse_one(tok));
  } else {
    values.push_back(parse_one(text));
  }
  if (values.empty()) fail_flag(std::string(flag) + ": empty grid");
  return values;
}

std::uint64_t default_seed_from_env() {
  if (const char* env = std::getenv("MDL_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring unparsable MDL_SEED\n";
    }
  }
  return 0;
}

std::string json_mirror_path(const std::string& out) {
  if (out.size() > 4 && out.substr(out.size() - 4) == ".csv") {
    return out.substr(0, out.size() - 4) + ".json";
  }
  return out + ".json";
}

// Every file-producing run leaves a manifest next to its output; feeding the
// manifest back through `mdl rerun` reproduces the CSV bodies byte for byte.
void write_manifest(const std::string& out, const std::string& subcommand,
                    const std::vector<std::string>& argv,
                    std::uint64_t master_seed,
                    const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = "mdl";
  m["version"] = kToolVersion;
  m["subcommand"] = subcommand;
  m["argv"] = argv;
  m["master_seed"] = master_seed;
  m["outputs"] = outputs;
  std::ofstream file(out + ".manifest.json");
  file << m.dump(2) << '\n';
}

struct OutputSink {
  std::string out;  // empty: stdout
  std::string subcommand;
  std::vector<std::string> argv;
  std::uint64_t master_seed = 0;

  void emit(const std::string& header, const std::vector<std::string>& rows,
            const json& mirror) const {
    std::string body = header;
    body += '\n';
    for (const auto& row : rows) {
      body += row;
      body += '\n';
    }
    if (out.empty()) {
      std::cout << body;
      return;
    }
    {
      std::ofstream file(out, std::ios::binary);
      if (!file) fail_flag("--out: cannot open '" + out + "'");
      file << body;
    }
    const std::string mirror_path = json_mirror_path(out);
    {
      std::ofstream file(mirror_path);
      file << mirror.dump(2) << '\n';
    }
    write_manifest(out, subcommand, argv, master_seed, {out, mirror_path});
  }
};

json estimate_to_json(const mdl::EstimateReport& r) {
  json j;
  j["n"] = r.config.n;
  j["lambda"] = r.config.lambda;
  j["xi"] = r.config.xi;
  j["rounds"] = r.config.rounds;
  j["redraw"] = mdl::redraw_to_string(r.config.redraw);
  j["event"] = r.event.to_string();
  j["trials"] = r.trials;
  j["successes"] = r.successes;
  j["p_hat"] = r.p_hat;
  j["ci_low"] = r.ci_low;
  j["ci_high"] = r.ci_high;
  j["master_seed"] = r.master_seed;
  return j;
}

json bound_to_json(const mdl::BoundReport& r) {
  std::string params;
  for (const auto& [key, value] : r.params) {
    if (!params.empty()) params += ';';
    params += key + "=" + mdl::format_double(value);
  }
  json j;
  j["name"] = r.name;
  j["param_list"] = params;
  j["raw_value"] = r.raw_value;
  j["clamped"] = r.probability_valued ? r.clamped_probability : r.raw_value;
  j["valid"] = r.valid;
  return j;
}

// ---------------------------------------------------------------------------
// simulate / sweep

struct SimulateFlags {
  std::uint32_t n = 0;
  double lambda = 1.0;
  double xi = 0.5;
  std::uint32_t rounds = 0;
  std::uint32_t trials = 0;
  std::uint64_t seed = 0;
  std::string event;
  std::string redraw = "every";
  std::string initial = "coin";
  std::string per_round_xi;
  unsigned threads = 1;
  double z = 1.96;
  std::string out;
  std::string trajectories;
  std::string stage_stats;
  std::string dump_graph;
  std::string n_grid;  // sweep only
};

mdl::ExperimentConfig config_from_flags(const SimulateFlags& f,
                                        std::uint32_t n) {
  mdl::ExperimentConfig config;
  config.n = n;
  config.lambda = f.lambda;
  config.xi = f.xi;
  config.rounds = f.rounds;
  config.master_seed = f.seed;
  if (f.redraw == "every") {
    config.redraw = mdl::RedrawPolicy::kEveryRound;
  } else if (f.redraw == "fixed") {
    config.redraw = mdl::RedrawPolicy::kFixedGraph;
  } else {
    fail_flag("--redraw: expected 'every' or 'fixed'");
  }
  if (f.initial == "coin") {
    config.initial.kind = mdl::InitialPolicy::Kind::kFairCoin;
  } else if (f.initial.rfind("zeros=", 0) == 0) {
    config.initial.kind = mdl::InitialPolicy::Kind::kForced;
    try {
      config.initial.forced_zeros = std::stoul(f.initial.substr(6));
    } catch (const std::exception&) {
      fail_flag("--initial: cannot parse zeros=K");
    }
  } else {
    fail_flag("--initial: expected 'coin' or 'zeros=K'");
  }
  if (!f.per_round_xi.empty()) {
    config.per_round_xi = parse_grid(f.per_round_xi, "--per-round-xi");
  }
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    fail_flag(e.what());
  }
  return config;
}

void add_common_simulate_flags(CLI::App* cmd, SimulateFlags& f) {
  cmd->add_option("--lambda", f.lambda, "Edge density scale: p = lambda/n^xi")
      ->required();
  cmd->add_option("--xi", f.xi, "Edge probability exponent, in [1/2, 1)")
      ->default_val(0.5);
  cmd->add_option("--rounds", f.rounds, "Communication rounds")->required();
  cmd->add_option("--trials", f.trials, "Independent protocol executions")
      ->required();
  cmd->add_option("--seed", f.seed, "Master seed (default: MDL_SEED or 0)")
      ->default_val(default_seed_from_env());
  cmd->add_option("--event", f.event, "con:R | mcon:R | ge:L:T | le:L:T")
      ->required();
  cmd->add_option("--redraw", f.redraw, "every | fixed")->default_val("every");
  cmd->add_option("--initial", f.initial, "coin | zeros=K")
      ->default_val("coin");
  cmd->add_option("--per-round-xi", f.per_round_xi,
                  "Comma list overriding xi per round");
  cmd->add_option("--threads", f.threads,
                  "Worker threads (wall time only, never output bytes)")
      ->default_val(1);
  cmd->add_option("--z", f.z, "Normal quantile for the Wilson interval")
      ->default_val(1.96);
  cmd->add_option("--out", f.out, "CSV output path (stdout when omitted)");
}

int cmd_simulate(const SimulateFlags& f, const std::vector<std::string>& argv) {
  const mdl::ExperimentConfig config = config_from_flags(f, f.n);
  mdl::EventSpec event;
  try {
    event = mdl::EventSpec::parse(f.event);
    event.validate(config);
    if (f.trials == 0) fail_flag("--trials: must be at least 1");
  } catch (const std::invalid_argument& e) {
    fail_flag(std::string("--event: ") + e.what());
  }

  const mdl::EstimateReport report =
      mdl::estimate_event(config, event, f.trials, f.threads, f.z);

  OutputSink sink{f.out, "simulate", argv, config.master_seed};
  sink.emit(mdl::kEstimateCsvHeader, {mdl::estimate_csv_row(report)},
            json::array({estimate_to_json(report)}));

  std::vector<std::string> extra_outputs;
  if (!f.trajectories.empty()) {
    std::ofstream file(f.trajectories, std::ios::binary);
    if (!file) fail_flag("--trajectories: cannot open file");
    file << "trial,round,zeros_count\n";
    for (std::uint32_t t = 0; t < f.trials; ++t) {
      const mdl::Trajectory traj = mdl::run_protocol(config, t);
      for (std::uint32_t r = 0; r < traj.zero_counts.size(); ++r) {
        file << t << ',' << r << ',' << traj.zero_counts[r] << '\n';
      }
      const char* kind = traj.final_state_kind == mdl::FinalStateKind::kAllZero
                             ? "all-zero"
                         : traj.final_state_kind == mdl::FinalStateKind::kAllOne
                             ? "all-one"
                             : "mixed";
      file << t << ",summary," << kind << '\n';
    }
    extra_outputs.push_back(f.trajectories);
  }
  if (!f.stage_stats.empty()) {
    if (config.rounds < 2) fail_flag("--stage-stats: needs --rounds >= 2");
    const mdl::StageStatistics stats =
        mdl::stage_statistics(config, f.trials, f.threads);
    std::ofstream file(f.stage_stats, std::ios::binary);
    if (!file) fail_flag("--stage-stats: cannot open file");
    file << "round,power,mean,q10,q25,median,q75,q90,abs_median\n";
    for (const auto& s : stats.stages) {
      file << s.round << ',' << mdl::format_double(s.power) << ','
           << mdl::format_double(s.mean) << ',' << mdl::format_double(s.q10)
           << ',' << mdl::format_double(s.q25) << ','
           << mdl::format_double(s.median) << ',' << mdl::format_double(s.q75)
           << ',' << mdl::format_double(s.q90) << ','
           << mdl::format_double(s.abs_median) << '\n';
    }
    extra_outputs.push_back(f.stage_stats);
  }
  if (!f.dump_graph.empty()) {
    mdl::SplitMix64 stream = mdl::derive_stream({config.master_seed, 0, 0});
    const mdl::GraphSample graph = mdl::sample_gnp(
        config.agents(), config.edge_probability(0), stream);
    std::ofstream file(f.dump_graph, std::ios::binary);
    if (!file) fail_flag("--dump-graph: cannot open file");
    mdl::write_edge_list(graph, file);
    extra_outputs.push_back(f.dump_graph);
  }
  if (!f.out.empty() && !extra_outputs.empty()) {
    std::vector<std::string> outputs = {f.out, json_mirror_path(f.out)};
    outputs.insert(outputs.end(), extra_outputs.begin(), extra_outputs.end());
    write_manifest(f.out, "simulate", argv, config.master_seed, outputs);
  }
  return 0;
}

int cmd_sweep(const SimulateFlags& f, const std::vector<std::string>& argv) {
  const std::vector<double> n_values = parse_grid(f.n_grid, "--n");
  std::vector<mdl::ExperimentConfig> configs;
  for (double n : n_values) {
    if (!(n >= 1.0) || n != std::floor(n)) {
      fail_flag("--n: sweep entries must be positive integers");
    }
    configs.push_back(config_from_flags(f, static_cast<std::uint32_t>(n)));
  }
  mdl::EventSpec event;
  try {
    event = mdl::EventSpec::parse(f.event);
    for (const auto& config : configs) event.validate(config);
    if (f.trials == 0) fail_flag("--trials: must be at least 1");
  } catch (const std::invalid_argument& e) {
    fail_flag(std::string("--event: ") + e.what());
  }

  const std::vector<mdl::EstimateReport> table =
      mdl::trajectory_sweep(configs, event, f.trials, f.threads, f.z);
  std::vector<std::string> rows;
  json mirror = json::array();
  for (const auto& report : table) {
    rows.push_back(mdl::estimate_csv_row(report));
    mirror.push_back(estimate_to_json(report));
  }
  OutputSink sink{f.out, "sweep", argv, f.seed};
  sink.emit(mdl::kEstimateCsvHeader, rows, mirror);
  return 0;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsFlags {
  std::string which;
  std::string n_grid;
  double alpha = 0.0, beta = 0.0, gamma = 0.0, lambda = 0.0;
  double xi = 0.5, rho = 0.0, kappa = 0.0, theta = 0.0;
  double psin = 0.0, cn = 0.0, bn = 0.0, pupper = 0.0, i_value = 0.0;
  double eps = 0.0;
  bool has_alpha = false, has_beta = false, has_gamma = false,
       has_lambda = false, has_rho = false, has_kappa = false,
       has_theta = false, has_psin = false, has_cn = false, has_bn = false,
       has_pupper = false, has_i = false, has_eps = false;
  std::string out;
};

void need(bool present, const char* flag) {
  if (!present) fail_flag(std::string(flag) + " is required for this bound");
}

int cmd_bounds(const BoundsFlags& f, const std::vector<std::string>& argv) {
  std::vector<double> n_values;
  if (!f.n_grid.empty()) n_values = parse_grid(f.n_grid, "--n");

  const auto require_n = [&]() {
    if (n_values.empty()) fail_flag("--n is required for this bound");
  };

  std::vector<mdl::BoundReport> reports;
  try {
    if (f.which == "c0") {
      need(f.has_alpha, "--alpha");
      need(f.has_lambda, "--lambda");
      mdl::BoundReport r;
      r.name = "c0";
      r.params = {{"alpha", f.alpha}, {"lambda", f.lambda}};
      r.raw_value = mdl::c0_constant(f.alpha, f.lambda);
      r.probability_valued = false;
      reports.push_back(r);
      for (double n : n_values) {
        reports.push_back(mdl::prop2_update_lower(n, f.alpha, f.lambda));
      }
    } else if (f.which == "c1") {
      need(f.has_beta, "--beta");
      need(f.has_lambda, "--lambda");
      mdl::BoundReport r;
      r.name = "c1";
      r.params = {{"beta", f.beta}, {"lambda", f.lambda}};
      r.raw_value = mdl::c1_constant(f.beta, f.lambda);
      r.probability_valued = false;
      reports.push_back(r);
      reports.push_back(mdl::prop4_update_lower(f.beta, f.lambda));
    } else if (f.which == "alpha") {
      need(f.has_eps, "--eps");
      mdl::BoundReport r;
      r.name = "alpha";
      r.params = {{"eps", f.eps}};
      r.raw_value = mdl::alpha_for_epsilon(f.eps);
      r.probability_valued = false;
      reports.push_back(r);
    } else if (f.which == "prop3") {
      need(f.has_alpha, "--alpha");
      need(f.has_lambda, "--lambda");
      require_n();
      for (double n : n_values) {
        reports.push_back(mdl::prop3_success_bound(n, f.alpha, f.lambda));
      }
    } else if (f.which == "prop5") {
      need(f.has_beta, "--beta");
      need(f.has_lambda, "--lambda");
      require_n();
      for (double n : n_values) {
        reports.push_back(mdl::prop5_success_bound(n, f.beta, f.lambda));
      }
    } else if (f.which == "prop6") {
      need(f.has_gamma, "--gamma");
      need(f.has_lambda, "--lambda");
      require_n();
      for (double n : n_values) {
        reports.push_back(
            mdl::prop6_consensus_bound(n, f.gamma, f.lambda, f.xi));
      }
    } else if (f.which == "prop7") {
      need(f.has_bn, "--bn");
      need(f.has_pupper, "--pupper");
      require_n();
      for (double n : n_values) {
        reports.push_back(mdl::prop7_overshoot_bound(n, f.bn, f.pupper));
      }
    } else if (f.which == "prop8") {
      need(f.has_psin, "--psin");
      need(f.has_lambda, "--lambda");
      require_n();
      const double theta = f.has_theta ? f.theta : 6.0;
      for (double n : n_values) {
        reports.push_back(mdl::prop8_update_upper(n, f.psin, f.lambda, theta));
      }
    } else if (f.which == "prop9") {
      need(f.has_cn, "--cn");
      need(f.has_lambda, "--lambda");
      require_n();
      for (double n : n_values) {
        reports.push_back(mdl::prop9_consensus_upper(n, f.cn, f.lambda));
      }
    } else if (f.which == "lemma1") {
      need(f.has_lambda, "--lambda");
      need(f.has_i, "--i");
      require_n();
      for (double n : n_values) {
        reports.push_back(mdl::lemma1_collision_lower(n, f.lambda, f.i_value));
      }
    } else if (f.which == "lemma2") {
      need(f.has_psin, "--psin");
      need(f.has_lambda, "--lambda");
      require_n();
      const double theta = f.has_theta ? f.theta : 6.0;
      for (double n : n_values) {
        reports.push_back(
            mdl::lemma2_collision_upper(n, f.psin, f.lambda, theta));
      }
    } else if (f.which == "thm2") {
      need(f.has_lambda, "--lambda");
      need(f.has_rho, "--rho");
      need(f.has_kappa, "--kappa");
      need(f.has_theta, "--theta");
      require_n();
      for (double n : n_values) {
        reports.push_back(
            mdl::theorem2_total_bound(n, f.lambda, f.rho, f.kappa, f.theta));
      }
    } else {
      fail_flag("--which: unknown bound '" + f.which + "'");
    }
  } catch (const std::invalid_argument& e) {
    fail_flag(e.what());
  }

  std::vector<std::string> rows;
  json mirror = json::array();
  for (const auto& report : reports) {
    rows.push_back(mdl::bound_csv_row(report));
    mirror.push_back(bound_to_json(report));
  }
  OutputSink sink{f.out, "bounds", argv, 0};
  sink.emit(mdl::kBoundCsvHeader, rows, mirror);
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyRow {
  std::string suite;
  std::string case_id;
  std::string params;
  double oracle_value = 0.0;
  double bound_value = 0.0;
  double margin = 0.0;
  bool pass = false;
};

constexpr char kVerifyCsvHeader[] =
    "suite,case,params,oracle_value,bound_value,margin,pass";

std::string verify_csv_row(const VerifyRow& r) {
  std::string row = r.suite;
  row += ',';
  row += r.case_id;
  row += ',';
  row += r.params;
  row += ',';
  row += mdl::format_double(r.oracle_value);
  row += ',';
  row += mdl::format_double(r.bound_value);
  row += ',';
  row += mdl::format_double(r.margin);
  row += ',';
  row += r.pass ? "true" : "false";
  return row;
}

json verify_to_json(const VerifyRow& r) {
  json j;
  j["suite"] = r.suite;
  j["case"] = r.case_id;
  j["params"] = r.params;
  j["oracle_value"] = r.oracle_value;
  j["bound_value"] = r.bound_value;
  j["margin"] = r.margin;
  j["pass"] = r.pass;
  return j;
}

std::vector<VerifyRow> verify_pinsker(std::uint32_t grid_size,
                                      std::uint64_t seed) {
  std::vector<VerifyRow> rows;
  mdl::SplitMix64 stream = mdl::derive_stream({seed, 0, 0});
  for (std::uint32_t c = 0; c < grid_size; ++c) {
    const double a = stream.next_unit();
    const double b = 0.05 + 0.90 * stream.next_unit();
    const double kl = mdl::binary_kl(a, b);
    const double lower = 2.0 * (a - b) * (a - b);
    const double upper = 2.0 / std::min(b, 1.0 - b) * (a - b) * (a - b);
    VerifyRow row;
    row.suite = "pinsker";
    row.case_id = std::to_string(c);
    row.params = "a=" + mdl::format_double(a) + ";b=" + mdl::format_double(b);
    row.oracle_value = kl;
    row.bound_value = lower;
    row.margin = std::min(kl - lower, upper - kl);
    row.pass = kl >= lower && kl <= upper;
    rows.push_back(row);
  }
  return rows;
}

std::vector<VerifyRow> verify_lemma1(std::uint32_t grid_size) {
  std::vector<VerifyRow> rows;
  for (const double n : {400.0, 2500.0}) {
    for (const double lambda : {0.5, 1.0, 2.0}) {
      const double p = lambda / std::sqrt(n);
      const auto i_max =
          static_cast<std::uint64_t>(std::floor(lambda * std::sqrt(n)));
      const std::uint64_t stride =
          std::max<std::uint64_t>(1, i_max / std::max<std::uint32_t>(1, grid_size));
      for (std::uint64_t i = 0; i <= i_max; i += stride) {
        const double oracle =
            mdl::collision_prob(static_cast<std::uint64_t>(n), p, i);
        const double bound =
            mdl::lemma1_collision_lower(n, lambda, static_cast<double>(i))
                .raw_value;
        VerifyRow row;
        row.suite = "lemma1";
        row.case_id = "n" + mdl::format_double(n) + "-l" +
                      mdl::format_double(lambda) + "-i" + std::to_string(i);
        row.params = "n=" + mdl::format_double(n) +
                     ";lambda=" + mdl::format_double(lambda) +
                     ";i=" + std::to_string(i);
        row.oracle_value = oracle;
        row.bound_value = bound;
        row.margin = oracle - bound;
        row.pass = row.margin >= 0.0;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::uint64_t psi_for(double n) {
  return static_cast<std::uint64_t>(
      std::ceil(std::sqrt(n) * std::sqrt(std::log(n))));
}

std::vector<VerifyRow> verify_lemma2() {
  std::vector<VerifyRow> rows;
  for (const double n : {400.0, 2500.0, 10000.0}) {
    const double lambda = 1.0;
    const double theta = 6.0;
    const std::uint64_t psi = psi_for(n);
    const double oracle = mdl::collision_prob(
        static_cast<std::uint64_t>(n) - psi, lambda / std::sqrt(n), 0);
    const double bound =
        mdl::lemma2_collision_upper(n, static_cast<double>(psi), lambda, theta)
            .raw_value;
    VerifyRow row;
    row.suite = "lemma2";
    row.case_id = "n" + mdl::format_double(n);
    row.params = "n=" + mdl::format_double(n) + ";psin=" + std::to_string(psi) +
                 ";lambda=1;theta=6";
    row.oracle_value = oracle;
    row.bound_value = bound;
    row.margin = bound - oracle;
    row.pass = row.margin >= 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<VerifyRow> verify_prop2_or_4(bool prop2) {
  std::vector<VerifyRow> rows;
  const std::vector<double> scales =
      prop2 ? std::vector<double>{0.5, 1.0, 2.0}
            : std::vector<double>{0.25, 0.5, 1.0};
  for (const double n : {400.0, 2500.0}) {
    for (const double scale : scales) {
      for (const double lambda : {0.5, 1.0, 2.0}) {
        const double p = lambda / std::sqrt(n);
        const double count_scale = prop2 ? std::sqrt(n) : std::pow(n, 0.75);
        const auto imbalance = static_cast<std::int64_t>(
            mdl::round_half_up(scale * count_scale));
        const double bound =
            prop2 ? mdl::prop2_update_lower(n, scale, lambda).raw_value
                  : mdl::prop4_update_lower(scale, lambda).raw_value;
        for (int own = 0; own <= 1; ++own) {
          const double oracle =
              mdl::equal_split_update_prob(static_cast<std::uint64_t>(n),
                                           imbalance, p, own)
                  .exact;
          VerifyRow row;
          row.suite = prop2 ? "prop2" : "prop4";
          row.case_id = "n" + mdl::format_double(n) + "-s" +
                        mdl::format_double(scale) + "-l" +
                        mdl::format_double(lambda) + "-own" +
                        std::to_string(own);
          row.params = "n=" + mdl::format_double(n) +
                       (prop2 ? ";alpha=" : ";beta=") +
                       mdl::format_double(scale) +
                       ";lambda=" + mdl::format_double(lambda) +
                       ";own=" + std::to_string(own);
          row.oracle_value = oracle;
          row.bound_value = bound;
          row.margin = oracle - bound;
          row.pass = row.margin >= 0.0;
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

std::vector<VerifyRow> verify_prop7() {
  std::vector<VerifyRow> rows;
  for (const std::uint64_t n : {500ull, 1000ull, 2000ull}) {
    for (const double b_scale : {1.0, 2.0, 4.0}) {
      const double b_n = b_scale * std::sqrt(static_cast<double>(n));
      const double threshold = static_cast<double>(n) + b_n;
      const mdl::ChernoffCheck check =
          mdl::chernoff_mgf_bound_check(n, 0, 0.5, 0.5, threshold);
      const double bound =
          mdl::prop7_overshoot_bound(static_cast<double>(n), b_n, 0.5)
              .clamped_probability;
      VerifyRow row;
      row.suite = "prop7";
      row.case_id = "n" + std::to_string(n) + "-b" + mdl::format_double(b_scale);
      row.params = "n=" + std::to_string(n) + ";bn=" + mdl::format_double(b_n) +
                   ";pupper=0.5";
      row.oracle_value = check.tail;
      row.bound_value = bound;
      row.margin = bound - check.tail;
      row.pass = row.margin >= 0.0 && check.exact;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<VerifyRow> verify_prop8() {
  std::vector<VerifyRow> rows;
  for (const double n : {400.0, 2500.0, 10000.0}) {
    const double lambda = 1.0;
    const double theta = 6.0;
    const std::uint64_t psi = psi_for(n);
    const double p = lambda / std::sqrt(n);
    const double bound =
        mdl::prop8_update_upper(n, static_cast<double>(psi), lambda, theta)
            .clamped_probability;
    for (int own = 0; own <= 1; ++own) {
      const double oracle =
          mdl::equal_split_update_prob(static_cast<std::uint64_t>(n),
                                       static_cast<std::int64_t>(psi), p, own)
              .exact;
      VerifyRow row;
      row.suite = "prop8";
      row.case_id = "n" + mdl::format_double(n) + "-own" + std::to_string(own);
      row.params = "n=" + mdl::format_double(n) + ";psin=" +
                   std::to_string(psi) + ";lambda=1;theta=6;own=" +
                   std::to_string(own);
      row.oracle_value = oracle;
      row.bound_value = bound;
      row.margin = bound - oracle;
      row.pass = row.margin >= 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

// Brute-force replay of one round from the dense edge matrix; shares nothing
// with the adjacency-list implementation.
mdl::OpinionState naive_round(const mdl::OpinionState& state,
                              const std::vector<std::uint8_t>& edge_matrix,
                              std::uint32_t v_count) {
  mdl::OpinionState out;
  out.opinions.resize(v_count);
  for (std::uint32_t i = 0; i < v_count; ++i) {
    std::uint32_t zeros = 0;
    std::uint32_t ones = 0;
    for (std::uint32_t j = 0; j < v_count; ++j) {
      if (edge_matrix[std::size_t{i} * v_count + j]) {
        ++(state.opinions[j] == 0 ? zeros : ones);
      }
    }
    out.opinions[i] =
        zeros > ones ? 0 : ones > zeros ? 1 : state.opinions[i];
  }
  return out;
}

std::vector<VerifyRow> verify_dynamics(std::uint32_t grid_size,
                                       std::uint64_t seed) {
  std::vector<VerifyRow> rows;
  mdl::SplitMix64 gen = mdl::derive_stream({seed, 1, 0});
  for (std::uint32_t c = 0; c < grid_size; ++c) {
    const std::uint32_t v_count =
        2 * (1 + static_cast<std::uint32_t>(gen.next_u64() % 16));  // 2..32
    const double p = 0.1 + 0.8 * gen.next_unit();
    mdl::SplitMix64 graph_stream(gen.next_u64());
    const mdl::GraphSample graph = mdl::sample_gnp(v_count, p, graph_stream);
    mdl::OpinionState state;
    state.opinions.resize(v_count);
    for (auto& b : state.opinions) {
      b = static_cast<std::uint8_t>(gen.next_u64() >> 63);
    }

    std::vector<std::uint8_t> matrix(std::size_t{v_count} * v_count, 0);
    for (std::uint32_t u = 0; u < v_count; ++u) {
      for (std::uint32_t v : graph.adjacency(u)) {
        matrix[std::size_t{u} * v_count + v] = 1;
      }
    }

    const mdl::OpinionState fast = mdl::smp_round(state, graph);
    const mdl::OpinionState slow = naive_round(state, matrix, v_count);
    const bool equal = fast.opinions == slow.opinions;

    // 0 <-> 1 relabeling symmetry on the same graph.
    mdl::OpinionState flipped = state;
    for (auto& b : flipped.opinions) b ^= 1;
    mdl::OpinionState flipped_out = mdl::smp_round(flipped, graph);
    for (auto& b : flipped_out.opinions) b ^= 1;
    const bool symmetric = flipped_out.opinions == fast.opinions;

    VerifyRow row;
    row.suite = "dynamics";
    row.case_id = std::to_string(c);
    row.params = "V=" + std::to_string(v_count) + ";p=" + mdl::format_double(p);
    row.oracle_value = equal ? 0.0 : 1.0;
    row.bound_value = 0.0;
    row.margin = 0.0;
    row.pass = equal && symmetric;
    rows.push_back(row);
  }
  return rows;
}

int cmd_verify(const std::string& suite, std::uint32_t grid_size,
               std::uint64_t seed, const std::string& out,
               const std::vector<std::string>& argv) {
  std::vector<VerifyRow> rows;
  if (suite == "pinsker") {
    rows = verify_pinsker(grid_size, seed);
  } else if (suite == "lemma1") {
    rows = verify_lemma1(std::max<std::uint32_t>(grid_size / 100, 10));
  } else if (suite == "lemma2") {
    rows = verify_lemma2();
  } else if (suite == "prop2") {
    rows = verify_prop2_or_4(true);
  } else if (suite == "prop4") {
    rows = verify_prop2_or_4(false);
  } else if (suite == "prop7") {
    rows = verify_prop7();
  } else if (suite == "prop8") {
    rows = verify_prop8();
  } else {
    rows = verify_dynamics(grid_size, seed);
  }

  std::vector<std::string> csv_rows;
  json mirror = json::array();
  bool all_pass = true;
  for (const auto& row : rows) {
    csv_rows.push_back(verify_csv_row(row));
    mirror.push_back(verify_to_json(row));
    all_pass = all_pass && row.pass;
  }
  OutputSink sink{out, "verify", argv, seed};
  sink.emit(kVerifyCsvHeader, csv_rows, mirror);
  std::cerr << "verify " << suite << ": " << rows.size() << " cases, "
            << (all_pass ? "all pass" : "FAILURES") << '\n';
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// rerun

int cmd_rerun(const std::string& manifest_path, const std::string& out,
              std::optional<unsigned> threads) {
  std::ifstream file(manifest_path);
  if (!file) fail_flag("--manifest: cannot open '" + manifest_path + "'");
  json manifest;
  try {
    file >> manifest;
  } catch (const std::exception& e) {
    fail_flag("--manifest: bad JSON: " + std::string(e.what()));
  }
  if (!manifest.contains("argv") || !manifest["argv"].is_array()) {
    fail_flag("--manifest: missing argv");
  }
  std::vector<std::string> argv;
  for (const auto& a : manifest["argv"]) argv.push_back(a.get<std::string>());

  const auto drop_flag = [&argv](const std::string& flag) {
    for (std::size_t i = 0; i + 1 < argv.size(); ++i) {
      if (argv[i] == flag) {
        argv.erase(argv.begin() + static_cast<std::ptrdiff_t>(i),
                   argv.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        return;
      }
    }
  };
  if (!out.empty()) {
    drop_flag("--out");
    argv.push_back("--out");
    argv.push_back(out);
  }
  if (threads) {
    drop_flag("--threads");
    argv.push_back("--threads");
    argv.push_back(std::to_string(*threads));
  }
  return run_cli(argv);
}

// ---------------------------------------------------------------------------

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Majority-dynamics simulator, bound evaluator and verifier"};
  app.require_subcommand(1);

  SimulateFlags sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Estimate an event probability over repeated trials");
  simulate->add_option("--n", sim.n, "Half population: 2n agents")->required();
  add_common_simulate_flags(simulate, sim);
  simulate->add_option("--trajectories", sim.trajectories,
                       "Write per-trial zero-count rows to this CSV");
  simulate->add_option("--stage-stats", sim.stage_stats,
                       "Write normalized stage summaries to this CSV");
  simulate->add_option("--dump-graph", sim.dump_graph,
                       "Write the trial-0 round-0 graph as an edge list");

  SimulateFlags swp;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Estimate one event across a grid of population sizes");
  sweep->add_option("--n", swp.n_grid, "Population grid, e.g. 100,400 or 1e2:1e4:log10")
      ->required();
  add_common_simulate_flags(sweep, swp);

  BoundsFlags bnd;
  CLI::App* bounds = app.add_subcommand("bounds", "Evaluate closed-form bounds");
  bounds
      ->add_option("--which", bnd.which,
                   "c0|c1|prop3|prop5|prop6|prop7|prop8|prop9|lemma1|lemma2|"
                   "thm2|alpha")
      ->required();
  bounds->add_option("--n", bnd.n_grid, "n value or grid (lo:hi:logB)");
  bounds->add_option("--alpha", bnd.alpha)
      ->each([&bnd](const std::string&) { bnd.has_alpha = true; });
  bounds->add_option("--beta", bnd.beta)
      ->each([&bnd](const std::string&) { bnd.has_beta = true; });
  bounds->add_option("--gamma", bnd.gamma)
      ->each([&bnd](const std::string&) { bnd.has_gamma = true; });
  bounds->add_option("--lambda", bnd.lambda)
      ->each([&bnd](const std::string&) { bnd.has_lambda = true; });
  bounds->add_option("--xi", bnd.xi)->default_val(0.5);
  bounds->add_option("--rho", bnd.rho)
      ->each([&bnd](const std::string&) { bnd.has_rho = true; });
  bounds->add_option("--kappa", bnd.kappa)
      ->each([&bnd](const std::string&) { bnd.has_kappa = true; });
  bounds->add_option("--theta", bnd.theta)
      ->each([&bnd](const std::string&) { bnd.has_theta = true; });
  bounds->add_option("--psin", bnd.psin)
      ->each([&bnd](const std::string&) { bnd.has_psin = true; });
  bounds->add_option("--cn", bnd.cn)
      ->each([&bnd](const std::string&) { bnd.has_cn = true; });
  bounds->add_option("--bn", bnd.bn)
      ->each([&bnd](const std::string&) { bnd.has_bn = true; });
  bounds->add_option("--pupper", bnd.pupper)
      ->each([&bnd](const std::string&) { bnd.has_pupper = true; });
  bounds->add_option("--i", bnd.i_value)
      ->each([&bnd](const std::string&) { bnd.has_i = true; });
  bounds->add_option("--eps", bnd.eps)
      ->each([&bnd](const std::string&) { bnd.has_eps = true; });
  bounds->add_option("--out", bnd.out, "CSV output path (stdout when omitted)");

  std::string verify_suite;
  std::uint32_t verify_grid = 10000;
  std::uint64_t verify_seed = default_seed_from_env();
  std::string verify_out;
  CLI::App* verify = app.add_subcommand(
      "verify", "Machine-check bound inequalities against exact oracles");
  verify
      ->add_option("--suite", verify_suite,
                   "pinsker|lemma1|lemma2|prop2|prop4|prop7|prop8|dynamics")
      ->required()
      ->check(CLI::IsMember({"pinsker", "lemma1", "lemma2", "prop2", "prop4",
                             "prop7", "prop8", "dynamics"}));
  verify->add_option("--grid-size", verify_grid)->default_val(10000);
  verify->add_option("--seed", verify_seed)
      ->default_val(default_seed_from_env());
  verify->add_option("--out", verify_out, "CSV output path (stdout when omitted)");

  std::string rerun_manifest;
  std::string rerun_out;
  unsigned rerun_threads = 0;
  bool rerun_threads_set = false;
  CLI::App* rerun = app.add_subcommand(
      "rerun", "Re-execute the command recorded in a manifest");
  rerun->add_option("--manifest", rerun_manifest)->required();
  rerun->add_option("--out", rerun_out, "Override the output path");
  rerun->add_option("--threads", rerun_threads, "Override the worker count")
      ->each([&rerun_threads_set](const std::string&) {
        rerun_threads_set = true;
      });

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("mdl");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (simulate->parsed()) return cmd_simulate(sim, args);
    if (sweep->parsed()) return cmd_sweep(swp, args);
    if (bounds->parsed()) return cmd_bounds(bnd, args);
    if (verify->parsed()) {
      return cmd_verify(verify_suite, verify_grid, verify_seed, verify_out,
                        args);
    }
    if (rerun->parsed()) {
      return cmd_rerun(rerun_manifest, rerun_out,
                       rerun_threads_set ? std::optional<unsigned>(rerun_threads)
                                         : std::nullopt);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  return run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
