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

#include "mdl/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace mdl {
namespace {

std::uint32_t parse_u32(std::string_view text, const char* what) {
  std::uint32_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument(std::string("event: bad ") + what);
  }
  return value;
}

// Runs fn(trial) for trial = 0 .. trials-1 across `threads` workers. Trials
// are keyed by index, so the partition cannot influence any result.
template <typename Fn>
void for_each_trial(std::uint32_t trials, unsigned threads, const Fn& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, trials == 0 ? 1 : trials));
  if (threads == 1) {
    for (std::uint32_t t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::atomic<std::uint32_t> next{0};
  auto worker = [&] {
    for (std::uint32_t t = next.fetch_add(1); t < trials;
         t = next.fetch_add(1)) {
      fn(t);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac;
}

}  // namespace

EventSpec EventSpec::parse(std::string_view text) {
  EventSpec spec;
  const auto first = text.find(':');
  if (first == std::string_view::npos) {
    throw std::invalid_argument(
        "event: expected con:R, mcon:R, ge:L:T or le:L:T");
  }
  const std::string_view head = text.substr(0, first);
  const std::string_view rest = text.substr(first + 1);
  if (head == "con" || head == "mcon") {
    spec.kind = head == "con" ? Kind::kCon : Kind::kMCon;
    spec.round = parse_u32(rest, "round");
    return spec;
  }
  if (head == "ge" || head == "le") {
    spec.kind = head == "ge" ? Kind::kZeroCountAtLeast : Kind::kZeroCountAtMost;
    const auto second = rest.find(':');
    if (second == std::string_view::npos) {
      throw std::invalid_argument("event: ge/le need a round and a threshold");
    }
    spec.round = parse_u32(rest.substr(0, second), "round");
    spec.threshold = parse_u32(rest.substr(second + 1), "threshold");
    return spec;
  }
  throw std::invalid_argument("event: unknown kind '" + std::string(head) +
                              "'");
}

std::string EventSpec::to_string() const {
  switch (kind) {
    case Kind::kCon:
      return "con:" + std::to_string(round);
    case Kind::kMCon:
      return "mcon:" + std::to_string(round);
    case Kind::kZeroCountAtLeast:
      return "ge:" + std::to_string(round) + ":" + std::to_string(threshold);
    case Kind::kZeroCountAtMost:
      return "le:" + std::to_string(round) + ":" + std::to_string(threshold);
  }
  return {};
}

void EventSpec::validate(const ExperimentConfig& config) const {
  if (round > config.rounds) {
    throw std::invalid_argument("event: round exceeds configured rounds");
  }
  if ((kind == Kind::kZeroCountAtLeast || kind == Kind::kZeroCountAtMost) &&
      threshold > config.agents()) {
    throw std::invalid_argument("event: threshold exceeds the population");
  }
}

bool EventSpec::evaluate(const Trajectory& traj) const {
  switch (kind) {
    case Kind::kCon:
      return consensus_status(traj, round).con;
    case Kind::kMCon:
      return consensus_status(traj, round).mcon;
    case Kind::kZeroCountAtLeast:
      return traj.zero_counts.at(round) >= threshold;
    case Kind::kZeroCountAtMost:
      return traj.zero_counts.at(round) <= threshold;
  }
  return false;
}

std::pair<double, double> wilson_interval(std::uint64_t successes,
                                          std::uint64_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("wilson: trials must be >= 1");
  if (successes > trials) {
    throw std::invalid_argument("wilson: successes exceed trials");
  }
  if (!(z > 0.0)) throw std::invalid_argument("wilson: z must be positive");
  const auto nt = static_cast<double>(trials);
  const double p_hat = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (p_hat + z2 / (2.0 * nt)) / denom;
  const double half =
      z * std::sqrt(p_hat * (1.0 - p_hat) / nt + z2 / (4.0 * nt * nt)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

EstimateReport estimate_event(const ExperimentConfig& config,
                              const EventSpec& event, std::uint32_t trials,
                              unsigned threads, double z) {
  if (trials == 0) {
    throw std::invalid_argument("estimate_event: trials must be >= 1");
  }
  config.validate();
  event.validate(config);

  std::atomic<std::uint32_t> successes{0};
  for_each_trial(trials, threads, [&](std::uint32_t trial) {
    if (event.evaluate(run_protocol(config, trial))) {
      successes.fetch_add(1, std::memory_order_relaxed);
    }
  });

  EstimateReport report;
  report.config = config;
  report.event = event;
  report.trials = trials;
  report.successes = successes.load();
  report.p_hat = static_cast<double>(report.successes) / trials;
  std::tie(report.ci_low, report.ci_high) =
      wilson_interval(report.successes, trials, z);
  report.master_seed = config.master_seed;
  return report;
}

std::uint64_t config_fingerprint(const ExperimentConfig& config) {
  std::uint64_t h = mix64(0x636F6E666967ULL);  // "config"
  const auto fold = [&h](std::uint64_t v) { h = mix64(h ^ v); };
  fold(config.n);
  fold(std::bit_cast<std::uint64_t>(config.lambda));
  fold(std::bit_cast<std::uint64_t>(config.xi));
  fold(config.rounds);
  fold(static_cast<std::uint64_t>(config.redraw));
  fold(config.per_round_xi.size());
  for (double x : config.per_round_xi) fold(std::bit_cast<std::uint64_t>(x));
  fold(static_cast<std::uint64_t>(config.initial.kind));
  fold(config.initial.forced_zeros);
  return h;
}

std::vector<EstimateReport> trajectory_sweep(
    std::span<const ExperimentConfig> configs, const EventSpec& event,
    std::uint32_t trials, unsigned threads, double z) {
  std::vector<EstimateReport> table;
  table.reserve(configs.size());
  for (const ExperimentConfig& config : configs) {
    ExperimentConfig entry = config;
    entry.master_seed =
        mix_master_seed(config.master_seed, config_fingerprint(config));
    table.push_back(estimate_event(entry, event, trials, threads, z));
  }
  return table;
}

StageStatistics stage_statistics(const ExperimentConfig& config,
                                 std::uint32_t trials, unsigned threads) {
  config.validate();
  if (config.rounds < 2) {
    throw std::invalid_argument("stage_statistics: needs at least 2 rounds");
  }
  if (trials == 0) {
    throw std::invalid_argument("stage_statistics: trials must be >= 1");
  }

  constexpr double kPowers[3] = {0.5, 0.75, 1.0};
  std::vector<std::vector<double>> values(3,
                                          std::vector<double>(trials, 0.0));
  const double n = config.n;
  for_each_trial(trials, threads, [&](std::uint32_t trial) {
    const Trajectory traj = run_protocol(config, trial);
    for (int stage = 0; stage < 3; ++stage) {
      const double imbalance =
          static_cast<double>(traj.zero_counts[stage]) - n;
      values[stage][trial] = imbalance / std::pow(n, kPowers[stage]);
    }
  });

  StageStatistics stats;
  for (int stage = 0; stage < 3; ++stage) {
    StageSummary s;
    s.round = static_cast<std::uint32_t>(stage);
    s.power = kPowers[stage];
    double sum = 0.0;
    for (double v : values[stage]) sum += v;
    s.mean = sum / trials;
    std::vector<double> sorted = values[stage];
    std::sort(sorted.begin(), sorted.end());
    s.q10 = quantile_sorted(sorted, 0.10);
    s.q25 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.50);
    s.q75 = quantile_sorted(sorted, 0.75);
    s.q90 = quantile_sorted(sorted, 0.90);
    for (double& v : sorted) v = std::abs(v);
    std::sort(sorted.begin(), sorted.end());
    s.abs_median = quantile_sorted(sorted, 0.50);
    stats.stages.push_back(s);
  }
  return stats;
}

}  // namespace mdl
