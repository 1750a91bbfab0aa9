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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mdl/dynamics.hpp"

namespace mdl {

/// The event whose probability a Monte Carlo run estimates.
struct EventSpec {
  enum class Kind { kCon, kMCon, kZeroCountAtLeast, kZeroCountAtMost };

  Kind kind = Kind::kCon;
  std::uint32_t round = 0;
  std::uint32_t threshold = 0;  // zero-count events only

  /// Accepts "con:R", "mcon:R", "ge:L:T", "le:L:T".
  static EventSpec parse(std::string_view text);
  std::string to_string() const;

  /// Throws std::invalid_argument if the event is incompatible with the
  /// config (round beyond the recorded rounds, threshold beyond 2n).
  void validate(const ExperimentConfig& config) const;

  bool evaluate(const Trajectory& traj) const;
};

struct EstimateReport {
  ExperimentConfig config;
  EventSpec event;
  std::uint32_t trials = 0;
  std::uint32_t successes = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t master_seed = 0;  // the seed the trials actually used
};

/// Wilson score interval at normal quantile z, clamped to [0, 1].
/// Throws for trials == 0, successes > trials, or z <= 0.
std::pair<double, double> wilson_interval(std::uint64_t successes,
                                          std::uint64_t trials, double z);

/// Runs trials 0 .. trials-1 independently and counts event successes.
/// Pure function of (config, event, trials, z): the worker count changes
/// wall time only, never the report, because each trial is keyed by its
/// index and success counting is order-free.
EstimateReport estimate_event(const ExperimentConfig& config,
                              const EventSpec& event, std::uint32_t trials,
                              unsigned threads = 1, double z = 1.96);

/// Stable 64-bit digest of every field that shapes an experiment (seed
/// excluded). Used to decorrelate sweep entries.
std::uint64_t config_fingerprint(const ExperimentConfig& config);

/// estimate_event per config, in the given order. Each entry's master seed
/// is mixed with its config fingerprint so that differing configs never
/// share graph streams, while duplicated configs reproduce identical rows.
std::vector<EstimateReport> trajectory_sweep(
    std::span<const ExperimentConfig> configs, const EventSpec& event,
    std::uint32_t trials, unsigned threads = 1, double z = 1.96);

/// Distribution summary of the normalized zero-count imbalance
/// (N(X_l; 0) - n) / n^power at one stage.
struct StageSummary {
  std::uint32_t round = 0;
  double power = 0.0;  // normalizer exponent: 1/2, 3/4, 1 for rounds 0, 1, 2
  double mean = 0.0;
  double q10 = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double q90 = 0.0;
  double abs_median = 0.0;  // median of |imbalance| / n^power
};

struct StageStatistics {
  std::vector<StageSummary> stages;  // rounds 0, 1, 2
};

/// Summarizes how the zero-count imbalance grows through the first three
/// stages: scale sqrt(n) at round 0, n^{3/4} after round 1, n after round 2.
/// Requires config.rounds >= 2.
StageStatistics stage_statistics(const ExperimentConfig& config,
                                 std::uint32_t trials, unsigned threads = 1);

}  // namespace mdl
