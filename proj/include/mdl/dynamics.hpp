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
#include <vector>

#include "mdl/graph.hpp"
#include "mdl/rng.hpp"

namespace mdl {

/// State of the 2n agents: one opinion in {0, 1} per agent.
struct OpinionState {
  std::vector<std::uint8_t> opinions;

  std::uint32_t agent_count() const {
    return static_cast<std::uint32_t>(opinions.size());
  }
  /// Number of agents holding 0.
  std::uint32_t zeros() const;
};

enum class InitialMajority { kZeros, kOnes, kTie };
enum class FinalStateKind { kAllZero, kAllOne, kMixed };
enum class RedrawPolicy { kEveryRound, kFixedGraph };

struct InitialPolicy {
  enum class Kind { kFairCoin, kForced };
  Kind kind = Kind::kFairCoin;
  std::uint32_t forced_zeros = 0;  // agents holding 0 when kind == kForced
};

/// Full description of one experiment. The population is 2n agents; the
/// round-r communication graph is G(2n, lambda / n^xi) (xi = 1/2 by default),
/// overridable per round through per_round_xi.
struct ExperimentConfig {
  std::uint32_t n = 0;
  double lambda = 1.0;
  double xi = 0.5;
  std::uint32_t rounds = 0;
  RedrawPolicy redraw = RedrawPolicy::kEveryRound;
  std::vector<double> per_round_xi;  // empty, or one xi per round
  InitialPolicy initial;
  std::uint64_t master_seed = 0;

  std::uint32_t agents() const { return 2 * n; }
  double edge_probability(std::uint32_t round) const;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Zero-counts along one protocol execution plus the consensus bookkeeping
/// needed to classify the outcome.
struct Trajectory {
  std::uint32_t agents = 0;
  std::vector<std::uint32_t> zero_counts;  // rounds + 1 entries
  InitialMajority initial_majority = InitialMajority::kTie;
  FinalStateKind final_state_kind = FinalStateKind::kMixed;
};

struct ConsensusStatus {
  bool con = false;
  bool mcon = false;
};

/// Nearest integer, ties rounded up. Applied once when a real-valued agent
/// count (imbalance scale times a power of n) is forced into an initial state.
std::uint32_t round_half_up(double x);

/// Each agent draws its opinion i.i.d. Ber(1/2) from the stream.
/// Throws std::invalid_argument for an odd or zero agent count.
OpinionState init_random_opinions(std::uint32_t agents, SplitMix64& stream);

/// First `zeros` agents hold 0, the remaining `ones` hold 1. Agent identity
/// is exchangeable under G(n, p), so the placement is immaterial.
OpinionState force_initial(std::uint32_t zeros, std::uint32_t ones);

/// One synchronous majority round. Every agent counts the opinions of its
/// neighbors in the old state and adopts the more common one, keeping its own
/// opinion on ties (isolated agents tie 0 = 0 and keep theirs). The agent's
/// own opinion is never counted among the received messages.
OpinionState smp_round(const OpinionState& state, const GraphSample& graph);

/// In-place variant reusing `out`'s storage; `out` must not alias `state`.
void smp_round_into(const OpinionState& state, const GraphSample& graph,
                    OpinionState& out);

/// Runs `config.rounds` majority rounds for one trial. Under kEveryRound a
/// fresh graph is drawn per round from SeedPath(master_seed, trial_index,
/// round); under kFixedGraph the round-0 sample is reused. Fair-coin initial
/// opinions come from the dedicated kOpinionStreamRound stream.
Trajectory run_protocol(const ExperimentConfig& config,
                        std::uint32_t trial_index);

/// con: everyone agrees after `round`. mcon: everyone agrees on the initial
/// majority opinion (a tie initial state accepts either unanimity).
/// Throws std::out_of_range if `round` exceeds the recorded rounds.
ConsensusStatus consensus_status(const Trajectory& traj, std::uint32_t round);

}  // namespace mdl
