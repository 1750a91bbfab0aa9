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

#include "mdl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mdl {

std::uint32_t OpinionState::zeros() const {
  std::uint32_t ones = 0;
  for (std::uint8_t b : opinions) ones += b;
  return agent_count() - ones;
}

std::uint32_t round_half_up(double x) {
  if (x < 0.0) throw std::invalid_argument("round_half_up: negative count");
  return static_cast<std::uint32_t>(std::floor(x + 0.5));
}

double ExperimentConfig::edge_probability(std::uint32_t round) const {
  const double exponent =
      round < per_round_xi.size() ? per_round_xi[round] : xi;
  return lambda / std::pow(static_cast<double>(n), exponent);
}

void ExperimentConfig::validate() const {
  if (n == 0) throw std::invalid_argument("config: n must be positive");
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("config: lambda must be positive");
  }
  if (!(xi >= 0.5 && xi < 1.0)) {
    throw std::invalid_argument("config: xi must lie in [1/2, 1)");
  }
  if (!per_round_xi.empty() && per_round_xi.size() != rounds) {
    throw std::invalid_argument(
        "config: per_round_xi must list one xi per round");
  }
  for (double x : per_round_xi) {
    if (!(x >= 0.5 && x < 1.0)) {
      throw std::invalid_argument("config: per_round_xi entries must lie in [1/2, 1)");
    }
  }
  const std::uint32_t checked_rounds = std::max<std::uint32_t>(rounds, 1);
  for (std::uint32_t r = 0; r < checked_rounds; ++r) {
    const double p = edge_probability(r);
    if (!(p > 0.0 && p <= 1.0)) {
      throw std::invalid_argument(
          "config: edge probability lambda/n^xi must lie in (0, 1]");
    }
  }
  if (initial.kind == InitialPolicy::Kind::kForced &&
      initial.forced_zeros > agents()) {
    throw std::invalid_argument("config: forced zeros exceed the population");
  }
}

OpinionState init_random_opinions(std::uint32_t agents, SplitMix64& stream) {
  if (agents == 0 || agents % 2 != 0) {
    throw std::invalid_argument(
        "init_random_opinions: agent count must be even and positive");
  }
  OpinionState state;
  state.opinions.resize(agents);
  for (auto& b : state.opinions) {
    b = static_cast<std::uint8_t>(stream.next_u64() >> 63);
  }
  return state;
}

OpinionState force_initial(std::uint32_t zeros, std::uint32_t ones) {
  if ((zeros + ones) % 2 != 0) {
    throw std::invalid_argument("force_initial: population must be even");
  }
  OpinionState state;
  state.opinions.assign(zeros + ones, 0);
  std::fill(state.opinions.begin() + zeros, state.opinions.end(),
            std::uint8_t{1});
  return state;
}

void smp_round_into(const OpinionState& state, const GraphSample& graph,
                    OpinionState& out) {
  const std::uint32_t agents = state.agent_count();
  if (graph.vertex_count != agents) {
    throw std::invalid_argument("smp_round: state and graph sizes differ");
  }
  out.opinions.resize(agents);
  const std::uint8_t* old = state.opinions.data();
  for (std::uint32_t i = 0; i < agents; ++i) {
    std::uint32_t ones = 0;
    const auto adj = graph.adjacency(i);
    for (std::uint32_t j : adj) ones += old[j];
    const std::uint32_t zeros = static_cast<std::uint32_t>(adj.size()) - ones;
    // Majority of received opinions; ties (including isolated agents with
    // 0 = 0) keep the old opinion.
    out.opinions[i] = zeros > ones ? 0 : ones > zeros ? 1 : old[i];
  }
}

OpinionState smp_round(const OpinionState& state, const GraphSample& graph) {
  OpinionState out;
  smp_round_into(state, graph, out);
  return out;
}

namespace {

InitialMajority classify_initial(std::uint32_t zeros, std::uint32_t agents) {
  const std::uint32_t half = agents / 2;
  if (zeros > half) return InitialMajority::kZeros;
  if (zeros < half) return InitialMajority::kOnes;
  return InitialMajority::kTie;
}

FinalStateKind classify_final(std::uint32_t zeros, std::uint32_t agents) {
  if (zeros == agents) return FinalStateKind::kAllZero;
  if (zeros == 0) return FinalStateKind::kAllOne;
  return FinalStateKind::kMixed;
}

}  // namespace

Trajectory run_protocol(const ExperimentConfig& config,
                        std::uint32_t trial_index) {
  config.validate();
  const std::uint32_t agents = config.agents();

  OpinionState state;
  if (config.initial.kind == InitialPolicy::Kind::kFairCoin) {
    SplitMix64 stream = derive_stream(
        {config.master_seed, trial_index, kOpinionStreamRound});
    state = init_random_opinions(agents, stream);
  } else {
    state = force_initial(config.initial.forced_zeros,
                          agents - config.initial.forced_zeros);
  }

  Trajectory traj;
  traj.agents = agents;
  traj.zero_counts.reserve(config.rounds + 1);
  traj.zero_counts.push_back(state.zeros());
  traj.initial_majority = classify_initial(traj.zero_counts[0], agents);

  GraphSample graph;
  std::vector<std::uint64_t> edge_scratch;
  OpinionState next;
  for (std::uint32_t round = 0; round < config.rounds; ++round) {
    if (config.redraw == RedrawPolicy::kEveryRound || round == 0) {
      const std::uint32_t graph_round =
          config.redraw == RedrawPolicy::kEveryRound ? round : 0;
      SplitMix64 stream =
          derive_stream({config.master_seed, trial_index, graph_round});
      sample_gnp_into(agents, config.edge_probability(round), stream, graph,
                      edge_scratch);
    }
    smp_round_into(state, graph, next);
    std::swap(state, next);
    traj.zero_counts.push_back(state.zeros());
  }

  traj.final_state_kind = classify_final(traj.zero_counts.back(), agents);
  return traj;
}

ConsensusStatus consensus_status(const Trajectory& traj, std::uint32_t round) {
  if (round >= traj.zero_counts.size()) {
    throw std::out_of_range("consensus_status: round beyond recorded rounds");
  }
  const std::uint32_t zeros = traj.zero_counts[round];
  ConsensusStatus status;
  status.con = zeros == 0 || zeros == traj.agents;
  switch (traj.initial_majority) {
    case InitialMajority::kZeros:
      status.mcon = zeros == traj.agents;
      break;
    case InitialMajority::kOnes:
      status.mcon = zeros == 0;
      break;
    case InitialMajority::kTie:
      status.mcon = status.con;
      break;
  }
  return status;
}

}  // namespace mdl
