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

namespace mdl {

struct BinomialSpec {
  std::uint64_t trials = 0;
  double p = 0.0;  // in [0, 1]; the endpoints give exact point masses
};

/// log P{Bin(trials, p) = k} via log-gamma. Throws std::out_of_range for
/// k > trials and std::invalid_argument for p outside [0, 1].
double binom_log_pmf(const BinomialSpec& spec, std::uint64_t k);

/// Full log-PMF table, entries k = 0 .. trials.
std::vector<double> binom_log_pmf_table(const BinomialSpec& spec);

/// Exact P{Y = X + i} for independent X, Y ~ Bin(n, p), summed over the full
/// support in log-space. Returns 0 for i > n.
double collision_prob(std::uint64_t n, double p, std::uint64_t i);

/// Exact and +1-slack update probabilities for one agent.
struct UpdateProbability {
  double exact = 0.0;      // probability that the next opinion is 0
  double surrogate = 0.0;  // same event relaxed by one message of slack
};

/// Exact probability that an agent's next opinion is 0 when the population
/// holds `zeros` zeros and `ones` ones (the agent itself included in its own
/// camp) and every potential neighbor link is present independently with
/// probability p. Tie keeps the agent's own opinion, so
///   own = 0: P{Bin(zeros-1, p) >= Bin(ones, p)},
///   own = 1: P{Bin(zeros, p)  >  Bin(ones-1, p)}.
/// The surrogate value relaxes the comparison by one, which is the slack the
/// closed-form machinery works with; the gap between the two is measurable
/// from this report. Throws on count underflow (own = 0 with zeros = 0, etc).
UpdateProbability update_to_zero_exact(int own_opinion, std::uint64_t zeros,
                                       std::uint64_t ones, double p);

/// update_to_zero_exact for the split (n + imbalance) zeros versus
/// (n - imbalance) ones. Throws for |imbalance| > n.
UpdateProbability equal_split_update_prob(std::uint64_t n,
                                          std::int64_t imbalance, double p,
                                          int own_opinion);

struct ChernoffCheck {
  double tail = 0.0;           // P{S >= threshold}
  bool exact = true;           // false: Monte Carlo fallback was used
  double analytic_bound = 1.0; // exp(-2n D(threshold/(2n) || mean rate)), 1 if vacuous
};

/// Upper tail of S = Bin(n + a_n, q0) + Bin(n - a_n, q1), the convolution of
/// the two independent per-camp success counts, against the exponential
/// moment bound exp(-2n D(t/(2n) || q_bar)) for the mixture mean rate q_bar.
/// Exact PMF convolution up to n = 3000; larger sizes fall back to a flagged
/// fixed-seed Monte Carlo estimate.
ChernoffCheck chernoff_mgf_bound_check(std::uint64_t n, std::int64_t a_n,
                                       double q0, double q1, double threshold);

}  // namespace mdl
