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
#include <string>
#include <utility>
#include <vector>

namespace mdl {

/// One evaluated closed-form bound. Probability-valued bounds carry both the
/// raw formula value and its clamp to [0, 1]; a raw value outside [0, 1] is a
/// vacuous bound and is reported as such, never hidden. Parameter
/// preconditions that fail without making the arithmetic meaningless set
/// valid = false with a reason instead of throwing.
struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
  double raw_value = 0.0;
  double clamped_probability = 0.0;
  bool probability_valued = true;
  bool valid = true;
  std::string reason;
};

/// Divergence between Ber(a) and Ber(b):
///   a*log(a/b) + (1-a)*log((1-a)/(1-b)), with 0*log 0 = 0.
/// Endpoint b in {0,1} gives 0 when a matches and +infinity otherwise.
/// Throws std::invalid_argument outside [0,1]^2.
double binary_kl(double a, double b);

/// c0(alpha, lambda) = (pi/(8 e^4)) * (([alpha*lambda - sqrt(2 alpha lambda)]_+ + 1)
///                     * exp(-4/lambda)) / lambda.
/// Per-agent advantage constant for a sqrt(n)-scale opinion imbalance.
double c0_constant(double alpha, double lambda);

/// c1(beta, lambda) = (pi*beta)^{3/2} exp(-(4+2 beta)/lambda) exp(-4 beta^2 lambda)
///                    / (e^6 sqrt(lambda)).
/// Per-agent advantage constant for an n^{3/4}-scale opinion imbalance.
double c1_constant(double beta, double lambda);

/// erf evaluated by its alternating-free power series
/// (2x/sqrt(pi)) e^{-x^2} sum_k (2x^2)^k / (2k+1)!!; absolute error < 1e-14
/// on the range used here. No dependence on platform-specific math.
double erf_series(double x);

/// The alpha solving P{|Z| >= alpha} = 1 - eps/2 for Z ~ Normal(0, 1/2),
/// i.e. erf(alpha) = eps/2, found by bisection to 1e-12 absolute.
/// Throws std::invalid_argument for eps outside (0, 2).
double alpha_for_epsilon(double eps);

/// Lower bound 1/2 + c0(alpha, lambda) / n^{1/4} on the per-agent
/// probability of updating to the majority opinion.
BoundReport prop2_update_lower(double n, double alpha, double lambda);

/// 1 - exp(-c0^2 sqrt(n)): probability that a sqrt(n)-scale majority grows
/// to at least n + c0 n^{3/4} zeros in one round. Params include the
/// integer threshold.
BoundReport prop3_success_bound(double n, double alpha, double lambda);

/// Lower bound 1/2 + c1(beta, lambda), independent of n.
BoundReport prop4_update_lower(double beta, double lambda);

/// 1 - exp(-c1^2 n): probability that an n^{3/4}-scale majority grows to at
/// least n + c1 n zeros in one round.
BoundReport prop5_success_bound(double n, double beta, double lambda);

/// 1 - 2n sqrt((1+gamma)/(1-gamma)) exp(-lambda gamma^2 n^{1-xi}):
/// probability that a gamma*n majority finishes unanimous in one round over
/// G(2n, lambda/n^xi).
BoundReport prop6_consensus_bound(double n, double gamma, double lambda,
                                  double xi);

/// exp(-2n D(1/2 + b_n/(2n) || p_upper)): ceiling on the one-round growth of
/// the zero camp when the per-agent update probability is at most p_upper.
BoundReport prop7_overshoot_bound(double n, double b_n, double p_upper);

/// 1/2 + 60 psi_n p_n sqrt(theta log n) / (lambda n^{1/4}) with
/// p_n = lambda/sqrt(n): ceiling on the per-agent update probability under a
/// psi_n imbalance. Requires psi_n p_n >= 1 and theta > 5 (flagged, not
/// thrown).
BoundReport prop8_update_upper(double n, double psi_n, double lambda,
                               double theta);

/// exp(-(n c_n^2 / (2(n+c_n))) exp(-32 lambda c_n^2 / (sqrt(n)(n-c_n)))):
/// ceiling on the probability of one-round unanimity from a c_n imbalance.
/// Throws for c_n >= n; flags the c_n > n/2 regime as out of scope.
BoundReport prop9_consensus_upper(double n, double c_n, double lambda);

/// (pi/e^4) exp(-4/lambda) / (lambda n^{1/4}) * exp(-i^2/(lambda sqrt(n))):
/// floor on P{X + i = Y} for X, Y ~ Bin(n, lambda/sqrt(n)) independent.
/// Throws for i outside [0, lambda sqrt(n)].
BoundReport lemma1_collision_lower(double n, double lambda, double i);

/// 15 sqrt(theta log n) / (lambda n^{1/4}): ceiling on P{X = Y} for
/// X, Y ~ Bin(n - psi_n, lambda/sqrt(n)) independent, for large n.
BoundReport lemma2_collision_upper(double n, double psi_n, double lambda,
                                   double theta);

/// Three-addend ceiling on P{everyone agrees after two rounds}:
///   2n exp(-(rho/(256 lambda)) log(n) n^{3/2-rho})
/// + 2n exp(-(theta kappa/lambda) log^2(n) sqrt(n))
/// + exp(-(kappa/(64 lambda)) log n),
/// with the internal scales sigma_n = n^{3/4} sqrt(log(n^rho))/sqrt(64 lambda)
/// and tau_n = n^{1/2} sqrt(log(n^kappa))/sqrt(64 lambda) reported in params.
/// rho outside (0, 3/2), kappa <= 0 or theta <= 5 flag valid = false.
BoundReport theorem2_total_bound(double n, double lambda, double rho,
                                 double kappa, double theta);

/// log of the factorial envelope sqrt(2 pi n) n^n e^-n <= n! <= e sqrt(n) n^n e^-n.
/// Throws for n == 0.
std::pair<double, double> stirling_envelope_log(std::uint64_t n);

/// delta_n with n^{delta_n} = sqrt(log(n^theta)), i.e.
/// log(theta log n) / (2 log n). Requires theta log n > 1.
double delta_n_exponent(double n, double theta);

}  // namespace mdl
