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

#include "mdl/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mdl/dynamics.hpp"

namespace mdl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

BoundReport probability_report(std::string name,
                               std::vector<std::pair<std::string, double>> params,
                               double raw) {
  BoundReport report;
  report.name = std::move(name);
  report.params = std::move(params);
  report.raw_value = raw;
  report.clamped_probability = std::isnan(raw)
                                   ? raw
                                   : std::min(1.0, std::max(0.0, raw));
  return report;
}

void flag(BoundReport& report, const std::string& reason) {
  report.valid = false;
  report.reason = report.reason.empty() ? reason
                                        : report.reason + "; " + reason;
}

}  // namespace

double binary_kl(double a, double b) {
  require(a >= 0.0 && a <= 1.0, "binary_kl: a must lie in [0, 1]");
  require(b >= 0.0 && b <= 1.0, "binary_kl: b must lie in [0, 1]");
  if (b == 0.0) return a == 0.0 ? 0.0 : kInf;
  if (b == 1.0) return a == 1.0 ? 0.0 : kInf;
  const double left = a == 0.0 ? 0.0 : a * std::log(a / b);
  const double right = a == 1.0 ? 0.0 : (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
  return left + right;
}

double c0_constant(double alpha, double lambda) {
  require(alpha > 0.0, "c0: alpha must be positive");
  require(lambda > 0.0, "c0: lambda must be positive");
  const double al = alpha * lambda;
  const double positive_part = std::max(0.0, al - std::sqrt(2.0 * al));
  return std::numbers::pi / (8.0 * std::exp(4.0)) * (positive_part + 1.0) *
         std::exp(-4.0 / lambda) / lambda;
}

double c1_constant(double beta, double lambda) {
  require(beta > 0.0, "c1: beta must be positive");
  require(lambda > 0.0, "c1: lambda must be positive");
  return std::pow(std::numbers::pi * beta, 1.5) *
         std::exp(-(4.0 + 2.0 * beta) / lambda) *
         std::exp(-4.0 * beta * beta * lambda) /
         (std::exp(6.0) * std::sqrt(lambda));
}

double erf_series(double x) {
  if (x < 0.0) return -erf_series(-x);
  if (x == 0.0) return 0.0;
  if (x > 7.0) return 1.0;  // erfc(7) < 1e-22, below every tolerance here
  const double t = 2.0 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 400; ++k) {
    term *= t / static_cast<double>(2 * k + 3);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return 2.0 * x / std::sqrt(std::numbers::pi) * std::exp(-x * x) * sum;
}

double alpha_for_epsilon(double eps) {
  require(eps > 0.0 && eps < 2.0, "alpha_for_epsilon: eps must lie in (0, 2)");
  const double target = eps / 2.0;
  double lo = 0.0;
  double hi = 8.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (erf_series(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

BoundReport prop2_update_lower(double n, double alpha, double lambda) {
  require(n >= 1.0, "prop2: n must be at least 1");
  const double c0 = c0_constant(alpha, lambda);
  const double raw = 0.5 + c0 / std::pow(n, 0.25);
  return probability_report("prop2",
                            {{"n", n}, {"alpha", alpha}, {"lambda", lambda},
                             {"c0", c0}},
                            raw);
}

BoundReport prop3_success_bound(double n, double alpha, double lambda) {
  require(n >= 1.0, "prop3: n must be at least 1");
  const double c0 = c0_constant(alpha, lambda);
  const double raw = -std::expm1(-c0 * c0 * std::sqrt(n));
  const double threshold =
      n + round_half_up(c0 * std::pow(n, 0.75));
  return probability_report("prop3",
                            {{"n", n}, {"alpha", alpha}, {"lambda", lambda},
                             {"c0", c0}, {"threshold", threshold}},
                            raw);
}

BoundReport prop4_update_lower(double beta, double lambda) {
  const double c1 = c1_constant(beta, lambda);
  return probability_report("prop4",
                            {{"beta", beta}, {"lambda", lambda}, {"c1", c1}},
                            0.5 + c1);
}

BoundReport prop5_success_bound(double n, double beta, double lambda) {
  require(n >= 1.0, "prop5: n must be at least 1");
  const double c1 = c1_constant(beta, lambda);
  const double raw = -std::expm1(-c1 * c1 * n);
  const double threshold = n + round_half_up(c1 * n);
  return probability_report("prop5",
                            {{"n", n}, {"beta", beta}, {"lambda", lambda},
                             {"c1", c1}, {"threshold", threshold}},
                            raw);
}

BoundReport prop6_consensus_bound(double n, double gamma, double lambda,
                                  double xi) {
  require(n >= 1.0, "prop6: n must be at least 1");
  require(gamma > 0.0 && gamma < 1.0, "prop6: gamma must lie in (0, 1)");
  require(lambda > 0.0, "prop6: lambda must be positive");
  require(xi >= 0.5 && xi < 1.0, "prop6: xi must lie in [1/2, 1)");
  const double log_failure = std::log(2.0 * n) +
                             0.5 * std::log((1.0 + gamma) / (1.0 - gamma)) -
                             lambda * gamma * gamma * std::pow(n, 1.0 - xi);
  const double raw = 1.0 - std::exp(log_failure);
  return probability_report(
      "prop6",
      {{"n", n}, {"gamma", gamma}, {"lambda", lambda}, {"xi", xi}}, raw);
}

BoundReport prop7_overshoot_bound(double n, double b_n, double p_upper) {
  require(n >= 1.0, "prop7: n must be at least 1");
  require(b_n >= 0.0, "prop7: b_n must be non-negative");
  require(0.5 + b_n / (2.0 * n) <= 1.0, "prop7: b_n/2n must not exceed 1/2");
  require(p_upper > 0.0 && p_upper < 1.0, "prop7: p_upper must lie in (0, 1)");
  const double arg = 0.5 + b_n / (2.0 * n);
  const double raw = std::exp(-2.0 * n * binary_kl(arg, p_upper));
  return probability_report(
      "prop7", {{"n", n}, {"bn", b_n}, {"pupper", p_upper}}, raw);
}

BoundReport prop8_update_upper(double n, double psi_n, double lambda,
                               double theta) {
  require(n > 1.0, "prop8: n must exceed 1");
  require(psi_n >= 0.0, "prop8: psi_n must be non-negative");
  require(lambda > 0.0, "prop8: lambda must be positive");
  const double p_n = lambda / std::sqrt(n);
  const double log_n = std::log(n);
  const double theta_log_n = theta * log_n;
  double delta = std::numeric_limits<double>::quiet_NaN();
  double raw = std::numeric_limits<double>::quiet_NaN();
  if (theta_log_n > 0.0) {
    delta = std::log(theta_log_n) / (2.0 * log_n);
    raw = 0.5 + 60.0 * psi_n * p_n * std::sqrt(theta_log_n) /
                    (lambda * std::pow(n, 0.25));
  }
  BoundReport report = probability_report(
      "prop8",
      {{"n", n}, {"psin", psi_n}, {"lambda", lambda}, {"theta", theta},
       {"delta_n", delta}},
      raw);
  if (psi_n * p_n < 1.0) flag(report, "requires psi_n * p_n >= 1");
  if (!(theta > 5.0)) flag(report, "requires theta > 5");
  if (!(theta_log_n > 1.0)) flag(report, "requires theta * log(n) > 1");
  return report;
}

BoundReport prop9_consensus_upper(double n, double c_n, double lambda) {
  require(n >= 1.0, "prop9: n must be at least 1");
  require(c_n >= 0.0, "prop9: c_n must be non-negative");
  require(c_n < n, "prop9: c_n must be below n");
  require(lambda > 0.0, "prop9: lambda must be positive");
  const double inner =
      std::exp(-32.0 * lambda * c_n * c_n / (std::sqrt(n) * (n - c_n)));
  const double raw =
      std::exp(-(n * c_n * c_n / (2.0 * (n + c_n))) * inner);
  BoundReport report = probability_report(
      "prop9", {{"n", n}, {"cn", c_n}, {"lambda", lambda}}, raw);
  if (c_n > n / 2.0) {
    flag(report, "c_n/n must vanish; c_n > n/2 is out of the stated regime");
  }
  return report;
}

BoundReport lemma1_collision_lower(double n, double lambda, double i) {
  require(n >= 1.0, "lemma1: n must be at least 1");
  require(lambda > 0.0, "lemma1: lambda must be positive");
  require(i >= 0.0 && i <= lambda * std::sqrt(n),
          "lemma1: i must lie in [0, lambda*sqrt(n)]");
  const double raw = std::numbers::pi / std::exp(4.0) *
                     std::exp(-4.0 / lambda) /
                     (lambda * std::pow(n, 0.25)) *
                     std::exp(-i * i / (lambda * std::sqrt(n)));
  return probability_report("lemma1",
                            {{"n", n}, {"lambda", lambda}, {"i", i}}, raw);
}

BoundReport lemma2_collision_upper(double n, double psi_n, double lambda,
                                   double theta) {
  require(n > 1.0, "lemma2: n must exceed 1");
  require(lambda > 0.0, "lemma2: lambda must be positive");
  require(theta > 5.0, "lemma2: theta must exceed 5");
  require(n - psi_n >= 1.0, "lemma2: n - psi_n must be at least 1");
  const double raw = 15.0 * std::sqrt(theta * std::log(n)) /
                     (lambda * std::pow(n, 0.25));
  return probability_report(
      "lemma2",
      {{"n", n}, {"psin", psi_n}, {"lambda", lambda}, {"theta", theta}}, raw);
}

BoundReport theorem2_total_bound(double n, double lambda, double rho,
                                 double kappa, double theta) {
  require(n > 1.0, "thm2: n must exceed 1");
  require(lambda > 0.0, "thm2: lambda must be positive");
  const double log_n = std::log(n);
  const double sigma_n = std::pow(n, 0.75) * std::sqrt(rho * log_n) /
                         std::sqrt(64.0 * lambda);
  const double tau_n = std::sqrt(n) * std::sqrt(kappa * log_n) /
                       std::sqrt(64.0 * lambda);
  const double addend1 =
      2.0 * n *
      std::exp(-rho / (256.0 * lambda) * log_n * std::pow(n, 1.5 - rho));
  const double addend2 =
      2.0 * n * std::exp(-theta * kappa / lambda * log_n * log_n * std::sqrt(n));
  const double addend3 = std::exp(-kappa / (64.0 * lambda) * log_n);
  BoundReport report = probability_report(
      "thm2",
      {{"n", n}, {"lambda", lambda}, {"rho", rho}, {"kappa", kappa},
       {"theta", theta}, {"sigma_n", sigma_n}, {"tau_n", tau_n},
       {"addend1", addend1}, {"addend2", addend2}, {"addend3", addend3}},
      addend1 + addend2 + addend3);
  if (!(rho > 0.0 && rho < 1.5)) flag(report, "requires rho in (0, 3/2)");
  if (!(kappa > 0.0)) flag(report, "requires kappa > 0");
  if (!(theta > 5.0)) flag(report, "requires theta > 5");
  return report;
}

std::pair<double, double> stirling_envelope_log(std::uint64_t n) {
  require(n >= 1, "stirling: n must be at least 1");
  const auto nd = static_cast<double>(n);
  const double core = nd * (std::log(nd) - 1.0);
  const double log_lower = 0.5 * std::log(2.0 * std::numbers::pi * nd) + core;
  const double log_upper = 1.0 + 0.5 * std::log(nd) + core;
  return {log_lower, log_upper};
}

double delta_n_exponent(double n, double theta) {
  require(n > 1.0, "delta_n: n must exceed 1");
  require(theta * std::log(n) > 0.0, "delta_n: theta * log(n) must be positive");
  return std::log(theta * std::log(n)) / (2.0 * std::log(n));
}

}  // namespace mdl
