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
#include <limits>
#include <vector>

#include <stdexcept>

#include <doctest.h>

#include "mdl/bounds.hpp"
#include "mdl/dynamics.hpp"
#include "mdl/oracle.hpp"

using namespace mdl;

TEST_CASE("binomial log pmf reference values") {
  CHECK(binom_log_pmf({0, 0.3}, 0) == 0.0);
  CHECK(binom_log_pmf({10, 0.5}, 5) ==
        doctest::Approx(std::log(252.0 / 1024.0)).epsilon(1e-13));
  // High-precision cross-check, 1e-9 relative.
  CHECK(binom_log_pmf({1000, 0.01}, 10) ==
        doctest::Approx(-2.07353731695906).epsilon(1e-9));
  CHECK_THROWS_AS(binom_log_pmf({10, 0.5}, 11), std::out_of_range);
  CHECK_THROWS_AS(binom_log_pmf({10, 1.5}, 1), std::invalid_argument);
}

TEST_CASE("point-mass probabilities are exact") {
  CHECK(binom_log_pmf({5, 0.0}, 0) == 0.0);
  CHECK(binom_log_pmf({5, 0.0}, 1) == -std::numeric_limits<double>::infinity());
  CHECK(binom_log_pmf({5, 1.0}, 5) == 0.0);
  CHECK(binom_log_pmf({5, 1.0}, 4) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("pmf normalizes to 1 within 1e-10") {
  for (const auto& [n, p] : std::vector<std::pair<std::uint64_t, double>>{
           {1, 0.5}, {100, 0.3}, {2000, 0.01}, {500, 0.0}, {500, 1.0}}) {
    const auto table = binom_log_pmf_table({n, p});
    double total = 0.0;
    for (double lp : table) total += std::exp(lp);
    CHECK(std::abs(total - 1.0) < 1e-10);
  }
}

TEST_CASE("collision probability basics") {
  CHECK(collision_prob(5, 0.5, 6) == 0.0);
  // n = 1: X = Y iff both heads or both tails.
  CHECK(collision_prob(1, 0.5, 0) == doctest::Approx(0.5).epsilon(1e-15));
  // Hand enumeration for n = 2, p = 0.5, i = 1:
  // P{Y = X+1} = P(X=0)P(Y=1) + P(X=1)P(Y=2) = .25*.5 + .5*.25 = 0.25.
  CHECK(collision_prob(2, 0.5, 1) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("collision probability is symmetric in the two roles") {
  for (const std::uint64_t n : {50ull, 500ull}) {
    const double p = 1.0 / std::sqrt(static_cast<double>(n));
    const auto table = binom_log_pmf_table({n, p});
    for (const std::uint64_t i : {0ull, 3ull, 10ull}) {
      // Swapped-role evaluation: sum_k P(Y=k) P(X=k-i).
      double swapped = 0.0;
      for (std::uint64_t k = i; k <= n; ++k) {
        swapped += std::exp(table[k] + table[k - i]);
      }
      const double direct = collision_prob(n, p, i);
      CHECK(direct == doctest::Approx(swapped).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero-offset collision dominates every offset") {
  for (const std::uint64_t n : {100ull, 900ull}) {
    for (const double lambda : {0.5, 1.0, 2.0}) {
      const double p = lambda / std::sqrt(static_cast<double>(n));
      const double at0 = collision_prob(n, p, 0);
      for (std::uint64_t i = 1; i <= 10; ++i) {
        CHECK(collision_prob(n, p, i) <= at0);
      }
    }
  }
}

TEST_CASE("collision floor from the closed form") {
  // The lemma1 grid at one desk-scale point.
  const double value = collision_prob(10000, 0.01, 5);
  CHECK(value >= lemma1_collision_lower(1e4, 1.0, 5.0).raw_value);
}

TEST_CASE("update probability corner cases") {
  // A lone 0-agent has no neighbors at all: the 0 = 0 tie keeps 0.
  CHECK(update_to_zero_exact(0, 1, 0, 0.7).exact == 1.0);
  // A lone 1-agent can never see a strict zero majority with zeros = 0.
  CHECK(update_to_zero_exact(1, 0, 1, 0.7).exact == 0.0);
  // One agent per camp, p = 1/2: decide 0 iff the single potential
  // 1-neighbor edge is absent.
  const UpdateProbability u = update_to_zero_exact(0, 1, 1, 0.5);
  CHECK(u.exact == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(u.surrogate == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(update_to_zero_exact(0, 0, 3, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(update_to_zero_exact(1, 3, 0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(update_to_zero_exact(2, 1, 1, 0.5), std::invalid_argument);
}

TEST_CASE("exhaustive check on two agents") {
  // zeros = ones = 1, general p: the only graph freedom is one edge.
  for (const double p : {0.1, 0.37, 0.9}) {
    const UpdateProbability u = update_to_zero_exact(0, 1, 1, p);
    // Edge absent: tie 0=0 keeps 0. Edge present: sees {1}, flips.
    CHECK(u.exact == doctest::Approx(1.0 - p).epsilon(1e-14));
    const UpdateProbability v = update_to_zero_exact(1, 1, 1, p);
    // The 1-agent updates to 0 only on a strict majority, impossible with
    // one potential 0-neighbor... unless the edge is present and the tie
    // rule does not apply: N0 = 1 > N1 = 0.
    CHECK(v.exact == doctest::Approx(p).epsilon(1e-14));
  }
}

TEST_CASE("relabeling symmetry at an even split") {
  for (const std::uint64_t n : {20ull, 200ull}) {
    for (const double p : {0.05, 0.2}) {
      const double p0 = equal_split_update_prob(n, 0, p, 0).exact;
      const double p1 = equal_split_update_prob(n, 0, p, 1).exact;
      CHECK(p0 + p1 == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("the 0-agent is at least as likely to decide 0") {
  for (const std::uint64_t n : {50ull, 400ull}) {
    const double p = 1.0 / std::sqrt(static_cast<double>(n));
    for (const std::int64_t imbalance : {0ll, 5ll, 20ll}) {
      const double own0 = equal_split_update_prob(n, imbalance, p, 0).exact;
      const double own1 = equal_split_update_prob(n, imbalance, p, 1).exact;
      CHECK(own0 >= own1);
    }
  }
}

TEST_CASE("surrogate event contains the exact event") {
  for (const std::int64_t imbalance : {0ll, 10ll, 30ll}) {
    for (int own = 0; own <= 1; ++own) {
      const UpdateProbability u =
          equal_split_update_prob(400, imbalance, 0.05, own);
      CHECK(u.surrogate >= u.exact);
    }
  }
}

TEST_CASE("update floors from the per-agent closed forms") {
  // sqrt(n)-scale imbalance at n = 200, lambda = 1.
  {
    const std::uint64_t n = 200;
    const double p = 1.0 / std::sqrt(200.0);
    const auto imbalance =
        static_cast<std::int64_t>(std::ceil(std::sqrt(200.0)));
    const double bound = prop2_update_lower(200.0, 1.0, 1.0).raw_value;
    CHECK(equal_split_update_prob(n, imbalance, p, 0).exact >= bound);
    CHECK(equal_split_update_prob(n, imbalance, p, 1).exact >= bound);
  }
  // n^{3/4}-scale imbalance, beta = 0.5.
  {
    const std::uint64_t n = 200;
    const double p = 1.0 / std::sqrt(200.0);
    const auto imbalance = static_cast<std::int64_t>(
        round_half_up(0.5 * std::pow(200.0, 0.75)));
    const double bound = prop4_update_lower(0.5, 1.0).raw_value;
    CHECK(equal_split_update_prob(n, imbalance, p, 0).exact >= bound);
    CHECK(equal_split_update_prob(n, imbalance, p, 1).exact >= bound);
  }
}

TEST_CASE("equal_split rejects out-of-range imbalance") {
  CHECK_THROWS_AS(equal_split_update_prob(10, 11, 0.5, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(equal_split_update_prob(10, -11, 0.5, 0),
                  std::invalid_argument);
}

TEST_CASE("chernoff check: degenerate threshold") {
  const ChernoffCheck below = chernoff_mgf_bound_check(100, 0, 0.5, 0.5, -3.0);
  CHECK(below.exact);
  CHECK(below.tail == 1.0);
  const ChernoffCheck above =
      chernoff_mgf_bound_check(100, 0, 0.5, 0.5, 201.0);
  CHECK(above.tail == 0.0);
}

TEST_CASE("chernoff check: exact tail respects the exponential bound") {
  for (const std::uint64_t n : {200ull, 1000ull}) {
    for (const double scale : {0.5, 1.0, 2.0}) {
      const double tau = scale * std::sqrt(static_cast<double>(n));
      const double threshold = static_cast<double>(n) + tau;
      const ChernoffCheck check =
          chernoff_mgf_bound_check(n, 0, 0.5, 0.5, threshold);
      CHECK(check.exact);
      CHECK(check.tail <= check.analytic_bound * (1.0 + 1e-12));
      const double prop7 =
          prop7_overshoot_bound(static_cast<double>(n), tau, 0.5)
              .clamped_probability;
      CHECK(check.tail <= prop7 * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("chernoff check: success probability beats the one-round floor") {
  // Both camps update to 0 at rate phi_n: the zero camp reaches
  // n + c0 n^{3/4} at least as often as the closed form promises.
  const std::uint64_t n = 1000;
  const double c0 = c0_constant(1.0, 1.0);
  const double phi = 0.5 + c0 / std::pow(static_cast<double>(n), 0.25);
  const double threshold =
      static_cast<double>(n) + c0 * std::pow(static_cast<double>(n), 0.75);
  const ChernoffCheck check =
      chernoff_mgf_bound_check(n, 0, phi, phi, threshold);
  CHECK(check.exact);
  const double floor = prop3_success_bound(1000.0, 1.0, 1.0).clamped_probability;
  CHECK(check.tail >= floor);
}

TEST_CASE("chernoff check: mixed rates use the mean rate") {
  const ChernoffCheck check =
      chernoff_mgf_bound_check(500, 100, 0.6, 0.4, 560.0);
  CHECK(check.exact);
  // mean count = 600*0.6 + 400*0.4 = 520; the tail at 560 is genuinely small
  // and below the KL bound.
  CHECK(check.tail < 0.02);
  CHECK(check.tail <= check.analytic_bound);
}

namespace {

// Independent route: P{Bin(a,p) >= Bin(b,p)} by suffix sums over the PMFs.
double ge_prob_by_suffix_sums(std::uint64_t a, std::uint64_t b, double p) {
  const auto la = binom_log_pmf_table({a, p});
  const auto lb = binom_log_pmf_table({b, p});
  std::vector<double> suffix(la.size() + 1, 0.0);
  for (std::size_t k = la.size(); k-- > 0;) {
    suffix[k] = suffix[k + 1] + std::exp(la[k]);
  }
  double total = 0.0;
  for (std::size_t j = 0; j < lb.size() && j < suffix.size(); ++j) {
    total += std::exp(lb[j]) * suffix[j];
  }
  return total;
}

}  // namespace

TEST_CASE("double summation agrees with an independent suffix-sum route") {
  // 4800 trials stays on the full-support path; 5600 switches to mass
  // windows. Both must agree with the factored computation.
  const double p = 0.012;
  const double full = update_to_zero_exact(0, 4800, 4700, p).exact;
  CHECK(full ==
        doctest::Approx(ge_prob_by_suffix_sums(4799, 4700, p)).epsilon(1e-10));
  const double windowed = update_to_zero_exact(0, 5600, 5500, p).exact;
  CHECK(windowed ==
        doctest::Approx(ge_prob_by_suffix_sums(5599, 5500, p)).epsilon(1e-10));
}
