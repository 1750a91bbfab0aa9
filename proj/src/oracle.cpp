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

#include "mdl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mdl/bounds.hpp"
#include "mdl/rng.hpp"

namespace mdl {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Trial counts above which the double summations switch from full support to
// windows that keep all but 1e-14 probability mass per tail.
constexpr std::uint64_t kFullSupportLimit = 5000;
constexpr double kTailMass = 1e-14;

// Largest n for which chernoff_mgf_bound_check convolves the exact PMF.
constexpr std::uint64_t kExactConvolutionLimit = 3000;

// Kahan-Neumaier compensated accumulator; the double sums add up to ~2.5e7
// terms and the verified margins should not drown in accumulation error.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// [lo, hi] window containing all but kTailMass of the PMF per side.
struct SupportWindow {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

SupportWindow mass_window(const std::vector<double>& log_pmf) {
  SupportWindow w{0, log_pmf.size() - 1};
  double mass = 0.0;
  for (std::uint64_t k = 0; k < log_pmf.size(); ++k) {
    mass += std::exp(log_pmf[k]);
    if (mass > kTailMass) {
      w.lo = k;
      break;
    }
  }
  mass = 0.0;
  for (std::uint64_t k = log_pmf.size(); k-- > 0;) {
    mass += std::exp(log_pmf[k]);
    if (mass > kTailMass) {
      w.hi = k;
      break;
    }
  }
  return w;
}

SupportWindow full_window(const std::vector<double>& log_pmf) {
  return {0, log_pmf.size() - 1};
}

// P{X >= Y + shift} for X ~ Bin(a, p), Y ~ Bin(b, p) independent, by double
// summation over the two PMFs.
double binom_ge_prob(std::uint64_t a, std::uint64_t b, double p,
                     std::int64_t shift) {
  const auto lx = binom_log_pmf_table({a, p});
  const auto ly = binom_log_pmf_table({b, p});
  const bool truncate = std::max(a, b) > kFullSupportLimit;
  const SupportWindow wx = truncate ? mass_window(lx) : full_window(lx);
  const SupportWindow wy = truncate ? mass_window(ly) : full_window(ly);

  // Truncation (when active) discards at most kTailMass per tail and
  // variable, far below the tolerances any caller verifies against.
  CompensatedSum total;
  for (std::uint64_t j = wy.lo; j <= wy.hi; ++j) {
    const double lpy = ly[j];
    if (lpy == kNegInf) continue;
    const std::int64_t kmin_signed = static_cast<std::int64_t>(j) + shift;
    if (kmin_signed > static_cast<std::int64_t>(wx.hi)) continue;
    const std::uint64_t kmin =
        kmin_signed <= static_cast<std::int64_t>(wx.lo)
            ? wx.lo
            : static_cast<std::uint64_t>(kmin_signed);
    // Inner sum from the tail inward so small terms accumulate first.
    CompensatedSum inner;
    for (std::uint64_t k = wx.hi + 1; k-- > kmin;) {
      inner.add(std::exp(lx[k] + lpy));
    }
    total.add(inner.value());
  }
  return std::min(1.0, std::max(0.0, total.value()));
}

}  // namespace

double binom_log_pmf(const BinomialSpec& spec, std::uint64_t k) {
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
    throw std::invalid_argument("binom_log_pmf: p must lie in [0, 1]");
  }
  if (k > spec.trials) {
    throw std::out_of_range("binom_log_pmf: k exceeds trial count");
  }
  if (spec.p == 0.0) return k == 0 ? 0.0 : kNegInf;
  if (spec.p == 1.0) return k == spec.trials ? 0.0 : kNegInf;
  const auto n = static_cast<double>(spec.trials);
  const auto kd = static_cast<double>(k);
  const double log_choose = std::lgamma(n + 1.0) - std::lgamma(kd + 1.0) -
                            std::lgamma(n - kd + 1.0);
  return log_choose + kd * std::log(spec.p) +
         (n - kd) * std::log1p(-spec.p);
}

std::vector<double> binom_log_pmf_table(const BinomialSpec& spec) {
  std::vector<double> table(spec.trials + 1);
  for (std::uint64_t k = 0; k <= spec.trials; ++k) {
    table[k] = binom_log_pmf(spec, k);
  }
  return table;
}

double collision_prob(std::uint64_t n, double p, std::uint64_t i) {
  if (i > n) return 0.0;
  const auto lp = binom_log_pmf_table({n, p});
  CompensatedSum sum;
  for (std::uint64_t ell = 0; ell + i <= n; ++ell) {
    sum.add(std::exp(lp[ell] + lp[ell + i]));
  }
  return std::min(1.0, std::max(0.0, sum.value()));
}

UpdateProbability update_to_zero_exact(int own_opinion, std::uint64_t zeros,
                                       std::uint64_t ones, double p) {
  if (own_opinion != 0 && own_opinion != 1) {
    throw std::invalid_argument("update_to_zero_exact: opinion must be 0 or 1");
  }
  if (zeros + ones < 1) {
    throw std::invalid_argument("update_to_zero_exact: empty population");
  }
  if (own_opinion == 0 && zeros == 0) {
    throw std::invalid_argument(
        "update_to_zero_exact: own = 0 requires zeros >= 1");
  }
  if (own_opinion == 1 && ones == 0) {
    throw std::invalid_argument(
        "update_to_zero_exact: own = 1 requires ones >= 1");
  }
  UpdateProbability result;
  if (own_opinion == 0) {
    // Ties keep 0, so deciding 0 means at least as many 0-senders as
    // 1-senders among the zeros-1 and ones potential neighbors.
    result.exact = binom_ge_prob(zeros - 1, ones, p, 0);
    result.surrogate = binom_ge_prob(zeros - 1, ones, p, -1);
  } else {
    // A 1-agent needs a strict zero majority.
    result.exact = binom_ge_prob(zeros, ones - 1, p, 1);
    result.surrogate = binom_ge_prob(zeros, ones - 1, p, 0);
  }
  return result;
}

UpdateProbability equal_split_update_prob(std::uint64_t n,
                                          std::int64_t imbalance, double p,
                                          int own_opinion) {
  if (imbalance > static_cast<std::int64_t>(n) ||
      imbalance < -static_cast<std::int64_t>(n)) {
    throw std::invalid_argument(
        "equal_split_update_prob: |imbalance| exceeds n");
  }
  const std::uint64_t zeros = n + imbalance;
  const std::uint64_t ones = n - imbalance;
  return update_to_zero_exact(own_opinion, zeros, ones, p);
}

ChernoffCheck chernoff_mgf_bound_check(std::uint64_t n, std::int64_t a_n,
                                       double q0, double q1,
                                       double threshold) {
  if (a_n > static_cast<std::int64_t>(n) ||
      a_n < -static_cast<std::int64_t>(n)) {
    throw std::invalid_argument("chernoff_mgf_bound_check: |a_n| exceeds n");
  }
  if (!(q0 >= 0.0 && q0 <= 1.0 && q1 >= 0.0 && q1 <= 1.0)) {
    throw std::invalid_argument(
        "chernoff_mgf_bound_check: rates must lie in [0, 1]");
  }
  const std::uint64_t t0 = n + a_n;  // Ber(q0) population
  const std::uint64_t t1 = n - a_n;  // Ber(q1) population
  const double two_n = static_cast<double>(t0 + t1);

  ChernoffCheck check;

  // Hoeffding's exponential-moment bound for a sum of independent Bernoulli
  // variables with mean rate q_bar; informative only above the mean.
  const double q_bar =
      (static_cast<double>(t0) * q0 + static_cast<double>(t1) * q1) / two_n;
  const double tau = std::min(1.0, threshold / two_n);
  check.analytic_bound =
      tau > q_bar && q_bar > 0.0 && q_bar < 1.0
          ? std::exp(-two_n * binary_kl(tau, q_bar))
          : 1.0;

  if (n <= kExactConvolutionLimit) {
    const auto l0 = binom_log_pmf_table({t0, q0});
    const auto l1 = binom_log_pmf_table({t1, q1});
    std::vector<double> p1(l1.size());
    for (std::size_t k = 0; k < l1.size(); ++k) p1[k] = std::exp(l1[k]);
    std::vector<double> pmf(t0 + t1 + 1, 0.0);
    for (std::uint64_t i = 0; i <= t0; ++i) {
      const double pi = std::exp(l0[i]);
      if (pi == 0.0) continue;
      for (std::uint64_t j = 0; j <= t1; ++j) {
        pmf[i + j] += pi * p1[j];
      }
    }
    const std::int64_t kmin = threshold <= 0.0
                                  ? 0
                                  : static_cast<std::int64_t>(
                                        std::ceil(threshold));
    CompensatedSum tail;
    for (std::int64_t k = static_cast<std::int64_t>(pmf.size()) - 1;
         k >= kmin; --k) {
      tail.add(pmf[k]);
    }
    check.tail = std::min(1.0, std::max(0.0, tail.value()));
    check.exact = true;
  } else {
    // Too large to convolve exactly; flagged fixed-seed Monte Carlo.
    constexpr std::uint32_t kSamples = 20000;
    SplitMix64 stream = derive_stream({0x6D646C2D6D63ULL, 0, 0});
    std::uint32_t hits = 0;
    for (std::uint32_t s = 0; s < kSamples; ++s) {
      std::uint64_t total = 0;
      for (std::uint64_t i = 0; i < t0; ++i) total += stream.next_bernoulli(q0);
      for (std::uint64_t i = 0; i < t1; ++i) total += stream.next_bernoulli(q1);
      hits += static_cast<double>(total) >= threshold;
    }
    check.tail = static_cast<double>(hits) / kSamples;
    check.exact = false;
  }
  return check;
}

}  // namespace mdl
