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

#include "mdl/io.hpp"

#include <charconv>
#include <cstdio>

namespace mdl {

std::string format_double(double v) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buffer, ptr);
}

std::string redraw_to_string(RedrawPolicy redraw) {
  return redraw == RedrawPolicy::kEveryRound ? "every" : "fixed";
}

std::string initial_to_string(const InitialPolicy& initial) {
  if (initial.kind == InitialPolicy::Kind::kFairCoin) return "coin";
  return "zeros=" + std::to_string(initial.forced_zeros);
}

std::string estimate_csv_row(const EstimateReport& report) {
  std::string row;
  row += std::to_string(report.config.n);
  row += ',';
  row += format_double(report.config.lambda);
  row += ',';
  row += format_double(report.config.xi);
  row += ',';
  row += std::to_string(report.config.rounds);
  row += ',';
  row += redraw_to_string(report.config.redraw);
  row += ',';
  row += report.event.to_string();
  row += ',';
  row += std::to_string(report.trials);
  row += ',';
  row += std::to_string(report.successes);
  row += ',';
  row += format_double(report.p_hat);
  row += ',';
  row += format_double(report.ci_low);
  row += ',';
  row += format_double(report.ci_high);
  row += ',';
  row += std::to_string(report.master_seed);
  return row;
}

std::string bound_csv_row(const BoundReport& report) {
  std::string params;
  for (const auto& [key, value] : report.params) {
    if (!params.empty()) params += ';';
    params += key;
    params += '=';
    params += format_double(value);
  }
  std::string row = report.name;
  row += ',';
  row += params;
  row += ',';
  row += format_double(report.raw_value);
  row += ',';
  row += report.probability_valued ? format_double(report.clamped_probability)
                                   : format_double(report.raw_value);
  row += ',';
  row += report.valid ? "true" : "false";
  return row;
}

}  // namespace mdl
