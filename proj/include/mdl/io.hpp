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

#include "mdl/bounds.hpp"
#include "mdl/dynamics.hpp"
#include "mdl/monte_carlo.hpp"

namespace mdl {

/// Shortest decimal string that round-trips the exact double value.
std::string format_double(double v);

inline constexpr char kEstimateCsvHeader[] =
    "n,lambda,xi,rounds,redraw,event,trials,successes,p_hat,ci_low,ci_high,"
    "master_seed";

std::string estimate_csv_row(const EstimateReport& report);

inline constexpr char kBoundCsvHeader[] = "name,param_list,raw_value,clamped,valid";

/// params are joined as "key=value" with ';' so the row stays one CSV field.
std::string bound_csv_row(const BoundReport& report);

std::string redraw_to_string(RedrawPolicy redraw);
std::string initial_to_string(const InitialPolicy& initial);

}  // namespace mdl
