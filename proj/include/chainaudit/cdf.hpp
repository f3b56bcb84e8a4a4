/*
 * Copyright 2026 The chain-audit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <utility>
#include <vector>

namespace chainaudit {

// Empirical CDF as (value, cumulative fraction) points, one per distinct
// value, values ascending, last fraction exactly 1.
using Cdf = std::vector<std::pair<double, double>>;

Cdf empirical_cdf(std::vector<double> values);

// Smallest value v with F(v) >= q, for q in (0, 1]. Empty input yields NaN.
double quantile(const Cdf& cdf, double q);

}  // namespace chainaudit
