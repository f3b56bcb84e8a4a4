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

#include "chainaudit/cdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chainaudit {

Cdf empirical_cdf(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  Cdf cdf;
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
    cdf.emplace_back(values[i], static_cast<double>(i + 1) / n);
  }
  return cdf;
}

double quantile(const Cdf& cdf, double q) {
  if (cdf.empty()) return std::numeric_limits<double>::quiet_NaN();
  auto it = std::lower_bound(cdf.begin(), cdf.end(), q,
                             [](const std::pair<double, double>& p, double v) { return p.second < v; });
  return it == cdf.end() ? cdf.back().first : it->first;
}

}  // namespace chainaudit
