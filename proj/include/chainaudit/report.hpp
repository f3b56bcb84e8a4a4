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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chainaudit/audit.hpp"
#include "chainaudit/baseline.hpp"
#include "chainaudit/cdf.hpp"
#include "chainaudit/ordering.hpp"
#include "chainaudit/stats.hpp"

#include <json.hpp>

namespace chainaudit::report {

using Json = nlohmann::ordered_json;

Json to_json(const BaselineReport& r, const ChainData& chain);
Json to_json(const PositionStats& s);
Json to_json(const ViolationStats& v);
Json to_json(const DiffTestResult& d);
Json to_json(const DarkFeeBucket& b, std::string_view pool);
Json to_json(const CongestionReport& c);
Json to_json(const Cdf& cdf);

std::string cdf_csv(const Cdf& cdf);
std::string positions_csv(std::span<const PositionStats> rows);
std::string violations_csv(std::span<const ViolationStats> rows);
// Audit-table layout: pool,theta0,x,y,p_accel,p_decel,sppe with fixed decimals.
std::string diff_tests_csv(std::span<const DiffTestResult> rows, int precision = 4);
std::string fee_share_csv(const FeeShare& share);

std::string format_fixed(double value, int precision);
// Quotes a CSV field when it holds a separator, quote or line break.
std::string csv_field(std::string_view value);

}  // namespace chainaudit::report
