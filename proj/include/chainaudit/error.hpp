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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chainaudit {

enum class ErrorKind {
  kMalformedRecord,
  kDuplicateTxid,
  kDanglingTxid,
  kAmbiguousMarker,
  kEmptyWindow,
  kCycleDetected,
  kInsufficientHistory,
  kDomainError,
  kApproximationInvalid,
  kNoCTxFound,
  kNoCBlocks,
  kUnknownPool,
  kConfigError,
  kMismatchFound,
  kIo,
};

std::string_view to_string(ErrorKind kind);

// All data-level failures surface as chainaudit::Error. The CLI maps these to
// exit status 1; usage problems never reach this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::vector<std::string> items = {});

  ErrorKind kind() const noexcept { return kind_; }
  // Offending identifiers (txids, heights) when the error concerns a list.
  const std::vector<std::string>& items() const noexcept { return items_; }

 private:
  ErrorKind kind_;
  std::vector<std::string> items_;
};

}  // namespace chainaudit
