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

#include "chainaudit/error.hpp"

namespace chainaudit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformedRecord: return "MalformedRecord";
    case ErrorKind::kDuplicateTxid: return "DuplicateTxid";
    case ErrorKind::kDanglingTxid: return "DanglingTxid";
    case ErrorKind::kAmbiguousMarker: return "AmbiguousMarker";
    case ErrorKind::kEmptyWindow: return "EmptyWindow";
    case ErrorKind::kCycleDetected: return "CycleDetected";
    case ErrorKind::kInsufficientHistory: return "InsufficientHistory";
    case ErrorKind::kDomainError: return "DomainError";
    case ErrorKind::kApproximationInvalid: return "ApproximationInvalid";
    case ErrorKind::kNoCTxFound: return "NoCTxFound";
    case ErrorKind::kNoCBlocks: return "NoCBlocks";
    case ErrorKind::kUnknownPool: return "UnknownPool";
    case ErrorKind::kConfigError: return "ConfigError";
    case ErrorKind::kMismatchFound: return "MismatchFound";
    case ErrorKind::kIo: return "IoError";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& what, std::vector<std::string> items)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), items_(std::move(items)) {}

}  // namespace chainaudit
