/*
 * Copyright 2026 The kgstega Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
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

namespace kgstega {

enum class ErrorCode {
  // graph ingestion and queries
  MalformedLine,
  DuplicateId,
  DuplicateLabel,
  UnknownEndpoint,
  DuplicateEdge,
  NonPositiveWeight,
  LevelViolation,
  UnknownNode,
  EmptyViableGraph,
  // path coding
  NoViableEdges,
  PinUnreachable,
  PinMismatch,
  EdgeNotInGraph,
  IncompletePath,
  TruncatedStream,
  PayloadTooLong,
  InvalidKey,
  InvalidPin,
  ZeroCapacity,
  WeightOverflow,
  MalformedInterchange,
  // realizer
  NoTemplateForArity,
  MalformedTemplate,
  CoverageExhausted,
  GeneratorFailed,
  // extractor
  NoPathFound,
  AmbiguousMatch,
  UnknownSentence,
  // metrics
  EmptyCorpus,
  EmptySentence,
  LengthMismatch,
  EmptyReference,
  EmptyInput,
  // plumbing
  InvalidArgument,
  IoError,
};

constexpr std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::LevelViolation: return "LevelViolation";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::EmptyViableGraph: return "EmptyViableGraph";
    case ErrorCode::NoViableEdges: return "NoViableEdges";
    case ErrorCode::PinUnreachable: return "PinUnreachable";
    case ErrorCode::PinMismatch: return "PinMismatch";
    case ErrorCode::EdgeNotInGraph: return "EdgeNotInGraph";
    case ErrorCode::IncompletePath: return "IncompletePath";
    case ErrorCode::TruncatedStream: return "TruncatedStream";
    case ErrorCode::PayloadTooLong: return "PayloadTooLong";
    case ErrorCode::InvalidKey: return "InvalidKey";
    case ErrorCode::InvalidPin: return "InvalidPin";
    case ErrorCode::ZeroCapacity: return "ZeroCapacity";
    case ErrorCode::WeightOverflow: return "WeightOverflow";
    case ErrorCode::MalformedInterchange: return "MalformedInterchange";
    case ErrorCode::NoTemplateForArity: return "NoTemplateForArity";
    case ErrorCode::MalformedTemplate: return "MalformedTemplate";
    case ErrorCode::CoverageExhausted: return "CoverageExhausted";
    case ErrorCode::GeneratorFailed: return "GeneratorFailed";
    case ErrorCode::NoPathFound: return "NoPathFound";
    case ErrorCode::AmbiguousMatch: return "AmbiguousMatch";
    case ErrorCode::UnknownSentence: return "UnknownSentence";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptySentence: return "EmptySentence";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyReference: return "EmptyReference";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure in the library surfaces as this exception. `code()` is the
/// stable, scriptable part; `detail()` is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail),
        code_(code),
        detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace kgstega
