// Copyright 2026 The qbarcode Authors
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

#ifndef QBARCODE_ERRORS_H_
#define QBARCODE_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qbarcode {

/// An argument lies outside the mathematical domain of an operation
/// (transmissivity outside [0,1], negative photon number, mismatched shapes).
class DomainError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// Photodetection thresholds are undefined when both pixel colors share a
/// transmissivity. Callers report an error probability of 1/2 instead.
class DegeneratePairError : public DomainError {
   public:
    using DomainError::DomainError;
};

/// The requested quantity only exists where the advantage threshold is positive.
class NoAdvantageError : public DomainError {
   public:
    using DomainError::DomainError;
};

/// A bound functional was asked to average over a class pair it has no data for.
class IncompleteInputError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A curve lookup fell outside the sampled abscissa range.
class ExtrapolationError : public std::out_of_range {
   public:
    using std::out_of_range::out_of_range;
};

/// Malformed or truncated input file. Carries the byte offset where decoding failed.
class ParseError : public std::runtime_error {
   public:
    ParseError(const std::string &path, uint64_t offset, const std::string &what)
        : std::runtime_error(path + ": byte " + std::to_string(offset) + ": " + what), path_(path), offset_(offset) {
    }

    const std::string &path() const noexcept {
        return path_;
    }
    uint64_t offset() const noexcept {
        return offset_;
    }

   private:
    std::string path_;
    uint64_t offset_;
};

}  // namespace qbarcode

#endif  // QBARCODE_ERRORS_H_
