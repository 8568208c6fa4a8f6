// SPDX-License-Identifier: Apache-2.0
//
// nfmimo: noncoherent MIMO detection under near-field spatial correlation
// Copyright (C) 2026 The nfmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef NFMIMO_ERRORS_HPP
#define NFMIMO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nfmimo
{

enum class ErrorCode
{
    InvalidArgument,
    IndexOutOfRange,
    ClusterContainsArray,
    InfeasibleSinr,
    DimensionMismatch,
    NonFiniteInput,
    EmptyBank,
    ConvergenceFailure,
    ParseError,
    ValidationError,
};

inline const char *to_string(ErrorCode code) noexcept
{
    switch (code)
    {
    case ErrorCode::InvalidArgument:
        return "invalid-argument";
    case ErrorCode::IndexOutOfRange:
        return "index-out-of-range";
    case ErrorCode::ClusterContainsArray:
        return "cluster-contains-array";
    case ErrorCode::InfeasibleSinr:
        return "infeasible-sinr";
    case ErrorCode::DimensionMismatch:
        return "dimension-mismatch";
    case ErrorCode::NonFiniteInput:
        return "non-finite-input";
    case ErrorCode::EmptyBank:
        return "empty-bank";
    case ErrorCode::ConvergenceFailure:
        return "convergence-failure";
    case ErrorCode::ParseError:
        return "parse-error";
    case ErrorCode::ValidationError:
        return "validation-error";
    }
    return "unknown";
}

// All library failures are reported through this type. The code identifies
// the violated contract, the message carries the human-readable context.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace nfmimo

#endif
