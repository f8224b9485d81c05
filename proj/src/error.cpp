// SPDX-License-Identifier: Apache-2.0
#include "ousamp/error.hpp"

namespace ousamp {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::DomainOverflow: return "DomainOverflow";
        case ErrorCode::OrderViolation: return "OrderViolation";
        case ErrorCode::StaleState: return "StaleState";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::BracketFailure: return "BracketFailure";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ousamp
