#pragma once

#include <stdexcept>
#include <string>

namespace causal {

// Error taxonomy shared across the library. The code is what the C API and
// the pipeline driver branch on; the message carries the detail.
enum class ErrorCode {
    kParse,            // malformed graph/CSV/config input
    kCycle,            // graph is not a DAG
    kUnknownVariable,  // name not present in graph or dataset
    kInvalidArgument,  // contract violation (overlapping sets, bad fraction, ...)
    kNumeric,          // rank deficiency, separation, weak instrument, ...
    kSearchCap,        // exhaustive adjustment-set search would be too large
    kNotIdentified,    // no estimand applies
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace causal
