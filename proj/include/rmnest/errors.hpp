#pragma once

#include <stdexcept>
#include <string>

namespace rmnest {

/// Bad argument values: out-of-range parameters, malformed specs.
struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Request is well formed but too large to compute with the chosen method.
struct feasibility_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Objects that should agree structurally do not (lengths, projections, symmetry).
struct structure_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Channel law not closed under negation.
struct symmetry_error : parameter_error {
    using parameter_error::parameter_error;
};

/// Minimum distance of the zero code.
struct undefined_distance_error : std::domain_error {
    using std::domain_error::domain_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw parameter_error(msg);
}

}  // namespace rmnest
