#pragma once

#include <stdexcept>
#include <string>

namespace blab {

// Error conditions surfaced across the library. The numeric values are part
// of the shared-library ABI (mirrored in include/blab/blab.h); append only.
enum class Errc : int {
    ok = 0,
    invalid_argument = 1,   // bad construction parameters, parse errors, bad config
    singular_point = 2,     // gradient vanishes where a regular point is required
    tangential_start = 3,   // ray direction not transversal to the boundary
    at_pole = 4,            // duality applied to the pole itself
    through_pole = 5,       // line through the pole has no dual point
    on_exclusion_set = 6,   // reflected ray parallel to the tangent line
    inside_curve = 7,       // angular step requires an exterior point
    not_homogeneous = 8,    // transport input must be homogeneous of even degree
    mu_singular = 9,        // denominator of the mu reparametrization too small
    no_intersection = 10,   // Larmor circle misses the boundary
    tangent_circle = 11,    // Larmor circle tangent to the boundary
    both_degenerate = 12,   // neither pair combination yields a usable integral
    singular_gradient = 13, // gradient-ratio check hit a singular offset point
    branch_trace_failed = 14, // continuation could not reach the inner radius
    no_offset_model = 15,   // no closed-form offset polynomial for this curve kind
    numerical_failure = 16, // a solver failed to converge or lost its bracket
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace blab
