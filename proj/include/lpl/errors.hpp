#pragma once

#include <stdexcept>
#include <string>

namespace lpl {

// Numeric failure distinct from a caller mistake: these mean "the requested
// accuracy could not be certified", not "you passed garbage".
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Euler-Maclaurin could not certify target_eps within the (N, J) budget.
struct non_convergence : numeric_error {
    using numeric_error::numeric_error;
};

// Evaluation requested at (or within 1e-12 of) the pole s = 1.
struct pole_at_one : numeric_error {
    using numeric_error::numeric_error;
};

// |L| fell below 100x its certified error; the quotient L'/L would be noise.
struct near_zero_denominator : numeric_error {
    using numeric_error::numeric_error;
};

// q = 2 with t0 = 0 leaves no characters to average over.
struct empty_character_set : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Requested sieve/table length exceeds the configured memory budget.
struct table_budget_exceeded : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace lpl
