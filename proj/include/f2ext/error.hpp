#pragma once

#include <stdexcept>
#include <string>

namespace f2ext {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operand widths or shapes do not match.
struct dimension_error : error {
    using error::error;
};

/// A documented enumeration or width cap would be exceeded.
struct size_error : error {
    using error::error;
};

struct precondition_error : error {
    using error::error;
};

struct parse_error : error {
    using error::error;
};

/// A randomized or exhaustive construction ran out of attempts.
struct search_failure : error {
    using error::error;
};

} // namespace f2ext
