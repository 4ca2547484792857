#pragma once

#include <stdexcept>
#include <string>

namespace nlg {

// Raised when an input violates a documented precondition or invariant.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nlg
