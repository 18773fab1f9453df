#pragma once

#include <stdexcept>
#include <string>

namespace cmlat {

// Invalid input or violated precondition; the CLI maps this to exit code 1.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Interval refinement hit the precision cap without certifying a sign.
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cmlat
