#pragma once

#include <stdexcept>
#include <string>

namespace entlaw {

// Thrown when an iterative routine fails to converge or a computed quantity
// lands outside its mathematically valid range by more than numerical dust.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace entlaw
