#pragma once

#include <stdexcept>
#include <string>

namespace fracsheet {

// Quadrature truncation cannot meet its declared tail tolerance.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Linear algebra or sampling failed for numerical reasons (e.g. Cholesky
// breakdown after the jitter retry).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad key=value configuration input.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fracsheet
