#pragma once

#include <stdexcept>
#include <string>

namespace ldscore {

// Bad input: malformed files, violated preconditions, degenerate texts.
// The CLI maps this to exit status 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numeric failure on otherwise valid input (support mismatch, undefined
// correlation, solver non-convergence). The CLI maps this to exit status 2.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ldscore
