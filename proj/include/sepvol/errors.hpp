#ifndef SEPVOL_ERRORS_HPP
#define SEPVOL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sepvol {

// Bad or unreadable files, digest mismatches, malformed tables.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Non-convergent quadrature, singular interpolation systems, and similar
// failures of the numerics themselves.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// A validation check that ran to completion and failed.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sepvol

#endif
