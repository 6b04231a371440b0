#ifndef CURVEX_ERRORS_HPP
#define CURVEX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace curvex {

/// Malformed or inconsistent input data (files, schemas, shape parameters).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure (degenerate stencil, NaN loss, empty band, ...).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace curvex

#endif
