#pragma once

#include <stdexcept>
#include <string>

namespace comds {

// Invalid or inconsistent input: malformed matrices, bad parameter ranges,
// files that do not parse. The CLI maps this to exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A computation that cannot proceed numerically: failed factorization,
// non-finite intermediates, unsatisfiable spectral requirements. Exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace comds
