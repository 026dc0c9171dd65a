#pragma once

#include <stdexcept>
#include <string>

namespace mcorr {

// Caller passed arguments that violate a documented precondition.
struct InvalidInput : std::invalid_argument {
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// A matrix that must be invertible (well above the conditioning floor) is not.
struct SingularMatrix : std::runtime_error {
    explicit SingularMatrix(const std::string& what) : std::runtime_error(what) {}
};

// A matrix that must be positive semidefinite has a negative eigenvalue
// beyond numerical tolerance.
struct NotPSD : std::runtime_error {
    explicit NotPSD(const std::string& what) : std::runtime_error(what) {}
};

// An eigenvalue coincidence makes the requested eigenvector analysis ambiguous.
struct DegenerateSpectrum : std::runtime_error {
    explicit DegenerateSpectrum(const std::string& what) : std::runtime_error(what) {}
};

// File or directory could not be read/written/parsed.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mcorr
