#pragma once

#include <stdexcept>
#include <string>

namespace vacref {

// Error taxonomy shared by the library and the CLI.  The CLI maps these to
// process exit codes: validation -> 2, numerical -> 3, degeneracy -> 4.

// Bad input: violated precondition, invalid configuration field.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure failed to converge or left its domain
// (regularization extrapolation, quadrature, coefficient radicand).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Structurally unsupported degenerate configuration (grazing chord,
// coincident eigenvalues, ray through the sphere center, ...).
class degeneracy_error : public std::runtime_error {
public:
    explicit degeneracy_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vacref
