#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tissot {

/// Base class of all library failures that are not argument-contract
/// violations (those throw std::invalid_argument).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point or stencil lies outside the domain on which a map is defined
/// (Mercator pole, stereographic antipode, ln of a negative number, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The map is defined but its differential is singular: pole of a surface
/// parametrization (G = 0) or a vanishing Jacobian determinant.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Malformed expression or configuration text. offset() is the 0-based
/// character position in the text that was handed to the parser.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// An iterative solver hit its iteration cap.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual, int iterations)
        : Error(what), residual_(residual), iterations_(iterations) {}
    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

}  // namespace tissot
