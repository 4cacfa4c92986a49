#pragma once

#include <stdexcept>
#include <string>

namespace rkoc {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
};

/// Raised when two values with distinct nonzero radicands meet in one operation.
struct MixedRadicands : Error {
    MixedRadicands(unsigned long d1, unsigned long d2)
        : Error("mixed radicands: sqrt(" + std::to_string(d1) + ") vs sqrt(" + std::to_string(d2) + ")") {}
};

struct UnknownScheme : Error {
    explicit UnknownScheme(const std::string& name) : Error("unknown scheme: " + name) {}
};

struct ZeroWeight : Error {
    explicit ZeroWeight(int stage) : Error("zero weight b[" + std::to_string(stage + 1) + "]") {}
};

struct UnsupportedOrder : Error {
    explicit UnsupportedOrder(int order) : Error("unsupported order " + std::to_string(order)) {}
};

struct InvalidDegree : Error {
    explicit InvalidDegree(int degree) : Error("invalid element degree " + std::to_string(degree)) {}
};

struct InvalidMesh : Error {
    explicit InvalidMesh(int cells) : Error("invalid mesh: " + std::to_string(cells) + " cells") {}
};

struct DegenerateDenominator : Error {
    DegenerateDenominator() : Error("degenerate denominator in closed-form solution") {}
};

struct SingularSystem : Error {
    explicit SingularSystem(const std::string& what) : Error("singular system: " + what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& path) : Error("cannot write " + path) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

}  // namespace rkoc
