#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eopt {

/// Malformed weight-expression source text. Carries the byte offset of the
/// first offending character and the set of tokens that would have been legal.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, std::size_t offset, std::string expected)
        : std::runtime_error(msg + " at byte " + std::to_string(offset) +
                             (expected.empty() ? "" : " (expected " + expected + ")")),
          offset_(offset),
          expected_(std::move(expected)) {}

    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

/// Runtime failure while evaluating a weight expression or an integrand:
/// division by zero, negative base with fractional exponent, non-finite result.
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computed object does not have the shape the algorithm requires
/// (wrong extremum count, broken alternation, singular interpolation matrix).
class StructureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Neither sign choice yields nonnegative design masses.
class InfeasibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A matrix required to be invertible is numerically singular.
class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The inner product has collapsed (weight effectively vanishing), so
/// orthogonalization cannot continue.
class DegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace eopt
