#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mobius {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad argument or violated precondition (subset relations, non-primes, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

// A bound lies outside the range covered by the tables or functions.
class RangeError : public Error {
public:
    using Error::Error;
};

// A size guard was hit (memory ceiling, quadratic oracle guard, 2^k expansion).
class CapacityError : public Error {
public:
    using Error::Error;
};

// Exact integer arithmetic left the signed 64-bit range.
class OverflowError : public Error {
public:
    OverflowError(const std::string& what, std::uint64_t at)
        : Error(what + " (first offending n = " + std::to_string(at) + ")"), n_(at) {}

    std::uint64_t n() const noexcept { return n_; }

private:
    std::uint64_t n_;
};

// Malformed input file.
class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace mobius
