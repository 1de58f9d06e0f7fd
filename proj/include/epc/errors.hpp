#pragma once
#include <stdexcept>
#include <string>

namespace epc {

// Base class for all toolkit errors so the CLI can map them to exit code 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid values (non-finite entries, bad permutations, out-of-range args).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Mismatched point counts or dimensions between operands.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// Malformed files (bad magic, truncation, CSV/JSON shape problems).
class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

// Overflow to non-finite values during computation.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

// Filesystem-level failures (missing file, unwritable output).
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace epc
