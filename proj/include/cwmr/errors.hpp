#pragma once

#include <stdexcept>
#include <string>

namespace cwmr {

/// Grid shapes that do not fit an operation (odd sizes, mismatched grids, missing halo).
class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Out-of-range scheme parameters (r, stage, sub-index, epsilon, t).
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Requests the implementation deliberately does not support.
class UnsupportedError : public std::invalid_argument {
public:
    explicit UnsupportedError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed, truncated or tampered byte streams and image files.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cwmr
