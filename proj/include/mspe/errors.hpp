#pragma once

#include <stdexcept>
#include <string>

namespace mspe {

// Bad arguments: wrong shapes, invalid partitions, malformed configs.
class ArgumentError : public std::invalid_argument {
  public:
    explicit ArgumentError(const std::string &msg) : std::invalid_argument(msg) {}
};

// Work refused because it would exceed a declared budget (dimension, outcome count).
class ResourceError : public std::runtime_error {
  public:
    explicit ResourceError(const std::string &msg) : std::runtime_error(msg) {}
};

// Numerically meaningless results: lost hermiticity, singular solves, negative spectra.
class NumericError : public std::runtime_error {
  public:
    explicit NumericError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace mspe
