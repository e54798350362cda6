#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cpg {

/// Raised when a parameter block violates its documented invariants.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input file (config, genome, manifest).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cpg
