#pragma once

#include <stdexcept>
#include <string>

namespace exonscan {

/// Malformed or inconsistent input data (bad FASTA byte, unknown sequence id,
/// truncated model file). Precondition violations on numeric parameters are
/// reported as std::invalid_argument instead.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace exonscan
