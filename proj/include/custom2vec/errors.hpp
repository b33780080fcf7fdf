#pragma once

#include <stdexcept>
#include <string>

namespace c2v {

/// Malformed or inconsistent input data (files, records, ids).
/// CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// A broken internal invariant. CLI maps this to exit code 3.
class InvariantError : public std::logic_error {
public:
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

} // namespace c2v
