#pragma once

#include <stdexcept>
#include <string>

namespace uqr {

/// Bad input to a library call: division by zero, mismatched root orders,
/// non-dominant weights, malformed Cartan data.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computed object failed one of its own postcondition checks. Never
/// swallowed; the message names the offending object.
class ConsistencyError : public std::runtime_error {
public:
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace uqr
