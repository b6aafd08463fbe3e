#pragma once

#include <stdexcept>
#include <string>

namespace turan {

// Precondition violated by the caller (bad q, s > n, log of zero, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A configured table / op / transform budget would be exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operation is valid but not supported by the chosen engine.
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace turan
