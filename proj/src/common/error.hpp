#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rladnet {

// Bad argument shapes, sizes or ranges.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Geometry that makes a metric undefined (e.g. zero bounding-box diagonal).
class DegenerateGeometry : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Object used in a state that does not permit the call (e.g. sampling an
// under-filled replay buffer).
class InvalidState : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Caller broke an API contract (stale tape, missing ground truth, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed file contents. `location` is a 1-based line number for text
// formats and a byte offset for binary ones.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t location, const std::string& what,
               bool is_line = true)
        : std::runtime_error(source + (is_line ? ":" : "@") + std::to_string(location) + ": " +
                             what),
          location_(location) {}

    std::size_t location() const noexcept { return location_; }

private:
    std::size_t location_;
};

}  // namespace rladnet
