#pragma once

#include <stdexcept>
#include <string>

namespace xcsit {

// Raised when a transmit-side computation asks for a channel coefficient the
// CSIT pattern does not make available at the requesting slot.
class CsitAccessError : public std::invalid_argument {
public:
    explicit CsitAccessError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when a scheme is asked to run under a CSIT pattern that does not
// provide at least the knowledge of the scheme's own minimal pattern.
class PatternMismatchError : public std::invalid_argument {
public:
    explicit PatternMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when a receiver's effective 2x2 system is too close to singular to
// zero-force, or when the redraw budget for singular realizations runs out.
class SingularSystemError : public std::runtime_error {
public:
    explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace xcsit
