#pragma once

#include <stdexcept>

namespace cmgiant {

/// A mathematical precondition failed (zero or infinite mean, truncation cap hit, ...).
class MathError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A distribution spec or command-line value could not be parsed.
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace cmgiant
