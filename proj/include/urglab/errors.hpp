#pragma once

#include <stdexcept>
#include <string>

namespace urglab {

// Bad parameters or inputs. The runner maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical guard was violated (e.g. too few expected points for a Palm
// estimate to be meaningful). The runner maps this to exit code 3.
class GuardError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

}  // namespace urglab
