#pragma once

#include <stdexcept>

namespace netval {

// Common base so callers can catch everything raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidNetworkError : Error { using Error::Error; };
struct NonConvergenceError : Error { using Error::Error; };
struct NotTwoFirmsError : Error { using Error::Error; };
struct NotSymmetricError : Error { using Error::Error; };
struct NotPsdError : Error { using Error::Error; };
struct SingularSystemError : Error { using Error::Error; };
struct ZeroEquityError : Error { using Error::Error; };
struct ConditioningDegenerateError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };

}  // namespace netval
