#pragma once

#include <stdexcept>
#include <string>

namespace troch {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Protocol-gain choice makes one agent stationary (beta_1 = 0).
struct DegenerateBetaError : Error {
    using Error::Error;
};

/// beta_d = 0: trochoid coefficient scaling is undefined.
struct SingularBetaDError : Error {
    using Error::Error;
};

/// The 2x2 system mapping (R_c, d_c) to initial positions is singular.
struct SingularSystemError : Error {
    using Error::Error;
};

/// Sum of 1/beta_i vanishes; the rotation-centre weights are undefined.
struct SingularCoRError : Error {
    using Error::Error;
};

/// No branch combination of the constraint system is feasible.
struct EmptyRegionError : Error {
    using Error::Error;
};

/// Speed vanishes at a cusp; the turn rate is undefined there.
struct CuspSingularityError : Error {
    using Error::Error;
};

/// Operation only defined for epitrochoidal paths.
struct UnsupportedTypeError : Error {
    using Error::Error;
};

/// Numerical integration produced a non-finite state.
struct NonFiniteStateError : Error {
    using Error::Error;
};

/// Malformed configuration or design file.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace troch
