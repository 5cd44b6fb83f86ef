#pragma once

#include <stdexcept>
#include <string>

namespace sphconv {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside an operation's admissible range (bad radius, length, angle...).
struct DomainError : Error {
    using Error::Error;
};

// A curve that was required to be convex (or lambda-convex) is not.
struct ConvexityError : Error {
    using Error::Error;
};

// tan/arctan blow-up: a support distance reached the quarter-circle limit.
struct OverflowError : Error {
    using Error::Error;
};

// Polygon has no deformable linkage left (it is already a lune).
struct RigidityError : Error {
    using Error::Error;
};

// Measured curvature range violates an operation's precondition.
struct CurvatureRangeError : Error {
    using Error::Error;
};

// State left the admissible box during trajectory integration.
struct BlowUpError : Error {
    using Error::Error;
};

// Malformed curve JSON / CSV input.
struct ParseError : Error {
    using Error::Error;
};

// No adjoint fit exists within tolerance (PMP verification failed to set up).
struct InfeasibleError : Error {
    using Error::Error;
};

} // namespace sphconv
