#ifndef PQC_ERRORS_HPP
#define PQC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pqc {

// Base class so callers can catch everything from this library at once.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A Bloch vector with norm above 1 (plus tolerance) does not describe a state.
struct BlochOutOfBall : Error {
    explicit BlochOutOfBall(const std::string& msg) : Error(msg) {}
};

// Input matrix fails the state checks (trace one, Hermitian, positive).
struct InvalidState : Error {
    explicit InvalidState(const std::string& msg) : Error(msg) {}
};

// Plaintext set does not have the affine dimension an operation requires.
struct DegenerateSpan : Error {
    explicit DegenerateSpan(const std::string& msg) : Error(msg) {}
};

// Channel moves the maximally mixed state; diagonal normal form not defined here.
struct NotUnital : Error {
    explicit NotUnital(const std::string& msg) : Error(msg) {}
};

// Map is not completely positive, so it is not a physical channel.
struct NotCP : Error {
    explicit NotCP(const std::string& msg) : Error(msg) {}
};

// Requested cipher state lies outside the ball of reachable constants.
struct UnachievableTarget : Error {
    explicit UnachievableTarget(const std::string& msg) : Error(msg) {}
};

// Probability vector is not a distribution (negative entry or wrong sum).
struct BadDistribution : Error {
    explicit BadDistribution(const std::string& msg) : Error(msg) {}
};

// Caller violated a documented precondition of a verification routine.
struct PreconditionFailed : Error {
    explicit PreconditionFailed(const std::string& msg) : Error(msg) {}
};

} // namespace pqc

#endif
