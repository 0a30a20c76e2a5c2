// SPDX-License-Identifier: Apache-2.0
//
// Exception hierarchy shared by every lcr module.

#pragma once

#include <stdexcept>
#include <string>

namespace lcr {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

// Series / continued fraction / iteration failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Result exceeds the representable double range.
class OverflowError : public Error {
public:
    using Error::Error;
};

// Neither root of the moment quadratic gives a valid (nu, lambda, alpha).
class InfeasibleFitError : public Error {
public:
    using Error::Error;
};

// Input is valid but statistically or analytically degenerate
// (e.g. a constant trace, or the gamma LCR at T = 0 with r <= 0.5).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

// AED requested at a threshold where the analytic LCR is zero.
class UndefinedAedError : public Error {
public:
    using Error::Error;
};

// Normalized curves require one common Doppler frequency.
class MixedDopplerError : public Error {
public:
    using Error::Error;
};

class InsufficientSamplesError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace lcr
