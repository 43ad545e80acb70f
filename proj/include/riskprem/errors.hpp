// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace riskprem {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (payoff, probability, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Scenario constraint violated (e.g. eps2 > min(p0, 1 - p0)).
class ScenarioError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Target value outside the range of the function being inverted.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Invalid family parameter (NaN, wrong sign, wrong arity).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A weighting function or transform failed its monotonicity/curvature check.
class MonotonicityError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

/// A premium equation has a vanishing denominator.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// A probability premium left its admissible band.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

class BracketError : public Error {
public:
    using Error::Error;
};

class MaxIterError : public Error {
public:
    using Error::Error;
};

/// Lottery with bad probabilities.
class LotteryError : public Error {
public:
    using Error::Error;
};

class GridError : public Error {
public:
    using Error::Error;
};

/// Malformed function spec string, JSON, or lottery file.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace riskprem
