#pragma once

#include <stdexcept>
#include <string>

namespace svc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input files, bad flags, or instances violating a precondition.
class InputError : public Error {
public:
    using Error::Error;
};

/// An engine was handed a graph outside the class it supports.
class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class InstanceTooLarge : public Error {
public:
    using Error::Error;
};

class StateSpaceExceeded : public Error {
public:
    using Error::Error;
};

/// A parallel block satisfies none of the assumptions needed by the exact block solver.
class AssumptionViolated : public Error {
public:
    using Error::Error;
};

}  // namespace svc
