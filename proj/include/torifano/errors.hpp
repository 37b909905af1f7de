#pragma once

#include <stdexcept>
#include <string>

namespace torifano {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (bad rays, shape mismatch, bad rationals).
class InputError : public Error {
public:
    using Error::Error;
};

/// A polytope or simplex that is not full-dimensional where one is required.
class DegenerateError : public Error {
public:
    using Error::Error;
};

class EmptyPolytopeError : public Error {
public:
    using Error::Error;
};

class UnboundedPolytopeError : public Error {
public:
    using Error::Error;
};

/// Exponent outside the overflow guard of the simplex kernels.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Solver parameters that cannot work (grid too coarse, 0 not a node, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Legendre dual requested on an interval the slope range does not cover.
class DomainMismatchError : public Error {
public:
    using Error::Error;
};

/// Lifted test-configuration polytope with an empty slab somewhere.
class DegenerateLiftError : public Error {
public:
    using Error::Error;
};

class SingularHessianError : public Error {
public:
    using Error::Error;
};

/// Builtin example name outside the registry.
class UnknownExampleError : public Error {
public:
    using Error::Error;
};

}  // namespace torifano
