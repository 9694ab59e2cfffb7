#pragma once

#include <stdexcept>
#include <string>

namespace kefun {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (schema violations, invalid triplets).
class SpecError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class PreconditionViolation : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

/// The image of a Levy measure under a transform cannot be written in the catalog.
class UnsupportedCombination : public Error {
public:
    using Error::Error;
};

/// Adaptive horizon doubling hit its cap before the tail bound was met.
class HorizonExceeded : public Error {
public:
    using Error::Error;
};

class EnumerationOverflow : public Error {
public:
    using Error::Error;
};

}  // namespace kefun
