#pragma once

#include <stdexcept>
#include <string>

namespace archflat {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad or incomplete input: missing weight class, malformed file, bad flag.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its precondition (e.g. non-constant vertex weight).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A parameter lies outside its admissible open range.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The graph lacks data an operation needs (e.g. no cyclic order).
class UnsupportedGraphError : public Error {
public:
    using Error::Error;
};

/// A linear constraint system has no solution.
class NoSolutionError : public Error {
public:
    using Error::Error;
};

}  // namespace archflat
