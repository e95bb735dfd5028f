#pragma once

#include <stdexcept>
#include <string>

namespace unitrans {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A caller violated an operation precondition.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A required filesystem path is missing or unusable.
class PathError : public Error {
public:
    using Error::Error;
};

/// Text could not be parsed into the expected structure.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Completion text was empty after answer extraction.
class EmptyAnswerError : public Error {
public:
    using Error::Error;
};

/// A value kind has no mapping in the target language's type table.
class UnsupportedTypeError : public Error {
public:
    using Error::Error;
};

/// The source program itself failed to compile or load during input validation.
class SourceDefectError : public Error {
public:
    using Error::Error;
};

/// Transport-level backend failure; carries the number of attempts made.
class BackendError : public Error {
public:
    BackendError(const std::string& msg, int attempts_made)
        : Error(msg), attempts(attempts_made) {}
    int attempts = 0;
};

/// Misconfiguration: bad credentials, missing model, malformed config file.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The prompt exceeds the backend's context window.
class ContextOverflowError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// The replay backend has no scripted response for a prompt key.
class ReplayMissError : public Error {
public:
    using Error::Error;
};

/// A required toolchain or system facility is unavailable.
class EnvironmentError : public Error {
public:
    using Error::Error;
};

}  // namespace unitrans
