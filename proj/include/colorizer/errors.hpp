#pragma once

#include <stdexcept>
#include <string>

namespace colorizer {

// Base of every error the library throws. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration value (non-positive learning rate, bad bin size, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Mismatched shapes or plane dimensions; signals a caller bug.
class DimensionError : public Error {
public:
    using Error::Error;
};

class DegenerateInputError : public Error {
public:
    using Error::Error;
};

class InvalidTargetError : public Error {
public:
    using Error::Error;
};

class InputError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class TrainingDivergedError : public Error {
public:
    using Error::Error;
};

class CheckpointError : public Error {
public:
    enum class Kind { NotACheckpoint, UnsupportedVersion, Corrupt, Unreadable };

    CheckpointError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

}  // namespace colorizer
