#pragma once

#include <stdexcept>
#include <string>

namespace incadapt {

enum class Status : int {
    ok = 0,
    monitor_failure = 1,
    validation_error = 2,
    io_error = 3,
    numeric_fault = 4,
    invalid_argument = 5,
};

/// Base of all library errors; carries the status the CLI maps to an exit code.
class Error : public std::runtime_error {
public:
    Error(Status s, const std::string& msg) : std::runtime_error(msg), status_(s) {}
    Status status() const { return status_; }

private:
    Status status_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(Status::validation_error, msg) {}
};

class NumericFault : public Error {
public:
    explicit NumericFault(const std::string& msg) : Error(Status::numeric_fault, msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(Status::io_error, msg) {}
};

/// Raised when an estimate-history read falls outside the retained span.
class HistoryError : public Error {
public:
    explicit HistoryError(const std::string& msg) : Error(Status::numeric_fault, msg) {}
};

}  // namespace incadapt
