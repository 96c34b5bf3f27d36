#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vdesc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// Raised when model output cannot be coerced into the expected dictionary
// shape after every recovery stage. Keeps the raw text for diagnostics.
class ParseFailure : public Error {
public:
    ParseFailure(const std::string& message, std::string raw_text)
        : Error(message), raw_text_(std::move(raw_text)) {}
    const std::string& raw_text() const { return raw_text_; }

private:
    std::string raw_text_;
};

class RangeViolation : public Error {
public:
    using Error::Error;
};

class RetryExhausted : public Error {
public:
    RetryExhausted(const std::string& message, int attempts, int last_status)
        : Error(message), attempts_(attempts), last_status_(last_status) {}
    int attempts() const { return attempts_; }
    int last_status() const { return last_status_; }

private:
    int attempts_;
    int last_status_;
};

// Non-retryable HTTP rejection (4xx other than 429).
class RequestRejected : public Error {
public:
    RequestRejected(const std::string& message, int status, std::string body)
        : Error(message), status_(status), body_(std::move(body)) {}
    int status() const { return status_; }
    const std::string& body() const { return body_; }

private:
    int status_;
    std::string body_;
};

class TimeoutError : public Error {
public:
    using Error::Error;
};

class DegenerateSample : public Error {
public:
    using Error::Error;
};

class StoreError : public Error {
public:
    StoreError(const std::string& message, std::size_t line)
        : Error(message + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Batch-level abort when more than the tolerated fraction of records fail.
class BatchFailure : public Error {
public:
    BatchFailure(const std::string& message, std::size_t failed, std::size_t total)
        : Error(message), failed_(failed), total_(total) {}
    std::size_t failed() const { return failed_; }
    std::size_t total() const { return total_; }

private:
    std::size_t failed_;
    std::size_t total_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace vdesc
