#pragma once

#include <stdexcept>
#include <string>

namespace csm {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed text input (correspondence files, manifests, galleries, configs).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A domain-type invariant does not hold (shape mismatch, NaN, out-of-bounds vertex).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Binary format violation (bad magic, truncated payload).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Caller supplied an argument outside the operation's contract.
class InputError : public Error {
public:
    using Error::Error;
};

/// Operation requires a capability the oracle does not declare.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Mathematical domain violation (zero-norm vector in cosine similarity).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Remote oracle failure. Carries retry metadata: HTTP status of the last
/// attempt (0 if the connection itself failed) and the number of attempts made.
class TransportError : public Error {
public:
    TransportError(const std::string& what, int status, int attempts)
        : Error(what + " [status=" + std::to_string(status) +
                ", attempts=" + std::to_string(attempts) + "]"),
          status_(status),
          attempts_(attempts) {}

    int status() const noexcept { return status_; }
    int attempts() const noexcept { return attempts_; }

private:
    int status_;
    int attempts_;
};

}  // namespace csm
