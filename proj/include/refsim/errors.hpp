#pragma once

#include <stdexcept>
#include <string>

namespace refsim {

enum class ErrorKind {
    InvalidParams,      // bad sharing/referendum parameters, mismatched moduli
    InsufficientShares, // fewer shares than the polynomial degree requires
    ShareAlignment,     // combining shares with different eval points or degrees
    DegreeOverflow,     // squaring a share that was already squared
    CannotDetect,       // no redundancy available for outlier detection
    AmbiguousConsensus, // no subset of shares has majority evidence
    DecryptionFailure,  // ciphertext does not authenticate under the given key
    Encoding,           // non-serializable value or undecodable dump
    ProtocolOrder,      // action attempted outside its legal protocol position
    Config,             // scenario configuration rejected
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}

} // namespace refsim
