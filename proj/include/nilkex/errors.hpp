#pragma once

#include <stdexcept>
#include <string>

namespace nilkex {

/// Base class for runtime failures raised by this library. Contract
/// violations (bad arity, zero exponents, invalid parameters) throw
/// std::invalid_argument instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two elements from different platform instances were combined.
class PlatformMismatchError : public Error {
public:
    using Error::Error;
};

/// Malformed bytes: wrong length, bad magic, entry out of range, ...
class DecodeError : public Error {
public:
    using Error::Error;
};

/// Session setup rejected the parameters (degenerate bases, missing seed,
/// platform whose claims do not match the requested protocol).
class SetupError : public Error {
public:
    using Error::Error;
};

/// The requested operation does not apply to this platform family.
class UnsupportedPlatformError : public Error {
public:
    using Error::Error;
};

} // namespace nilkex
