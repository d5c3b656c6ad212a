#pragma once

#include <stdexcept>
#include <string>

namespace stirval {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid mathematical input: non-prime modulus, non-unit base, violated precondition.
class DomainError : public Error {
public:
  using Error::Error;
};

class NotInvertibleError : public Error {
public:
  using Error::Error;
};

// The working precision cannot certify the requested result.
class PrecisionError : public Error {
public:
  using Error::Error;
};

// A configured size cap would be exceeded.
class ResourceError : public Error {
public:
  using Error::Error;
};

// A chain of least valuations has not settled into an affine law yet.
class NotStabilizedError : public Error {
public:
  using Error::Error;
};

// Unsupported request at an API boundary (e.g. an export format for a payload).
class UsageError : public Error {
public:
  using Error::Error;
};

} // namespace stirval
