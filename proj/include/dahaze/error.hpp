#pragma once

#include <stdexcept>
#include <string>

namespace dahaze {

// Base of every error raised by the toolkit. The CLI maps the leaf types
// onto its exit-code contract (2 usage, 3 I/O, 4 data invariant).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument or shape mismatch supplied by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FileNotFound : public IoError {
 public:
  using IoError::IoError;
};

class UnwritablePath : public IoError {
 public:
  using IoError::IoError;
};

// Stream is recognised but uses a bit depth or colour model we do not read.
class UnsupportedFormat : public IoError {
 public:
  using IoError::IoError;
};

// Bad magic, bad version, truncated payload, or a stream the decoder rejects.
class CorruptData : public IoError {
 public:
  using IoError::IoError;
};

// Data decoded fine but breaks a domain invariant (negative depth, duplicate
// pair ids, ...).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace dahaze
