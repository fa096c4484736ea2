#pragma once

#include <stdexcept>
#include <string>

namespace pnpmri {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shape or dimension disagreement between operands.
struct ShapeError : Error {
  using Error::Error;
};

/// Invalid configuration (bad parameter range, infeasible request).
struct ConfigError : Error {
  using Error::Error;
};

/// NaN/Inf detected, divergence, or a numerical contract violated.
struct NumericError : Error {
  using Error::Error;
};

/// Filesystem-level failure (open/read/write).
struct IoError : Error {
  using Error::Error;
};

/// Tensor-file header is not parseable or declares an unsupported layout.
struct MalformedHeaderError : IoError {
  using IoError::IoError;
};

/// Payload ended before the header-declared element count was read.
struct TruncatedPayloadError : IoError {
  using IoError::IoError;
};

/// Payload size disagrees with the declared shape (e.g. trailing bytes).
struct PayloadMismatchError : IoError {
  using IoError::IoError;
};

/// External denoiser child process failed (spawn, nonzero exit, ...).
struct SubprocessError : Error {
  using Error::Error;
};

/// External denoiser child violated the pipe protocol.
struct ProtocolError : Error {
  using Error::Error;
};

}  // namespace pnpmri
