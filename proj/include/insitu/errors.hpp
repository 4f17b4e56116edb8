#pragma once

#include <exception>
#include <stdexcept>
#include <string>

namespace insitu {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Grid dimensions or buffer lengths that do not fit the operation.
class DimensionError : public Error {
public:
  using Error::Error;
};

class NameCollisionError : public Error {
public:
  using Error::Error;
};

/// A named array (or mesh) was requested but is not on the bridge.
class MissingArrayError : public Error {
public:
  MissingArrayError(const std::string& mesh, const std::string& array)
      : Error("missing array '" + array + "' in mesh '" + mesh + "'"),
        mesh_(mesh), array_(array) {}

  const std::string& mesh() const noexcept { return mesh_; }
  const std::string& array() const noexcept { return array_; }

private:
  std::string mesh_;
  std::string array_;
};

/// Real data where complex was required, or the reverse.
class KindError : public Error {
public:
  using Error::Error;
};

class RankError : public Error {
public:
  using Error::Error;
};

/// Out-of-domain scalar value (NaN/Inf entries, fractions outside [0,1], ...).
class ValueError : public Error {
public:
  using Error::Error;
};

/// API misuse, e.g. executing a destroyed plan or breaking the stage lifecycle.
class UsageError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

/// Malformed XML; the message carries the source and line.
class ParseError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

/// A referenced file could not be read.
class FileError : public Error {
public:
  using Error::Error;
};

/// A file could not be written.
class IoError : public Error {
public:
  using Error::Error;
};

/// Wraps an error raised by a pipeline stage with the stage's position and kind.
class StageError : public Error {
public:
  StageError(std::size_t index, std::string kind, const std::string& what,
             std::exception_ptr cause)
      : Error("stage " + std::to_string(index) + " (" + kind + "): " + what),
        index_(index), kind_(std::move(kind)), cause_(std::move(cause)) {}

  std::size_t stage_index() const noexcept { return index_; }
  const std::string& stage_kind() const noexcept { return kind_; }
  /// The original exception; rethrow to inspect its type.
  std::exception_ptr cause() const noexcept { return cause_; }

private:
  std::size_t index_;
  std::string kind_;
  std::exception_ptr cause_;
};

} // namespace insitu
