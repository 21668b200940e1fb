#pragma once

#include <stdexcept>
#include <string>

namespace dendro {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A letter index outside the configured alphabet x0..xm.
class AlphabetError : public Error {
 public:
  using Error::Error;
};

/// Word length does not match the number of interior vertices.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap (enumeration order, truncation order) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Empty-word operand where the dendriform products are undefined, or
/// another violated mathematical precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Incompatible matrix shapes or grids.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input (expressions, parenthesis words, CSV, JSON).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace dendro
