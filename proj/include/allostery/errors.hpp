#pragma once

#include <stdexcept>
#include <string>

namespace allostery {

// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual or JSON input.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Arguments outside the documented domain (t not in (0,1), genus too small, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class PresentationUnsupported : public Error {
 public:
  using Error::Error;
};

class PresentationMismatch : public Error {
 public:
  using Error::Error;
};

class ForeignGenerators : public Error {
 public:
  using Error::Error;
};

class EmptyTarget : public Error {
 public:
  using Error::Error;
};

class RankExhausted : public Error {
 public:
  using Error::Error;
};

// The search loop of build_lambda ran out of (d, E, rank, retry) budget.
class ConstructionExhausted : public Error {
 public:
  using Error::Error;
};

class RelatorFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace allostery
