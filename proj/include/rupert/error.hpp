#pragma once

#include <stdexcept>
#include <string>

namespace rupert {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fewer than three hull vertices, or otherwise unusable input geometry.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// An inward buffer swallowed the polygon.
class EmptyErosion : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class NumericFailure : public Error {
 public:
  using Error::Error;
};

class CheckpointCorrupt : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace rupert
