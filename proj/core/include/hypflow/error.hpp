#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hypflow {

// Base of every error raised by the library. The CLI maps the derived kinds
// onto its exit-status contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (r <= 0, k out of
// range, even k where an odd order is required, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Inconsistent grid/surface/run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an inequality or identity does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Invalid per-node data handed to an integration routine.
class DataError : public Error {
 public:
  using Error::Error;
};

// A surface generator produced something that is not an admissible radial
// graph (or fails a requested h-convexity check).
class GenerationError : public Error {
 public:
  using Error::Error;
};

// Errors that are attributable to one grid node.
class NodeError : public Error {
 public:
  NodeError(const std::string& what, std::size_t node)
      : Error(what + " (node " + std::to_string(node) + ")"), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

class StarshapednessError : public NodeError {
 public:
  using NodeError::NodeError;
};

// Non-finite curvature, E_1 <= 0 where the flow needs it positive, ...
class BreakdownError : public NodeError {
 public:
  using NodeError::NodeError;
};

}  // namespace hypflow
