#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace semiscale {

using Index = std::size_t;
using IndexPair = std::pair<Index, Index>;

/// Base class for all domain errors thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

/// A walk-weight supremum is +infinity somewhere (a strictly positive cycle
/// is reachable). Carries the offending 0-based (source, target) pairs.
struct DivergentError : Error {
  std::vector<IndexPair> pairs;
  DivergentError(std::string msg, std::vector<IndexPair> p)
      : Error(std::move(msg)), pairs(std::move(p)) {}
};

/// No potential / scaling vector can be anchored at the requested basepoint.
struct BasepointUnusable : Error {
  using Error::Error;
};

struct PreconditionViolated : Error {
  using Error::Error;
};

struct NotIndecomposable : Error {
  using Error::Error;
};

/// A closure element has an entry outside {0, 1} where one was required.
/// `element` indexes the enumerated closure; (row, col) is 0-based.
struct NotBinaryDiagonal : Error {
  std::size_t element;
  Index row;
  Index col;
  double value;
  NotBinaryDiagonal(std::string msg, std::size_t el, Index r, Index c, double v)
      : Error(std::move(msg)), element(el), row(r), col(c), value(v) {}
};

struct NotAProjection : Error {
  double residual;
  NotAProjection(std::string msg, double res)
      : Error(std::move(msg)), residual(res) {}
};

struct BlockNotRankOne : Error {
  using Error::Error;
};

struct EmptyPositivePart : Error {
  using Error::Error;
};

struct TruncationTooShort : Error {
  using Error::Error;
};

/// Malformed input file or report payload.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace semiscale
