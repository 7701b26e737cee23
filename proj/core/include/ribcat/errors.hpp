#pragma once

#include <stdexcept>
#include <string>

namespace ribcat {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Category data violates an axiom.  `axiom` names the first failed check
// ("unit", "duality", "qdim", "pentagon", "hexagon", "modularity", ...) and
// `residual` is the worst deviation found for that check.
struct ConsistencyError : Error {
  std::string axiom;
  double residual;
  ConsistencyError(std::string ax, double res, const std::string& msg)
      : Error(msg), axiom(std::move(ax)), residual(res) {}
};

struct DegenerateCategory : Error {
  using Error::Error;
};

// Requested operation needs structure the implementation does not model
// (currently: fusion multiplicities N > 1, non-simple mark colors).
struct NotSupported : Error {
  using Error::Error;
};

struct ParseError : Error {
  int line = 0;
  ParseError(const std::string& msg, int ln = 0)
      : Error(ln ? "line " + std::to_string(ln) + ": " + msg : msg), line(ln) {}
};

struct BoundaryMismatch : Error {
  using Error::Error;
};
struct StrandCountError : Error {
  using Error::Error;
};
struct UnclosedSurgeryComponent : Error {
  using Error::Error;
};
struct IndexArityMismatch : Error {
  using Error::Error;
};
struct TangledBoundaryBand : Error {
  using Error::Error;
};
struct BoundaryTypeMismatch : Error {
  using Error::Error;
};
struct UncoloredVariable : Error {
  using Error::Error;
};
struct OpenBoundary : Error {
  using Error::Error;
};
struct TypeMismatch : Error {
  using Error::Error;
};
struct NotComposable : Error {
  using Error::Error;
};
struct ShapeMismatch : Error {
  using Error::Error;
};

}  // namespace ribcat
