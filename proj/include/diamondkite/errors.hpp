#pragma once

#include <stdexcept>
#include <string>

namespace dk {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An operation was invoked on a mesh or key that does not satisfy its
/// stated precondition (e.g. replacing a vertex that is not surrounded by
/// six equal edges, or coarsening a vertex that is not coarsenable).
struct PreconditionViolation : Error {
  using Error::Error;
};

/// A replacement (or a prerequisite of one) would need faces that lie
/// outside the finite patch.
struct BoundaryViolation : Error {
  using Error::Error;
};

/// Refinement hit the subdivision level cap; the size field demands
/// elements finer than exact 64-bit coordinates can represent.
struct NonTermination : Error {
  using Error::Error;
};

/// A circle packing radius disagreed between two faces incident to the
/// same vertex. Indicates a kernel bug; never expected to fire.
struct InconsistentRadius : Error {
  using Error::Error;
};

/// Malformed mesh file or size-field configuration.
struct FormatError : Error {
  int line = 0;
  explicit FormatError(const std::string& msg, int line_no = 0)
      : Error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
        line(line_no) {}
};

}  // namespace dk
