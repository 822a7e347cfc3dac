#ifndef STEKLOVCC_ERRORS_HPP
#define STEKLOVCC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace steklov {

/// Base class for all toolkit failures. `name()` is a stable, machine-readable
/// identifier that ends up in JSON run manifests and in CLI diagnostics.
class Error : public std::runtime_error {
public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

/// Invalid geometry: inverted tets, zero normals, degenerate projections.
class GeometryError : public Error {
public:
  using Error::Error;
};

/// Broken mesh topology (non-manifold facets, dangling indices).
class TopologyError : public Error {
public:
  using Error::Error;
};

/// Malformed input files (Gmsh, CSV, config JSON).
class ParseError : public Error {
public:
  using Error::Error;
};

/// The quadratic form could not be certified positive definite.
class CoercivityError : public Error {
public:
  using Error::Error;
};

/// Eigensolver non-convergence, singular systems, rank deficiencies.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Operation preconditions violated by the caller (mesh mismatch, bad k, ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// Filesystem failures while writing artifacts.
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace steklov

#endif
