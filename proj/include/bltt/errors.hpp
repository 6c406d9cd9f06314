#pragma once

#include <stdexcept>
#include <string>

namespace bltt {

/// Blocks of an operator do not share the spatial eigenbasis.
class NotSimultaneouslyDiagonalizable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An alpha-circulant eigenvalue is zero or lies on the closed negative real
/// axis, so the principal square root (and the preconditioner) is undefined.
class SingularPreconditioner : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A result that must be real in exact arithmetic carried a large imaginary part.
class NumericalBreakdown : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied operator failed its symmetry probe.
class ContractViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A preconditioner produced a non-positive P^{-1}-inner product.
class NotSpd : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Dense reference computation requested above the size guard.
class SizeGuardExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

} // namespace detail

} // namespace bltt
