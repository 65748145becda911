#pragma once

#include <stdexcept>
#include <string>

namespace cqd {

// Inputs outside the supported physical regime (E <= V0 on the closed
// court, non-positive energies, malformed potential parameters).
class RegimeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A sample point lies outside the support of a density, or on an
// integrable-singularity endpoint.
class SupportError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A quadrature or sampling grid cannot resolve what was asked of it.
class ResolutionError : public std::runtime_error {
 public:
  ResolutionError(const std::string& what, double required)
      : std::runtime_error(what), required_(required) {}
  double required() const noexcept { return required_; }

 private:
  double required_;
};

// Averaging window narrower than the local de Broglie wavelength.
class WindowTooSmall : public std::invalid_argument {
 public:
  WindowTooSmall(const std::string& what, double minimal_window)
      : std::invalid_argument(what), minimal_window_(minimal_window) {}
  double minimal_window() const noexcept { return minimal_window_; }

 private:
  double minimal_window_;
};

// An energy handed to the eigenstate builder does not satisfy the boundary
// conditions, or a residual exceeded its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cqd
