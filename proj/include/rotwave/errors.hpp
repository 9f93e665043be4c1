#pragma once

#include <stdexcept>
#include <string>

namespace rotwave {

// Domain violations (bad degree, endpoint angle, negative time, ...) are
// reported as std::domain_error. The types below cover the remaining cases.

/// An iterative numerical procedure failed (eigensolver cap, underflow).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// A grid point where a normalising quantity vanished.
class GridError : public NumericalError {
 public:
  explicit GridError(const std::string& what) : NumericalError(what) {}
};

/// Spin requested from a SpectrumSet that does not hold it.
class MissingSpinError : public std::out_of_range {
 public:
  explicit MissingSpinError(const std::string& what) : std::out_of_range(what) {}
};

}  // namespace rotwave
