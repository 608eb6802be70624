#pragma once

#include <stdexcept>

namespace hypdir {

// Mismatched algebra or space dimensions.
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Division by a non-invertible element, or a Möbius map sending a point to infinity.
class singular_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Request outside the supported parameter range (unbounded region, infinite volume, ...).
class range_error : public std::range_error {
 public:
  using std::range_error::range_error;
};

// Operation not available for the selected lattice model.
class unsupported_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Numerical procedure failed to reach its tolerance.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hypdir
