#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace cmlr {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: bad files, invalid rows, label mismatch.
class DataError : public Error {
 public:
  using Error::Error;
};

/// The mixture model cannot define the requested quantity (equal betas, k = 1).
class ModelError : public DataError {
 public:
  using DataError::DataError;
};

/// A linear system or decomposition could not be solved reliably.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A measurement is orthogonal to its class direction, so ratios and the
/// closed-form certificate divide by zero.
class OrthogonalPointError : public NumericalError {
 public:
  OrthogonalPointError(Eigen::Index point, const std::string& what)
      : NumericalError(what), point_(point) {}
  Eigen::Index point() const noexcept { return point_; }

 private:
  Eigen::Index point_;
};

}  // namespace cmlr
