#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nsf {

/// Nonpositive or non-finite thermodynamic input.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Query outside a tabulated closure range.
class RangeError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// An iterative inversion failed to converge.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A constructed closure violates one of the structural inequalities.
class CertificationError : public std::runtime_error {
public:
  CertificationError(std::string inequality, double z, const std::string& detail)
      : std::runtime_error("closure certification failed: " + inequality + " at Z=" +
                           std::to_string(z) + " (" + detail + ")"),
        inequality_(std::move(inequality)),
        z_(z) {}

  const std::string& inequality() const noexcept { return inequality_; }
  double z() const noexcept { return z_; }

private:
  std::string inequality_;
  double z_;
};

/// Loss of density or temperature positivity during a run.
/// This is the simulator's blow-up signal.
class PositivityLoss : public std::runtime_error {
public:
  PositivityLoss(double t, std::size_t cell, std::string field, const std::string& detail)
      : std::runtime_error("positivity lost in " + field + " at cell " + std::to_string(cell) +
                           ", t=" + std::to_string(t) + ": " + detail),
        t_(t),
        cell_(cell),
        field_(std::move(field)) {}

  double time() const noexcept { return t_; }
  std::size_t cell() const noexcept { return cell_; }
  const std::string& field() const noexcept { return field_; }

private:
  double t_;
  std::size_t cell_;
  std::string field_;
};

/// Bad argument to a diagnostic (empty trajectory, inadmissible trio, grid mismatch).
class ArgumentError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace nsf
