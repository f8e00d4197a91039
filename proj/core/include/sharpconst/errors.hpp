#pragma once

#include <stdexcept>
#include <string>

namespace sharpconst {

// Input outside the domain where a formula or operation is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The inequality admits no finite (positive) constant for the given data.
class NoFiniteConstant : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical procedure stopped before reaching the requested tolerance.
class ToleranceNotMet : public std::runtime_error {
 public:
  ToleranceNotMet(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

// A test field does not belong to the admissible class of an inequality.
class InadmissibleField : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace sharpconst
