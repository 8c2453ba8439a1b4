#pragma once

#include <stdexcept>
#include <string>

namespace specgap {

/// Violated precondition or invalid input. The CLI maps this to exit code 2.
class DomainError : public std::invalid_argument {
 public:
  DomainError(std::string module, const std::string& what)
      : std::invalid_argument(module + ": " + what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// A numerical procedure did not reach its tolerance. The CLI maps this to
/// exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(std::string module, const std::string& what, double best_estimate)
      : std::runtime_error(module + ": " + what),
        module_(std::move(module)),
        best_estimate_(best_estimate) {}

  const std::string& module() const noexcept { return module_; }
  double best_estimate() const noexcept { return best_estimate_; }

 private:
  std::string module_;
  double best_estimate_;
};

}  // namespace specgap
