#pragma once

#include <stdexcept>
#include <string>

namespace rcthermo {

// Invalid user input: out-of-range parameters, dimension mismatches, bad
// names. The CLI maps these to exit code 1.
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A numerical routine could not produce a trustworthy result.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature that did not reach the requested tolerance. Carries the
// error estimate that was achieved.
class QuadratureError : public NumericalError {
  public:
    QuadratureError(const std::string &what, double achieved_error)
        : NumericalError(what), achieved_error_(achieved_error) {}
    [[nodiscard]] double achieved_error() const noexcept { return achieved_error_; }

  private:
    double achieved_error_;
};

} // namespace rcthermo
