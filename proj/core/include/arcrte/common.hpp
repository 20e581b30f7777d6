#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace arcrte {

using cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;
constexpr cplx kI{0.0, 1.0};

/// Raised when a numerical stage cannot produce a trustworthy result
/// (singular factorization, non-convergent iteration, etc).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string stage, const std::string& what,
                 std::vector<double> history = {})
      : std::runtime_error(stage + ": " + what),
        stage_(std::move(stage)),
        history_(std::move(history)) {}

  const std::string& stage() const noexcept { return stage_; }
  /// Iterate differences, pivot magnitudes or similar diagnostics.
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::string stage_;
  std::vector<double> history_;
};

/// Invalid user configuration or malformed input file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace arcrte
