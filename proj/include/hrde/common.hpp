#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace hrde {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Outcome of a sampled or per-iterate certificate.
///
/// `worst_margin` is the smallest (rhs - lhs) observed over all checks, so a
/// negative value means at least one violation. `first_failure` is the index
/// of the first violating check in the order the checker visited them.
struct CertReport {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  double worst_margin = 0.0;
  std::optional<std::size_t> first_failure;

  bool passed() const { return failures == 0; }

  void record(std::size_t index, double margin) {
    if (checks == 0 || margin < worst_margin) worst_margin = margin;
    ++checks;
    if (margin < 0.0) {
      ++failures;
      if (!first_failure) first_failure = index;
    }
  }
};

}  // namespace hrde
