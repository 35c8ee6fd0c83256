#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "hrde/common.hpp"

namespace hrde {

/// Seeded generator used for every random draw in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Uniform and normal variates are derived here rather than through
/// <random> distributions, which are implementation-defined, so sampled data
/// is bit-identical across standard libraries.
class Rng {
 public:
  static constexpr std::string_view kName = "mt19937_64/v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();

  Vector normal_vector(int dim);
  /// Uniform sample from the closed ball of `radius` around `center`.
  Vector in_ball(const Vector& center, double radius);
  /// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
  Matrix orthogonal(int dim);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hrde
