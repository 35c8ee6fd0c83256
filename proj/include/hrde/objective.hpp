#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hrde/common.hpp"

namespace hrde {

/// Central finite-difference step used library-wide.
inline constexpr double kFiniteDifferenceStep = 1e-6;
/// Gradient norm the declared minimizer must satisfy.
inline constexpr double kMinimizerGradTolerance = 1e-10;
/// Gradient norm at which the on-demand minimizer solve stops.
inline constexpr double kMinimizerSolveTolerance = 1e-12;

namespace detail {
struct MinimizerCache {
  std::once_flag once;
  std::optional<Vector> minimizer;
  double min_value = 0.0;
};
}  // namespace detail

/// A mu-strongly convex, L-smooth function with value and gradient oracles.
///
/// Objectives are immutable after construction and cheap to copy; copies
/// share the underlying callables. Evaluation is pure, so equal inputs give
/// bit-identical outputs.
class Objective {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradFn = std::function<Vector(const Vector&)>;

  Objective(std::string id, int dim, double mu, double lipschitz, ValueFn value,
            GradFn gradient, std::optional<Vector> minimizer = std::nullopt,
            std::optional<double> min_value = std::nullopt,
            std::optional<Matrix> hessian = std::nullopt);

  const std::string& id() const { return id_; }
  int dim() const { return dim_; }
  double mu() const { return mu_; }
  double lipschitz() const { return lipschitz_; }
  double condition_number() const { return lipschitz_ / mu_; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;

  const std::optional<Vector>& minimizer() const { return minimizer_; }
  const std::optional<double>& min_value() const { return min_value_; }
  bool has_minimizer() const { return minimizer_.has_value() && min_value_.has_value(); }
  /// Constant Hessian, present for quadratics only.
  const std::optional<Matrix>& hessian() const { return hessian_; }

  /// f(x) - f*; throws std::logic_error when f* is unknown.
  double gap(const Vector& x) const;
  /// ||x - x*||^2; throws std::logic_error when x* is unknown.
  double dist_sq(const Vector& x) const;

  /// Copy with different declared (mu, L). Used to probe certificates with
  /// deliberately wrong constants; the class invariant mu <= L still applies.
  Objective with_declared_constants(double mu, double lipschitz) const;
  /// Copy with a known minimizer attached (validated against the gradient).
  Objective with_minimizer(Vector minimizer, double min_value) const;

  /// Shared slot for a minimizer computed on demand (see resolve_minimizer in
  /// optimizers.hpp). Copies of one objective share the slot.
  detail::MinimizerCache& minimizer_cache() const { return *cache_; }

 private:
  std::string id_;
  int dim_;
  double mu_;
  double lipschitz_;
  std::shared_ptr<const ValueFn> value_;
  std::shared_ptr<const GradFn> gradient_;
  std::optional<Vector> minimizer_;
  std::optional<double> min_value_;
  std::optional<Matrix> hessian_;
  std::shared_ptr<detail::MinimizerCache> cache_;
};

/// Eigenvalues lambda_1..lambda_d of a quadratic, stored ascending.
class SpectrumSpec {
 public:
  explicit SpectrumSpec(std::vector<double> eigenvalues);

  /// `count` values log-spaced between lo and hi inclusive.
  static SpectrumSpec log_spaced(int count, double lo, double hi);

  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  int dim() const { return static_cast<int>(eigenvalues_.size()); }
  double min() const { return eigenvalues_.front(); }
  double max() const { return eigenvalues_.back(); }

 private:
  std::vector<double> eigenvalues_;
};

/// f(y) = 1/2 y^T H y with H = Q diag(lambda) Q^T; Q = I without a seed.
Objective make_quadratic(const SpectrumSpec& spec,
                         std::optional<std::uint64_t> rotation_seed = std::nullopt);

/// Regularized logistic regression on explicit data:
/// f(x) = (1/n) sum log(1 + exp(-b_i <a_i, x>)) + (reg/2) ||x||^2.
/// Rows of `features` are the a_i; labels are +-1.
Objective make_reg_logistic(const Matrix& features, const Vector& labels, double reg);

/// Same objective on data drawn from `data_seed`: a_i ~ N(0, I) and
/// b_i = sign(<a_i, w> + noise) for a seeded planted direction w.
Objective make_reg_logistic(std::uint64_t data_seed, int n_samples, int dim, double reg);

struct ClassCertReport {
  CertReport strong_convexity;
  CertReport smoothness;
  bool passed() const { return strong_convexity.passed() && smoothness.passed(); }
};

inline constexpr double kCertifyRadius = 10.0;
inline constexpr double kCertifyRelativeSlack = 1e-9;

/// Samples `n_pairs` pairs (x, y) in the ball of `radius` around x* (or the
/// origin when x* is unknown) and checks
///   f(y) >= f(x) + <grad f(x), y - x> + (mu/2) ||y - x||^2
///   ||grad f(y) - grad f(x)|| <= L ||y - x||
/// each with relative slack 1e-9.
ClassCertReport certify_class(const Objective& f, std::size_t n_pairs, std::uint64_t sample_seed,
                              double radius = kCertifyRadius);

/// Central-difference gradient with step kFiniteDifferenceStep.
Vector finite_difference_gradient(const Objective& f, const Vector& x,
                                  double h = kFiniteDifferenceStep);

}  // namespace hrde
