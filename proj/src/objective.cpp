#include "hrde/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hrde/rng.hpp"

namespace hrde {

Objective::Objective(std::string id, int dim, double mu, double lipschitz, ValueFn value,
                     GradFn gradient, std::optional<Vector> minimizer,
                     std::optional<double> min_value, std::optional<Matrix> hessian)
    : id_(std::move(id)),
      dim_(dim),
      mu_(mu),
      lipschitz_(lipschitz),
      value_(std::make_shared<const ValueFn>(std::move(value))),
      gradient_(std::make_shared<const GradFn>(std::move(gradient))),
      minimizer_(std::move(minimizer)),
      min_value_(min_value),
      hessian_(std::move(hessian)),
      cache_(std::make_shared<detail::MinimizerCache>()) {
  if (dim_ <= 0) throw std::invalid_argument("objective: dimension must be positive");
  if (!(mu_ > 0.0)) throw std::invalid_argument("objective: mu must be positive");
  if (!(lipschitz_ >= mu_)) throw std::invalid_argument("objective: L must be >= mu");
  if (hessian_ && (hessian_->rows() != dim_ || hessian_->cols() != dim_))
    throw std::invalid_argument("objective: hessian shape mismatch");
  if (minimizer_) {
    if (minimizer_->size() != dim_)
      throw std::invalid_argument("objective: minimizer dimension mismatch");
    const double g = (*gradient_)(*minimizer_).norm();
    if (!(g < kMinimizerGradTolerance))
      throw std::invalid_argument("objective: gradient at declared minimizer is not ~0");
    if (!min_value_) min_value_ = (*value_)(*minimizer_);
  }
}

double Objective::value(const Vector& x) const {
  if (x.size() != dim_) throw std::invalid_argument("objective: dimension mismatch");
  return (*value_)(x);
}

Vector Objective::gradient(const Vector& x) const {
  if (x.size() != dim_) throw std::invalid_argument("objective: dimension mismatch");
  return (*gradient_)(x);
}

double Objective::gap(const Vector& x) const {
  if (!min_value_) throw std::logic_error("objective '" + id_ + "': minimum value unknown");
  return value(x) - *min_value_;
}

double Objective::dist_sq(const Vector& x) const {
  if (!minimizer_) throw std::logic_error("objective '" + id_ + "': minimizer unknown");
  return (x - *minimizer_).squaredNorm();
}

Objective Objective::with_declared_constants(double mu, double lipschitz) const {
  Objective copy = *this;
  if (!(mu > 0.0) || !(lipschitz >= mu))
    throw std::invalid_argument("objective: declared constants must satisfy 0 < mu <= L");
  copy.mu_ = mu;
  copy.lipschitz_ = lipschitz;
  return copy;
}

Objective Objective::with_minimizer(Vector minimizer, double min_value) const {
  return Objective(id_, dim_, mu_, lipschitz_, *value_, *gradient_, std::move(minimizer),
                   min_value, hessian_);
}

SpectrumSpec::SpectrumSpec(std::vector<double> eigenvalues) : eigenvalues_(std::move(eigenvalues)) {
  if (eigenvalues_.empty()) throw std::invalid_argument("spectrum: empty");
  for (double lambda : eigenvalues_)
    if (!(lambda > 0.0) || !std::isfinite(lambda))
      throw std::invalid_argument("spectrum: eigenvalues must be positive and finite");
  std::sort(eigenvalues_.begin(), eigenvalues_.end());
}

SpectrumSpec SpectrumSpec::log_spaced(int count, double lo, double hi) {
  if (count < 1) throw std::invalid_argument("spectrum: count must be >= 1");
  if (count == 1) return SpectrumSpec({lo});
  std::vector<double> values(count);
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) values[i] = lo * std::exp(step * i);
  values.back() = hi;
  return SpectrumSpec(std::move(values));
}

Objective make_quadratic(const SpectrumSpec& spec, std::optional<std::uint64_t> rotation_seed) {
  const int d = spec.dim();
  Vector lambdas(d);
  for (int i = 0; i < d; ++i) lambdas[i] = spec.eigenvalues()[i];

  Matrix hessian = lambdas.asDiagonal();
  std::string id = "quad";
  if (rotation_seed) {
    Rng rng(*rotation_seed);
    const Matrix q = rng.orthogonal(d);
    hessian = q * lambdas.asDiagonal() * q.transpose();
    hessian = 0.5 * (hessian + hessian.transpose()).eval();
    id = "quad-rot";
  }

  Objective::ValueFn value;
  Objective::GradFn gradient;
  if (rotation_seed) {
    value = [hessian](const Vector& x) { return 0.5 * x.dot(hessian * x); };
    gradient = [hessian](const Vector& x) -> Vector { return hessian * x; };
  } else {
    value = [lambdas](const Vector& x) { return 0.5 * x.dot(lambdas.cwiseProduct(x)); };
    gradient = [lambdas](const Vector& x) -> Vector { return lambdas.cwiseProduct(x); };
  }
  return Objective(id, d, spec.min(), spec.max(), std::move(value), std::move(gradient),
                   Vector::Zero(d), 0.0, hessian);
}

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

Objective make_reg_logistic(const Matrix& features, const Vector& labels, double reg) {
  if (!(reg > 0.0)) throw std::invalid_argument("reg-logistic: reg must be positive");
  const auto n = features.rows();
  const auto d = features.cols();
  if (n < 1) throw std::invalid_argument("reg-logistic: need at least one sample");
  if (labels.size() != n) throw std::invalid_argument("reg-logistic: label count mismatch");

  // Rows scaled by their labels: the loss only sees b_i a_i.
  const Matrix signed_rows = labels.asDiagonal() * features;
  const double inv_n = 1.0 / static_cast<double>(n);
  const double lipschitz = reg + 0.25 * inv_n * features.squaredNorm();

  auto value = [signed_rows, inv_n, reg](const Vector& x) {
    const Vector margins = signed_rows * x;
    double loss = 0.0;
    for (Eigen::Index i = 0; i < margins.size(); ++i) loss += softplus(-margins[i]);
    return loss * inv_n + 0.5 * reg * x.squaredNorm();
  };
  auto gradient = [signed_rows, inv_n, reg](const Vector& x) -> Vector {
    const Vector margins = signed_rows * x;
    Vector weights(margins.size());
    for (Eigen::Index i = 0; i < margins.size(); ++i) weights[i] = -sigmoid(-margins[i]);
    return inv_n * (signed_rows.transpose() * weights) + reg * x;
  };
  return Objective("reg-logistic", static_cast<int>(d), reg, lipschitz, std::move(value),
                   std::move(gradient));
}

Objective make_reg_logistic(std::uint64_t data_seed, int n_samples, int dim, double reg) {
  if (n_samples < 1) throw std::invalid_argument("reg-logistic: n_samples must be >= 1");
  if (dim < 1) throw std::invalid_argument("reg-logistic: dim must be >= 1");
  if (!(reg > 0.0)) throw std::invalid_argument("reg-logistic: reg must be positive");
  Rng rng(data_seed);
  const Vector planted = rng.normal_vector(dim);
  Matrix features(n_samples, dim);
  Vector labels(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    for (int j = 0; j < dim; ++j) features(i, j) = rng.normal();
    const double noise = 0.5 * rng.normal();
    labels[i] = features.row(i).dot(planted) + noise >= 0.0 ? 1.0 : -1.0;
  }
  return make_reg_logistic(features, labels, reg);
}

ClassCertReport certify_class(const Objective& f, std::size_t n_pairs, std::uint64_t sample_seed,
                              double radius) {
  if (n_pairs < 1) throw std::invalid_argument("certify_class: n_pairs must be >= 1");
  ClassCertReport report;
  report.strong_convexity.name = "strong_convexity";
  report.smoothness.name = "smoothness";

  const Vector center = f.minimizer().value_or(Vector::Zero(f.dim()));
  Rng rng(sample_seed);
  for (std::size_t i = 0; i < n_pairs; ++i) {
    const Vector x = rng.in_ball(center, radius);
    const Vector y = rng.in_ball(center, radius);
    const Vector d = y - x;
    const double fx = f.value(x);
    const double fy = f.value(y);
    const Vector gx = f.gradient(x);
    const Vector gy = f.gradient(y);

    const double linear = gx.dot(d);
    const double quad = 0.5 * f.mu() * d.squaredNorm();
    const double scale_sc = std::abs(fx) + std::abs(fy) + std::abs(linear) + quad;
    report.strong_convexity.record(
        i, fy - (fx + linear + quad) + kCertifyRelativeSlack * scale_sc);

    const double allowed = f.lipschitz() * d.norm();
    report.smoothness.record(i, allowed - (gy - gx).norm() + kCertifyRelativeSlack * allowed);
  }
  return report;
}

Vector finite_difference_gradient(const Objective& f, const Vector& x, double h) {
  Vector g(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f.value(probe);
    probe[i] = x[i] - h;
    const double down = f.value(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace hrde
