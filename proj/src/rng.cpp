#include "hrde/rng.hpp"

#include <cmath>
#include <numbers>

namespace hrde {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Vector Rng::normal_vector(int dim) {
  Vector out(dim);
  for (int i = 0; i < dim; ++i) out[i] = normal();
  return out;
}

Vector Rng::in_ball(const Vector& center, double radius) {
  const int dim = static_cast<int>(center.size());
  Vector direction = normal_vector(dim);
  double norm = direction.norm();
  while (norm == 0.0) {
    direction = normal_vector(dim);
    norm = direction.norm();
  }
  const double scale = radius * std::pow(uniform(), 1.0 / dim);
  return center + (scale / norm) * direction;
}

Matrix Rng::orthogonal(int dim) {
  Matrix gaussian(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) gaussian(i, j) = normal();
  Eigen::HouseholderQR<Matrix> qr(gaussian);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

}  // namespace hrde
