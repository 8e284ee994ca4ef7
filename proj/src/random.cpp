#include "mcr/random.hpp"

#include <Eigen/QR>

namespace mcr {

namespace {

double uniform(Rng& rng) { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng); }

}  // namespace

Vector random_vector(Rng& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = uniform(rng);
    v(i) = cplx{re, uniform(rng)};
  }
  return v;
}

Vector random_real_vector(Rng& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = uniform(rng);
  return v;
}

Matrix random_matrix(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = uniform(rng);
      m(i, j) = cplx{re, uniform(rng)};
    }
  return m;
}

Matrix random_unitary(Rng& rng, int n) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

}  // namespace mcr
