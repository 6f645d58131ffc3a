#pragma once

#include <cmath>
#include <random>

#include "surfhol/algebra.hpp"

namespace testing {

using surfhol::Complex;
using surfhol::Matrix;

/// exp by scaling and squaring of a truncated Taylor series; independent of the
/// closed forms in the library.
inline Matrix series_exp(const Matrix& x) {
  int squarings = 0;
  double norm = x.norm();
  while (norm > 0.25) {
    norm *= 0.5;
    ++squarings;
  }
  const Matrix y = x / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(x.rows(), x.cols());
  Matrix sum = term;
  for (int k = 1; k < 25; ++k) {
    term = term * y / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

/// so(3) generator with (L_i)_{jk} = -epsilon_{ijk}.
inline Matrix so3_generator(int i) {
  Matrix m = Matrix::Zero(3, 3);
  const int j = (i + 1) % 3, k = (i + 2) % 3;
  m(j, k) = -1.0;
  m(k, j) = 1.0;
  return m;
}

inline Matrix so3(double x, double y, double z) {
  return x * so3_generator(0) + y * so3_generator(1) + z * so3_generator(2);
}

inline Complex phase(double theta) { return std::polar(1.0, theta); }

}  // namespace testing
