#pragma once

// Small dense linear-algebra helpers shared by the geometry modules.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <span>

#include "gbk/error.hpp"

namespace gbk {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace linalg {

// Determinant of a k x k row-major matrix by Gaussian elimination with
// partial pivoting. The input is overwritten.
inline double determinant_inplace(std::span<double> a, int k) {
  double det = 1.0;
  for (int col = 0; col < k; ++col) {
    int pivot = col;
    double best = std::abs(a[col * k + col]);
    for (int row = col + 1; row < k; ++row) {
      const double v = std::abs(a[row * k + col]);
      if (v > best) {
        best = v;
        pivot = row;
      }
    }
    if (best == 0.0) return 0.0;
    if (pivot != col) {
      for (int j = col; j < k; ++j) std::swap(a[col * k + j], a[pivot * k + j]);
      det = -det;
    }
    const double diag = a[col * k + col];
    det *= diag;
    for (int row = col + 1; row < k; ++row) {
      const double factor = a[row * k + col] / diag;
      if (factor == 0.0) continue;
      for (int j = col + 1; j < k; ++j) a[row * k + j] -= factor * a[col * k + j];
    }
  }
  return det;
}

inline Vector singular_values(const Matrix& a) {
  if (a.size() == 0) return Vector();
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

// Number of singular values above `threshold * max(1, sigma_max)` when
// `relative`, or above `threshold` otherwise.
inline int numerical_rank(const Matrix& a, double threshold, bool relative = false) {
  const Vector s = singular_values(a);
  if (s.size() == 0) return 0;
  const double cut = relative ? threshold * s(0) : threshold;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return rank;
}

// Orthonormal basis of the column span of `vectors` such that
// vectors = Q R with R upper triangular with positive diagonal; the
// orientation of the basis is therefore preserved.
inline Matrix orthonormalize(const Matrix& vectors) {
  const Eigen::Index d = vectors.rows();
  const Eigen::Index k = vectors.cols();
  Eigen::HouseholderQR<Matrix> qr(vectors);
  Matrix q = qr.householderQ() * Matrix::Identity(d, k);
  const Matrix r = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < k; ++i)
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  return q;
}

// Upper triangular factor R (positive diagonal) matching orthonormalize().
inline Matrix positive_r_factor(const Matrix& vectors) {
  const Eigen::Index k = vectors.cols();
  Eigen::HouseholderQR<Matrix> qr(vectors);
  Matrix r = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < k; ++i)
    if (r(i, i) < 0.0) r.row(i) = -r.row(i);
  return r;
}

// Orthonormal basis N of the orthogonal complement of the span of the
// orthonormal columns of `frame`, oriented so that det[frame N] > 0.
inline Matrix oriented_complement(const Matrix& frame) {
  const Eigen::Index d = frame.rows();
  const Eigen::Index k = frame.cols();
  if (k == d) return Matrix(d, 0);
  Eigen::HouseholderQR<Matrix> qr(frame);
  const Matrix full = qr.householderQ() * Matrix::Identity(d, d);
  Matrix complement = full.rightCols(d - k);
  // Re-project to remove the component along `frame` left by round-off.
  complement -= frame * (frame.transpose() * complement);
  complement = orthonormalize(complement);
  Matrix basis(d, d);
  basis << frame, complement;
  if (basis.determinant() < 0.0) complement.col(d - k - 1) *= -1.0;
  return complement;
}

}  // namespace linalg
}  // namespace gbk
