#pragma once

// Oriented Grassmannian G(n,m): n-planes in R^{n+m} stored as oriented
// orthonormal frames together with their unit Plucker vectors.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "gbk/error.hpp"
#include "gbk/linalg.hpp"
#include "gbk/multivector.hpp"

namespace gbk {

class GrassmannPoint {
 public:
  // Orthonormalizes the columns of `vectors` ((n+m) x n) keeping span and orientation.
  static GrassmannPoint from_basis(const Matrix& vectors) {
    const Eigen::Index d = vectors.rows();
    const Eigen::Index n = vectors.cols();
    if (n < 1 || n >= d) throw InvalidInput("a basis needs 1 <= n < n+m vectors");
    if (!vectors.allFinite()) throw InvalidInput("basis has non-finite entries");
    const Vector s = linalg::singular_values(vectors);
    if (s(s.size() - 1) <= 1e-10) throw DegenerateInput("basis vectors are linearly dependent");
    return GrassmannPoint(linalg::orthonormalize(vectors));
  }

  static GrassmannPoint from_basis(std::span<const Vector> vectors) {
    if (vectors.empty()) throw InvalidInput("empty basis");
    Matrix stacked(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (vectors[i].size() != stacked.rows()) throw InvalidInput("basis vectors have different dimensions");
      stacked.col(static_cast<Eigen::Index>(i)) = vectors[i];
    }
    return from_basis(stacked);
  }

  // Span of the standard basis vectors with the given 0-based indices, in that order.
  static GrassmannPoint coordinate_plane(int n, int m, std::vector<int> indices = {}) {
    if (indices.empty())
      for (int i = 0; i < n; ++i) indices.push_back(i);
    if (static_cast<int>(indices.size()) != n) throw InvalidInput("coordinate plane needs n indices");
    Matrix frame = Matrix::Zero(n + m, n);
    for (int i = 0; i < n; ++i) {
      if (indices[i] < 0 || indices[i] >= n + m) throw InvalidInput("coordinate index out of range");
      frame(indices[i], i) = 1.0;
    }
    return from_basis(frame);
  }

  int n() const { return static_cast<int>(frame_.cols()); }
  int m() const { return static_cast<int>(frame_.rows() - frame_.cols()); }
  int ambient_dim() const { return static_cast<int>(frame_.rows()); }
  const Matrix& frame() const { return frame_; }
  const Multivector& plucker() const { return plucker_; }

  // Orthonormal frame of the orthogonal complement with det[frame N] = +1.
  Matrix normal_frame() const { return linalg::oriented_complement(frame_); }

  Matrix projector() const { return frame_ * frame_.transpose(); }

 private:
  explicit GrassmannPoint(Matrix frame) : frame_(std::move(frame)), plucker_(wedge(frame_)) {}

  Matrix frame_;
  Multivector plucker_;
};

inline void require_same_shape(const GrassmannPoint& p, const GrassmannPoint& q) {
  if (p.n() != q.n() || p.m() != q.m())
    throw InvalidInput("points live in different Grassmannians: G(" + std::to_string(p.n()) + "," +
                       std::to_string(p.m()) + ") vs G(" + std::to_string(q.n()) + "," + std::to_string(q.m()) +
                       ")");
}

// W-matrix <e_i, f_j> of the stored frames.
inline Matrix w_matrix(const GrassmannPoint& p, const GrassmannPoint& q) {
  require_same_shape(p, q);
  return p.frame().transpose() * q.frame();
}

inline double w_function(const GrassmannPoint& p, const GrassmannPoint& q) {
  require_same_shape(p, q);
  return inner(p.plucker(), q.plucker());
}

struct JordanData {
  std::vector<double> angles;  // descending, n entries
  std::vector<double> cosines;
  Matrix directions_P;  // columns paired with angles
  Matrix directions_Q;
  int r = 0;  // number of angles above 1e-9
};

inline JordanData jordan_angles(const GrassmannPoint& p, const GrassmannPoint& q) {
  const Matrix w = w_matrix(p, q);
  const Eigen::Index n = w.rows();
  Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector sigma = svd.singularValues();
  const Matrix dir_p = p.frame() * svd.matrixU();
  const Matrix dir_q = q.frame() * svd.matrixV();
  // Sines from the residual of P off Q, descending, resolve small angles.
  const Matrix residual = p.frame() - q.frame() * (q.frame().transpose() * p.frame());
  const Vector sines = Eigen::JacobiSVD<Matrix>(residual).singularValues();

  JordanData out;
  out.directions_P.resize(p.ambient_dim(), n);
  out.directions_Q.resize(p.ambient_dim(), n);
  // Singular values come in descending order; reverse so angles descend.
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;
    const double c = std::clamp(sigma(src), 0.0, 1.0);
    double angle;
    if (c > std::numbers::sqrt2 / 2.0) {
      angle = std::asin(std::min(1.0, sines(k)));
    } else {
      angle = std::acos(c);
    }
    out.angles.push_back(angle);
    out.cosines.push_back(c);
    out.directions_P.col(k) = dir_p.col(src);
    out.directions_Q.col(k) = dir_q.col(src);
    if (angle > 1e-9) ++out.r;
  }
  return out;
}

inline double distance(const GrassmannPoint& p, const GrassmannPoint& q) {
  double sum = 0.0;
  for (double a : jordan_angles(p, q).angles) sum += a * a;
  return std::sqrt(sum);
}

struct SOrthogonality {
  bool s_orthogonal = false;
  int right_angles = 0;    // angles within tol of pi/2
  int zero_angles = 0;     // angles within tol of 0
  int intersection_dim = 0;
  double w = 0.0;
  std::vector<double> angles;
};

inline SOrthogonality s_orthogonality(const GrassmannPoint& p, const GrassmannPoint& q, double tol = 1e-8) {
  SOrthogonality out;
  const JordanData jd = jordan_angles(p, q);
  out.angles = jd.angles;
  for (double a : jd.angles) {
    if (std::abs(a - std::numbers::pi / 2.0) <= tol) ++out.right_angles;
    if (a <= tol) ++out.zero_angles;
  }
  const int n = p.n();
  out.s_orthogonal = out.right_angles == 1 && out.zero_angles == n - 1;
  Matrix stacked(p.ambient_dim(), 2 * n);
  stacked << p.frame(), q.frame();
  out.intersection_dim = 2 * n - linalg::numerical_rank(stacked, 1e-8);
  out.w = w_function(p, q);
  return out;
}

inline bool is_s_orthogonal(const GrassmannPoint& p, const GrassmannPoint& q, double tol = 1e-8) {
  return s_orthogonality(p, q, tol).s_orthogonal;
}

// The great circle P_t through an S-orthogonal pair (P, Q) with P_0 = P and
// P_{pi/2} = Q. Stores e_1, e_{n+1} (the rotating pair), e_2..e_n (the common
// (n-1)-plane) and an oriented completion of the ambient basis.
class SOrthogonalPair {
 public:
  SOrthogonalPair(const GrassmannPoint& p, const GrassmannPoint& q, double tol = 1e-8) : p_(p), q_(q) {
    const SOrthogonality report = s_orthogonality(p, q, tol);
    if (!report.s_orthogonal)
      throw PreconditionError("planes are not S-orthogonal (" + std::to_string(report.right_angles) +
                              " right angles, " + std::to_string(report.zero_angles) + " zero angles)");
    const JordanData jd = jordan_angles(p, q);
    const int n = p.n();
    const int d = p.ambient_dim();
    Matrix tangent = jd.directions_P;  // column 0 is the direction at angle pi/2
    if ((p.frame().transpose() * tangent).determinant() < 0.0) tangent.col(0) *= -1.0;
    Vector rotated = jd.directions_Q.col(0);
    rotated -= tangent * (tangent.transpose() * rotated);
    rotated.normalize();
    Matrix at_q = tangent;
    at_q.col(0) = rotated;
    if ((q.frame().transpose() * at_q).determinant() < 0.0) rotated *= -1.0;

    Matrix head(d, n + 1);
    head << tangent, rotated;
    head = linalg::orthonormalize(head);
    // Columns: e_1, e_2..e_n, then e_{n+1}, then the remaining normals.
    Matrix rest = linalg::oriented_complement(head);
    basis_.resize(d, d);
    basis_ << head.leftCols(n), head.col(n), rest;
    if (basis_.determinant() < 0.0 && rest.cols() > 0) basis_.col(d - 1) *= -1.0;
  }

  const GrassmannPoint& P() const { return p_; }
  const GrassmannPoint& Q() const { return q_; }
  int n() const { return p_.n(); }
  int m() const { return p_.m(); }

  // Orthonormal adapted frames at P_t: tangent (f_1 = cos t e_1 + sin t e_{n+1},
  // e_2..e_n) and normal (f_{n+1} = -sin t e_1 + cos t e_{n+1}, rest). For
  // m > 1 the completion is chosen so that det[tangent normal] = +1.
  std::pair<Matrix, Matrix> adapted_frames(double t) const {
    const int n = p_.n();
    const int m = p_.m();
    Matrix tangent = basis_.leftCols(n);
    Matrix normal = basis_.rightCols(m);
    const Vector e1 = basis_.col(0);
    const Vector en1 = basis_.col(n);
    tangent.col(0) = std::cos(t) * e1 + std::sin(t) * en1;
    normal.col(0) = -std::sin(t) * e1 + std::cos(t) * en1;
    return {tangent, normal};
  }

  GrassmannPoint at(double t) const { return GrassmannPoint::from_basis(adapted_frames(t).first); }

  // Ambient basis (e_1..e_n, e_{n+1}..e_{n+m}) used by the adapted frames at t = 0.
  const Matrix& basis() const { return basis_; }

 private:
  GrassmannPoint p_;
  GrassmannPoint q_;
  Matrix basis_;
};

inline GrassmannPoint geodesic_Pt(const GrassmannPoint& p, const GrassmannPoint& q, double t) {
  return SOrthogonalPair(p, q).at(t);
}

struct SMapValue {
  double x1 = 0.0;
  double x2 = 0.0;
};

inline SMapValue s_map(const GrassmannPoint& s, const SOrthogonalPair& pair) {
  return {w_function(s, pair.P()), w_function(s, pair.Q())};
}

inline SMapValue s_map(const GrassmannPoint& s, const GrassmannPoint& p, const GrassmannPoint& q) {
  if (!is_s_orthogonal(p, q)) throw PreconditionError("s_map needs an S-orthogonal pair");
  return {w_function(s, p), w_function(s, q)};
}

struct Polar {
  double r = 0.0;
  double theta = 0.0;
};

inline Polar polar(const SMapValue& x) {
  if (std::abs(x.x2) <= 1e-12 && x.x1 <= 0.0)
    throw DomainError("S-map value lies on the deleted radius {(a,0): a <= 0}");
  return {std::hypot(x.x1, x.x2), std::atan2(x.x2, x.x1)};
}

inline Polar polar(const GrassmannPoint& s, const SOrthogonalPair& pair) { return polar(s_map(s, pair)); }

inline Polar polar(const GrassmannPoint& s, const GrassmannPoint& p, const GrassmannPoint& q) {
  return polar(s_map(s, p, q));
}

// Matrix coordinates of S around a center plane with oriented tangent frame E
// and normal frame N: S is spanned by the rows e_i + Z_{i alpha} nu_alpha.
struct MatrixChart {
  Matrix tangent;
  Matrix normal;
  Matrix Z;

  double w() const {
    const Eigen::Index n = Z.rows();
    return 1.0 / std::sqrt((Matrix::Identity(n, n) + Z * Z.transpose()).determinant());
  }

  GrassmannPoint point() const { return GrassmannPoint::from_basis(Matrix(tangent + normal * Z.transpose())); }
};

inline MatrixChart matrix_chart(const GrassmannPoint& s, const Matrix& tangent, const Matrix& normal) {
  if (tangent.rows() != s.ambient_dim() || tangent.cols() != s.n() || normal.cols() != s.m())
    throw InvalidInput("chart frames do not match the plane dimensions");
  const Matrix a = tangent.transpose() * s.frame();
  const Matrix b = normal.transpose() * s.frame();
  const double w = a.determinant();
  if (!(w > 1e-10)) throw DomainError("plane lies outside the chart (w = " + std::to_string(w) + ")");
  MatrixChart chart{tangent, normal, Matrix()};
  chart.Z = a.transpose().partialPivLu().solve(b.transpose());
  return chart;
}

inline MatrixChart matrix_chart(const GrassmannPoint& s, const GrassmannPoint& center) {
  require_same_shape(s, center);
  return matrix_chart(s, center.frame(), center.normal_frame());
}

namespace detail {

// Singular values of Z padded with zeros to length `count`.
inline Vector padded_singular_values(const Matrix& z, Eigen::Index count) {
  Vector out = Vector::Zero(count);
  const Vector s = linalg::singular_values(z);
  out.head(std::min(count, s.size())) = s.head(std::min(count, s.size()));
  return out;
}

}  // namespace detail

// Eigenvalues (1 + lambda_i^2)(1 + lambda_alpha^2) of the inverse metric in the chart.
inline std::vector<double> chart_metric_eigen(const Matrix& z) {
  const Vector li = detail::padded_singular_values(z, z.rows());
  const Vector la = detail::padded_singular_values(z, z.cols());
  std::vector<double> out;
  out.reserve(li.size() * la.size());
  for (Eigen::Index i = 0; i < li.size(); ++i)
    for (Eigen::Index a = 0; a < la.size(); ++a) out.push_back((1.0 + li(i) * li(i)) * (1.0 + la(a) * la(a)));
  std::sort(out.begin(), out.end());
  return out;
}

// (I + Z Z^T) (x) (I + Z^T Z), indexed by (i, alpha) -> i * m + alpha.
inline Matrix chart_inverse_metric(const Matrix& z) {
  const Eigen::Index n = z.rows();
  const Eigen::Index m = z.cols();
  const Matrix left = Matrix::Identity(n, n) + z * z.transpose();
  const Matrix right = Matrix::Identity(m, m) + z.transpose() * z;
  Matrix out(n * m, n * m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out.block(i * m, j * m, m, m) = left(i, j) * right;
  return out;
}

// eta(S): the oriented orthogonal complement, an element of G(m, n).
inline GrassmannPoint normal_complement(const GrassmannPoint& s) { return GrassmannPoint::from_basis(s.normal_frame()); }

struct GradientBound {
  double lhs = 0.0;  // |grad log w|^2 = sum lambda_i^2
  double rhs = 0.0;  // p (w^{-2/p} - 1)
};

inline GradientBound grad_logw_lower_bound(const GrassmannPoint& s, const GrassmannPoint& center) {
  const MatrixChart chart = matrix_chart(s, center);
  const Vector lambda = linalg::singular_values(chart.Z);
  const int p = std::min(s.n(), s.m());
  double log_w = 0.0;
  GradientBound out;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    out.lhs += lambda(i) * lambda(i);
    log_w -= 0.5 * std::log1p(lambda(i) * lambda(i));
  }
  out.rhs = p * std::expm1(-2.0 * log_w / p);
  return out;
}

// e_1 ^ .. ^ e_n with e_j replaced by nu_alpha for every (j, alpha) in `replacements`.
inline Matrix substituted_frame(const Matrix& tangent, const Matrix& normal,
                                std::initializer_list<std::pair<int, int>> replacements) {
  Matrix out = tangent;
  for (const auto& [j, alpha] : replacements) out.col(j) = normal.col(alpha);
  return out;
}

// <e_1 ^ .. ^ e_n with substitutions, A> where A is the Plucker vector of `a`.
inline double substituted_pairing(const Matrix& tangent, const Matrix& normal, const Matrix& a,
                                  std::initializer_list<std::pair<int, int>> replacements) {
  return (substituted_frame(tangent, normal, replacements).transpose() * a).determinant();
}

// Three-term Plucker combination for tangent slots (j, k) and distinct normals (alpha, beta):
// <e,A><e_{j alpha, k beta},A> - <e_{j alpha},A><e_{k beta},A> + <e_{j beta},A><e_{k alpha},A>.
inline double plucker_three_term(const Matrix& tangent, const Matrix& normal, const Multivector& a, int j, int k,
                                 int alpha, int beta) {
  auto pair = [&](std::initializer_list<std::pair<int, int>> r) {
    return inner(wedge(substituted_frame(tangent, normal, r)), a);
  };
  return pair({}) * pair({{j, alpha}, {k, beta}}) - pair({{j, alpha}}) * pair({{k, beta}}) +
         pair({{j, beta}}) * pair({{k, alpha}});
}

}  // namespace gbk
