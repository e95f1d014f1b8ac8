#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "gbk/gbk.hpp"

namespace gbk::support {

inline Matrix random_rotation(Rng& rng, int d) {
  Matrix r = random_orthonormal(rng, d, d);
  if (r.determinant() < 0.0) r.col(0) *= -1.0;
  return r;
}

// A rotated copy of the pair span(e1..en), span(e_{n+1}, e2..en).
inline std::pair<GrassmannPoint, GrassmannPoint> random_s_orthogonal_pair(Rng& rng, int n, int m) {
  const Matrix r = random_rotation(rng, n + m);
  Matrix p = r.leftCols(n);
  Matrix q = p;
  q.col(0) = r.col(n);
  return {GrassmannPoint::from_basis(p), GrassmannPoint::from_basis(q)};
}

// Maximizes f over the unit sphere of R^k by a coarse grid in spherical
// coordinates followed by a shrinking pattern search. Returns the maximizer.
inline Vector maximize_on_sphere(const std::function<double(const Vector&)>& f, int k) {
  if (k == 1) {
    const Vector plus = Vector::Ones(1);
    return f(plus) >= f(-plus) ? plus : Vector(-plus);
  }
  const int params = k - 1;
  auto point = [k](const Vector& a) {
    Vector x(k);
    double s = 1.0;
    for (int i = 0; i < k - 1; ++i) {
      x(i) = s * std::cos(a(i));
      s *= std::sin(a(i));
    }
    x(k - 1) = s;
    return x;
  };
  const int grid = params == 1 ? 720 : 120;
  Vector best = Vector::Zero(params);
  double best_value = -1e300;
  Vector a(params);
  std::vector<int> idx(params, 0);
  for (;;) {
    for (int i = 0; i < params; ++i)
      a(i) = (i == params - 1 ? 2.0 * std::numbers::pi : std::numbers::pi) * (idx[i] + 0.5) / grid;
    const double v = f(point(a));
    if (v > best_value) {
      best_value = v;
      best = a;
    }
    int i = 0;
    while (i < params && ++idx[i] == grid) idx[i++] = 0;
    if (i == params) break;
  }
  double step = 2.0 * std::numbers::pi / grid;
  while (step > 1e-13) {
    bool improved = false;
    for (int i = 0; i < params; ++i)
      for (double sgn : {1.0, -1.0}) {
        Vector trial = best;
        trial(i) += sgn * step;
        const double v = f(point(trial));
        if (v > best_value) {
          best_value = v;
          best = trial;
          improved = true;
        }
      }
    if (!improved) step *= 0.5;
  }
  return point(best);
}

// Critical angles found by successive maximization of |proj_Q u| over unit
// u in P, deflating the principal vectors found so far. Ascending order.
inline std::vector<double> brute_force_angles(const Matrix& p, const Matrix& q) {
  const int n = static_cast<int>(p.cols());
  Matrix pb = linalg::orthonormalize(p);
  Matrix qb = linalg::orthonormalize(q);
  std::vector<double> out;
  for (int step = 0; step < n; ++step) {
    const int k = static_cast<int>(pb.cols());
    auto cosine = [&](const Vector& c) { return (qb.transpose() * (pb * c)).norm(); };
    const Vector c = maximize_on_sphere(cosine, k);
    const Vector u = pb * c;
    const Vector proj = qb * (qb.transpose() * u);
    const double cs = std::min(1.0, proj.norm());
    const double sn = (u - proj).norm();
    out.push_back(std::atan2(sn, cs));
    Vector v = proj.norm() > 1e-12 ? Vector(proj.normalized()) : Vector(qb.col(0));
    auto deflate = [](const Matrix& basis, const Vector& dir) {
      const Vector coeff = basis.transpose() * dir;
      Eigen::JacobiSVD<Matrix> svd(coeff.transpose(), Eigen::ComputeFullV);
      const Matrix v = svd.matrixV();
      return Matrix(basis * v.rightCols(basis.cols() - 1));
    };
    if (step + 1 < n) {
      pb = deflate(pb, u);
      qb = deflate(qb, v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gbk::support
