#pragma once

// Central finite differences, Richardson extrapolation and the coordinate
// Laplace-Beltrami operator.

#include <cmath>
#include <functional>

#include "gbk/linalg.hpp"

namespace gbk {

using ScalarField = std::function<double(const Vector&)>;
using MetricField = std::function<Matrix(const Vector&)>;

inline Vector gradient_fd(const ScalarField& u, const Vector& x, double h) {
  Vector out(x.size());
  Vector y = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    y(i) = x(i) + h;
    const double plus = u(y);
    y(i) = x(i) - h;
    const double minus = u(y);
    y(i) = x(i);
    out(i) = (plus - minus) / (2.0 * h);
  }
  return out;
}

// Richardson-extrapolated central gradient: (4 D(h/2) - D(h)) / 3.
inline Vector gradient_richardson(const ScalarField& u, const Vector& x, double h) {
  return (4.0 * gradient_fd(u, x, h / 2.0) - gradient_fd(u, x, h)) / 3.0;
}

// Flux form (1/sqrt g) d_i (sqrt g g^{ij} d_j u) with nested central differences.
inline double laplace_beltrami_fd(const MetricField& metric, const ScalarField& u, const Vector& x, double h) {
  const Eigen::Index n = x.size();
  auto flux = [&](const Vector& y, Eigen::Index i) {
    const Matrix g = metric(y);
    const Matrix g_inv = g.inverse();
    const Vector du = gradient_fd(u, y, h);
    return std::sqrt(g.determinant()) * g_inv.row(i).dot(du);
  };
  double divergence = 0.0;
  Vector y = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) = x(i) + h;
    const double plus = flux(y, i);
    y(i) = x(i) - h;
    const double minus = flux(y, i);
    y(i) = x(i);
    divergence += (plus - minus) / (2.0 * h);
  }
  return divergence / std::sqrt(metric(x).determinant());
}

struct LaplacianEstimate {
  double value = 0.0;   // extrapolated
  double coarse = 0.0;  // step h
  double fine = 0.0;    // step h/2
  bool warning = false; // coarse and fine disagree beyond tolerance
};

inline LaplacianEstimate laplace_beltrami_richardson(const MetricField& metric, const ScalarField& u, const Vector& x,
                                                     double h, double tolerance = 1e-3) {
  LaplacianEstimate out;
  out.coarse = laplace_beltrami_fd(metric, u, x, h);
  out.fine = laplace_beltrami_fd(metric, u, x, h / 2.0);
  out.value = (4.0 * out.fine - out.coarse) / 3.0;
  out.warning = !std::isfinite(out.value) || std::abs(out.coarse - out.fine) > tolerance * (1.0 + std::abs(out.fine));
  return out;
}

// Observed order log2(|e(h) - e(h/2)| / |e(h/2) - e(h/4)|) of a scheme e(h).
inline double convergence_order(double at_h, double at_half, double at_quarter) {
  return std::log2(std::abs(at_h - at_half) / std::abs(at_half - at_quarter));
}

}  // namespace gbk
