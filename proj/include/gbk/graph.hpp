#pragma once

// Parametrized submanifolds of R^{n+m} (graphs x -> (x, f(x)) in particular):
// induced metric, frames, second fundamental form, Gauss map, coordinate
// Laplacians and numerical checks of the identities for w = <gamma, A>.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gbk/differential.hpp"
#include "gbk/error.hpp"
#include "gbk/grassmann.hpp"
#include "gbk/linalg.hpp"
#include "gbk/multivector.hpp"

namespace gbk {

// X : U subset R^n -> R^{n+m} with tangents (columns X_k) and second
// derivatives (second[k].col(l) = X_kl).
struct Parametrization {
  int n = 0;
  int m = 0;
  std::function<Vector(const Vector&)> position;
  std::function<Matrix(const Vector&)> tangents;
  std::function<std::vector<Matrix>(const Vector&)> second;
};

enum class DerivativeMode { analytic, finite_difference };

class GraphMap {
 public:
  using Eval = std::function<Vector(const Vector&)>;
  using Jacobian = std::function<Matrix(const Vector&)>;              // n x m, entry (i, alpha) = d f^alpha / d x^i
  using Hessians = std::function<std::vector<Matrix>(const Vector&)>;  // m matrices n x n

  static GraphMap analytic(int n, int m, Eval eval, Jacobian jacobian, Hessians hessians, std::string name = {}) {
    GraphMap f(n, m, std::move(eval), std::move(name));
    f.jacobian_ = std::move(jacobian);
    f.hessians_ = std::move(hessians);
    f.mode_ = DerivativeMode::analytic;
    return f;
  }

  static GraphMap finite_difference(int n, int m, Eval eval, double h = 1e-4, std::string name = {}) {
    GraphMap f(n, m, std::move(eval), std::move(name));
    f.mode_ = DerivativeMode::finite_difference;
    f.step_ = h;
    return f;
  }

  // Same function with derivatives from central differences of the values.
  GraphMap with_finite_differences(double h = 1e-4) const { return finite_difference(n_, m_, eval_, h, name_); }

  int n() const { return n_; }
  int m() const { return m_; }
  const std::string& name() const { return name_; }
  DerivativeMode mode() const { return mode_; }
  double step() const { return step_; }

  Vector value(const Vector& x) const {
    check_point(x);
    Vector out = eval_(x);
    if (out.size() != m_) throw InvalidInput("graph function returned the wrong number of components");
    if (!out.allFinite()) throw NumericError("graph function is not finite at the requested point");
    return out;
  }

  Matrix jacobian(const Vector& x) const {
    check_point(x);
    Matrix out = mode_ == DerivativeMode::analytic ? jacobian_(x) : fd_jacobian(x);
    if (!out.allFinite()) throw NumericError("non-finite first derivatives");
    return out;
  }

  std::vector<Matrix> hessians(const Vector& x) const {
    check_point(x);
    std::vector<Matrix> out = mode_ == DerivativeMode::analytic ? hessians_(x) : fd_hessians(x);
    for (const Matrix& h : out)
      if (!h.allFinite()) throw NumericError("non-finite second derivatives");
    return out;
  }

  Parametrization parametrization() const {
    Parametrization p;
    p.n = n_;
    p.m = m_;
    p.position = [f = *this](const Vector& x) {
      Vector out(f.n_ + f.m_);
      out << x, f.value(x);
      return out;
    };
    p.tangents = [f = *this](const Vector& x) {
      Matrix t(f.n_ + f.m_, f.n_);
      t.topRows(f.n_).setIdentity();
      t.bottomRows(f.m_) = f.jacobian(x).transpose();
      return t;
    };
    p.second = [f = *this](const Vector& x) {
      const std::vector<Matrix> hs = f.hessians(x);
      std::vector<Matrix> out(f.n_, Matrix::Zero(f.n_ + f.m_, f.n_));
      for (int k = 0; k < f.n_; ++k)
        for (int l = 0; l < f.n_; ++l)
          for (int a = 0; a < f.m_; ++a) out[k](f.n_ + a, l) = hs[a](k, l);
      return out;
    };
    return p;
  }

 private:
  GraphMap(int n, int m, Eval eval, std::string name) : n_(n), m_(m), eval_(std::move(eval)), name_(std::move(name)) {
    if (n < 1 || m < 1) throw InvalidInput("graph needs n >= 1 and m >= 1");
    if (n + m > kMaxDimension) throw CapacityError("graph ambient dimension exceeds capacity");
  }

  void check_point(const Vector& x) const {
    if (x.size() != n_) throw InvalidInput("point has dimension " + std::to_string(x.size()) + ", expected " +
                                           std::to_string(n_));
  }

  Matrix central_jacobian(const Vector& x, double h) const {
    Matrix out(n_, m_);
    Vector y = x;
    for (int i = 0; i < n_; ++i) {
      y(i) = x(i) + h;
      const Vector plus = value(y);
      y(i) = x(i) - h;
      const Vector minus = value(y);
      y(i) = x(i);
      out.row(i) = ((plus - minus) / (2.0 * h)).transpose();
    }
    return out;
  }

  Matrix fd_jacobian(const Vector& x) const {
    return (4.0 * central_jacobian(x, step_ / 2.0) - central_jacobian(x, step_)) / 3.0;
  }

  std::vector<Matrix> central_hessians(const Vector& x, double h) const {
    std::vector<Matrix> out(m_, Matrix(n_, n_));
    const Vector f0 = value(x);
    Vector y = x;
    for (int i = 0; i < n_; ++i) {
      y(i) = x(i) + h;
      const Vector plus = value(y);
      y(i) = x(i) - h;
      const Vector minus = value(y);
      y(i) = x(i);
      const Vector d2 = (plus - 2.0 * f0 + minus) / (h * h);
      for (int a = 0; a < m_; ++a) out[a](i, i) = d2(a);
      for (int j = i + 1; j < n_; ++j) {
        Vector acc = Vector::Zero(m_);
        for (int si : {1, -1})
          for (int sj : {1, -1}) {
            y(i) = x(i) + si * h;
            y(j) = x(j) + sj * h;
            acc += static_cast<double>(si * sj) * value(y);
          }
        y(i) = x(i);
        y(j) = x(j);
        acc /= 4.0 * h * h;
        for (int a = 0; a < m_; ++a) out[a](i, j) = out[a](j, i) = acc(a);
      }
    }
    return out;
  }

  // Second differences at 10 h and 5 h, Richardson-combined.
  std::vector<Matrix> fd_hessians(const Vector& x) const {
    const double h = 10.0 * step_;
    std::vector<Matrix> coarse = central_hessians(x, h);
    const std::vector<Matrix> fine = central_hessians(x, h / 2.0);
    for (int a = 0; a < m_; ++a) coarse[a] = (4.0 * fine[a] - coarse[a]) / 3.0;
    return coarse;
  }

  int n_;
  int m_;
  Eval eval_;
  Jacobian jacobian_;
  Hessians hessians_;
  std::string name_;
  DerivativeMode mode_ = DerivativeMode::analytic;
  double step_ = 1e-4;
};

struct PointGeometry {
  Vector x;
  Matrix g;
  Matrix g_inv;
  double sqrt_det_g = 0.0;       // Delta_f for graphs
  Matrix coordinate_tangents;    // X_k as columns
  Matrix frame_change;           // C with tangent_frame = coordinate_tangents * C
  Matrix tangent_frame;
  Matrix normal_frame;
  std::vector<Matrix> h;         // h[alpha](i, j) = <B(e_i, e_j), nu_alpha>
  Vector H;                      // trace of h[alpha]
  double B_norm2 = 0.0;

  int n() const { return static_cast<int>(tangent_frame.cols()); }
  int m() const { return static_cast<int>(normal_frame.cols()); }
  double mean_curvature_norm() const { return H.norm(); }
};

inline PointGeometry geometry_at(const Parametrization& param, const Vector& x) {
  if (x.size() != param.n) throw InvalidInput("point dimension does not match the parametrization");
  PointGeometry out;
  out.x = x;
  out.coordinate_tangents = param.tangents(x);
  if (!out.coordinate_tangents.allFinite()) throw NumericError("non-finite tangent vectors");
  const Matrix& t = out.coordinate_tangents;
  out.g = t.transpose() * t;
  out.g_inv = out.g.inverse();
  out.sqrt_det_g = std::sqrt(out.g.determinant());
  const Matrix r = linalg::positive_r_factor(t);
  out.frame_change = r.triangularView<Eigen::Upper>().solve(Matrix::Identity(param.n, param.n));
  out.tangent_frame = t * out.frame_change;
  out.normal_frame = linalg::oriented_complement(out.tangent_frame);
  const std::vector<Matrix> second = param.second(x);
  out.h.assign(param.m, Matrix(param.n, param.n));
  out.H = Vector::Zero(param.m);
  for (int a = 0; a < param.m; ++a) {
    Matrix k(param.n, param.n);
    for (int i = 0; i < param.n; ++i) k.row(i) = out.normal_frame.col(a).transpose() * second[i];
    if (!k.allFinite()) throw NumericError("non-finite second derivatives");
    k = 0.5 * (k + k.transpose());
    out.h[a] = out.frame_change.transpose() * k * out.frame_change;
    out.H(a) = out.h[a].trace();
    out.B_norm2 += out.h[a].squaredNorm();
  }
  return out;
}

inline PointGeometry geometry_at(const GraphMap& f, const Vector& x) { return geometry_at(f.parametrization(), x); }

inline GrassmannPoint gauss_map(const Parametrization& param, const Vector& x) {
  return GrassmannPoint::from_basis(param.tangents(x));
}

inline GrassmannPoint gauss_map(const GraphMap& f, const Vector& x) { return gauss_map(f.parametrization(), x); }

// w(gamma(x), A) = det(A^T X_k) / sqrt(det g) without orthonormalizing.
inline ScalarField w_field(const Parametrization& param, const Matrix& reference) {
  return [param, reference](const Vector& x) {
    const Matrix t = param.tangents(x);
    return (reference.transpose() * t).determinant() / std::sqrt((t.transpose() * t).determinant());
  };
}

inline Matrix coordinate_plane_frame(int n, int m) {
  Matrix a = Matrix::Zero(n + m, n);
  a.topRows(n).setIdentity();
  return a;
}

inline MetricField metric_field(const Parametrization& param) {
  return [param](const Vector& x) {
    const Matrix t = param.tangents(x);
    return Matrix(t.transpose() * t);
  };
}

inline LaplacianEstimate laplace_beltrami(const Parametrization& param, const ScalarField& u, const Vector& x,
                                          double h = 1e-3) {
  return laplace_beltrami_richardson(metric_field(param), u, x, h);
}

inline LaplacianEstimate laplace_beltrami(const GraphMap& f, const ScalarField& u, const Vector& x, double h = 1e-3) {
  return laplace_beltrami(f.parametrization(), u, x, h);
}

struct OrderEstimate {
  double order = 0.0;
  bool at_noise_floor = false;  // step differences too small to measure an order
};

// Observed order of the raw nested-difference Laplacian at steps h, h/2, h/4.
inline OrderEstimate laplacian_order(const Parametrization& param, const ScalarField& u, const Vector& x,
                                     double h = 4e-3) {
  const MetricField metric = metric_field(param);
  const double l1 = laplace_beltrami_fd(metric, u, x, h);
  const double l2 = laplace_beltrami_fd(metric, u, x, h / 2.0);
  const double l4 = laplace_beltrami_fd(metric, u, x, h / 4.0);
  OrderEstimate out;
  out.at_noise_floor = std::abs(l1 - l2) < 1e-9 * (1.0 + std::abs(l4));
  out.order = out.at_noise_floor ? std::numeric_limits<double>::quiet_NaN() : convergence_order(l1, l2, l4);
  return out;
}

// Numerical rank of d gamma from the matrix with rows (alpha, j) and columns i
// holding h_{alpha,ij}.
inline int gauss_map_rank(const PointGeometry& geo, double relative = 1e-6) {
  const int n = geo.n();
  const int m = geo.m();
  Matrix stacked(n * m, n);
  for (int a = 0; a < m; ++a)
    for (int j = 0; j < n; ++j) stacked.row(a * n + j) = geo.h[a].row(j);
  const Vector s = linalg::singular_values(stacked);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > relative * s(0)) ++rank;
  return rank;
}

namespace detail {

inline double pairing(const PointGeometry& geo, const Multivector& a,
                      std::initializer_list<std::pair<int, int>> replacements) {
  return inner(wedge(substituted_frame(geo.tangent_frame, geo.normal_frame, replacements)), a);
}

inline void require_minimal(const PointGeometry& geo, double tol) {
  const double scale = 1.0 + std::sqrt(geo.B_norm2);
  if (geo.mean_curvature_norm() > tol * scale)
    throw PreconditionError("mean curvature |H| = " + std::to_string(geo.mean_curvature_norm()) +
                            " is not zero; the identity needs H = 0");
}

}  // namespace detail

struct DwCheck {
  Vector lhs;  // e_i(w) by finite differences
  Vector rhs;  // h_{alpha,ij} <e_{j alpha}, A>
  double residual = 0.0;
};

inline DwCheck verify_dw(const Parametrization& param, const Vector& x, const GrassmannPoint& reference,
                         double h = 1e-4) {
  const PointGeometry geo = geometry_at(param, x);
  const Multivector& plucker = reference.plucker();
  const int n = param.n;
  const int m = param.m;
  const Vector dw = gradient_richardson(w_field(param, reference.frame()), x, h);
  DwCheck out;
  out.lhs = geo.frame_change.transpose() * dw;
  out.rhs = Vector::Zero(n);
  double pair_max = 0.0;
  for (int al = 0; al < m; ++al)
    for (int j = 0; j < n; ++j) {
      const double p = detail::pairing(geo, plucker, {{j, al}});
      pair_max = std::max(pair_max, std::abs(p));
      for (int i = 0; i < n; ++i) out.rhs(i) += geo.h[al](i, j) * p;
    }
  const double diff = (out.lhs - out.rhs).lpNorm<Eigen::Infinity>();
  const double scale = std::max(out.rhs.lpNorm<Eigen::Infinity>(), std::sqrt(geo.B_norm2) * pair_max);
  out.residual = scale < 1e-12 ? diff : diff / scale;
  return out;
}

inline DwCheck verify_dw(const GraphMap& f, const Vector& x, double h = 1e-4) {
  return verify_dw(f.parametrization(), x, GrassmannPoint::coordinate_plane(f.n(), f.m()), h);
}

struct DeltaWCheck {
  double lhs = 0.0;  // Laplace-Beltrami of w by finite differences
  double rhs = 0.0;  // -|B|^2 w + sum h h <e_{j alpha, k beta}, A>
  double residual = 0.0;
  double w = 0.0;
  bool fd_warning = false;
};

inline double delta_w_rhs(const PointGeometry& geo, const Multivector& a, double w) {
  const int n = geo.n();
  const int m = geo.m();
  double sum = -geo.B_norm2 * w;
  for (int al = 0; al < m; ++al)
    for (int be = 0; be < m; ++be) {
      if (al == be) continue;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          if (j == k) continue;
          double hh = 0.0;
          for (int i = 0; i < n; ++i) hh += geo.h[al](i, j) * geo.h[be](i, k);
          if (hh == 0.0) continue;
          sum += hh * detail::pairing(geo, a, {{j, al}, {k, be}});
        }
    }
  return sum;
}

inline DeltaWCheck verify_delta_w(const Parametrization& param, const Vector& x, const GrassmannPoint& reference,
                                  double h = 1e-3) {
  const PointGeometry geo = geometry_at(param, x);
  detail::require_minimal(geo, 1e-6);
  const ScalarField w = w_field(param, reference.frame());
  const LaplacianEstimate lap = laplace_beltrami(param, w, x, h);
  DeltaWCheck out;
  out.w = w(x);
  out.lhs = lap.value;
  out.rhs = delta_w_rhs(geo, reference.plucker(), out.w);
  out.fd_warning = lap.warning;
  const double diff = std::abs(out.lhs - out.rhs);
  const double scale = std::max(std::abs(out.rhs), geo.B_norm2 * std::abs(out.w));
  out.residual = scale < 1e-12 ? diff : diff / scale;
  return out;
}

inline DeltaWCheck verify_delta_w(const GraphMap& f, const Vector& x, double h = 1e-3) {
  return verify_delta_w(f.parametrization(), x, GrassmannPoint::coordinate_plane(f.n(), f.m()), h);
}

struct RankInequality {
  double lhs = 0.0;  // Laplacian of log w
  double rhs = 0.0;  // -|B|^2
  int rank = 0;
  bool ok = false;
};

inline RankInequality verify_rank_inequality(const Parametrization& param, const Vector& x,
                                             const GrassmannPoint& reference, double h = 1e-3) {
  const PointGeometry geo = geometry_at(param, x);
  detail::require_minimal(geo, 1e-6);
  RankInequality out;
  out.rank = gauss_map_rank(geo);
  if (out.rank > 2) throw PreconditionError("Gauss map has rank " + std::to_string(out.rank) + " > 2");
  const ScalarField w = w_field(param, reference.frame());
  if (!(w(x) > 0.0)) throw PreconditionError("w must be positive at the point");
  const ScalarField log_w = [w](const Vector& y) { return std::log(w(y)); };
  out.lhs = laplace_beltrami(param, log_w, x, h).value;
  out.rhs = -geo.B_norm2;
  out.ok = out.lhs <= out.rhs + 1e-3 * (1.0 + std::abs(out.rhs));
  return out;
}

inline RankInequality verify_rank_inequality(const GraphMap& f, const Vector& x, double h = 1e-3) {
  return verify_rank_inequality(f.parametrization(), x, GrassmannPoint::coordinate_plane(f.n(), f.m()), h);
}

struct Subhar3Check {
  double lhs = 0.0;      // Delta log w - |grad log w|^2
  double B_norm2 = 0.0;
  double c1_estimate = 0.0;  // -lhs / |B|^2
  double w = 0.0;
  bool ok = false;
};

inline Subhar3Check verify_subhar3(const Parametrization& param, const Vector& x, double delta,
                                   const GrassmannPoint& reference, double h = 1e-3) {
  const PointGeometry geo = geometry_at(param, x);
  const ScalarField w = w_field(param, reference.frame());
  Subhar3Check out;
  out.w = w(x);
  if (out.w < 1.0 / 3.0 + delta)
    throw PreconditionError("w = " + std::to_string(out.w) + " is below 1/3 + delta");
  detail::require_minimal(geo, 1e-6);
  const ScalarField log_w = [w](const Vector& y) { return std::log(w(y)); };
  const Vector grad = gradient_richardson(log_w, x, 1e-4);
  out.lhs = laplace_beltrami(param, log_w, x, h).value - grad.dot(geo.g_inv * grad);
  out.B_norm2 = geo.B_norm2;
  if (geo.B_norm2 > 1e-12) {
    out.c1_estimate = -out.lhs / geo.B_norm2;
    out.ok = out.c1_estimate > 0.0;
  } else {
    out.ok = true;
  }
  return out;
}

inline Subhar3Check verify_subhar3(const GraphMap& f, const Vector& x, double delta, double h = 1e-3) {
  return verify_subhar3(f.parametrization(), x, delta, GrassmannPoint::coordinate_plane(f.n(), f.m()), h);
}

struct DvpConstants {
  double K1 = 0.0;
  double K2 = 0.0;
};

inline DvpConstants dvp_constants(double lambda_min, double mu_max, int n) {
  if (!(lambda_min > 0.0 && lambda_min <= mu_max)) throw InvalidInput("DVP constants need 0 < lambda <= mu");
  if (n < 1) throw InvalidInput("dimension must be positive");
  const double ratio = mu_max / lambda_min;
  return {std::pow(4.0 * ratio, n), 4.0 / (std::numbers::pi * std::numbers::pi) * std::pow(ratio, n + 2)};
}

struct BernsteinSample {
  Vector x;
  double delta_f = 0.0;
  double slope = 0.0;        // d f^alpha / d x^i
  double slope_factor = 0.0; // (1 + slope^2)^{1/2}
  double w_P = 0.0;          // 1 / Delta_f
  double w_Q = 0.0;          // slope / Delta_f
  double margin_be2 = 0.0;   // beta0 - Delta_f
  double margin_slope = 0.0; // beta1 * slope_factor - Delta_f
  bool ok = false;
};

struct BernsteinReport {
  double beta0 = 0.0;
  double beta1 = 0.0;
  int alpha = 0;  // 0-based
  int i = 0;      // 0-based
  std::vector<BernsteinSample> samples;
  std::vector<std::size_t> violations;
  double max_delta_f = 0.0;
  double min_margin_be2 = 0.0;
  double min_margin_slope = 0.0;
  double min_admissible_beta1 = 0.0;  // max over samples of Delta_f / slope_factor
  bool beta1_below_three = false;
  bool hypotheses_hold = false;
  bool pass = false;
};

// Core check over precomputed Jacobians (n x m each).
inline BernsteinReport check_bernstein_hypotheses(std::span<const Vector> points, std::span<const Matrix> jacobians,
                                                  double beta0, double beta1, int alpha, int i) {
  if (points.size() != jacobians.size()) throw InvalidInput("points and Jacobians differ in count");
  if (points.empty()) throw InvalidInput("no samples to check");
  BernsteinReport out;
  out.beta0 = beta0;
  out.beta1 = beta1;
  out.alpha = alpha;
  out.i = i;
  out.beta1_below_three = beta1 < 3.0;
  out.min_margin_be2 = std::numeric_limits<double>::infinity();
  out.min_margin_slope = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < points.size(); ++s) {
    const Matrix& df = jacobians[s];
    if (alpha < 0 || alpha >= df.cols() || i < 0 || i >= df.rows())
      throw InvalidInput("slope indices out of range");
    const Eigen::Index n = df.rows();
    BernsteinSample smp;
    smp.x = points[s];
    smp.delta_f = std::sqrt((Matrix::Identity(n, n) + df * df.transpose()).determinant());
    smp.slope = df(i, alpha);
    smp.slope_factor = std::sqrt(1.0 + smp.slope * smp.slope);
    smp.w_P = 1.0 / smp.delta_f;
    smp.w_Q = smp.slope / smp.delta_f;
    smp.margin_be2 = beta0 - smp.delta_f;
    smp.margin_slope = beta1 * smp.slope_factor - smp.delta_f;
    smp.ok = smp.margin_be2 >= 0.0 && smp.margin_slope >= 0.0;
    if (!smp.ok) out.violations.push_back(s);
    out.max_delta_f = std::max(out.max_delta_f, smp.delta_f);
    out.min_margin_be2 = std::min(out.min_margin_be2, smp.margin_be2);
    out.min_margin_slope = std::min(out.min_margin_slope, smp.margin_slope);
    out.min_admissible_beta1 = std::max(out.min_admissible_beta1, smp.delta_f / smp.slope_factor);
    out.samples.push_back(std::move(smp));
  }
  out.hypotheses_hold = out.violations.empty();
  out.pass = out.hypotheses_hold && out.beta1_below_three;
  return out;
}

inline BernsteinReport check_bernstein_hypotheses(const GraphMap& f, std::span<const Vector> points, double beta0,
                                                  double beta1, int alpha, int i) {
  std::vector<Matrix> jacobians;
  jacobians.reserve(points.size());
  for (const Vector& x : points) jacobians.push_back(f.jacobian(x));
  return check_bernstein_hypotheses(points, jacobians, beta0, beta1, alpha, i);
}

}  // namespace gbk
