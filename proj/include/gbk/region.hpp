#pragma once

// The region W_c cut out by an S-orthogonal pair, the level function F,
// and the family H(., t) built from the auxiliary function phi.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gbk/differential.hpp"
#include "gbk/error.hpp"
#include "gbk/grassmann.hpp"
#include "gbk/sampling.hpp"

namespace gbk {

struct RegionSpec {
  SOrthogonalPair pair;
  double c = 0.0;
  double delta = 0.0;
  double theta_lo = -std::numbers::pi / 2.0;
  double theta_hi = std::numbers::pi / 2.0;

  static RegionSpec make(const GrassmannPoint& p, const GrassmannPoint& q, double c, double delta, double theta_lo,
                         double theta_hi) {
    if (!(c >= 0.0 && c < 1.0)) throw InvalidInput("c must lie in [0, 1)");
    if (!(delta > 0.0)) throw InvalidInput("delta must be positive");
    if (c + 2.0 * delta > 1.0) throw InvalidInput("c + 2 delta must not exceed 1");
    if (!(theta_lo <= theta_hi && theta_lo > -std::numbers::pi && theta_hi < std::numbers::pi))
      throw InvalidInput("Theta must be a closed interval inside (-pi, pi)");
    return RegionSpec{SOrthogonalPair(p, q), c, delta, theta_lo, theta_hi};
  }

  bool theta_in_set(double theta, double tol = 1e-12) const {
    return theta >= theta_lo - tol && theta <= theta_hi + tol;
  }
};

struct RegionReport {
  bool inside = false;
  bool deleted_radius = false;
  double r = 0.0;
  double theta = 0.0;
};

inline RegionReport in_region(const GrassmannPoint& s, const RegionSpec& spec) {
  RegionReport out;
  const SMapValue x = s_map(s, spec.pair);
  out.r = std::hypot(x.x1, x.x2);
  try {
    out.theta = polar(x).theta;
  } catch (const DomainError&) {
    out.deleted_radius = true;
    out.theta = std::numbers::pi;
    return out;
  }
  out.inside = out.r > spec.c;
  return out;
}

inline double F_value(const Polar& pol, const RegionSpec& spec) {
  const double level = spec.c + spec.delta;
  if (pol.r < spec.c + 2.0 * spec.delta - 1e-14)
    throw DomainError("F needs r >= c + 2 delta (r = " + std::to_string(pol.r) + ")");
  if (!spec.theta_in_set(pol.theta)) throw DomainError("theta = " + std::to_string(pol.theta) + " is outside Theta");
  return pol.theta - std::acos(std::min(1.0, level / pol.r));
}

inline double F_value(const GrassmannPoint& s, const RegionSpec& spec) { return F_value(polar(s, spec.pair), spec); }

struct LevelCheck {
  double t = 0.0;         // F(S)
  double w = 0.0;         // w(S, P_t) from the geodesic plane
  double residual = 0.0;  // |w - (c + delta)|
};

inline LevelCheck check_level(const GrassmannPoint& s, const RegionSpec& spec) {
  LevelCheck out;
  out.t = F_value(s, spec);
  out.w = w_function(s, spec.pair.at(out.t));
  out.residual = std::abs(out.w - (spec.c + spec.delta));
  return out;
}

// Points of the region with r >= r_min and theta in Theta, drawn as random
// chart perturbations of planes on the geodesic.
inline std::vector<GrassmannPoint> sample_region(Rng& rng, const RegionSpec& spec, int count, double r_min) {
  std::uniform_real_distribution<double> angle(spec.theta_lo, spec.theta_hi);
  std::uniform_real_distribution<double> scale(0.0, 0.6);
  const int n = spec.pair.n();
  const int m = spec.pair.m();
  std::vector<GrassmannPoint> out;
  long attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > 1000L * count + 1000) throw NumericError("region sampler rejected too many candidates");
    const auto [tangent, normal] = spec.pair.adapted_frames(angle(rng));
    const Matrix z = scale(rng) * random_gaussian(rng, n, m);
    const GrassmannPoint s = GrassmannPoint::from_basis(Matrix(tangent + normal * z.transpose()));
    const SMapValue x = s_map(s, spec.pair);
    const double r = std::hypot(x.x1, x.x2);
    if (r < r_min || (x.x2 == 0.0 && x.x1 <= 0.0)) continue;
    if (!spec.theta_in_set(std::atan2(x.x2, x.x1), 0.0)) continue;
    out.push_back(s);
  }
  return out;
}

struct TransitionConstants {
  double C2 = 0.0;
  double C3 = 0.0;
};

inline TransitionConstants transition_constants(double level, int p) {
  if (!(level > 0.0 && level <= 1.0)) throw InvalidInput("c + delta must lie in (0, 1]");
  return {p * (std::pow(level, -2.0 / p) - 1.0), std::sqrt(std::max(0.0, 1.0 - level * level)) / level};
}

inline TransitionConstants transition_constants(const RegionSpec& spec) {
  return transition_constants(spec.c + spec.delta, std::min(spec.pair.n(), spec.pair.m()));
}

// Cosine between the chart gradients of F and of -log w(., P_t), t = F(S),
// in the matrix chart centered at S.
inline double gradient_collinearity(const GrassmannPoint& s, const RegionSpec& spec, double h = 1e-5) {
  const double t = F_value(s, spec);
  const GrassmannPoint pt = spec.pair.at(t);
  const Matrix tangent = s.frame();
  const Matrix normal = s.normal_frame();
  const int n = s.n();
  const int m = s.m();
  auto at = [&](const Vector& z) {
    const Matrix zm = Eigen::Map<const Matrix>(z.data(), n, m);
    return GrassmannPoint::from_basis(Matrix(tangent + normal * zm.transpose()));
  };
  const ScalarField f = [&](const Vector& z) { return F_value(at(z), spec); };
  const ScalarField g = [&](const Vector& z) { return -std::log(w_function(at(z), pt)); };
  const Vector zero = Vector::Zero(n * m);
  const Vector df = gradient_richardson(f, zero, h);
  const Vector dg = gradient_richardson(g, zero, h);
  return df.dot(dg) / (df.norm() * dg.norm());
}

struct ThetaGradient {
  double g1111 = 0.0;     // (I + Z Z^T)_11 (I + Z^T Z)_11 in the chart at P_theta
  double fd_norm2 = 0.0;  // |grad theta|^2 by finite differences in the same chart
  double upper = 0.0;     // r^{-4}
  double z11 = 0.0;
};

inline ThetaGradient theta_gradient(const GrassmannPoint& s, const RegionSpec& spec, double h = 1e-6) {
  const Polar pol = polar(s, spec.pair);
  const auto [tangent, normal] = spec.pair.adapted_frames(pol.theta);
  const MatrixChart chart = matrix_chart(s, tangent, normal);
  const Eigen::Index n = chart.Z.rows();
  const Eigen::Index m = chart.Z.cols();
  const ScalarField theta = [&](const Vector& z) {
    MatrixChart moved = chart;
    moved.Z = Eigen::Map<const Matrix>(z.data(), n, m);
    return polar(moved.point(), spec.pair).theta;
  };
  const Vector z0 = Eigen::Map<const Vector>(chart.Z.data(), n * m);
  const Vector grad = gradient_richardson(theta, z0, h);
  // Column-major flattening: index i + n * alpha.
  Matrix inv_metric(n * m, n * m);
  const Matrix left = Matrix::Identity(n, n) + chart.Z * chart.Z.transpose();
  const Matrix right = Matrix::Identity(m, m) + chart.Z.transpose() * chart.Z;
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) inv_metric.block(a * n, b * n, n, n) = right(a, b) * left;
  ThetaGradient out;
  out.g1111 = left(0, 0) * right(0, 0);
  out.fd_norm2 = grad.dot(inv_metric * grad);
  out.upper = std::pow(pol.r, -4.0);
  out.z11 = chart.Z(0, 0);
  return out;
}

enum class PhiVariant {
  general,   // parallel mean curvature, c in (1/3, 1), threshold 1/12 + 3c/4
  rank_two,  // minimal with Gauss map rank <= 2, c in (0, 1), threshold 3c/4
};

// phi(u) = int_0^u xi_2^beta with xi_2 the normalized primitive of a bump
// supported on (a0, b0). phi = 0 on [0, a0] and phi(u) = u - gap on [b0, inf).
class PhiFunction {
 public:
  static constexpr int kCells = 4096;

  static PhiFunction build(double c, PhiVariant variant = PhiVariant::general) {
    PhiFunction phi;
    phi.c_ = c;
    phi.variant_ = variant;
    if (variant == PhiVariant::general) {
      if (!(c > 1.0 / 3.0 && c < 1.0)) throw InvalidInput("phi needs c in (1/3, 1)");
      phi.threshold_ = 1.0 / 12.0 + 0.75 * c;
      phi.b0_ = 0.75 - 0.25 * c;
      phi.target_ = -1.0 / 12.0 + 0.25 * c;
    } else {
      if (!(c > 0.0 && c < 1.0)) throw InvalidInput("phi needs c in (0, 1)");
      phi.threshold_ = 0.75 * c;
      phi.b0_ = 1.0 - 0.25 * c;
      phi.target_ = 0.25 * c;
    }
    phi.a0_ = 1.0 - phi.threshold_;
    phi.tabulate();
    phi.solve_beta();
    phi.accumulate();
    return phi;
  }

  double c() const { return c_; }
  PhiVariant variant() const { return variant_; }
  double beta() const { return beta_; }
  double a0() const { return a0_; }
  double b0() const { return b0_; }
  double threshold() const { return threshold_; }
  double target() const { return target_; }
  // lim_{u -> inf} (u - phi(u)).
  double gap() const { return b0_ - phi_end_; }

  double xi1(double u) const {
    const double s = (2.0 * u - a0_ - b0_) / (b0_ - a0_);
    if (std::abs(s) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - s * s));
  }

  double xi2(double u) const {
    if (u <= a0_) return 0.0;
    if (u >= b0_) return 1.0;
    const auto [k, left] = cell_of(u);
    double partial = 0.0;
    for (int q = 0; q < 5; ++q) partial += node_weight(q, left, u) * xi1(node(q, left, u));
    return std::clamp((xi_cum_[k] + partial) / xi_total_, 0.0, 1.0);
  }

  double operator()(double u) const {
    if (u <= a0_) return 0.0;
    if (u >= b0_) return phi_end_ + (u - b0_);
    const auto [k, left] = cell_of(u);
    double partial = 0.0;
    for (int q = 0; q < 5; ++q) partial += node_weight(q, left, u) * std::pow(xi2(node(q, left, u)), beta_);
    return phi_cum_[k] + partial;
  }

  double derivative(double u) const { return std::pow(xi2(u), beta_); }

  // Smallest u with phi(u) = v for v > 0.
  double inverse(double v) const {
    if (!(v > 0.0)) throw DomainError("phi inverse needs a positive value");
    if (v >= phi_end_) return b0_ + (v - phi_end_);
    double lo = a0_, hi = b0_;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      ((*this)(mid) < v ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  // int_{a0}^{b0} xi_2^beta from the stored quadrature.
  double transition_integral() const { return phi_end_; }

 private:
  static constexpr std::array<double, 5> kNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                                   0.5384693101056831, 0.9061798459386640};
  static constexpr std::array<double, 5> kWeights = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                                     0.4786286704993665, 0.2369268850561891};

  static double node(int q, double a, double b) { return 0.5 * (a + b) + 0.5 * (b - a) * kNodes[q]; }
  static double node_weight(int q, double a, double b) { return 0.5 * (b - a) * kWeights[q]; }

  double cell_width() const { return (b0_ - a0_) / kCells; }

  std::pair<int, double> cell_of(double u) const {
    int k = static_cast<int>((u - a0_) / cell_width());
    k = std::clamp(k, 0, kCells - 1);
    return {k, a0_ + k * cell_width()};
  }

  void tabulate() {
    const double hc = cell_width();
    xi_cum_.assign(kCells + 1, 0.0);
    for (int k = 0; k < kCells; ++k) {
      const double a = a0_ + k * hc;
      double cell = 0.0;
      for (int q = 0; q < 5; ++q) cell += node_weight(q, a, a + hc) * xi1(node(q, a, a + hc));
      xi_cum_[k + 1] = xi_cum_[k] + cell;
    }
    xi_total_ = xi_cum_[kCells];
    node_xi2_.resize(5 * kCells);
    for (int k = 0; k < kCells; ++k) {
      const double a = a0_ + k * hc;
      for (int q = 0; q < 5; ++q) node_xi2_[5 * k + q] = xi2(node(q, a, a + hc));
    }
  }

  double integral_for(double beta) const {
    const double hc = cell_width();
    double sum = 0.0;
    for (int k = 0; k < kCells; ++k)
      for (int q = 0; q < 5; ++q) sum += node_weight(q, 0.0, hc) * std::pow(node_xi2_[5 * k + q], beta);
    return sum;
  }

  void solve_beta() {
    double lo = -30.0, hi = 30.0;  // log beta
    if (!(integral_for(std::exp(lo)) > target_ && integral_for(std::exp(hi)) < target_))
      throw NumericError("beta is not bracketed for c = " + std::to_string(c_));
    int it = 0;
    for (; it < 200 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      (integral_for(std::exp(mid)) > target_ ? lo : hi) = mid;
    }
    if (hi - lo > 1e-10) throw NumericError("beta bisection did not converge");
    beta_ = std::exp(0.5 * (lo + hi));
  }

  void accumulate() {
    const double hc = cell_width();
    phi_cum_.assign(kCells + 1, 0.0);
    for (int k = 0; k < kCells; ++k) {
      double cell = 0.0;
      for (int q = 0; q < 5; ++q) cell += node_weight(q, 0.0, hc) * std::pow(node_xi2_[5 * k + q], beta_);
      phi_cum_[k + 1] = phi_cum_[k] + cell;
    }
    phi_end_ = phi_cum_[kCells];
  }

  double c_ = 0.0;
  PhiVariant variant_ = PhiVariant::general;
  double a0_ = 0.0, b0_ = 0.0, threshold_ = 0.0, target_ = 0.0;
  double beta_ = 1.0;
  double xi_total_ = 0.0;
  double phi_end_ = 0.0;
  std::vector<double> xi_cum_;
  std::vector<double> node_xi2_;
  std::vector<double> phi_cum_;
};

inline PhiFunction build_phi(double c, PhiVariant variant = PhiVariant::general) {
  return PhiFunction::build(c, variant);
}

inline double psi_value(const Polar& pol, double t, double u, const PhiFunction& phi) {
  const double p = phi(u);
  const double shift = pol.theta >= t ? -p : p;
  return pol.r * std::cos(pol.theta - t + shift) + u - p - 1.0;
}

struct PsiBracket {
  double m_S = 0.0;
  double M_S = 0.0;
};

inline PsiBracket psi_bracket(const Polar& pol, double t, const PhiFunction& phi) {
  const double gap = std::abs(pol.theta - t);
  PsiBracket out;
  out.m_S = gap <= std::numbers::pi ? 0.0 : phi.inverse(gap - std::numbers::pi);
  out.M_S = gap > 0.0 ? phi.inverse(gap) : phi.a0();
  return out;
}

inline double H_tilde_bisect(const Polar& pol, double t, const PhiFunction& phi) {
  const PsiBracket br = psi_bracket(pol, t, phi);
  double lo = br.m_S, hi = br.M_S;
  const double f_lo = psi_value(pol, t, lo, phi);
  const double f_hi = psi_value(pol, t, hi, phi);
  if (f_lo > 0.0 || f_hi <= 0.0)
    throw NumericError("Psi does not change sign on [m_S, M_S] = [" + std::to_string(lo) + ", " + std::to_string(hi) +
                       "]: Psi = " + std::to_string(f_lo) + ", " + std::to_string(f_hi));
  if (f_lo == 0.0) return lo;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (psi_value(pol, t, mid, phi) <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double H_tilde(const Polar& pol, double t, const PhiFunction& phi) {
  const double w_t = pol.r * std::cos(pol.theta - t);
  if (w_t >= phi.threshold()) return 1.0 - w_t;
  return H_tilde_bisect(pol, t, phi);
}

inline double H_value(const Polar& pol, double t, const PhiFunction& phi, double mu0 = 1.0) {
  if (!(mu0 > 0.0)) throw InvalidInput("mu0 must be positive");
  return std::expm1(mu0 * H_tilde(pol, t, phi)) / std::expm1(mu0 * phi.a0());
}

namespace detail {

inline Polar region_polar(const GrassmannPoint& s, const RegionSpec& spec) {
  const Polar pol = polar(s, spec.pair);
  if (pol.r < spec.c - 1e-12) throw DomainError("r = " + std::to_string(pol.r) + " is below c");
  if (!spec.theta_in_set(pol.theta)) throw DomainError("theta = " + std::to_string(pol.theta) + " is outside Theta");
  return pol;
}

}  // namespace detail

inline double psi_value(const GrassmannPoint& s, double t, double u, const RegionSpec& spec, const PhiFunction& phi) {
  return psi_value(detail::region_polar(s, spec), t, u, phi);
}

inline double H_tilde(const GrassmannPoint& s, double t, const RegionSpec& spec, const PhiFunction& phi) {
  return H_tilde(detail::region_polar(s, spec), t, phi);
}

inline double H_value(const GrassmannPoint& s, double t, const RegionSpec& spec, const PhiFunction& phi,
                      double mu0 = 1.0) {
  return H_value(detail::region_polar(s, spec), t, phi, mu0);
}

struct TargetDiffeo {
  double phi1 = 0.0;
  Matrix phi2;  // n x m, |phi2| = 1/r - 1
  double z11 = 0.0;
  double r = 0.0;
};

inline Matrix target_map(const Matrix& z) {
  const double norm = z.norm();
  if (norm == 0.0) return Matrix::Zero(z.rows(), z.cols());
  const Eigen::Index n = z.rows();
  const double scale = std::sqrt((Matrix::Identity(n, n) + z * z.transpose()).determinant()) - 1.0;
  return scale * z / norm;
}

inline TargetDiffeo target_diffeo(const GrassmannPoint& s, const RegionSpec& spec) {
  const Polar pol = polar(s, spec.pair);
  const auto [tangent, normal] = spec.pair.adapted_frames(pol.theta);
  const MatrixChart chart = matrix_chart(s, tangent, normal);
  return {pol.theta, target_map(chart.Z), chart.Z(0, 0), pol.r};
}

}  // namespace gbk
