#pragma once

// Cones over submanifolds of spheres, the Hopf map, the coassociative
// profile s(4s^2 - 5r^2)^2 = C and the Lawson-Osserman cone.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "gbk/error.hpp"
#include "gbk/graph.hpp"
#include "gbk/grassmann.hpp"
#include "gbk/linalg.hpp"

namespace gbk {

// Immersion of a k-dimensional parameter domain into the unit sphere of R^ambient.
struct SphereImmersion {
  std::string name;
  int k = 0;
  int ambient = 0;
  std::function<Vector(const Vector&)> position;
  std::function<Matrix(const Vector&)> tangents;              // ambient x k
  std::function<std::vector<Matrix>(const Vector&)> second;  // k matrices ambient x k

  int codim() const { return ambient - 1 - k; }
};

// (param, t) -> t X(param); coordinates are the parameters followed by t.
inline Parametrization cone_parametrization(const SphereImmersion& imm) {
  Parametrization p;
  p.n = imm.k + 1;
  p.m = imm.codim();
  p.position = [imm](const Vector& y) { return Vector(y(imm.k) * imm.position(y.head(imm.k))); };
  p.tangents = [imm](const Vector& y) {
    const Vector u = y.head(imm.k);
    Matrix t(imm.ambient, imm.k + 1);
    t << y(imm.k) * imm.tangents(u), imm.position(u);
    return t;
  };
  p.second = [imm](const Vector& y) {
    const Vector u = y.head(imm.k);
    const double t = y(imm.k);
    const std::vector<Matrix> s = imm.second(u);
    const Matrix d = imm.tangents(u);
    std::vector<Matrix> out(imm.k + 1, Matrix::Zero(imm.ambient, imm.k + 1));
    for (int a = 0; a < imm.k; ++a) {
      out[a].leftCols(imm.k) = t * s[a];
      out[a].col(imm.k) = d.col(a);
      out[imm.k].col(a) = d.col(a);
    }
    return out;
  };
  return p;
}

struct SphereGeometry {
  Vector position;
  Matrix tangent_frame;  // e_i
  Matrix normal_frame;   // nu_alpha, det[e, x, nu] > 0
  std::vector<Vector> B; // B(e_i, e_j) at index i * k + j, as ambient vectors
  double B_norm2 = 0.0;
  Vector H;
};

inline SphereGeometry sphere_geometry(const SphereImmersion& imm, const Vector& u) {
  SphereGeometry out;
  out.position = imm.position(u);
  const Matrix t = imm.tangents(u);
  out.tangent_frame = linalg::orthonormalize(t);
  const Matrix c =
      linalg::positive_r_factor(t).triangularView<Eigen::Upper>().solve(Matrix::Identity(imm.k, imm.k));
  Matrix head(imm.ambient, imm.k + 1);
  head << out.tangent_frame, out.position;
  out.normal_frame = linalg::oriented_complement(head);
  if (out.normal_frame.cols() == 0) throw DegenerateInput("immersion has no normal directions");
  const Matrix projector = out.normal_frame * out.normal_frame.transpose();
  const std::vector<Matrix> s = imm.second(u);
  out.B.assign(imm.k * imm.k, Vector::Zero(imm.ambient));
  out.H = Vector::Zero(imm.codim());
  for (int i = 0; i < imm.k; ++i)
    for (int j = 0; j < imm.k; ++j) {
      Vector v = Vector::Zero(imm.ambient);
      for (int a = 0; a < imm.k; ++a)
        for (int b = 0; b < imm.k; ++b) v += c(a, i) * c(b, j) * s[a].col(b);
      out.B[i * imm.k + j] = projector * v;
      out.B_norm2 += out.B[i * imm.k + j].squaredNorm();
    }
  for (int i = 0; i < imm.k; ++i) out.H += out.normal_frame.transpose() * out.B[i * imm.k + i];
  return out;
}

struct ConePoint {
  Vector param;
  double t = 0.0;
  Matrix E;  // unit tangents along M, parallel along rays
  Vector tau;
  Matrix N;
  std::vector<Vector> Bc;  // B^c on the frame (E_1..E_k, tau), index i * (k+1) + j
  double Bc_norm2 = 0.0;
  SphereGeometry sphere;
};

inline ConePoint cone_geometry(const SphereImmersion& imm, const Vector& u, double t) {
  if (!(t > 0.0)) throw DomainError("cone points need t > 0");
  if (u.size() != imm.k) throw InvalidInput("parameter dimension does not match the immersion");
  Vector y(imm.k + 1);
  y << u, t;
  const PointGeometry geo = geometry_at(cone_parametrization(imm), y);
  ConePoint out;
  out.param = u;
  out.t = t;
  out.E = geo.tangent_frame.leftCols(imm.k);
  out.tau = geo.tangent_frame.col(imm.k);
  out.N = geo.normal_frame;
  const int n = imm.k + 1;
  out.Bc.assign(n * n, Vector::Zero(imm.ambient));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < geo.m(); ++a) out.Bc[i * n + j] += geo.h[a](i, j) * geo.normal_frame.col(a);
  out.Bc_norm2 = geo.B_norm2;
  out.sphere = sphere_geometry(imm, u);
  return out;
}

// Laplacians of a cone-like field f(t x) = f1(x): on the cone at (u, t) and on M at u.
struct ConeLaplacian {
  double cone = 0.0;
  double sphere_over_t2 = 0.0;
};

inline ConeLaplacian cone_laplacian(const SphereImmersion& imm, const ScalarField& f1, const Vector& u, double t,
                                    double h = 1e-3) {
  Vector y(imm.k + 1);
  y << u, t;
  const ScalarField f = [f1, k = imm.k](const Vector& z) { return f1(z.head(k)); };
  const Parametrization sphere{imm.k, imm.ambient - imm.k, imm.position, imm.tangents, imm.second};
  return {laplace_beltrami(cone_parametrization(imm), f, y, h).value,
          laplace_beltrami(sphere, f1, u, h).value / (t * t)};
}

// gamma^N(x): the oriented normal space of M in S^{n+m}, an element of G(m, n+1).
inline GrassmannPoint normal_gauss_map(const SphereImmersion& imm, const Vector& u) {
  return GrassmannPoint::from_basis(sphere_geometry(imm, u).normal_frame);
}

struct RigiditySample {
  Vector param;
  double w_P = 0.0;
  double w_Q = 0.0;
  double value = 0.0;  // w_P^2 + w_Q^2
  bool below_threshold = false;
  bool excluded_ray = false;  // w_Q = 0 and w_P < 0
};

struct RigidityReport {
  double threshold = 0.0;
  std::vector<RigiditySample> samples;
  std::vector<std::size_t> violations;
  bool pass = false;
};

inline RigidityReport check_rigidity_hypothesis(const SphereImmersion& imm, const GrassmannPoint& p,
                                                const GrassmannPoint& q, std::span<const Vector> params,
                                                bool rank_le_2) {
  if (p.n() != imm.codim() || p.m() != imm.k + 1)
    throw InvalidInput("P and Q must lie in G(m, n+1) for the immersion's normal spaces");
  if (!is_s_orthogonal(p, q)) throw PreconditionError("P and Q are not S-orthogonal");
  RigidityReport out;
  out.threshold = rank_le_2 ? 0.0 : 1.0 / 9.0;
  for (std::size_t s = 0; s < params.size(); ++s) {
    const GrassmannPoint normal = normal_gauss_map(imm, params[s]);
    RigiditySample smp;
    smp.param = params[s];
    smp.w_P = w_function(normal, p);
    smp.w_Q = w_function(normal, q);
    smp.value = smp.w_P * smp.w_P + smp.w_Q * smp.w_Q;
    smp.below_threshold = !(smp.value > out.threshold);
    smp.excluded_ray = std::abs(smp.w_Q) <= 1e-12 && smp.w_P < 0.0;
    if (smp.below_threshold || smp.excluded_ray) out.violations.push_back(s);
    out.samples.push_back(std::move(smp));
  }
  out.pass = out.violations.empty();
  return out;
}

struct Quaternion {
  double w = 0.0, x = 0.0, y = 0.0, z = 0.0;  // w + x i + y j + z k

  Quaternion conj() const { return {w, -x, -y, -z}; }

  friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z, a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x, a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
};

// q = z1 - conj(z2) j.
inline Quaternion quaternion_from_pair(std::complex<double> z1, std::complex<double> z2) {
  return {z1.real(), z1.imag(), -z2.real(), z2.imag()};
}

// (|z1|^2 - |z2|^2, 2 z1 conj(z2)) as a vector of R x C = R^3.
inline Eigen::Vector3d hopf_map(std::complex<double> z1, std::complex<double> z2) {
  const std::complex<double> c = 2.0 * z1 * std::conj(z2);
  return {std::norm(z1) - std::norm(z2), c.real(), c.imag()};
}

inline Eigen::Vector3d hopf_map(const Vector& x) {
  if (x.size() != 4) throw InvalidInput("the Hopf map acts on R^4");
  return hopf_map({x(0), x(1)}, {x(2), x(3)});
}

// Outer branch s >= (sqrt 5 / 2) r of s (4 s^2 - 5 r^2)^2 = C.
inline double coassociative_profile(double r, double c) {
  if (!(r > 0.0)) throw InvalidInput("profile needs r > 0");
  if (!(c >= 0.0)) throw InvalidInput("profile needs C >= 0");
  const double s0 = std::sqrt(5.0) / 2.0 * r;
  if (c == 0.0) return s0;
  auto g = [r](double s) {
    const double q = 4.0 * s * s - 5.0 * r * r;
    return s * q * q;
  };
  double lo = s0, hi = std::max(2.0 * s0, 1.0);
  for (int it = 0; g(hi) < c; ++it) {
    if (it > 200) throw NumericError("no root of the profile equation on the outer branch");
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 300 && hi - lo > 4e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < c ? lo : hi) = mid;
  }
  const double s = 0.5 * (lo + hi);
  if (std::abs(g(s) - c) > 1e-10 * (1.0 + c))
    throw NumericError("profile residual " + std::to_string(std::abs(g(s) - c)) + " too large at r = " +
                       std::to_string(r));
  return s;
}

// s~(r) = s(r) / r^2 with its first two derivatives.
struct RadialProfile {
  std::function<std::array<double, 3>(double)> eval;

  static RadialProfile lawson_osserman() {
    return {[](double r) {
      const double a = std::sqrt(5.0) / 2.0;
      return std::array<double, 3>{a / r, -a / (r * r), 2.0 * a / (r * r * r)};
    }};
  }

  // Derivatives of s from the implicit relation s' = 4 r s / (4 s^2 - r^2).
  static RadialProfile coassociative(double c) {
    if (c == 0.0) return lawson_osserman();
    return {[c](double r) {
      const double s = coassociative_profile(r, c);
      const double den = 4.0 * s * s - r * r;
      const double s1 = 4.0 * r * s / den;
      const double s2 = ((4.0 * s + 4.0 * r * s1) * den - 4.0 * r * s * (8.0 * s * s1 - 2.0 * r)) / (den * den);
      const double r2 = r * r;
      return std::array<double, 3>{s / r2, s1 / r2 - 2.0 * s / (r2 * r),
                                   s2 / r2 - 4.0 * s1 / (r2 * r) + 6.0 * s / (r2 * r2)};
    }};
  }
};

namespace detail {

// Quadratic forms q^alpha(x) = x^T Q_alpha x of the Hopf map with z1 = x1 + i x2, z2 = x3 + i x4.
inline const std::array<Eigen::Matrix4d, 3>& hopf_forms() {
  static const std::array<Eigen::Matrix4d, 3> forms = [] {
    std::array<Eigen::Matrix4d, 3> q;
    for (auto& m : q) m.setZero();
    q[0].diagonal() << 1.0, 1.0, -1.0, -1.0;
    q[1](0, 2) = q[1](2, 0) = 1.0;
    q[1](1, 3) = q[1](3, 1) = 1.0;
    q[2](1, 2) = q[2](2, 1) = 1.0;
    q[2](0, 3) = q[2](3, 0) = -1.0;
    return q;
  }();
  return forms;
}

}  // namespace detail

struct ProfileGraphValue {
  Vector f;                    // R^3
  Matrix jacobian;             // 4 x 3
  std::vector<Matrix> hessians;  // 3 matrices 4 x 4
};

// f(x) = s~(|x|) Hopf(x) with closed-form derivatives.
inline ProfileGraphValue profile_graph(const Vector& x, const RadialProfile& profile) {
  if (x.size() != 4) throw InvalidInput("the cone graph is defined on R^4");
  const double r = x.norm();
  if (!(r > 0.0)) throw DomainError("the cone graph is singular at x = 0");
  const auto [s, s1, s2] = profile.eval(r);
  const auto& forms = detail::hopf_forms();
  ProfileGraphValue out;
  out.f.resize(3);
  out.jacobian.resize(4, 3);
  out.hessians.assign(3, Matrix(4, 4));
  const Eigen::Vector4d xv = x;
  for (int a = 0; a < 3; ++a) {
    const Eigen::Vector4d qx = forms[a] * xv;
    const double q = xv.dot(qx);
    out.f(a) = s * q;
    for (int i = 0; i < 4; ++i) out.jacobian(i, a) = s1 * xv(i) / r * q + 2.0 * s * qx(i);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const double xx = xv(i) * xv(j);
        out.hessians[a](i, j) = s2 * xx / (r * r) * q + s1 * ((i == j ? 1.0 / r : 0.0) - xx / (r * r * r)) * q +
                                2.0 * s1 * (xv(i) * qx(j) + xv(j) * qx(i)) / r + 2.0 * s * forms[a](i, j);
      }
  }
  return out;
}

inline ProfileGraphValue lo_graph(const Vector& x) { return profile_graph(x, RadialProfile::lawson_osserman()); }

inline GraphMap profile_graph_map(const RadialProfile& profile, std::string name) {
  return GraphMap::analytic(
      4, 3, [profile](const Vector& x) { return profile_graph(x, profile).f; },
      [profile](const Vector& x) { return profile_graph(x, profile).jacobian; },
      [profile](const Vector& x) { return profile_graph(x, profile).hessians; }, std::move(name));
}

inline GraphMap lawson_osserman_graph() {
  return profile_graph_map(RadialProfile::lawson_osserman(), "lawson-osserman");
}

struct LOConeFrames {
  Matrix e;          // 4 x 4, columns e_0..e_3
  Matrix push;       // 3 x 4, columns zeta_* e_i
  Vector rho;        // rho_i = (1 + |zeta_* e_i|^2)^{-1/2}
  Matrix W;          // diag(rho)
  std::vector<double> angles;         // arccos rho_i in frame order
  std::vector<double> sorted_angles;  // descending
  double w = 0.0;    // rho_0 rho_1 rho_2 rho_3

  // Columns (e_i, zeta_* e_i) spanning the tangent plane of the graph in R^7.
  Matrix tangent_basis() const {
    Matrix out(7, 4);
    out.topRows(4) = e;
    out.bottomRows(3) = push;
    return out;
  }
};

// Polar frames on C^2 = R^4 with z1 = r1 e^{i theta1}, z2 = r2 e^{i theta2};
// needs r1 r2 > 0.
inline LOConeFrames lo_cone_frames(const Vector& x, const RadialProfile& profile) {
  if (x.size() != 4) throw InvalidInput("the cone frames live on R^4");
  const double r = x.norm();
  if (!(r > 0.0)) throw DomainError("the cone frames are undefined at x = 0");
  const double r1 = std::hypot(x(0), x(1));
  const double r2 = std::hypot(x(2), x(3));
  if (!(r1 > 0.0 && r2 > 0.0)) throw DomainError("the polar frame needs z1 != 0 and z2 != 0");
  const double t1 = std::atan2(x(1), x(0));
  const double t2 = std::atan2(x(3), x(2));
  const Eigen::Vector4d d_r1(std::cos(t1), std::sin(t1), 0.0, 0.0);
  const Eigen::Vector4d d_r2(0.0, 0.0, std::cos(t2), std::sin(t2));
  const Eigen::Vector4d d_t1(-x(1), x(0), 0.0, 0.0);
  const Eigen::Vector4d d_t2(0.0, 0.0, -x(3), x(2));

  LOConeFrames out;
  out.e.resize(4, 4);
  out.e.col(0) = r1 / r * d_r1 + r2 / r * d_r2;
  out.e.col(1) = r2 / r * d_r1 - r1 / r * d_r2;
  out.e.col(2) = r2 / (r1 * r) * d_t1 - r1 / (r2 * r) * d_t2;
  out.e.col(3) = (d_t1 + d_t2) / r;

  const auto [s, s1, s2] = profile.eval(r);
  (void)s2;
  const std::complex<double> phase = std::polar(1.0, t1 - t2);
  const Eigen::Vector3d eta = hopf_map(x);
  const std::complex<double> c1 = 2.0 * (r2 * r2 - r1 * r1) * phase;
  const std::complex<double> c2 = 2.0 * std::complex<double>(0.0, 1.0) * phase;
  out.push.resize(3, 4);
  out.push.col(0) = (s1 + 2.0 * s / r) * eta;
  out.push.col(1) = s / r * Eigen::Vector3d(4.0 * r1 * r2, c1.real(), c1.imag());
  out.push.col(2) = s * r * Eigen::Vector3d(0.0, c2.real(), c2.imag());
  out.push.col(3).setZero();

  out.rho.resize(4);
  out.W = Matrix::Zero(4, 4);
  out.w = 1.0;
  for (int i = 0; i < 4; ++i) {
    const double len = out.push.col(i).norm();
    out.rho(i) = 1.0 / std::sqrt(1.0 + len * len);
    out.W(i, i) = out.rho(i);
    out.w *= out.rho(i);
    out.angles.push_back(std::atan(len));
  }
  out.sorted_angles = out.angles;
  std::sort(out.sorted_angles.begin(), out.sorted_angles.end(), std::greater<>());
  return out;
}

inline LOConeFrames lo_cone_frames(const Vector& x) { return lo_cone_frames(x, RadialProfile::lawson_osserman()); }

}  // namespace gbk
