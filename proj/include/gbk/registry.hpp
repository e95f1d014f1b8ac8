#pragma once

// Named example graphs and sphere immersions. Names may carry numeric
// arguments: "holomorphic-sq(0.5)", "coassociative(1)", "equator(2,1)".

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "gbk/cones.hpp"
#include "gbk/error.hpp"
#include "gbk/graph.hpp"

namespace gbk {

struct RegistryKey {
  std::string name;
  std::vector<double> args;
};

inline RegistryKey parse_registry_key(std::string_view key) {
  RegistryKey out;
  const auto open = key.find('(');
  if (open == std::string_view::npos) {
    out.name = std::string(key);
    return out;
  }
  if (key.back() != ')') throw InvalidInput("malformed registry key '" + std::string(key) + "'");
  out.name = std::string(key.substr(0, open));
  std::string_view inner = key.substr(open + 1, key.size() - open - 2);
  while (!inner.empty()) {
    const auto comma = inner.find(',');
    const std::string item(inner.substr(0, comma));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidInput("bad numeric argument '" + item + "' in '" + std::string(key) + "'");
    }
    if (used != item.size()) throw InvalidInput("bad numeric argument '" + item + "' in '" + std::string(key) + "'");
    out.args.push_back(v);
    if (comma == std::string_view::npos) break;
    inner.remove_prefix(comma + 1);
  }
  return out;
}

namespace examples {

// f(x) = M x + b on R^3 with values in R^2.
inline GraphMap affine() {
  Matrix mat(2, 3);
  mat << 0.3, -0.2, 0.1, 0.05, 0.4, -0.25;
  Vector b(2);
  b << 0.5, -1.0;
  return GraphMap::analytic(
      3, 2, [mat, b](const Vector& x) { return Vector(mat * x + b); },
      [mat](const Vector&) { return Matrix(mat.transpose()); },
      [](const Vector&) { return std::vector<Matrix>(2, Matrix::Zero(3, 3)); }, "affine");
}

// f = a (x^2 - y^2, 2 x y), the graph of z -> a z^2.
inline GraphMap holomorphic_square(double a = 1.0) {
  return GraphMap::analytic(
      2, 2,
      [a](const Vector& x) {
        Vector f(2);
        f << a * (x(0) * x(0) - x(1) * x(1)), 2.0 * a * x(0) * x(1);
        return f;
      },
      [a](const Vector& x) {
        Matrix j(2, 2);
        j << 2.0 * a * x(0), 2.0 * a * x(1), -2.0 * a * x(1), 2.0 * a * x(0);
        return j;
      },
      [a](const Vector&) {
        std::vector<Matrix> h(2, Matrix(2, 2));
        h[0] << 2.0 * a, 0.0, 0.0, -2.0 * a;
        h[1] << 0.0, 2.0 * a, 2.0 * a, 0.0;
        return h;
      },
      "holomorphic-sq");
}

// x4 = sqrt(x1^2 + x2^2 - x3^2): the cone over the Clifford torus as a graph
// over {x1^2 + x2^2 > x3^2}.
inline GraphMap clifford_cone() {
  static constexpr double kSign[3] = {1.0, 1.0, -1.0};
  return GraphMap::analytic(
      3, 1,
      [](const Vector& x) {
        const double q = x(0) * x(0) + x(1) * x(1) - x(2) * x(2);
        if (!(q > 0.0)) throw DomainError("clifford-cone needs x1^2 + x2^2 > x3^2");
        return Vector::Constant(1, std::sqrt(q));
      },
      [](const Vector& x) {
        const double f = std::sqrt(x(0) * x(0) + x(1) * x(1) - x(2) * x(2));
        Matrix j(3, 1);
        for (int i = 0; i < 3; ++i) j(i, 0) = kSign[i] * x(i) / f;
        return j;
      },
      [](const Vector& x) {
        const double f = std::sqrt(x(0) * x(0) + x(1) * x(1) - x(2) * x(2));
        Matrix h(3, 3);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            h(i, j) = (i == j ? kSign[i] / f : 0.0) - kSign[i] * x(i) * kSign[j] * x(j) / (f * f * f);
        return std::vector<Matrix>{h};
      },
      "clifford-cone");
}

inline SphereImmersion clifford_torus() {
  SphereImmersion imm;
  imm.name = "clifford-torus";
  imm.k = 2;
  imm.ambient = 4;
  const double s = 1.0 / std::sqrt(2.0);
  imm.position = [s](const Vector& u) {
    Vector p(4);
    p << std::cos(u(0)), std::sin(u(0)), std::cos(u(1)), std::sin(u(1));
    return Vector(s * p);
  };
  imm.tangents = [s](const Vector& u) {
    Matrix t = Matrix::Zero(4, 2);
    t(0, 0) = -std::sin(u(0));
    t(1, 0) = std::cos(u(0));
    t(2, 1) = -std::sin(u(1));
    t(3, 1) = std::cos(u(1));
    return Matrix(s * t);
  };
  imm.second = [s](const Vector& u) {
    std::vector<Matrix> out(2, Matrix::Zero(4, 2));
    out[0](0, 0) = -s * std::cos(u(0));
    out[0](1, 0) = -s * std::sin(u(0));
    out[1](2, 1) = -s * std::cos(u(1));
    out[1](3, 1) = -s * std::sin(u(1));
    return out;
  };
  return imm;
}

// S^k inside S^{k+m} via inverse stereographic projection of R^k.
inline SphereImmersion equator(int k, int m = 1) {
  if (k < 1 || m < 1) throw InvalidInput("equator needs k >= 1 and m >= 1");
  SphereImmersion imm;
  imm.name = "equator";
  imm.k = k;
  imm.ambient = k + 1 + m;
  const int d = imm.ambient;
  imm.position = [k, d](const Vector& y) {
    const double s = 1.0 + y.squaredNorm();
    Vector p = Vector::Zero(d);
    p.head(k) = 2.0 * y / s;
    p(k) = 2.0 / s - 1.0;
    return p;
  };
  imm.tangents = [k, d](const Vector& y) {
    const double s = 1.0 + y.squaredNorm();
    Matrix t = Matrix::Zero(d, k);
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < k; ++i) t(i, j) = (i == j ? 2.0 / s : 0.0) - 4.0 * y(i) * y(j) / (s * s);
      t(k, j) = -4.0 * y(j) / (s * s);
    }
    return t;
  };
  imm.second = [k, d](const Vector& y) {
    const double s = 1.0 + y.squaredNorm();
    const double s2 = s * s;
    const double s3 = s2 * s;
    std::vector<Matrix> out(k, Matrix::Zero(d, k));
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l) {
        for (int i = 0; i < k; ++i) {
          const double dij = i == j ? y(l) : 0.0;
          const double dil = i == l ? y(j) : 0.0;
          const double djl = j == l ? y(i) : 0.0;
          out[j](i, l) = -4.0 * (dij + dil + djl) / s2 + 16.0 * y(i) * y(j) * y(l) / s3;
        }
        out[j](k, l) = (j == l ? -4.0 / s2 : 0.0) + 16.0 * y(j) * y(l) / s3;
      }
    return out;
  };
  return imm;
}

// Veronese surface RP^2 -> S^4 in spherical coordinates (u, v) of S^2.
inline SphereImmersion veronese() {
  static const std::array<Eigen::Matrix3d, 5> forms = [] {
    const double r3 = std::sqrt(3.0);
    std::array<Eigen::Matrix3d, 5> m;
    for (auto& f : m) f.setZero();
    m[0](1, 2) = m[0](2, 1) = r3 / 2.0;
    m[1](0, 2) = m[1](2, 0) = r3 / 2.0;
    m[2](0, 1) = m[2](1, 0) = r3 / 2.0;
    m[3].diagonal() << r3 / 2.0, -r3 / 2.0, 0.0;
    m[4].diagonal() << 0.5, 0.5, -1.0;
    return m;
  }();
  struct Sph {
    Eigen::Vector3d s, su, sv, suu, suv, svv;
  };
  auto sph = [](const Vector& u) {
    const double cu = std::cos(u(0)), su = std::sin(u(0)), cv = std::cos(u(1)), sv = std::sin(u(1));
    return Sph{{su * cv, su * sv, cu},          {cu * cv, cu * sv, -su},
               {-su * sv, su * cv, 0.0},        {-su * cv, -su * sv, -cu},
               {-cu * sv, cu * cv, 0.0},        {-su * cv, -su * sv, 0.0}};
  };
  SphereImmersion imm;
  imm.name = "veronese";
  imm.k = 2;
  imm.ambient = 5;
  imm.position = [sph](const Vector& u) {
    const Sph p = sph(u);
    Vector out(5);
    for (int c = 0; c < 5; ++c) out(c) = p.s.dot(forms[c] * p.s);
    return out;
  };
  imm.tangents = [sph](const Vector& u) {
    const Sph p = sph(u);
    Matrix out(5, 2);
    for (int c = 0; c < 5; ++c) {
      const Eigen::Vector3d grad = 2.0 * forms[c] * p.s;
      out(c, 0) = grad.dot(p.su);
      out(c, 1) = grad.dot(p.sv);
    }
    return out;
  };
  imm.second = [sph](const Vector& u) {
    const Sph p = sph(u);
    const Eigen::Vector3d* first[2] = {&p.su, &p.sv};
    const Eigen::Vector3d* mixed[2][2] = {{&p.suu, &p.suv}, {&p.suv, &p.svv}};
    std::vector<Matrix> out(2, Matrix(5, 2));
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 5; ++c)
          out[a](c, b) = 2.0 * first[a]->dot(forms[c] * *first[b]) + 2.0 * (forms[c] * p.s).dot(*mixed[a][b]);
    return out;
  };
  return imm;
}

}  // namespace examples

inline std::vector<std::string> graph_registry_names() {
  return {"affine", "holomorphic-sq", "lawson-osserman", "coassociative(C)", "clifford-cone"};
}

inline GraphMap registry_graph(std::string_view key) {
  const RegistryKey k = parse_registry_key(key);
  auto expect_args = [&](std::size_t lo, std::size_t hi) {
    if (k.args.size() < lo || k.args.size() > hi)
      throw InvalidInput("wrong number of arguments for '" + k.name + "'");
  };
  if (k.name == "affine") {
    expect_args(0, 0);
    return examples::affine();
  }
  if (k.name == "holomorphic-sq") {
    expect_args(0, 1);
    return examples::holomorphic_square(k.args.empty() ? 1.0 : k.args[0]);
  }
  if (k.name == "lawson-osserman") {
    expect_args(0, 0);
    return lawson_osserman_graph();
  }
  if (k.name == "coassociative") {
    expect_args(1, 1);
    return profile_graph_map(RadialProfile::coassociative(k.args[0]), std::string(key));
  }
  if (k.name == "clifford-cone") {
    expect_args(0, 0);
    return examples::clifford_cone();
  }
  throw InvalidInput("unknown graph '" + std::string(key) + "'");
}

inline SphereImmersion registry_immersion(std::string_view key) {
  const RegistryKey k = parse_registry_key(key);
  if (k.name == "clifford-torus" && k.args.empty()) return examples::clifford_torus();
  if (k.name == "veronese" && k.args.empty()) return examples::veronese();
  if (k.name == "equator" && (k.args.size() == 1 || k.args.size() == 2)) {
    const int dim = static_cast<int>(k.args[0]);
    const int codim = k.args.size() == 2 ? static_cast<int>(k.args[1]) : 1;
    if (dim != k.args[0] || (k.args.size() == 2 && codim != k.args[1]))
      throw InvalidInput("equator dimensions must be integers");
    return examples::equator(dim, codim);
  }
  throw InvalidInput("unknown immersion '" + std::string(key) + "'");
}

}  // namespace gbk
