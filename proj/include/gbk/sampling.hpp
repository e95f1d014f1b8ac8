#pragma once

// Deterministic sampling: Halton points over boxes and seeded random frames.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "gbk/error.hpp"
#include "gbk/grassmann.hpp"
#include "gbk/linalg.hpp"

namespace gbk {

inline double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

inline int nth_prime(int k) {
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  if (k < 0 || k >= 16) throw InvalidInput("Halton sequence supports at most 16 dimensions");
  return kPrimes[k];
}

// Halton points in an axis-aligned box, skipping points within `exclusion`
// of the origin, followed by user-supplied extra points.
class BoxSampler {
 public:
  BoxSampler(Vector lower, Vector upper, double exclusion = 0.0) : lower_(std::move(lower)), upper_(std::move(upper)),
                                                                  exclusion_(exclusion) {
    if (lower_.size() != upper_.size() || lower_.size() == 0) throw InvalidInput("box bounds have mismatched sizes");
    for (Eigen::Index i = 0; i < lower_.size(); ++i)
      if (!(lower_(i) < upper_(i))) throw InvalidInput("box lower bound must be below upper bound");
  }

  void add_point(Vector x) {
    if (x.size() != lower_.size()) throw InvalidInput("extra sample has wrong dimension");
    extra_.push_back(std::move(x));
  }

  std::vector<Vector> samples(int count) const {
    std::vector<Vector> out;
    const Eigen::Index dim = lower_.size();
    std::uint64_t index = 1;
    const std::uint64_t limit = static_cast<std::uint64_t>(count) * 1000 + 1000;
    while (static_cast<int>(out.size()) < count && index < limit) {
      Vector x(dim);
      for (Eigen::Index i = 0; i < dim; ++i)
        x(i) = lower_(i) + (upper_(i) - lower_(i)) * radical_inverse(index, nth_prime(static_cast<int>(i)));
      ++index;
      if (x.norm() < exclusion_) continue;
      out.push_back(std::move(x));
    }
    if (static_cast<int>(out.size()) < count) throw InvalidInput("box is almost entirely inside the exclusion ball");
    out.insert(out.end(), extra_.begin(), extra_.end());
    return out;
  }

  Eigen::Index dim() const { return lower_.size(); }

 private:
  Vector lower_;
  Vector upper_;
  double exclusion_;
  std::vector<Vector> extra_;
};

using Rng = std::mt19937_64;

inline Matrix random_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
  return out;
}

inline Matrix random_orthonormal(Rng& rng, Eigen::Index d, Eigen::Index k) {
  return linalg::orthonormalize(random_gaussian(rng, d, k));
}

inline GrassmannPoint random_point(Rng& rng, int n, int m) {
  return GrassmannPoint::from_basis(random_gaussian(rng, n + m, n));
}

// Uniform point in the spherical shell r_min <= |x| <= r_max of R^d.
inline Vector random_in_shell(Rng& rng, Eigen::Index d, double r_min, double r_max) {
  Vector dir = random_gaussian(rng, d, 1);
  dir.normalize();
  std::uniform_real_distribution<double> radius(r_min, r_max);
  return radius(rng) * dir;
}

}  // namespace gbk
