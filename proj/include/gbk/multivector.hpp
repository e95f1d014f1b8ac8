#pragma once

// Exterior algebra over R^d: multi-indices in lexicographic order, sparse
// multivectors keyed by lexicographic rank, wedge products of vectors,
// the induced inner product and the Hodge star.
//
// Indices are 0-based in code; the basis vector e_{I} for I = {i_1 < ... < i_k}
// is e_{i_1} ^ ... ^ e_{i_k}.

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gbk/error.hpp"
#include "gbk/linalg.hpp"

namespace gbk {

inline constexpr int kMaxDimension = 16;
inline constexpr std::uint64_t kMaxBasisSize = std::uint64_t{1} << 20;

namespace detail {

inline constexpr auto kBinomial = [] {
  std::array<std::array<std::uint64_t, kMaxDimension + 1>, kMaxDimension + 1> table{};
  for (int n = 0; n <= kMaxDimension; ++n) {
    table[n][0] = 1;
    for (int k = 1; k <= n; ++k) table[n][k] = table[n - 1][k - 1] + (k <= n - 1 ? table[n - 1][k] : 0);
  }
  return table;
}();

}  // namespace detail

inline std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  return detail::kBinomial[n][k];
}

inline void check_capacity(int dim, int grade) {
  if (dim < 1 || dim > kMaxDimension)
    throw CapacityError("ambient dimension " + std::to_string(dim) + " outside [1, " +
                        std::to_string(kMaxDimension) + "]");
  if (grade < 0 || grade > dim)
    throw InvalidInput("grade " + std::to_string(grade) + " outside [0, " + std::to_string(dim) + "]");
  if (binomial(dim, grade) > kMaxBasisSize)
    throw CapacityError("basis of grade " + std::to_string(grade) + " in dimension " +
                        std::to_string(dim) + " exceeds capacity");
}

// Strictly increasing set of indices in [0, dim).
class MultiIndex {
 public:
  MultiIndex() = default;

  static MultiIndex from(std::vector<int> indices, int dim) {
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (indices[i] < 0 || indices[i] >= dim)
        throw InvalidInput("multi-index entry " + std::to_string(indices[i]) + " out of range");
      if (i > 0 && indices[i] <= indices[i - 1])
        throw InvalidInput("multi-index must be strictly increasing");
    }
    MultiIndex out;
    out.indices_ = std::move(indices);
    return out;
  }

  // Inverse of rank(): the `rank`-th k-subset of {0..dim-1} in lexicographic order.
  static MultiIndex unrank(std::uint64_t rank, int dim, int grade) {
    check_capacity(dim, grade);
    if (rank >= binomial(dim, grade)) throw InvalidInput("rank out of range");
    MultiIndex out;
    out.indices_.reserve(grade);
    int next = 0;
    for (int pos = 0; pos < grade; ++pos) {
      for (int v = next;; ++v) {
        const std::uint64_t block = binomial(dim - 1 - v, grade - 1 - pos);
        if (rank < block) {
          out.indices_.push_back(v);
          next = v + 1;
          break;
        }
        rank -= block;
      }
    }
    return out;
  }

  int grade() const { return static_cast<int>(indices_.size()); }
  std::span<const int> indices() const { return indices_; }
  int operator[](std::size_t i) const { return indices_[i]; }

  std::uint64_t rank(int dim) const {
    std::uint64_t r = 0;
    int prev = -1;
    const int k = grade();
    for (int pos = 0; pos < k; ++pos) {
      for (int v = prev + 1; v < indices_[pos]; ++v) r += binomial(dim - 1 - v, k - 1 - pos);
      prev = indices_[pos];
    }
    return r;
  }

  // Sorted complement in {0..dim-1}.
  MultiIndex complement(int dim) const {
    MultiIndex out;
    std::size_t j = 0;
    for (int v = 0; v < dim; ++v) {
      if (j < indices_.size() && indices_[j] == v) {
        ++j;
        continue;
      }
      out.indices_.push_back(v);
    }
    return out;
  }

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> indices_;
};

// Element of Lambda^k(R^d) with sparse coefficients sorted by lexicographic rank.
class Multivector {
 public:
  struct Term {
    std::uint64_t rank;
    double value;
  };

  Multivector(int dim, int grade) : dim_(dim), grade_(grade) { check_capacity(dim, grade); }

  static Multivector from_terms(int dim, int grade, std::vector<Term> terms) {
    Multivector out(dim, grade);
    const std::uint64_t size = binomial(dim, grade);
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.rank < b.rank; });
    for (const Term& t : terms) {
      if (t.rank >= size) throw InvalidInput("coefficient rank out of range");
      if (!out.terms_.empty() && out.terms_.back().rank == t.rank)
        out.terms_.back().value += t.value;
      else
        out.terms_.push_back(t);
    }
    std::erase_if(out.terms_, [](const Term& t) { return t.value == 0.0; });
    return out;
  }

  static Multivector basis(int dim, const MultiIndex& index) {
    Multivector out(dim, index.grade());
    out.terms_.push_back({index.rank(dim), 1.0});
    return out;
  }

  static Multivector from_dense(int dim, int grade, std::span<const double> coefficients) {
    Multivector out(dim, grade);
    if (coefficients.size() != binomial(dim, grade)) throw InvalidInput("dense coefficient count mismatch");
    for (std::size_t r = 0; r < coefficients.size(); ++r)
      if (coefficients[r] != 0.0) out.terms_.push_back({r, coefficients[r]});
    return out;
  }

  int dim() const { return dim_; }
  int grade() const { return grade_; }
  std::span<const Term> terms() const { return terms_; }
  std::uint64_t basis_size() const { return binomial(dim_, grade_); }

  double coefficient(const MultiIndex& index) const {
    if (index.grade() != grade_) throw InvalidInput("multi-index grade mismatch");
    return coefficient_at(index.rank(dim_));
  }

  double coefficient_at(std::uint64_t rank) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), rank,
                               [](const Term& t, std::uint64_t r) { return t.rank < r; });
    return (it != terms_.end() && it->rank == rank) ? it->value : 0.0;
  }

  std::vector<double> dense() const {
    std::vector<double> out(basis_size(), 0.0);
    for (const Term& t : terms_) out[t.rank] = t.value;
    return out;
  }

  Multivector operator*(double s) const {
    Multivector out(dim_, grade_);
    if (s == 0.0) return out;
    out.terms_ = terms_;
    for (Term& t : out.terms_) t.value *= s;
    return out;
  }
  friend Multivector operator*(double s, const Multivector& a) { return a * s; }

  Multivector operator+(const Multivector& other) const { return combine(other, 1.0); }
  Multivector operator-(const Multivector& other) const { return combine(other, -1.0); }

 private:
  Multivector combine(const Multivector& other, double sign) const {
    if (other.dim_ != dim_ || other.grade_ != grade_) throw InvalidInput("multivector shape mismatch");
    std::vector<Term> all = terms_;
    for (Term t : other.terms_) {
      t.value *= sign;
      all.push_back(t);
    }
    return from_terms(dim_, grade_, std::move(all));
  }

  int dim_;
  int grade_;
  std::vector<Term> terms_;
};

// u_1 ^ ... ^ u_k for the columns of `vectors` (d x k). The coefficient at I is
// the determinant of the rows I of the column-stacked vectors.
inline Multivector wedge(const Matrix& vectors) {
  const int d = static_cast<int>(vectors.rows());
  const int k = static_cast<int>(vectors.cols());
  if (k < 1 || k > d) throw InvalidInput("wedge needs between 1 and d vectors");
  check_capacity(d, k);

  Multivector::Term term{0, 0.0};
  std::vector<Multivector::Term> terms;
  std::vector<int> rows(k);
  for (int i = 0; i < k; ++i) rows[i] = i;
  std::array<double, kMaxDimension * kMaxDimension> scratch{};
  std::uint64_t rank = 0;
  while (true) {
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) scratch[r * k + c] = vectors(rows[r], c);
    term.rank = rank;
    term.value = linalg::determinant_inplace(std::span<double>(scratch.data(), k * k), k);
    if (term.value != 0.0) terms.push_back(term);
    ++rank;
    // Next k-subset in lexicographic order.
    int pos = k - 1;
    while (pos >= 0 && rows[pos] == d - k + pos) --pos;
    if (pos < 0) break;
    ++rows[pos];
    for (int j = pos + 1; j < k; ++j) rows[j] = rows[j - 1] + 1;
  }
  return Multivector::from_terms(d, k, std::move(terms));
}

inline Multivector wedge(std::span<const Vector> vectors) {
  if (vectors.empty()) throw InvalidInput("wedge of an empty list");
  const Eigen::Index d = vectors.front().size();
  Matrix stacked(d, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != d) throw InvalidInput("wedge factors have different dimensions");
    stacked.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  return wedge(stacked);
}

inline double inner(const Multivector& a, const Multivector& b) {
  if (a.dim() != b.dim() || a.grade() != b.grade())
    throw InvalidInput("inner product of multivectors with different grade or dimension");
  const auto ta = a.terms();
  const auto tb = b.terms();
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < ta.size() && j < tb.size()) {
    if (ta[i].rank < tb[j].rank) {
      ++i;
    } else if (tb[j].rank < ta[i].rank) {
      ++j;
    } else {
      sum += ta[i].value * tb[j].value;
      ++i;
      ++j;
    }
  }
  return sum;
}

inline double norm(const Multivector& a) { return std::sqrt(inner(a, a)); }

// Parity of the permutation (I, I^c) of (0..d-1): the number of inversions is
// sum_j (I_j - j).
inline double shuffle_sign(const MultiIndex& index) {
  long inversions = 0;
  for (int j = 0; j < index.grade(); ++j) inversions += index[j] - j;
  return (inversions % 2 == 0) ? 1.0 : -1.0;
}

// *(e_I) = sign(I, I^c) e_{I^c}.
inline Multivector hodge_star(const Multivector& a) {
  const int d = a.dim();
  const int k = a.grade();
  std::vector<Multivector::Term> out;
  out.reserve(a.terms().size());
  for (const auto& t : a.terms()) {
    const MultiIndex index = MultiIndex::unrank(t.rank, d, k);
    const MultiIndex comp = index.complement(d);
    out.push_back({comp.rank(d), shuffle_sign(index) * t.value});
  }
  return Multivector::from_terms(d, d - k, std::move(out));
}

}  // namespace gbk
