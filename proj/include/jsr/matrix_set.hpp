#pragma once

// Finite sets of same-dimension square nonnegative matrices, the max-entry
// norm, and the set-level entry statistics every bound method consumes.

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "jsr/error.hpp"
#include "jsr/rational.hpp"

namespace jsr {

using Eigen::Index;

template <class S>
using DenseMatrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

using RationalMatrix = DenseMatrix<Rational>;
using RealMatrix = DenseMatrix<double>;

// Max-entry norm. Inputs are nonnegative here, so no absolute values; the
// norm of the zero matrix is 0. Not submultiplicative, but submultiplicative
// up to a factor of the dimension.
template <class Derived>
typename Derived::Scalar max_norm(const Eigen::MatrixBase<Derived>& m) {
  using S = typename Derived::Scalar;
  S best(0);
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (m(i, j) > best) best = m(i, j);
  return best;
}

// Entrywise comparisons. Row-major lexicographic order is the canonical
// product order used for deterministic deduplication.
template <class S>
bool lex_less(const DenseMatrix<S>& a, const DenseMatrix<S>& b) {
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) < b(i, j)) return true;
      if (b(i, j) < a(i, j)) return false;
    }
  return false;
}

template <class S>
bool exact_equal(const DenseMatrix<S>& a, const DenseMatrix<S>& b) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (!(a(i, j) == b(i, j))) return false;
  return true;
}

template <class S>
bool dominated_by(const DenseMatrix<S>& a, const DenseMatrix<S>& b) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (b(i, j) < a(i, j)) return false;
  return true;
}

template <class S>
DenseMatrix<S> multiply(const DenseMatrix<S>& a, const DenseMatrix<S>& b) {
  if (a.cols() != b.rows()) {
    throw Error("dimension mismatch in matrix product: " + std::to_string(a.cols()) +
                " vs " + std::to_string(b.rows()));
  }
  return a * b;
}

template <class S>
struct MatrixSet {
  Index dim = 0;
  std::vector<DenseMatrix<S>> matrices;
  bool all_zero = true;

  Index size() const { return static_cast<Index>(matrices.size()); }
};

using RationalMatrixSet = MatrixSet<Rational>;

// Validates shape and nonnegativity; the only way to build a MatrixSet.
template <class S>
MatrixSet<S> make_matrix_set(std::vector<DenseMatrix<S>> matrices) {
  if (matrices.empty()) throw Error("matrix set must contain at least one matrix");
  const Index dim = matrices.front().rows();
  if (dim < 1) throw Error("matrix dimension must be positive");
  bool all_zero = true;
  for (std::size_t k = 0; k < matrices.size(); ++k) {
    auto& m = matrices[k];
    if (m.rows() != dim || m.cols() != dim) {
      throw Error("matrix " + std::to_string(k) + " is not " + std::to_string(dim) +
                  "x" + std::to_string(dim));
    }
    for (Index j = 0; j < dim; ++j) {
      for (Index i = 0; i < dim; ++i) {
        ScalarTraits<S>::canonicalize(m(i, j));
        if (m(i, j) < S(0)) {
          throw Error("negative entry in matrix " + std::to_string(k) + " at (" +
                      std::to_string(i) + "," + std::to_string(j) + ")");
        }
        if (m(i, j) > S(0)) all_zero = false;
      }
    }
  }
  return MatrixSet<S>{dim, std::move(matrices), all_zero};
}

// U = largest positive entry, V = smallest positive entry over the whole set,
// and the contraction constant K = (V / (U * dim))^dim. Undefined for the
// all-zero set.
template <class S>
struct SetConstants {
  S largest_positive{};    // U
  S smallest_positive{};   // V
  S contraction{};         // K
};

template <class S>
SetConstants<S> set_constants(const MatrixSet<S>& set) {
  if (set.all_zero) throw Error("set constants are undefined for the all-zero set");
  S largest(0), smallest(0);
  bool seen = false;
  for (const auto& m : set.matrices) {
    for (Index j = 0; j < set.dim; ++j) {
      for (Index i = 0; i < set.dim; ++i) {
        const S& v = m(i, j);
        if (v > S(0)) {
          if (!seen || v > largest) largest = v;
          if (!seen || v < smallest) smallest = v;
          seen = true;
        }
      }
    }
  }
  SetConstants<S> c;
  c.largest_positive = largest;
  c.smallest_positive = smallest;
  S ratio = smallest / (largest * ScalarTraits<S>::from_long(set.dim));
  c.contraction = ScalarTraits<S>::pow_uint(ratio, static_cast<unsigned long>(set.dim));
  return c;
}

// Steering copy for float-guided iterations; never used for certification.
template <class S>
Eigen::MatrixXd to_double_matrix(const DenseMatrix<S>& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      out(i, j) = ScalarTraits<S>::to_double_dir(m(i, j), Rounding::Nearest);
  return out;
}

// Restriction of every matrix to the rows/columns named in `vertices`.
template <class S>
MatrixSet<S> restrict_set(const MatrixSet<S>& set, const std::vector<int>& vertices) {
  if (vertices.empty()) throw Error("cannot restrict to an empty vertex set");
  const Index k = static_cast<Index>(vertices.size());
  std::vector<DenseMatrix<S>> restricted;
  restricted.reserve(set.matrices.size());
  for (const auto& m : set.matrices) {
    DenseMatrix<S> r(k, k);
    for (Index j = 0; j < k; ++j)
      for (Index i = 0; i < k; ++i)
        r(i, j) = m(vertices[i], vertices[j]);
    restricted.push_back(std::move(r));
  }
  return make_matrix_set(std::move(restricted));
}

}  // namespace jsr
