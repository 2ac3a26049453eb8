#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tropeig/errors.hpp"
#include "tropeig/scalar.hpp"

namespace tropeig {

using Index = Eigen::Index;

template <class S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using MaxMatrix = Matrix<MaxScalar>;
using MaxVector = Vector<MaxScalar>;
using JetMatrix = Matrix<JetScalar>;
using JetVector = Vector<JetScalar>;

// Eigen's Zero()/Identity() use the scalars 0 and 1, which are the wrong
// neutral elements here. Use these instead.

/// The m×n max-plus zero matrix 𝓔.
template <MaxPlusScalar S>
Matrix<S> eps_matrix(Index rows, Index cols) {
  return Matrix<S>::Constant(rows, cols, S::epsilon());
}

template <MaxPlusScalar S>
Vector<S> eps_vector(Index dim) {
  return Vector<S>::Constant(dim, S::epsilon());
}

/// The max-plus unit matrix E_n.
template <MaxPlusScalar S>
Matrix<S> unit_matrix(Index n) {
  Matrix<S> e = eps_matrix<S>(n, n);
  for (Index i = 0; i < n; ++i) e(i, i) = S::unit();
  return e;
}

/// e_j, the j-th standard basis vector.
template <MaxPlusScalar S>
Vector<S> unit_vector(Index dim, Index j) {
  Vector<S> v = eps_vector<S>(dim);
  v(j) = S::unit();
  return v;
}

template <MaxPlusScalar S = MaxScalar>
Vector<S> make_vector(std::initializer_list<S> entries) {
  Vector<S> v(static_cast<Index>(entries.size()));
  Index i = 0;
  for (const auto& e : entries) v(i++) = e;
  return v;
}

struct OplusOp {
  template <class S>
  S operator()(const S& a, const S& b) const {
    return oplus(a, b);
  }
};

template <class DA, class DB>
void require_same_shape(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                        const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(std::string(what) + ": shapes " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()) + " differ");
}

template <class Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() != a.cols())
    throw DimensionError(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", not square");
}

/// Entrywise maximum A ⊕ B.
template <class DA, class DB>
auto oplus(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using S = typename DA::Scalar;
  require_same_shape(a, b, "oplus");
  return Eigen::Matrix<S, DA::RowsAtCompileTime, DA::ColsAtCompileTime>(
      a.binaryExpr(b, OplusOp{}));
}

/// Max-plus product [A ⊗ B]_ij = max_k (a_ik + b_kj).
template <class DA, class DB>
auto otimes(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using S = typename DA::Scalar;
  if (a.cols() != b.rows())
    throw DimensionError("otimes: inner dimensions " + std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()) + " differ");
  Eigen::Matrix<S, DA::RowsAtCompileTime, DB::ColsAtCompileTime> c =
      Eigen::Matrix<S, DA::RowsAtCompileTime, DB::ColsAtCompileTime>::Constant(
          a.rows(), b.cols(), S::epsilon());
  for (Index k = 0; k < a.cols(); ++k) {
    for (Index i = 0; i < a.rows(); ++i) {
      const S& aik = a(i, k);
      if (!aik.is_finite()) continue;
      for (Index j = 0; j < b.cols(); ++j) {
        const S& bkj = b(k, j);
        if (!bkj.is_finite()) continue;
        S t = otimes(aik, bkj);
        if (c(i, j) < t) c(i, j) = std::move(t);
      }
    }
  }
  return c;
}

/// Scalar multiple λ ⊗ A.
template <class Derived>
auto otimes(const typename Derived::Scalar& lambda, const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  return Eigen::Matrix<S, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>(
      a.unaryExpr([&lambda](const S& x) { return otimes(lambda, x); }));
}

/// A^{⊗k} for k ≥ 0.
template <MaxPlusScalar S>
Matrix<S> power(const Matrix<S>& a, int k) {
  require_square(a, "power");
  Matrix<S> r = unit_matrix<S>(a.rows());
  for (int i = 0; i < k; ++i) r = otimes(r, a);
  return r;
}

template <class DA, class DB>
bool equal(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (!(a(i, j) == b(i, j))) return false;
  return true;
}

/// a ≤ b entrywise.
template <class DA, class DB>
bool leq(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  require_same_shape(a, b, "leq");
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (b(i, j) < a(i, j)) return false;
  return true;
}

template <class Derived>
bool is_trivial(const Eigen::MatrixBase<Derived>& v) {
  for (Index j = 0; j < v.cols(); ++j)
    for (Index i = 0; i < v.rows(); ++i)
      if (v(i, j).is_finite()) return false;
  return true;
}

/// Largest entry of v (ε for the zero vector).
template <class Derived>
typename Derived::Scalar max_entry(const Eigen::MatrixBase<Derived>& v) {
  using S = typename Derived::Scalar;
  S m = S::epsilon();
  for (Index i = 0; i < v.size(); ++i) m = oplus(m, v(i));
  return m;
}

/// Scales v so that its largest finite entry is 0; the zero vector is returned unchanged.
template <MaxPlusScalar S>
Vector<S> normalize(const Vector<S>& v) {
  const S m = max_entry(v);
  if (!m.is_finite()) return v;
  return otimes(m.inverse(), v);
}

/// True iff u = c ⊗ v for some finite c (both vectors trivial also counts).
template <MaxPlusScalar S>
bool proportional(const Vector<S>& u, const Vector<S>& v) {
  if (u.size() != v.size()) return false;
  std::optional<S> shift;
  for (Index i = 0; i < u.size(); ++i) {
    if (u(i).is_finite() != v(i).is_finite()) return false;
    if (!u(i).is_finite()) continue;
    S d = u(i).over(v(i));
    if (!shift) {
      shift = d;
    } else if (!(*shift == d)) {
      return false;
    }
  }
  return true;
}

/// Inverse of a generalized permutation (monomial) matrix: transpose the
/// support pattern and negate the entries.
template <MaxPlusScalar S>
Matrix<S> monomial_inverse(const Matrix<S>& p) {
  require_square(p, "monomial_inverse");
  const Index n = p.rows();
  Matrix<S> inv = eps_matrix<S>(n, n);
  std::vector<int> col_hits(static_cast<size_t>(n), 0);
  for (Index i = 0; i < n; ++i) {
    int row_hits = 0;
    for (Index j = 0; j < n; ++j) {
      if (!p(i, j).is_finite()) continue;
      ++row_hits;
      ++col_hits[static_cast<size_t>(j)];
      inv(j, i) = p(i, j).inverse();
    }
    if (row_hits != 1)
      throw StructureError("monomial_inverse: row " + std::to_string(i + 1) + " has " +
                           std::to_string(row_hits) + " finite entries");
  }
  for (Index j = 0; j < n; ++j)
    if (col_hits[static_cast<size_t>(j)] != 1)
      throw StructureError("monomial_inverse: column " + std::to_string(j + 1) +
                           " is not hit exactly once");
  return inv;
}

/// Kleene star A* = E ⊕ A ⊕ A² ⊕ ⋯, which is finite iff G(A) has no
/// positive-weight circuit. Computed with the Floyd-Warshall recurrence;
/// a positive diagonal entry of the closure witnesses divergence.
template <MaxPlusScalar S>
Matrix<S> kleene_star(const Matrix<S>& a) {
  require_square(a, "kleene_star");
  const Index n = a.rows();
  Matrix<S> c = a;
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i < n; ++i) {
      if (!c(i, k).is_finite()) continue;
      for (Index j = 0; j < n; ++j) {
        if (!c(k, j).is_finite()) continue;
        S t = otimes(c(i, k), c(k, j));
        if (c(i, j) < t) c(i, j) = std::move(t);
      }
    }
    if (S::unit() < c(k, k))
      throw DivergenceError("kleene_star: positive-weight circuit through vertex " +
                            std::to_string(k + 1));
  }
  for (Index i = 0; i < n; ++i) {
    if (S::unit() < c(i, i))
      throw DivergenceError("kleene_star: positive-weight circuit through vertex " +
                            std::to_string(i + 1));
    c(i, i) = oplus(c(i, i), S::unit());
  }
  return c;
}

/// A(ζ;δ) with entries a_ij − ζ_ij·δ.
inline JetMatrix perturb(const MaxMatrix& a, const Matrix<Rational>& zeta) {
  if (a.rows() != zeta.rows() || a.cols() != zeta.cols())
    throw DimensionError("perturb: ζ has the wrong shape");
  JetMatrix r(a.rows(), a.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) r(i, j) = JetScalar::perturbed(a(i, j), zeta(i, j));
  return r;
}

/// Entrywise δ → +0.
template <class Derived>
auto jet_limit(const Eigen::MatrixBase<Derived>& m) {
  return Eigen::Matrix<MaxScalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>(
      m.unaryExpr([](const JetScalar& x) { return x.limit(); }));
}

template <MaxPlusScalar S, class Derived>
auto lift(const Eigen::MatrixBase<Derived>& m) {
  return Eigen::Matrix<S, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>(
      m.unaryExpr([](const MaxScalar& x) { return S(x); }));
}

/// Rows of the matrix as "[a, b; c, d]", used in diagnostics and test output.
template <class Derived>
std::string to_string(const Eigen::MatrixBase<Derived>& m) {
  std::string s = "[";
  for (Index i = 0; i < m.rows(); ++i) {
    if (i) s += "; ";
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) s += ", ";
      s += m(i, j).str();
    }
  }
  return s + "]";
}

/// Vector as "(a, b, c)".
template <MaxPlusScalar S>
std::string to_string(const Vector<S>& v) {
  std::string s = "(";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v(i).str();
  }
  return s + ")";
}

}  // namespace tropeig
