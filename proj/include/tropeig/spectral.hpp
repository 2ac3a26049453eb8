#pragma once

#include <vector>

#include "tropeig/errors.hpp"
#include "tropeig/graph.hpp"
#include "tropeig/matrix.hpp"

namespace tropeig {

template <MaxPlusScalar S>
struct EigenBasis {
  S eigenvalue;
  std::vector<Vector<S>> basis;
  /// Column of ((−λ) ⊗ A)* each basis vector was taken from.
  std::vector<Index> source_columns;
};

/// Basis of the eigenspace U(A, λ(A)): one column of ((−λ(A)) ⊗ A)* per
/// connected component of the critical graph, taken at its smallest vertex.
template <MaxPlusScalar S>
EigenBasis<S> eigenspace_basis(const Matrix<S>& a) {
  require_square(a, "eigenspace_basis");
  const S lambda = max_cycle_mean(a);
  if (!lambda.is_finite())
    throw NoCriticalGraphError("eigenspace_basis: G(A) is acyclic, so A has no eigenvector");
  const auto cg = critical_graph(a);
  const Matrix<S> star = kleene_star(Matrix<S>(otimes(lambda.inverse(), a)));
  EigenBasis<S> r{lambda, {}, {}};
  for (const auto& comp : cg.components) {
    r.source_columns.push_back(comp.front());
    r.basis.push_back(star.col(comp.front()));
  }
  return r;
}

/// x ≠ 𝓔 and A ⊗ x = λ ⊗ x.
template <MaxPlusScalar S>
bool is_eigenvector(const Matrix<S>& a, const S& lambda, const Vector<S>& x) {
  if (a.cols() != x.size() || a.rows() != x.size())
    throw DimensionError("is_eigenvector: dimension mismatch");
  if (is_trivial(x)) return false;
  return equal(otimes(a, x), otimes(lambda, x));
}

}  // namespace tropeig
