#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tropeig/algeig.hpp"
#include "tropeig/charpoly.hpp"
#include "tropeig/errors.hpp"
#include "tropeig/graph.hpp"
#include "tropeig/matrix.hpp"
#include "tropeig/residuation.hpp"

namespace tropeig {

/// The algebraic eigenspaces of every root of χ_A, roots descending.
inline std::vector<AlgebraicEigenspace> all_algebraic_eigenspaces(const MaxMatrix& a,
                                                                  const Guard& guard = {}) {
  std::vector<AlgebraicEigenspace> out;
  for (const auto& r : algebraic_eigenvalues(a, guard)) out.push_back(algebraic_eigenspace(a, r.value, guard));
  return out;
}

struct LabelledVector {
  MaxScalar eigenvalue;
  MaxVector vector;
};

struct UnionBasisReport {
  bool is_basis = true;
  std::vector<LabelledVector> vectors;
  /// Positions in `vectors` expressible by the others.
  std::vector<std::size_t> redundant;
};

/// Whether the union of the bases of all W(A,λ) is a basis of their sum,
/// i.e. no member is a max-plus combination of the others.
inline UnionBasisReport union_is_basis_of_sum(const MaxMatrix& a, const Guard& guard = {}) {
  UnionBasisReport r;
  for (const auto& w : all_algebraic_eigenspaces(a, guard))
    for (const auto& v : w.basis) r.vectors.push_back({w.eigenvalue, v});
  for (std::size_t i = 0; i < r.vectors.size(); ++i) {
    std::vector<MaxVector> others;
    for (std::size_t k = 0; k < r.vectors.size(); ++k)
      if (k != i) others.push_back(r.vectors[k].vector);
    if (!others.empty() && expressible(r.vectors[i].vector, others).expressible) r.redundant.push_back(i);
  }
  r.is_basis = r.redundant.empty();
  return r;
}

struct CriticalCircuits {
  MaxScalar lambda;
  MultiCircuit<MaxScalar> anchor;
  /// Weight-0 elementary circuits of G(B_{A,λ,anchor}), with weights from B.
  std::vector<Circuit<MaxScalar>> circuits;
};

struct HypothesisReport {
  bool holds = true;
  /// Per finite root: the critical circuits for the shortest λ-maximal multi-circuit.
  std::vector<CriticalCircuits> per_root;
  /// First violation: λ, the anchor C, and two intersecting critical circuits.
  std::optional<CriticalCircuits> violation;
};

/// Weight-0 elementary circuits of G(B).
inline std::vector<Circuit<MaxScalar>> zero_circuits(const MaxMatrix& b) {
  std::vector<Circuit<MaxScalar>> out;
  for (auto& c : elementary_circuits(graph_of(b)))
    if (c.weight == MaxScalar::unit()) out.push_back(std::move(c));
  return out;
}

/// Hypothesis of the independence theorem: for every real λ and every
/// λ-maximal C, the critical circuits of G(B_{A,λ,C}) are pairwise disjoint.
/// The λ-maximal sets are constant between roots, so λ ranges over the finite
/// roots plus one point inside each gap and beyond each end.
inline HypothesisReport main1_hypothesis(const MaxMatrix& a, const Guard& guard = {}) {
  require_square(a, "main1_hypothesis");
  const Index n = a.rows();
  const auto all = multi_circuits(graph_of(a), guard);
  std::vector<MaxScalar> roots;
  for (const auto& r : char_poly(all, n).roots())
    if (r.value.is_finite()) roots.push_back(r.value);
  std::vector<MaxScalar> samples;
  if (roots.empty()) {
    samples.push_back(MaxScalar::unit());
  } else {
    samples.push_back(otimes(roots.front(), MaxScalar(1)));
    for (std::size_t k = 0; k < roots.size(); ++k) {
      samples.push_back(roots[k]);
      const MaxScalar below = k + 1 < roots.size()
                                  ? MaxScalar(Rational((roots[k].value() + roots[k + 1].value()) / 2))
                                  : otimes(roots[k], MaxScalar(-1));
      samples.push_back(below);
    }
  }
  HypothesisReport rep;
  for (const auto& lambda : samples) {
    const bool is_root = std::find(roots.begin(), roots.end(), lambda) != roots.end();
    const auto best = lambda_maximal_multicircuits(all, lambda);
    std::optional<CriticalCircuits> shortest;
    for (const auto& c : best) {
      CriticalCircuits cc{lambda, c, zero_circuits(build_B(a, lambda, c))};
      if (!rep.violation) {
        for (std::size_t x = 0; x < cc.circuits.size() && !rep.violation; ++x)
          for (std::size_t y = x + 1; y < cc.circuits.size(); ++y)
            if (cc.circuits[x].mask() & cc.circuits[y].mask()) {
              rep.violation = CriticalCircuits{lambda, c, {cc.circuits[x], cc.circuits[y]}};
              break;
            }
      }
      if (is_root && (!shortest || c.length() < shortest->anchor.length())) shortest = std::move(cc);
    }
    if (shortest) rep.per_root.push_back(std::move(*shortest));
  }
  rep.holds = !rep.violation;
  return rep;
}

/// Falsification check for W(A,λ₁) ∩ W(A,λ₂) = {𝓔}: no basis vector of one
/// space, and no combination u ⊕ c ⊗ v of two basis vectors of one space with
/// c among the entry differences u_k − v_k, lies in the span of the other.
inline bool intersection_trivial(const MaxMatrix& a, const MaxScalar& lambda1,
                                 const MaxScalar& lambda2, const Guard& guard = {}) {
  if (lambda1 == lambda2) throw ArgumentError("intersection_trivial: eigenvalues must differ");
  const auto w1 = algebraic_eigenspace(a, lambda1, guard).basis;
  const auto w2 = algebraic_eigenspace(a, lambda2, guard).basis;
  auto escapes = [](const std::vector<MaxVector>& from, const std::vector<MaxVector>& into) {
    if (into.empty()) return true;
    for (const auto& u : from)
      if (expressible(u, into).expressible) return false;
    for (std::size_t p = 0; p < from.size(); ++p)
      for (std::size_t q = 0; q < from.size(); ++q) {
        if (p == q) continue;
        const auto& u = from[p];
        const auto& v = from[q];
        std::set<Rational> shifts;
        for (Index k = 0; k < u.size(); ++k)
          if (u(k).is_finite() && v(k).is_finite()) shifts.insert(Rational(u(k).value() - v(k).value()));
        for (const auto& s : shifts) {
          const MaxVector combo = oplus(u, otimes(MaxScalar(s), v));
          if (expressible(combo, into).expressible) return false;
        }
      }
    return true;
  };
  return escapes(w1, w2) && escapes(w2, w1);
}

struct OrthogonalityReport {
  MaxVector x;
  MaxVector y;
  MaxScalar product;
  std::vector<Index> attaining;
  bool orthogonal = false;
};

/// ᵗx ⊗ y and whether its maximum is attained at least twice (or is ε).
inline OrthogonalityReport inner_orthogonal(const MaxVector& x, const MaxVector& y) {
  if (x.size() != y.size()) throw DimensionError("inner_orthogonal: dimension mismatch");
  OrthogonalityReport r{x, y, MaxScalar::epsilon(), {}, false};
  for (Index i = 0; i < x.size(); ++i) {
    const MaxScalar t = otimes(x(i), y(i));
    if (!t.is_finite()) continue;
    if (r.product < t) {
      r.product = t;
      r.attaining.assign(1, i);
    } else if (r.product == t) {
      r.attaining.push_back(i);
    }
  }
  r.orthogonal = !r.product.is_finite() || r.attaining.size() >= 2;
  return r;
}

struct OrthogonalPair {
  MaxScalar lambda;
  MaxScalar mu;
  OrthogonalityReport report;
};

struct SymmetricOrthogonalityReport {
  bool orthogonal = true;
  std::vector<OrthogonalPair> pairs;
};

inline bool is_symmetric(const MaxMatrix& a) {
  if (a.rows() != a.cols()) return false;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < i; ++j)
      if (!(a(i, j) == a(j, i))) return false;
  return true;
}

/// Checks every pair of basis vectors of algebraic eigenspaces with distinct
/// eigenvalues for orthogonality.
inline SymmetricOrthogonalityReport verify_symmetric_orthogonality(const MaxMatrix& a,
                                                                   const Guard& guard = {}) {
  if (!is_symmetric(a)) throw ArgumentError("verify_symmetric_orthogonality: matrix is not symmetric");
  const auto spaces = all_algebraic_eigenspaces(a, guard);
  SymmetricOrthogonalityReport r;
  for (std::size_t p = 0; p < spaces.size(); ++p)
    for (std::size_t q = p + 1; q < spaces.size(); ++q)
      for (const auto& x : spaces[p].basis)
        for (const auto& y : spaces[q].basis) {
          auto rep = inner_orthogonal(x, y);
          r.orthogonal = r.orthogonal && rep.orthogonal;
          r.pairs.push_back({spaces[p].eigenvalue, spaces[q].eigenvalue, std::move(rep)});
        }
  return r;
}

}  // namespace tropeig
