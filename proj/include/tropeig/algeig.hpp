#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tropeig/charpoly.hpp"
#include "tropeig/errors.hpp"
#include "tropeig/graph.hpp"
#include "tropeig/matrix.hpp"
#include "tropeig/residuation.hpp"
#include "tropeig/spectral.hpp"

namespace tropeig {

template <MaxPlusScalar S>
struct CircuitRestriction {
  Matrix<S> a_c;
  Matrix<S> a_not_c;
  Matrix<S> e_c;
  Matrix<S> e_not_c;
};

/// Splits A along the edges of C into A_C ⊕ A_{\C}, and E_n along V(C).
template <MaxPlusScalar S>
CircuitRestriction<S> restrict(const Matrix<S>& a, const MultiCircuit<S>& c) {
  require_square(a, "restrict");
  const Index n = a.rows();
  if (c.order() != n) throw StructureError("restrict: multi-circuit has the wrong order");
  CircuitRestriction<S> r{eps_matrix<S>(n, n), a, eps_matrix<S>(n, n), unit_matrix<S>(n)};
  for (const auto& [i, j] : c.edges()) {
    if (!a(i, j).is_finite())
      throw StructureError("restrict: edge (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                           ") of the multi-circuit is not in G(A)");
    r.a_c(i, j) = a(i, j);
    r.a_not_c(i, j) = S::epsilon();
  }
  for (Index v : c.vertices()) {
    r.e_c(v, v) = S::unit();
    r.e_not_c(v, v) = S::epsilon();
  }
  return r;
}

/// (A_{\C} ⊕ λ⊗E_C) ⊗ x = (A_C ⊕ λ⊗E_{\C}) ⊗ x. The zero vector passes.
template <MaxPlusScalar S>
bool satisfies_algeig_eq(const Matrix<S>& a, const S& lambda, const MultiCircuit<S>& c,
                         const Vector<S>& x) {
  if (x.size() != a.rows()) throw DimensionError("satisfies_algeig_eq: dimension mismatch");
  const auto r = restrict(a, c);
  const Matrix<S> lhs = oplus(r.a_not_c, otimes(lambda, r.e_c));
  const Matrix<S> rhs = oplus(r.a_c, otimes(lambda, r.e_not_c));
  return equal(otimes(lhs, x), otimes(rhs, x));
}

/// B_{A,λ,C} = (A_C ⊕ λ⊗E_{\C})^{-1} ⊗ (A_{\C} ⊕ λ⊗E_C).
template <MaxPlusScalar S>
Matrix<S> build_B(const Matrix<S>& a, const S& lambda, const MultiCircuit<S>& c) {
  const auto r = restrict(a, c);
  const Matrix<S> p = oplus(r.a_c, otimes(lambda, r.e_not_c));
  const Matrix<S> q = oplus(r.a_not_c, otimes(lambda, r.e_c));
  return otimes(monomial_inverse(p), q);
}

template <MaxPlusScalar S>
struct StarWitness {
  S lambda;
  MultiCircuit<S> first;
  MultiCircuit<S> second;
};

template <MaxPlusScalar S>
struct StarCheck {
  bool holds = true;
  std::optional<StarWitness<S>> witness;
};

/// (★): for every λ, distinct λ-maximal multi-circuits have distinct lengths.
///
/// The set of λ-maximal multi-circuits is constant between consecutive roots
/// of χ_A and only grows at a root, so testing λ = ε and every finite root
/// covers all of ℝ_max.
template <MaxPlusScalar S>
StarCheck<S> star_assumption_holds(const std::vector<MultiCircuit<S>>& all, Index n) {
  // Ascending: ε, then the finite roots from the smallest up.
  std::vector<S> candidates{S::epsilon()};
  const auto roots = char_poly(all, n).roots();
  for (auto it = roots.rbegin(); it != roots.rend(); ++it)
    if (it->value.is_finite()) candidates.push_back(it->value);
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const auto best = lambda_maximal_multicircuits(all, candidates[k]);
    for (std::size_t x = 0; x < best.size(); ++x)
      for (std::size_t y = x + 1; y < best.size(); ++y) {
        if (best[x].length() != best[y].length()) continue;
        // A tie at ε persists up to the smallest finite root; report that λ.
        const S& lambda = (k == 0 && candidates.size() > 1) ? candidates[1] : candidates[k];
        return {false, StarWitness<S>{lambda, best[x], best[y]}};
      }
  }
  return {};
}

template <MaxPlusScalar S>
StarCheck<S> star_assumption_holds(const Matrix<S>& a, const Guard& guard = {}) {
  require_square(a, "star_assumption_holds");
  return star_assumption_holds(multi_circuits(graph_of(a), guard), a.rows());
}

/// True iff C attains χ_A(λ).
template <MaxPlusScalar S>
bool is_lambda_maximal(const Matrix<S>& a, const S& lambda, const MultiCircuit<S>& c,
                       const Guard& guard = {}) {
  const auto all = multi_circuits(graph_of(a), guard);
  const auto best = lambda_maximal_multicircuits(all, lambda);
  return std::find(best.begin(), best.end(), c) != best.end();
}

/// Every circuit of D uses edges of G(B) and has weight e there.
template <MaxPlusScalar S>
void require_critical(const Matrix<S>& b, const MultiCircuit<S>& d, const char* what) {
  for (const auto& circ : d.circuits()) {
    const auto rebuilt = make_circuit(b, circ.vertices);
    if (!(rebuilt.weight == S::unit()))
      throw StructureError(std::string(what) + ": circuit " + circ.str() +
                           " is not critical in G(B), weight " + rebuilt.weight.str());
  }
}

/// φ_C(D): the λ-maximal multi-circuit of G(A) obtained from a union D of
/// critical circuits of G(B_{A,λ,C}). Every free choice takes the smallest
/// index.
template <MaxPlusScalar S>
MultiCircuit<S> phi(const Matrix<S>& a, const S& lambda, const MultiCircuit<S>& c,
                    const MultiCircuit<S>& d) {
  const Index n = a.rows();
  const Matrix<S> b = build_B(a, lambda, c);
  if (d.order() != n) throw StructureError("phi: D has the wrong order");
  require_critical(b, d, "phi");

  std::vector<Circuit<S>> out;
  VertexMask covered = 0;
  auto in_reversed_c = [&](Index u, Index j) { return c.contains(j) && c.successor(j) == u; };
  for (;;) {
    std::optional<Index> start;
    for (const auto& [u, j] : d.edges()) {
      if (in_reversed_c(u, j) || (covered & bit(j))) continue;
      start = j;
      break;
    }
    if (!start) break;
    std::vector<Index> seq{*start};
    VertexMask on = bit(*start);
    Index i = *start;
    for (;;) {
      Index next;
      if (!c.contains(i)) {
        if (!d.contains(i)) throw StructureError("phi: walk left V(C) ∪ V(D)");
        next = d.successor(i);
      } else if (!d.contains(c.successor(i))) {
        next = c.successor(i);
      } else {
        next = d.successor(c.successor(i));
      }
      if (next == *start) break;
      if ((on & bit(next)) || (covered & bit(next)))
        throw StructureError("phi: walk revisits vertex " + std::to_string(next + 1));
      seq.push_back(next);
      on |= bit(next);
      i = next;
    }
    covered |= on;
    out.push_back(make_circuit(a, seq));
  }
  for (const auto& circ : c.circuits()) {
    if (circ.mask() & d.mask()) continue;
    if (circ.mask() & covered) throw StructureError("phi: circuit of C overlaps the new circuits");
    covered |= circ.mask();
    out.push_back(circ);
  }
  for (Index v : d.vertices()) {
    if ((covered & bit(v)) || !(lambda < a(v, v))) continue;
    covered |= bit(v);
    out.push_back(make_circuit(a, {v}));
  }
  return MultiCircuit<S>(n, std::move(out));
}

/// ψ_C(C′): the union of critical circuits of G(B_{A,λ,C}) corresponding to
/// the λ-maximal multi-circuit C′. Walks start at the smallest uncovered
/// vertex of V(C′) \ V(C).
template <MaxPlusScalar S>
MultiCircuit<S> psi(const Matrix<S>& a, const S& lambda, const MultiCircuit<S>& c,
                    const MultiCircuit<S>& c2, const Guard& guard = {}) {
  const Index n = a.rows();
  if (c.order() != n || c2.order() != n) throw StructureError("psi: multi-circuit has the wrong order");
  {
    const auto best = lambda_maximal_multicircuits(multi_circuits(graph_of(a), guard), lambda);
    for (const auto* m : {&c, &c2})
      if (std::find(best.begin(), best.end(), *m) == best.end())
        throw StructureError("psi: " + m->str() + " is not λ-maximal");
  }
  const Matrix<S> b = build_B(a, lambda, c);
  std::vector<Circuit<S>> out;
  VertexMask covered = 0;
  const VertexMask todo = c2.mask() & ~c.mask();
  for (Index s = 0; s < n; ++s) {
    if (!(todo & bit(s)) || (covered & bit(s))) continue;
    std::vector<Index> seq{s};
    VertexMask on = bit(s);
    Index i = s;
    for (;;) {
      Index next;
      if (c.contains(i)) {
        const Index ip = c.predecessor(i);
        next = c2.contains(ip) ? c2.successor(ip) : ip;
      } else if (c2.contains(i)) {
        next = c2.successor(i);
      } else {
        throw StructureError("psi: walk left V(C) ∪ V(C′)");
      }
      if (next == s) break;
      if ((on & bit(next)) || (covered & bit(next)))
        throw StructureError("psi: walk revisits vertex " + std::to_string(next + 1));
      seq.push_back(next);
      on |= bit(next);
      i = next;
    }
    covered |= on;
    out.push_back(make_circuit(b, seq));
  }
  MultiCircuit<S> d(n, std::move(out));
  require_critical(b, d, "psi");
  return d;
}

struct ColumnClass {
  std::vector<Index> members;
  /// The class of all-ε columns; never valid.
  bool degenerate = false;
};

/// Partition of the column indices of G by mutual proportionality, ordered
/// by smallest member.
template <MaxPlusScalar S>
std::vector<ColumnClass> column_classes(const Matrix<S>& g) {
  std::vector<ColumnClass> classes;
  for (Index j = 0; j < g.cols(); ++j) {
    const Vector<S> col = g.col(j);
    const bool trivial = is_trivial(col);
    bool placed = false;
    for (auto& cls : classes) {
      if (cls.degenerate != trivial) continue;
      if (trivial || proportional<S>(col, g.col(cls.members.front()))) {
        cls.members.push_back(j);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({{j}, trivial});
  }
  return classes;
}

/// Classes H of Γ(A,λ) with V(ψ_C(C′)) ⊆ σ_C(H) for some λ-maximal C, C′ with ℓ(C) < ℓ(C′).
template <MaxPlusScalar S>
std::vector<std::vector<Index>> valid_classes(const Matrix<S>& a, const S& lambda,
                                              const Guard& guard = {}) {
  require_square(a, "valid_classes");
  if (!lambda.is_finite()) throw ArgumentError("valid_classes: λ must be finite");
  const auto best = lambda_maximal_multicircuits(multi_circuits(graph_of(a), guard), lambda);
  const auto classes = column_classes(gamma(a, lambda, guard));
  std::vector<bool> valid(classes.size(), false);
  for (const auto& c : best) {
    for (const auto& c2 : best) {
      if (c.length() >= c2.length()) continue;
      const VertexMask vd = psi(a, lambda, c, c2, guard).mask();
      for (std::size_t h = 0; h < classes.size(); ++h) {
        if (classes[h].degenerate || valid[h]) continue;
        VertexMask image = 0;
        for (Index j : classes[h].members) image |= bit(c.successor(j));
        if ((vd & ~image) == 0) valid[h] = true;
      }
    }
  }
  std::vector<std::vector<Index>> out;
  for (std::size_t h = 0; h < classes.size(); ++h)
    if (valid[h]) out.push_back(classes[h].members);
  return out;
}

struct AlgebraicEigenspace {
  MaxScalar eigenvalue;
  /// Normalized (largest entry 0) minimal generating set.
  std::vector<MaxVector> basis;
  std::vector<std::vector<Index>> valid_classes;
  /// The λ-maximal multi-circuit the computation was anchored on.
  MultiCircuit<MaxScalar> witness;
};

inline std::vector<MaxVector> normalized_basis(const std::vector<MaxVector>& gens) {
  std::vector<MaxVector> out;
  for (const auto& g : minimize_generators(gens)) out.push_back(normalize(g));
  return out;
}

/// The linear map ξ_{A,C} of an ε-maximal multi-circuit C: keeps [x]_L and
/// sets [x]_K = ([A_C]_KK^{-1} ⊗ [A_{\C}]_KK)* ⊗ ([A_C]_KK^{-1} ⊗ A_KL) ⊗ [x]_L,
/// with K = V(C) and L its complement.
template <MaxPlusScalar S>
struct XiMap {
  std::vector<Index> k;
  std::vector<Index> l;
  /// |K| × |L| block mapping [x]_L to [x]_K.
  Matrix<S> transfer;
  /// n × n matrix X with ξ(x) = X ⊗ x.
  Matrix<S> as_matrix;

  Vector<S> operator()(const Vector<S>& x) const { return otimes(as_matrix, x); }
};

template <MaxPlusScalar S>
XiMap<S> xi_map(const Matrix<S>& a, const MultiCircuit<S>& c) {
  const Index n = a.rows();
  const auto r = restrict(a, c);
  XiMap<S> xi;
  for (Index v = 0; v < n; ++v) (c.contains(v) ? xi.k : xi.l).push_back(v);
  const Index nk = static_cast<Index>(xi.k.size()), nl = static_cast<Index>(xi.l.size());
  auto block = [](const Matrix<S>& m, const std::vector<Index>& rows, const std::vector<Index>& cols) {
    Matrix<S> out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j)
        out(static_cast<Index>(i), static_cast<Index>(j)) = m(rows[i], cols[j]);
    return out;
  };
  const Matrix<S> pinv = monomial_inverse(block(r.a_c, xi.k, xi.k));
  const Matrix<S> m = otimes(pinv, block(r.a_not_c, xi.k, xi.k));
  Matrix<S> star;
  try {
    star = kleene_star(m);
  } catch (const DivergenceError&) {
    throw DegeneracyError("xi_map: " + c.str() + " is not ε-maximal (positive circuit in the K-block)");
  }
  xi.transfer = otimes(star, otimes(pinv, block(a, xi.k, xi.l)));
  xi.as_matrix = eps_matrix<S>(n, n);
  for (Index p = 0; p < nk; ++p)
    for (Index q = 0; q < nl; ++q) xi.as_matrix(xi.k[static_cast<std::size_t>(p)], xi.l[static_cast<std::size_t>(q)]) = xi.transfer(p, q);
  for (Index q = 0; q < nl; ++q) {
    const Index v = xi.l[static_cast<std::size_t>(q)];
    xi.as_matrix(v, v) = S::unit();
  }
  return xi;
}

/// [A ⊗ v]_L = 𝓔 for the complement L of V(C).
template <MaxPlusScalar S>
bool annihilated_off(const Matrix<S>& a, const MultiCircuit<S>& c, const Vector<S>& v) {
  const Vector<S> av = otimes(a, v);
  for (Index i = 0; i < a.rows(); ++i)
    if (!c.contains(i) && av(i).is_finite()) return false;
  return true;
}

/// W(A, ε): the vectors X^{⊗n} ⊗ e_j (j ∉ V(C_1)) fixed by every ξ_{A,C_p} and
/// annihilated on every L_p, where X represents ξ_{A,C_q} ∘ ⋯ ∘ ξ_{A,C_1}.
inline AlgebraicEigenspace eps_eigenspace(const MaxMatrix& a, const Guard& guard = {}) {
  require_square(a, "eps_eigenspace");
  const Index n = a.rows();
  const auto all = multi_circuits(graph_of(a), guard);
  const auto eps_max = lambda_maximal_multicircuits(all, MaxScalar::epsilon());
  AlgebraicEigenspace r{MaxScalar::epsilon(), {}, {}, eps_max.front()};
  if (char_poly(all, n).multiplicity(MaxScalar::epsilon()) == 0) return r;
  std::vector<XiMap<MaxScalar>> maps;
  for (const auto& c : eps_max) maps.push_back(xi_map(a, c));
  MaxMatrix x = unit_matrix<MaxScalar>(n);
  for (const auto& xi : maps) x = otimes(xi.as_matrix, x);
  const MaxMatrix xn = power(x, static_cast<int>(n));
  std::vector<MaxVector> gens;
  for (Index j = 0; j < n; ++j) {
    if (eps_max.front().contains(j)) continue;
    const MaxVector v = xn.col(j);
    if (is_trivial(v)) continue;
    bool ok = true;
    for (std::size_t p = 0; p < maps.size() && ok; ++p)
      ok = equal(maps[p](v), v) && annihilated_off(a, eps_max[p], v);
    if (ok) gens.push_back(v);
  }
  r.basis = normalized_basis(gens);
  return r;
}

/// W(A, λ). For finite λ: the columns of Γ(A,λ) in valid classes (smallest
/// index per class); for λ = ε see eps_eigenspace. Empty when λ is not a root.
inline AlgebraicEigenspace algebraic_eigenspace(const MaxMatrix& a, const MaxScalar& lambda,
                                                const Guard& guard = {}) {
  require_square(a, "algebraic_eigenspace");
  if (!lambda.is_finite()) return eps_eigenspace(a, guard);
  const Index n = a.rows();
  const auto all = multi_circuits(graph_of(a), guard);
  const auto best = lambda_maximal_multicircuits(all, lambda);
  AlgebraicEigenspace r{lambda, {}, {}, best.front()};
  for (const auto& c : best)
    if (c.length() < r.witness.length()) r.witness = c;
  if (char_poly(all, n).multiplicity(lambda) == 0) return r;
  r.valid_classes = valid_classes(a, lambda, guard);
  const MaxMatrix g = gamma(a, lambda, guard);
  std::vector<MaxVector> gens;
  for (const auto& h : r.valid_classes) gens.push_back(g.col(h.front()));
  r.basis = normalized_basis(gens);
  return r;
}

struct PerturbOptions {
  /// Use ζ = 0 when A itself satisfies (★).
  bool try_unperturbed = false;
  int max_draws = 32;
  Guard guard{};
};

struct GenericPerturbation {
  Matrix<Rational> zeta;
  JetMatrix perturbed;
  /// 1-based index of the accepted draw; 0 for ζ = 0.
  int draw = 0;
};

/// Draws ζ ∈ (ℚ ∩ [0,1])^{n×n} from a 64-bit Mersenne Twister seeded with
/// `seed` until A(ζ;δ) satisfies (★).
inline GenericPerturbation draw_generic_perturbation(const MaxMatrix& a, std::uint64_t seed,
                                                     const PerturbOptions& opt = {}) {
  require_square(a, "perturb_oracle");
  const Index n = a.rows();
  if (opt.try_unperturbed && star_assumption_holds(a, opt.guard).holds) {
    Matrix<Rational> zero(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) zero(i, j) = 0;
    return {zero, lift<JetScalar>(a), 0};
  }
  constexpr std::uint64_t kDenominator = 1'000'003;
  std::mt19937_64 rng(seed);
  for (int draw = 1; draw <= opt.max_draws; ++draw) {
    Matrix<Rational> zeta(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        zeta(i, j) = Rational(static_cast<unsigned long>(rng() % (kDenominator + 1)),
                              static_cast<unsigned long>(kDenominator));
    JetMatrix j = perturb(a, zeta);
    if (star_assumption_holds(j, opt.guard).holds) return {zeta, j, draw};
  }
  throw GenericityError("perturb_oracle: no perturbation satisfying (★) in " +
                        std::to_string(opt.max_draws) + " draws");
}

/// W(A,λ) through its defining limit: perturb A generically, sum the
/// eigenspaces W(A(ζ;δ), λ′, C) of the perturbed roots λ′ that tend to λ,
/// and let δ → +0 on the spanning vectors.
inline AlgebraicEigenspace perturb_oracle(const MaxMatrix& a, const MaxScalar& lambda,
                                          std::uint64_t seed, const PerturbOptions& opt = {}) {
  const Index n = a.rows();
  const auto gp = draw_generic_perturbation(a, seed, opt);
  const JetMatrix& j = gp.perturbed;
  const auto all = multi_circuits(graph_of(j), opt.guard);
  const auto poly = char_poly(all, n);
  std::vector<JetVector> gens;
  std::optional<MultiCircuit<JetScalar>> anchor;
  for (const auto& root : poly.roots()) {
    if (!(root.value.limit() == lambda)) continue;
    const auto best = lambda_maximal_multicircuits(all, root.value);
    const auto& c = best.front();
    if (!anchor) anchor = c;
    if (root.value.is_finite()) {
      const auto eb = eigenspace_basis(build_B(j, root.value, c));
      if (!(eb.eigenvalue == JetScalar::unit()))
        throw DegeneracyError("perturb_oracle: B has maximum cycle mean " + eb.eigenvalue.str());
      gens.insert(gens.end(), eb.basis.begin(), eb.basis.end());
    } else {
      const auto xi = xi_map(j, c);
      for (Index v = 0; v < n; ++v) {
        if (c.contains(v)) continue;
        const JetVector g = xi(unit_vector<JetScalar>(n, v));
        if (annihilated_off(j, c, g)) gens.push_back(g);
      }
    }
  }
  if (!anchor) anchor = lambda_maximal_multicircuits(all, JetScalar(lambda)).front();
  std::vector<std::vector<Index>> cycles;
  for (const auto& circ : anchor->circuits()) cycles.push_back(circ.vertices);
  AlgebraicEigenspace r{lambda, {}, {}, MultiCircuit<MaxScalar>::from_cycles(a, cycles)};
  std::vector<MaxVector> limits;
  for (const auto& g : gens) limits.push_back(jet_limit(g));
  r.basis = normalized_basis(limits);
  return r;
}

}  // namespace tropeig
