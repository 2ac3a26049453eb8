#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tropeig/errors.hpp"
#include "tropeig/matrix.hpp"

namespace tropeig {

/// Bounds for the exhaustive enumerations (multi-circuits, permutations).
/// Exceeding either limit raises CapacityError instead of truncating.
struct Guard {
  Index max_n = 12;
  std::size_t max_items = 5'000'000;

  void check_order(Index n, const char* what) const {
    if (n > max_n || n > 63)
      throw CapacityError(std::string(what) + ": order " + std::to_string(n) +
                          " exceeds the enumeration guard " + std::to_string(max_n));
  }
};

using VertexMask = std::uint64_t;

inline VertexMask bit(Index v) { return VertexMask{1} << v; }

/// Weighted digraph G(A): edge (i,j) with weight a_ij iff a_ij ≠ ε.
template <MaxPlusScalar S = MaxScalar>
class Digraph {
 public:
  struct Edge {
    Index from;
    Index to;
    S weight;
  };

  Digraph() = default;
  explicit Digraph(Index n) : weights_(eps_matrix<S>(n, n)) {}

  Index vertex_count() const { return weights_.rows(); }
  bool has_edge(Index i, Index j) const { return weights_(i, j).is_finite(); }
  const S& weight(Index i, Index j) const { return weights_(i, j); }
  const Matrix<S>& weights() const { return weights_; }

  void add_edge(Index i, Index j, const S& w) {
    if (!w.is_finite()) throw ArgumentError("Digraph: edge weights must be finite");
    weights_(i, j) = w;
  }

  /// Edges in (from, to) lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (Index i = 0; i < vertex_count(); ++i)
      for (Index j = 0; j < vertex_count(); ++j)
        if (has_edge(i, j)) out.push_back({i, j, weights_(i, j)});
    return out;
  }

  std::size_t edge_count() const {
    std::size_t c = 0;
    for (Index i = 0; i < vertex_count(); ++i)
      for (Index j = 0; j < vertex_count(); ++j) c += has_edge(i, j) ? 1 : 0;
    return c;
  }

 private:
  Matrix<S> weights_;
};

template <MaxPlusScalar S>
Digraph<S> graph_of(const Matrix<S>& a) {
  require_square(a, "graph_of");
  Digraph<S> g(a.rows());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (a(i, j).is_finite()) g.add_edge(i, j, a(i, j));
  return g;
}

/// Elementary circuit (i_0, …, i_{ℓ-1}) with the return edge implicit,
/// stored in canonical rotation (smallest vertex first).
template <MaxPlusScalar S = MaxScalar>
struct Circuit {
  std::vector<Index> vertices;
  S weight;

  Index length() const { return static_cast<Index>(vertices.size()); }
  S average() const { return weight.root(length()); }

  Index successor(std::size_t pos) const { return vertices[(pos + 1) % vertices.size()]; }

  VertexMask mask() const {
    VertexMask m = 0;
    for (Index v : vertices) m |= bit(v);
    return m;
  }

  /// 1-based "(1,2)" notation.
  std::string str() const {
    std::string s = "(";
    for (std::size_t k = 0; k < vertices.size(); ++k) {
      if (k) s += ",";
      s += std::to_string(vertices[k] + 1);
    }
    return s + ")";
  }

  friend bool operator==(const Circuit& a, const Circuit& b) { return a.vertices == b.vertices; }
  friend bool operator<(const Circuit& a, const Circuit& b) { return a.vertices < b.vertices; }
};

/// Rotates a closed vertex sequence so that its smallest vertex comes first.
inline std::vector<Index> canonical_rotation(std::vector<Index> seq) {
  auto it = std::min_element(seq.begin(), seq.end());
  std::rotate(seq.begin(), it, seq.end());
  return seq;
}

/// Builds a circuit of G(A) from a vertex sequence; throws StructureError if
/// the sequence repeats a vertex or uses a missing edge.
template <MaxPlusScalar S>
Circuit<S> make_circuit(const Matrix<S>& a, std::vector<Index> seq) {
  if (seq.empty()) throw StructureError("circuit: empty vertex sequence");
  VertexMask seen = 0;
  for (Index v : seq) {
    if (v < 0 || v >= a.rows()) throw StructureError("circuit: vertex out of range");
    if (seen & bit(v)) throw StructureError("circuit: vertex " + std::to_string(v + 1) + " repeats");
    seen |= bit(v);
  }
  Circuit<S> c{canonical_rotation(std::move(seq)), S::unit()};
  for (std::size_t k = 0; k < c.vertices.size(); ++k) {
    const S& w = a(c.vertices[k], c.successor(k));
    if (!w.is_finite())
      throw StructureError("circuit: missing edge (" + std::to_string(c.vertices[k] + 1) + "," +
                           std::to_string(c.successor(k) + 1) + ")");
    c.weight = otimes(c.weight, w);
  }
  return c;
}

/// All elementary circuits, each once in canonical rotation, sorted lexicographically.
template <MaxPlusScalar S>
std::vector<Circuit<S>> elementary_circuits(const Digraph<S>& g) {
  const Index n = g.vertex_count();
  std::vector<Circuit<S>> out;
  std::vector<Index> path;
  VertexMask on_path = 0;
  // Circuits rooted at their smallest vertex: the DFS from `start` only
  // visits larger vertices, so every circuit is found exactly once.
  std::function<void(Index, Index, const S&)> dfs = [&](Index start, Index v, const S& w) {
    for (Index u = start; u < n; ++u) {
      if (!g.has_edge(v, u)) continue;
      S wu = otimes(w, g.weight(v, u));
      if (u == start) {
        out.push_back({path, wu});
      } else if (!(on_path & bit(u))) {
        path.push_back(u);
        on_path |= bit(u);
        dfs(start, u, wu);
        on_path &= ~bit(u);
        path.pop_back();
      }
    }
  };
  for (Index s = 0; s < n; ++s) {
    path = {s};
    on_path = bit(s);
    dfs(s, s, S::unit());
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// A set of pairwise vertex-disjoint elementary circuits of G(A).
template <MaxPlusScalar S = MaxScalar>
class MultiCircuit {
 public:
  MultiCircuit() = default;
  /// The empty multi-circuit on n vertices (length 0, weight e).
  explicit MultiCircuit(Index n) : n_(n), weight_(S::unit()) {}

  MultiCircuit(Index n, std::vector<Circuit<S>> circuits) : n_(n), weight_(S::unit()) {
    std::sort(circuits.begin(), circuits.end(),
              [](const Circuit<S>& x, const Circuit<S>& y) { return x.vertices < y.vertices; });
    for (auto& c : circuits) {
      if (mask_ & c.mask()) throw StructureError("multi-circuit: circuits share a vertex");
      mask_ |= c.mask();
      weight_ = otimes(weight_, c.weight);
      length_ += c.length();
    }
    circuits_ = std::move(circuits);
  }

  /// Builds from 0-based vertex sequences, taking weights from A.
  static MultiCircuit from_cycles(const Matrix<S>& a, const std::vector<std::vector<Index>>& cycles) {
    std::vector<Circuit<S>> cs;
    for (const auto& c : cycles) cs.push_back(make_circuit(a, c));
    return MultiCircuit(a.rows(), std::move(cs));
  }

  Index order() const { return n_; }
  const std::vector<Circuit<S>>& circuits() const { return circuits_; }
  const S& weight() const { return weight_; }
  Index length() const { return length_; }
  VertexMask mask() const { return mask_; }
  bool empty() const { return circuits_.empty(); }
  bool contains(Index v) const { return (mask_ & bit(v)) != 0; }

  std::vector<Index> vertices() const {
    std::vector<Index> vs;
    for (Index v = 0; v < n_; ++v)
      if (contains(v)) vs.push_back(v);
    return vs;
  }

  /// σ_C: successor inside the owning circuit, identity off V(C).
  Index successor(Index v) const {
    for (const auto& c : circuits_)
      for (std::size_t k = 0; k < c.vertices.size(); ++k)
        if (c.vertices[k] == v) return c.successor(k);
    return v;
  }

  Index predecessor(Index v) const {
    for (const auto& c : circuits_)
      for (std::size_t k = 0; k < c.vertices.size(); ++k)
        if (c.successor(k) == v) return c.vertices[k];
    return v;
  }

  /// σ_C as a full permutation of {0, …, n-1}.
  std::vector<Index> successor_map() const {
    std::vector<Index> sigma(static_cast<std::size_t>(n_));
    for (Index v = 0; v < n_; ++v) sigma[static_cast<std::size_t>(v)] = v;
    for (const auto& c : circuits_)
      for (std::size_t k = 0; k < c.vertices.size(); ++k)
        sigma[static_cast<std::size_t>(c.vertices[k])] = c.successor(k);
    return sigma;
  }

  bool has_edge(Index i, Index j) const { return contains(i) && successor(i) == j; }

  std::vector<std::pair<Index, Index>> edges() const {
    std::vector<std::pair<Index, Index>> es;
    for (const auto& c : circuits_)
      for (std::size_t k = 0; k < c.vertices.size(); ++k) es.emplace_back(c.vertices[k], c.successor(k));
    std::sort(es.begin(), es.end());
    return es;
  }

  /// ←C: every edge reversed, weights re-read from A.
  MultiCircuit reversed(const Matrix<S>& a) const {
    std::vector<std::vector<Index>> cycles;
    for (const auto& c : circuits_) cycles.emplace_back(c.vertices.rbegin(), c.vertices.rend());
    return from_cycles(a, cycles);
  }

  /// Value of this term in χ_A(λ): w(C) ⊗ λ^{n − ℓ(C)}.
  S term(const S& lambda) const { return otimes(weight_, lambda.pow(n_ - length_)); }

  /// 1-based "{(1,2),(3)}" notation; "{}" when empty.
  std::string str() const {
    std::string s = "{";
    for (std::size_t k = 0; k < circuits_.size(); ++k) {
      if (k) s += ",";
      s += circuits_[k].str();
    }
    return s + "}";
  }

  friend bool operator==(const MultiCircuit& a, const MultiCircuit& b) {
    return a.n_ == b.n_ && a.circuits_ == b.circuits_;
  }

  /// Canonical order: sorted vertex sets lexicographically, then the circuits.
  friend bool operator<(const MultiCircuit& a, const MultiCircuit& b) {
    const auto va = a.vertices(), vb = b.vertices();
    if (va != vb) return va < vb;
    return a.circuits_ < b.circuits_;
  }

 private:
  Index n_ = 0;
  std::vector<Circuit<S>> circuits_;
  S weight_;
  Index length_ = 0;
  VertexMask mask_ = 0;
};

/// Every set of pairwise vertex-disjoint elementary circuits, including ∅,
/// in canonical order.
template <MaxPlusScalar S>
std::vector<MultiCircuit<S>> multi_circuits(const Digraph<S>& g, const Guard& guard = {}) {
  const Index n = g.vertex_count();
  guard.check_order(n, "multi_circuits");
  const auto circuits = elementary_circuits(g);
  if (circuits.size() > guard.max_items)
    throw CapacityError("multi_circuits: too many elementary circuits");
  std::vector<MultiCircuit<S>> out;
  std::vector<Circuit<S>> chosen;
  std::function<void(std::size_t, VertexMask)> rec = [&](std::size_t from, VertexMask used) {
    if (out.size() >= guard.max_items)
      throw CapacityError("multi_circuits: more than " + std::to_string(guard.max_items) +
                          " multi-circuits");
    out.emplace_back(n, chosen);
    for (std::size_t k = from; k < circuits.size(); ++k) {
      const VertexMask m = circuits[k].mask();
      if (used & m) continue;
      chosen.push_back(circuits[k]);
      rec(k + 1, used | m);
      chosen.pop_back();
    }
  };
  rec(0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

/// Maximum average circuit weight λ(A) by Karp's recurrence over walks from
/// a virtual source joined to every vertex; ε when G(A) is acyclic.
template <MaxPlusScalar S>
S max_cycle_mean(const Matrix<S>& a) {
  require_square(a, "max_cycle_mean");
  const Index n = a.rows();
  if (n == 0) return S::epsilon();
  // walk[k](v): heaviest walk with exactly k edges ending at v.
  std::vector<Vector<S>> walk(static_cast<std::size_t>(n + 1));
  walk[0] = Vector<S>::Constant(n, S::unit());
  for (Index k = 1; k <= n; ++k) {
    walk[static_cast<std::size_t>(k)] = eps_vector<S>(n);
    auto& cur = walk[static_cast<std::size_t>(k)];
    const auto& prev = walk[static_cast<std::size_t>(k - 1)];
    for (Index u = 0; u < n; ++u) {
      if (!prev(u).is_finite()) continue;
      for (Index v = 0; v < n; ++v)
        if (a(u, v).is_finite()) cur(v) = oplus(cur(v), otimes(prev(u), a(u, v)));
    }
  }
  S best = S::epsilon();
  const auto& last = walk[static_cast<std::size_t>(n)];
  for (Index v = 0; v < n; ++v) {
    if (!last(v).is_finite()) continue;
    std::optional<S> worst;
    for (Index k = 0; k < n; ++k) {
      const auto& wk = walk[static_cast<std::size_t>(k)](v);
      if (!wk.is_finite()) continue;
      S mean = last(v).over(wk).root(n - k);
      if (!worst || mean < *worst) worst = std::move(mean);
    }
    best = oplus(best, *worst);
  }
  return best;
}

template <MaxPlusScalar S>
struct CriticalGraph {
  S cycle_mean;
  Digraph<S> graph;
  /// Connected components, each sorted, ordered by smallest vertex.
  std::vector<std::vector<Index>> components;

  std::vector<Index> vertices() const {
    std::vector<Index> vs;
    for (const auto& c : components) vs.insert(vs.end(), c.begin(), c.end());
    std::sort(vs.begin(), vs.end());
    return vs;
  }
};

/// G^c(A): the edges lying on some circuit of average weight λ(A).
///
/// An edge (i,j) is critical iff [(−λ)⊗A]_ij ⊗ [((−λ)⊗A)*]_ji = e.
template <MaxPlusScalar S>
CriticalGraph<S> critical_graph(const Matrix<S>& a) {
  const S lambda = max_cycle_mean(a);
  if (!lambda.is_finite()) throw NoCriticalGraphError("critical_graph: G(A) has no circuit");
  const Index n = a.rows();
  const Matrix<S> scaled = otimes(lambda.inverse(), a);
  const Matrix<S> star = kleene_star(scaled);
  CriticalGraph<S> cg{lambda, Digraph<S>(n), {}};
  std::vector<Index> parent(static_cast<std::size_t>(n));
  for (Index v = 0; v < n; ++v) parent[static_cast<std::size_t>(v)] = v;
  std::function<Index(Index)> find = [&](Index v) {
    auto& p = parent[static_cast<std::size_t>(v)];
    return p == v ? v : (p = find(p));
  };
  VertexMask on = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (!scaled(i, j).is_finite()) continue;
      if (otimes(scaled(i, j), star(j, i)) == S::unit()) {
        cg.graph.add_edge(i, j, a(i, j));
        on |= bit(i) | bit(j);
        parent[static_cast<std::size_t>(find(i))] = find(j);
      }
    }
  std::vector<std::vector<Index>> groups(static_cast<std::size_t>(n));
  for (Index v = 0; v < n; ++v)
    if (on & bit(v)) groups[static_cast<std::size_t>(find(v))].push_back(v);
  for (auto& g : groups)
    if (!g.empty()) cg.components.push_back(std::move(g));
  std::sort(cg.components.begin(), cg.components.end());
  return cg;
}

/// Multi-circuits maximizing w(C) ⊗ λ^{n − ℓ(C)}; for λ = ε, those of
/// maximum length and, among them, maximum weight.
template <MaxPlusScalar S>
std::vector<MultiCircuit<S>> lambda_maximal_multicircuits(const std::vector<MultiCircuit<S>>& all,
                                                          const S& lambda) {
  std::vector<MultiCircuit<S>> best;
  auto better = [&](const MultiCircuit<S>& c, const MultiCircuit<S>& d) -> std::strong_ordering {
    if (lambda.is_finite()) return c.term(lambda) <=> d.term(lambda);
    if (auto o = c.length() <=> d.length(); o != 0) return o;
    return c.weight() <=> d.weight();
  };
  for (const auto& c : all) {
    if (best.empty()) {
      best.push_back(c);
      continue;
    }
    const auto o = better(c, best.front());
    if (o > 0) {
      best.assign(1, c);
    } else if (o == 0) {
      best.push_back(c);
    }
  }
  return best;
}

template <MaxPlusScalar S>
std::vector<MultiCircuit<S>> lambda_maximal_multicircuits(const Matrix<S>& a, const S& lambda,
                                                          const Guard& guard = {}) {
  return lambda_maximal_multicircuits(multi_circuits(graph_of(a), guard), lambda);
}

}  // namespace tropeig
