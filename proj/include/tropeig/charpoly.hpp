#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tropeig/errors.hpp"
#include "tropeig/graph.hpp"
#include "tropeig/matrix.hpp"

namespace tropeig {

/// Permutation π of {0, …, n-1} stored as its image vector.
struct Permutation {
  std::vector<Index> image;

  static Permutation identity(Index n) {
    Permutation p;
    for (Index i = 0; i < n; ++i) p.image.push_back(i);
    return p;
  }

  Index operator()(Index i) const { return image[static_cast<std::size_t>(i)]; }
  Index size() const { return static_cast<Index>(image.size()); }

  /// Non-trivial cycles in 1-based cycle notation, e.g. "(2 3 4)"; "id" for the identity.
  std::string str() const {
    std::string s;
    std::vector<bool> seen(image.size(), false);
    for (std::size_t start = 0; start < image.size(); ++start) {
      if (seen[start] || image[start] == static_cast<Index>(start)) continue;
      s += "(";
      std::size_t v = start;
      bool first = true;
      while (!seen[v]) {
        seen[v] = true;
        if (!first) s += " ";
        s += std::to_string(v + 1);
        first = false;
        v = static_cast<std::size_t>(image[v]);
      }
      s += ")";
    }
    return s.empty() ? "id" : s;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend bool operator<(const Permutation& a, const Permutation& b) { return a.image < b.image; }
};

template <MaxPlusScalar S>
struct DetResult {
  S value;
  /// Every permutation attaining the maximum, in lexicographic order of images.
  std::vector<Permutation> attaining;
  /// Two or more attaining permutations, or value ε.
  bool singular = true;
};

/// det A = ⊕_π ⊗_i a_{iπ(i)} together with all maximizing permutations.
///
/// Depth-first search over partial assignments that only follows finite
/// entries; the number of visited nodes is bounded by guard.max_items.
template <MaxPlusScalar S>
DetResult<S> tropical_det(const Matrix<S>& a, const Guard& guard = {}) {
  require_square(a, "tropical_det");
  const Index n = a.rows();
  guard.check_order(n, "tropical_det");
  DetResult<S> r{S::epsilon(), {}, true};
  std::vector<Index> image(static_cast<std::size_t>(n));
  std::size_t visited = 0;
  std::function<void(Index, VertexMask, const S&)> rec = [&](Index row, VertexMask used,
                                                              const S& w) {
    if (++visited > guard.max_items)
      throw CapacityError("tropical_det: permutation search exceeds the enumeration guard");
    if (row == n) {
      if (r.value < w) {
        r.value = w;
        r.attaining.clear();
      }
      if (r.value == w) r.attaining.push_back(Permutation{image});
      return;
    }
    for (Index j = 0; j < n; ++j) {
      if ((used & bit(j)) || !a(row, j).is_finite()) continue;
      image[static_cast<std::size_t>(row)] = j;
      rec(row + 1, used | bit(j), otimes(w, a(row, j)));
    }
  };
  rec(0, 0, S::unit());
  if (!r.value.is_finite()) r.attaining.clear();
  std::sort(r.attaining.begin(), r.attaining.end());
  r.singular = !r.value.is_finite() || r.attaining.size() >= 2;
  return r;
}

/// True iff every row of A ⊗ x attains its maximum at least twice or is ε.
template <MaxPlusScalar S>
bool kernel_member(const Matrix<S>& a, const Vector<S>& x) {
  if (a.cols() != x.size()) throw DimensionError("kernel_member: dimension mismatch");
  for (Index i = 0; i < a.rows(); ++i) {
    S best = S::epsilon();
    int hits = 0;
    for (Index j = 0; j < a.cols(); ++j) {
      const S t = otimes(a(i, j), x(j));
      if (!t.is_finite()) continue;
      if (best < t) {
        best = t;
        hits = 1;
      } else if (best == t) {
        ++hits;
      }
    }
    if (best.is_finite() && hits < 2) return false;
  }
  return true;
}

/// A with row r and column c removed.
template <MaxPlusScalar S>
Matrix<S> minor_matrix(const Matrix<S>& a, Index r, Index c) {
  const Index n = a.rows();
  Matrix<S> m(n - 1, a.cols() - 1);
  for (Index i = 0, mi = 0; i < n; ++i) {
    if (i == r) continue;
    for (Index j = 0, mj = 0; j < a.cols(); ++j) {
      if (j == c) continue;
      m(mi, mj++) = a(i, j);
    }
    ++mi;
  }
  return m;
}

/// [adj A]_ij = det A^{(j,i)}. The 1×1 case returns [e], the empty determinant.
template <MaxPlusScalar S>
Matrix<S> adjugate(const Matrix<S>& a, const Guard& guard = {}) {
  require_square(a, "adjugate");
  const Index n = a.rows();
  guard.check_order(n, "adjugate");
  Matrix<S> adj(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) adj(i, j) = tropical_det(minor_matrix(a, j, i), guard).value;
  return adj;
}

/// Root of a tropical polynomial with its multiplicity.
template <MaxPlusScalar S>
struct Root {
  S value;
  Index multiplicity;

  friend bool operator==(const Root&, const Root&) = default;
};

/// f(t) = ⊕_k c_k ⊗ t^{⊗k} with its factorization into linear factors.
template <MaxPlusScalar S>
class TropicalPolynomial {
 public:
  TropicalPolynomial() = default;

  /// Requires a non-ε leading coefficient.
  explicit TropicalPolynomial(std::vector<S> coefficients) : c_(std::move(coefficients)) {
    if (c_.empty() || !c_.back().is_finite())
      throw ArgumentError("tropical polynomial: leading coefficient must be finite");
    factor();
  }

  Index degree() const { return static_cast<Index>(c_.size()) - 1; }
  const std::vector<S>& coefficients() const& { return c_; }
  std::vector<S> coefficients() && { return std::move(c_); }
  /// Roots in descending order; ε (if present) comes last.
  const std::vector<Root<S>>& roots() const& { return roots_; }
  std::vector<Root<S>> roots() && { return std::move(roots_); }

  S evaluate(const S& t) const {
    S v = S::epsilon();
    for (std::size_t k = 0; k < c_.size(); ++k) v = oplus(v, otimes(c_[k], t.pow(static_cast<long>(k))));
    return v;
  }

  /// 0 when t is not a root.
  Index multiplicity(const S& t) const {
    for (const auto& r : roots_)
      if (r.value == t) return r.multiplicity;
    return 0;
  }

 private:
  // Upper concave hull of the points (k, c_k); consecutive hull vertices
  // a < b give the root (c_a − c_b)/(b − a) of multiplicity b − a.
  void factor() {
    std::vector<Index> hull;
    auto slope = [&](Index p, Index q) {
      return c_[static_cast<std::size_t>(q)].over(c_[static_cast<std::size_t>(p)]).root(q - p);
    };
    for (Index k = 0; k <= degree(); ++k) {
      if (!c_[static_cast<std::size_t>(k)].is_finite()) continue;
      while (hull.size() >= 2 &&
             !(slope(hull[hull.size() - 1], k) < slope(hull[hull.size() - 2], hull.back())))
        hull.pop_back();
      hull.push_back(k);
    }
    roots_.clear();
    for (std::size_t h = hull.size() - 1; h > 0; --h) {
      const Index a = hull[h - 1], b = hull[h];
      roots_.push_back({slope(a, b).inverse(), b - a});
    }
    if (hull.front() > 0) roots_.push_back({S::epsilon(), hull.front()});
  }

  std::vector<S> c_;
  std::vector<Root<S>> roots_;
};

/// χ_A from a multi-circuit list: c_k is the largest weight of a
/// multi-circuit of length n − k.
template <MaxPlusScalar S>
TropicalPolynomial<S> char_poly(const std::vector<MultiCircuit<S>>& all, Index n) {
  std::vector<S> c(static_cast<std::size_t>(n + 1), S::epsilon());
  for (const auto& m : all) {
    auto& ck = c[static_cast<std::size_t>(n - m.length())];
    ck = oplus(ck, m.weight());
  }
  c[static_cast<std::size_t>(n)] = S::unit();
  return TropicalPolynomial<S>(std::move(c));
}

/// χ_A(t) = det(A ⊕ t ⊗ E_n).
template <MaxPlusScalar S>
TropicalPolynomial<S> char_poly(const Matrix<S>& a, const Guard& guard = {}) {
  require_square(a, "char_poly");
  return char_poly(multi_circuits(graph_of(a), guard), a.rows());
}

template <MaxPlusScalar S>
std::vector<Root<S>> algebraic_eigenvalues(const Matrix<S>& a, const Guard& guard = {}) {
  return char_poly(a, guard).roots();
}

/// Γ(A,λ) = adj(A ⊕ λ ⊗ E_n).
template <MaxPlusScalar S>
Matrix<S> gamma(const Matrix<S>& a, const S& lambda, const Guard& guard = {}) {
  require_square(a, "gamma");
  if (!lambda.is_finite()) throw ArgumentError("gamma: λ must be finite");
  return adjugate(oplus(a, otimes(lambda, unit_matrix<S>(a.rows()))), guard);
}

}  // namespace tropeig
