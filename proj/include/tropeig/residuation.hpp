#pragma once

#include <optional>
#include <vector>

#include "tropeig/errors.hpp"
#include "tropeig/matrix.hpp"

namespace tropeig {

template <MaxPlusScalar S>
struct ExpressibilityReport {
  Vector<S> target;
  std::vector<Vector<S>> generators;
  /// Greatest α_i with α_i ⊗ v_i ≤ target.
  std::vector<S> coefficients;
  bool expressible = false;
  /// Rows where ⊕ α_i ⊗ v_i falls short of the target.
  std::vector<Index> residual_rows;
};

/// Decides x ∈ span(V) by residuation: α_i = min_j (x_j − v_ij) over rows
/// with v_ij finite, which is the largest coefficient keeping α_i ⊗ v_i ≤ x.
template <MaxPlusScalar S>
ExpressibilityReport<S> expressible(const Vector<S>& x, const std::vector<Vector<S>>& gens) {
  ExpressibilityReport<S> r{x, gens, {}, false, {}};
  Vector<S> combo = eps_vector<S>(x.size());
  for (const auto& v : gens) {
    if (v.size() != x.size()) throw DimensionError("expressible: dimension mismatch");
    std::optional<S> alpha;
    bool blocked = false;
    for (Index j = 0; j < x.size(); ++j) {
      if (!v(j).is_finite()) continue;
      if (!x(j).is_finite()) {
        blocked = true;
        break;
      }
      S d = x(j).over(v(j));
      if (!alpha || d < *alpha) alpha = std::move(d);
    }
    const S a = (blocked || !alpha) ? S::epsilon() : *alpha;
    r.coefficients.push_back(a);
    if (a.is_finite()) combo = oplus(combo, otimes(a, v));
  }
  for (Index j = 0; j < x.size(); ++j)
    if (!(combo(j) == x(j))) r.residual_rows.push_back(j);
  r.expressible = r.residual_rows.empty();
  return r;
}

/// Drops trivial generators and every generator expressible by the ones
/// still kept, scanning in order; the result spans the same space.
template <MaxPlusScalar S>
std::vector<Vector<S>> minimize_generators(const std::vector<Vector<S>>& gens) {
  std::vector<Vector<S>> keep;
  for (const auto& g : gens)
    if (!is_trivial(g)) keep.push_back(g);
  for (std::size_t i = 0; i < keep.size();) {
    std::vector<Vector<S>> others;
    for (std::size_t k = 0; k < keep.size(); ++k)
      if (k != i) others.push_back(keep[k]);
    if (!others.empty() && expressible(keep[i], others).expressible) {
      keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  return keep;
}

/// Every vector of `a` lies in span(b) and vice versa.
template <MaxPlusScalar S>
bool same_span(const std::vector<Vector<S>>& a, const std::vector<Vector<S>>& b) {
  for (const auto& v : a)
    if (!is_trivial(v) && !expressible(v, b).expressible) return false;
  for (const auto& v : b)
    if (!is_trivial(v) && !expressible(v, a).expressible) return false;
  return true;
}

}  // namespace tropeig
