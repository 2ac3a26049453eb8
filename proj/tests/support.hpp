#pragma once

// Shared fixtures, random generators and brute-force oracles for the tests.
// The oracles deliberately avoid the library algorithms they are compared with.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tropeig/algeig.hpp"
#include "tropeig/charpoly.hpp"
#include "tropeig/graph.hpp"
#include "tropeig/indep_orth.hpp"
#include "tropeig/matrix.hpp"
#include "tropeig/residuation.hpp"
#include "tropeig/spectral.hpp"

namespace tt {

using namespace tropeig;

inline MaxScalar q(long p, long d = 1) { return MaxScalar(Rational(p, d)); }
inline const MaxScalar E = MaxScalar::epsilon();

inline MaxMatrix mat(std::initializer_list<std::initializer_list<MaxScalar>> rows) {
  const Index n = static_cast<Index>(rows.size());
  const Index m = static_cast<Index>(rows.begin()->size());
  MaxMatrix a(n, m);
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (const auto& x : r) a(i, j++) = x;
    ++i;
  }
  return a;
}

inline MaxVector vec(std::initializer_list<MaxScalar> xs) { return make_vector<MaxScalar>(xs); }

inline MaxMatrix diag(std::initializer_list<MaxScalar> d) {
  const Index n = static_cast<Index>(d.size());
  MaxMatrix a = eps_matrix<MaxScalar>(n, n);
  Index i = 0;
  for (const auto& x : d) {
    a(i, i) = x;
    ++i;
  }
  return a;
}

inline MaxMatrix A1() { return mat({{6, 5, 0}, {5, 4, E}, {0, E, 2}}); }
inline MaxMatrix A2() { return mat({{10, 10, 9, E}, {9, 1, E, E}, {E, E, E, 9}, {9, E, E, E}}); }

/// Multi-circuit from 1-based cycles.
inline MultiCircuit<MaxScalar> mc(const MaxMatrix& a, std::vector<std::vector<Index>> cycles) {
  for (auto& c : cycles)
    for (auto& v : c) --v;
  return MultiCircuit<MaxScalar>::from_cycles(a, cycles);
}

// ---------------------------------------------------------------- random

/// Small rational pool used by every random generator.
inline std::vector<MaxScalar> pool() { return {E, q(-2), q(-1), q(-1, 2), q(0), q(1, 2), q(1), q(2), q(3)}; }

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t next() { return rng_(); }
  Index index(Index bound) { return static_cast<Index>(rng_() % static_cast<std::uint64_t>(bound)); }
  bool coin(int percent) { return static_cast<int>(rng_() % 100) < percent; }

  MaxScalar entry(int eps_percent = 25) {
    static const auto p = pool();
    if (coin(eps_percent)) return E;
    return p[1 + static_cast<std::size_t>(index(static_cast<Index>(p.size()) - 1))];
  }

  MaxScalar finite() { return entry(0); }

  MaxMatrix matrix(Index n, int eps_percent = 25) {
    MaxMatrix a(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) a(i, j) = entry(eps_percent);
    return a;
  }

  MaxMatrix symmetric(Index n, int eps_percent = 25) {
    MaxMatrix a(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = entry(eps_percent);
    return a;
  }

  /// Random matrix with at least one all-ε column, which makes ε a root.
  MaxMatrix with_eps_column(Index n, int eps_percent = 25) {
    MaxMatrix a = matrix(n, eps_percent);
    const Index c = index(n);
    for (Index i = 0; i < n; ++i) a(i, c) = E;
    return a;
  }

  MaxVector vector(Index n, int eps_percent = 25) {
    MaxVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = entry(eps_percent);
    return v;
  }

  /// Random generalized permutation matrix.
  MaxMatrix monomial(Index n) {
    std::vector<Index> perm(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng_);
    MaxMatrix p = eps_matrix<MaxScalar>(n, n);
    for (Index i = 0; i < n; ++i) p(i, perm[static_cast<std::size_t>(i)]) = finite();
    return p;
  }

 private:
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------- oracles

struct BruteDet {
  MaxScalar value;
  std::vector<std::vector<Index>> attaining;
};

/// Every permutation via std::next_permutation.
inline BruteDet brute_det(const MaxMatrix& a) {
  const Index n = a.rows();
  std::vector<Index> p(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  BruteDet r{E, {}};
  do {
    MaxScalar w = MaxScalar::unit();
    for (Index i = 0; i < n; ++i) w = otimes(w, a(i, p[static_cast<std::size_t>(i)]));
    if (!w.is_finite()) continue;
    if (r.value < w) {
      r.value = w;
      r.attaining.clear();
    }
    if (r.value == w) r.attaining.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return r;
}

/// E ⊕ A ⊕ … ⊕ A^{n-1} by repeated products.
inline MaxMatrix power_sum_star(const MaxMatrix& a) {
  const Index n = a.rows();
  MaxMatrix sum = unit_matrix<MaxScalar>(n), pw = unit_matrix<MaxScalar>(n);
  for (Index k = 1; k < n; ++k) {
    pw = otimes(pw, a);
    sum = oplus(sum, pw);
  }
  return sum;
}

struct BruteCircuit {
  std::vector<Index> vertices;
  MaxScalar weight;
};

/// Elementary circuits by trying every ordered selection of distinct vertices
/// that starts at its smallest member.
inline std::vector<BruteCircuit> brute_circuits(const MaxMatrix& a) {
  const Index n = a.rows();
  std::vector<BruteCircuit> out;
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    std::vector<Index> vs;
    for (Index v = 0; v < n; ++v)
      if (s & (1u << v)) vs.push_back(v);
    std::vector<Index> rest(vs.begin() + 1, vs.end());
    do {
      std::vector<Index> seq{vs.front()};
      seq.insert(seq.end(), rest.begin(), rest.end());
      MaxScalar w = MaxScalar::unit();
      for (std::size_t k = 0; k < seq.size(); ++k) w = otimes(w, a(seq[k], seq[(k + 1) % seq.size()]));
      if (w.is_finite()) out.push_back({seq, w});
    } while (std::next_permutation(rest.begin(), rest.end()));
  }
  return out;
}

inline MaxScalar brute_max_cycle_mean(const MaxMatrix& a) {
  MaxScalar best = E;
  for (const auto& c : brute_circuits(a)) best = oplus(best, c.weight.root(static_cast<long>(c.vertices.size())));
  return best;
}

inline MaxMatrix principal(const MaxMatrix& a, const std::vector<Index>& s) {
  MaxMatrix m(static_cast<Index>(s.size()), static_cast<Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = a(s[i], s[j]);
  return m;
}

/// c_k as the largest permanent of an (n−k)×(n−k) principal submatrix.
inline std::vector<MaxScalar> brute_charpoly(const MaxMatrix& a) {
  const Index n = a.rows();
  std::vector<MaxScalar> c(static_cast<std::size_t>(n + 1), E);
  c[static_cast<std::size_t>(n)] = MaxScalar::unit();
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    std::vector<Index> vs;
    for (Index v = 0; v < n; ++v)
      if (s & (1u << v)) vs.push_back(v);
    auto& ck = c[static_cast<std::size_t>(n) - vs.size()];
    ck = oplus(ck, brute_det(principal(a, vs)).value);
  }
  return c;
}

/// det(A ⊕ t ⊗ E_n) by brute force.
inline MaxScalar char_value(const MaxMatrix& a, const MaxScalar& t) {
  return brute_det(oplus(a, otimes(t, unit_matrix<MaxScalar>(a.rows())))).value;
}

/// Feasibility of difference constraints x_p − x_q ≤ c by Bellman-Ford.
class DifferenceSystem {
 public:
  explicit DifferenceSystem(Index n) : n_(n) {}
  void leq(Index p, Index q, const Rational& c) { edges_.push_back({q, p, c}); }
  void eq(Index p, Index q, const Rational& c) {
    leq(p, q, c);
    leq(q, p, Rational(-c));
  }

  bool feasible() const {
    std::vector<Rational> d(static_cast<std::size_t>(n_), Rational(0));
    for (Index it = 0; it <= n_; ++it) {
      bool changed = false;
      for (const auto& e : edges_) {
        const Rational cand = d[static_cast<std::size_t>(e.from)] + e.w;
        if (cand < d[static_cast<std::size_t>(e.to)]) {
          d[static_cast<std::size_t>(e.to)] = cand;
          changed = true;
        }
      }
      if (!changed) return true;
    }
    return false;
  }

 private:
  struct Edge {
    Index from, to;
    Rational w;
  };
  Index n_;
  std::vector<Edge> edges_;
};

/// Whether A has a non-zero vector in its tropical kernel. For every support
/// S of x and every choice of two maximizing columns per row, the row
/// conditions form a system of difference constraints.
inline bool brute_has_kernel(const MaxMatrix& a) {
  const Index n = a.rows(), m = a.cols();
  for (std::uint32_t s = 1; s < (1u << m); ++s) {
    std::vector<Index> sup;
    for (Index j = 0; j < m; ++j)
      if (s & (1u << j)) sup.push_back(j);
    std::vector<std::vector<std::pair<Index, Index>>> choices;
    bool dead = false;
    for (Index i = 0; i < n && !dead; ++i) {
      std::vector<Index> fin;
      for (Index j : sup)
        if (a(i, j).is_finite()) fin.push_back(j);
      if (fin.empty()) continue;
      if (fin.size() == 1) {
        dead = true;
        break;
      }
      std::vector<std::pair<Index, Index>> row;
      for (std::size_t x = 0; x < fin.size(); ++x)
        for (std::size_t y = x + 1; y < fin.size(); ++y) row.emplace_back(fin[x], fin[y]);
      choices.push_back(std::move(row));
    }
    if (dead) continue;
    std::vector<Index> rows;
    for (Index i = 0; i < n; ++i) {
      bool any = false;
      for (Index j : sup) any = any || a(i, j).is_finite();
      if (any) rows.push_back(i);
    }
    std::vector<std::size_t> pick(choices.size(), 0);
    for (;;) {
      DifferenceSystem sys(m);
      for (std::size_t r = 0; r < choices.size(); ++r) {
        const Index i = rows[r];
        const auto [p, qq] = choices[r][pick[r]];
        // a_ip + x_p = a_iq + x_q ≥ a_ik + x_k
        sys.eq(p, qq, Rational(a(i, qq).value() - a(i, p).value()));
        for (Index k : sup)
          if (a(i, k).is_finite() && k != p) sys.leq(k, p, Rational(a(i, p).value() - a(i, k).value()));
      }
      if (sys.feasible()) return true;
      std::size_t r = 0;
      while (r < pick.size() && ++pick[r] == choices[r].size()) pick[r++] = 0;
      if (r == pick.size()) break;
    }
  }
  return false;
}

/// Classical eigenvalues by brute force: for each support S closed under
/// incoming edges, λ(A_SS) with the star column of a critical vertex.
inline std::vector<std::pair<MaxScalar, MaxVector>> brute_eigenpairs(const MaxMatrix& a) {
  const Index n = a.rows();
  std::vector<std::pair<MaxScalar, MaxVector>> out;
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    std::vector<Index> vs;
    for (Index v = 0; v < n; ++v)
      if (s & (1u << v)) vs.push_back(v);
    const MaxMatrix sub = principal(a, vs);
    const MaxScalar lambda = brute_max_cycle_mean(sub);
    if (!lambda.is_finite()) continue;
    const MaxMatrix star = power_sum_star(otimes(lambda.inverse(), sub));
    for (std::size_t k = 0; k < vs.size(); ++k) {
      const Index kk = static_cast<Index>(k);
      // k is critical iff the strict closure returns to k with weight 0.
      const MaxMatrix scaled = otimes(lambda.inverse(), sub);
      if (!(otimes(scaled, star)(kk, kk) == MaxScalar::unit())) continue;
      MaxVector x = eps_vector<MaxScalar>(n);
      for (std::size_t i = 0; i < vs.size(); ++i) x(vs[i]) = star(static_cast<Index>(i), kk);
      out.emplace_back(lambda, x);
    }
  }
  return out;
}

/// Shrinks a failing matrix by replacing entries with ε while `fails` stays true.
template <class Pred>
MaxMatrix minimize_counterexample(MaxMatrix a, Pred fails, bool keep_symmetric) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j) {
        if (!a(i, j).is_finite()) continue;
        MaxMatrix b = a;
        b(i, j) = E;
        if (keep_symmetric) b(j, i) = E;
        if (fails(b)) {
          a = b;
          progress = true;
        }
      }
  }
  return a;
}

}  // namespace tt
