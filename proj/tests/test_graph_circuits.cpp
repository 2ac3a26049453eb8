#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <set>

#include "support.hpp"

using namespace tt;

namespace {

std::vector<std::string> names(const std::vector<Circuit<MaxScalar>>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(c.str());
  return out;
}

std::set<std::string> names(const std::vector<MultiCircuit<MaxScalar>>& ms) {
  std::set<std::string> out;
  for (const auto& m : ms) out.insert(m.str());
  return out;
}

}  // namespace

TEST_CASE("graph_of") {
  CHECK(graph_of(eps_matrix<MaxScalar>(3, 3)).edge_count() == 0);
  const auto g1 = graph_of(A1());
  CHECK(g1.vertex_count() == 3);
  std::vector<std::pair<Index, Index>> es;
  for (const auto& e : g1.edges()) es.emplace_back(e.from + 1, e.to + 1);
  CHECK(es == std::vector<std::pair<Index, Index>>{{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}, {3, 1}, {3, 3}});
  CHECK(graph_of(A2()).edge_count() == 7);
  CHECK(g1.weight(0, 1) == q(5));
  CHECK_THROWS_AS(graph_of(MaxMatrix(eps_matrix<MaxScalar>(2, 3))), DimensionError);
  Digraph<MaxScalar> g(2);
  CHECK_THROWS_AS(g.add_edge(0, 1, E), ArgumentError);
}

TEST_CASE("elementary_circuits") {
  CHECK(elementary_circuits(graph_of(eps_matrix<MaxScalar>(3, 3))).empty());
  CHECK(names(elementary_circuits(graph_of(A1()))) ==
        std::vector<std::string>{"(1)", "(1,2)", "(1,3)", "(2)", "(3)"});
  CHECK(names(elementary_circuits(graph_of(A2()))) ==
        std::vector<std::string>{"(1)", "(1,2)", "(1,3,4)", "(2)"});
  const auto cs = elementary_circuits(graph_of(A2()));
  CHECK(cs[2].weight == q(27));
  CHECK(cs[2].average() == q(9));
}

TEST_CASE("elementary_circuits agrees with brute force") {
  Gen g(21);
  for (int t = 0; t < 150; ++t) {
    const MaxMatrix a = g.matrix(1 + g.index(5));
    std::map<std::vector<Index>, MaxScalar> brute;
    for (const auto& c : brute_circuits(a)) brute[c.vertices] = c.weight;
    const auto cs = elementary_circuits(graph_of(a));
    REQUIRE(cs.size() == brute.size());
    for (const auto& c : cs) {
      REQUIRE(brute.count(c.vertices) == 1);
      CHECK(brute[c.vertices] == c.weight);
    }
  }
}

TEST_CASE("make_circuit validates") {
  CHECK(make_circuit(A1(), {1, 0}).vertices == std::vector<Index>{0, 1});
  CHECK_THROWS_AS(make_circuit(A1(), {1, 2}), StructureError);
  CHECK_THROWS_AS(make_circuit(A1(), {0, 0}), StructureError);
  CHECK_THROWS_AS(make_circuit(A1(), {}), StructureError);
  CHECK_THROWS_AS(make_circuit(A1(), {5}), StructureError);
}

TEST_CASE("multi_circuits") {
  const auto empty = multi_circuits(graph_of(eps_matrix<MaxScalar>(2, 2)));
  REQUIRE(empty.size() == 1);
  CHECK(empty.front().empty());
  CHECK(empty.front().weight() == MaxScalar::unit());
  const auto all = multi_circuits(graph_of(A1()));
  CHECK(names(all) == std::set<std::string>{"{}", "{(1)}", "{(2)}", "{(3)}", "{(1,2)}", "{(1,3)}",
                                            "{(1),(2)}", "{(1),(3)}", "{(2),(3)}", "{(1,2),(3)}",
                                            "{(1,3),(2)}", "{(1),(2),(3)}"});
  CHECK(all.size() == 12);
  std::set<std::string> len3;
  for (const auto& m : all)
    if (m.length() == 3) len3.insert(m.str());
  CHECK(len3 == std::set<std::string>{"{(1),(2),(3)}", "{(1,2),(3)}", "{(1,3),(2)}"});
  Guard tight;
  tight.max_items = 5;
  CHECK_THROWS_AS(multi_circuits(graph_of(A1()), tight), CapacityError);
  Guard small;
  small.max_n = 2;
  CHECK_THROWS_AS(multi_circuits(graph_of(A1()), small), CapacityError);
}

TEST_CASE("multi-circuit structure") {
  const auto m = mc(A2(), {{1, 3, 4}, {2}});
  CHECK(m.length() == 4);
  CHECK(m.weight() == q(28));
  CHECK(m.successor(0) == 2);
  CHECK(m.successor(3) == 0);
  CHECK(m.predecessor(0) == 3);
  CHECK(m.successor(1) == 1);
  CHECK(m.has_edge(2, 3));
  CHECK_FALSE(m.has_edge(3, 2));
  const auto sigma = m.successor_map();
  CHECK(sigma == std::vector<Index>{2, 1, 3, 0});
  CHECK(m.term(q(1)) == q(28));
  CHECK(MultiCircuit<MaxScalar>(3).term(q(2)) == q(6));
  const MaxMatrix s = mat({{0, 1, 2}, {1, 0, 3}, {2, 3, 0}});
  const auto c = mc(s, {{1, 2, 3}});
  const auto r = c.reversed(s);
  CHECK(r.str() == "{(1,3,2)}");
  CHECK(r.mask() == c.mask());
  for (Index v = 0; v < 3; ++v) CHECK(r.successor(c.successor(v)) == v);
  CHECK_THROWS_AS(mc(A1(), {{1}, {1, 2}}), StructureError);
}

TEST_CASE("multi_circuits agrees with brute force over disjoint circuit subsets") {
  Gen g(22);
  for (int t = 0; t < 100; ++t) {
    const MaxMatrix a = g.matrix(1 + g.index(5));
    const auto bc = brute_circuits(a);
    // Disjoint subsets of the circuit list, counted by depth-first search.
    std::function<std::size_t(std::size_t, std::uint32_t)> count_from = [&](std::size_t k, std::uint32_t used) {
      if (k == bc.size()) return std::size_t{1};
      std::size_t total = count_from(k + 1, used);
      std::uint32_t m = 0;
      for (Index v : bc[k].vertices) m |= 1u << v;
      if (!(used & m)) total += count_from(k + 1, used | m);
      return total;
    };
    const std::size_t count = count_from(0, 0);
    const auto all = multi_circuits(graph_of(a));
    CHECK(all.size() == count);
    for (const auto& m : all) {
      MaxScalar w = MaxScalar::unit();
      Index len = 0;
      for (const auto& c : m.circuits()) {
        w = otimes(w, c.weight);
        len += c.length();
      }
      CHECK(w == m.weight());
      CHECK(len == m.length());
    }
    CHECK(std::is_sorted(all.begin(), all.end()));
  }
}

TEST_CASE("max_cycle_mean") {
  CHECK(max_cycle_mean(eps_matrix<MaxScalar>(3, 3)).is_epsilon());
  CHECK(max_cycle_mean(A1()) == q(6));
  CHECK(max_cycle_mean(A2()) == q(10));
  CHECK(max_cycle_mean(mat({{E, 1}, {2, E}})) == q(3, 2));
  CHECK(max_cycle_mean(MaxMatrix(0, 0)).is_epsilon());
  Gen g(23);
  for (int t = 0; t < 200; ++t) {
    const MaxMatrix a = g.matrix(1 + g.index(5));
    CHECK(max_cycle_mean(a) == brute_max_cycle_mean(a));
    MaxScalar via_multi = E;
    for (const auto& m : multi_circuits(graph_of(a)))
      if (!m.empty()) via_multi = oplus(via_multi, m.weight().root(m.length()));
    CHECK(max_cycle_mean(a) == via_multi);
  }
}

TEST_CASE("critical_graph") {
  const auto d = critical_graph(diag({0, 0}));
  CHECK(d.components == std::vector<std::vector<Index>>{{0}, {1}});
  CHECK(d.graph.edge_count() == 2);
  const auto c1 = critical_graph(A1());
  CHECK(c1.graph.edge_count() == 1);
  CHECK(c1.graph.has_edge(0, 0));
  const auto c2 = critical_graph(A2());
  CHECK(c2.graph.edge_count() == 1);
  CHECK(c2.graph.has_edge(0, 0));
  CHECK(c2.cycle_mean == q(10));
  const auto c3 = critical_graph(mat({{E, 1, E}, {1, E, E}, {E, E, 1}}));
  CHECK(c3.components == std::vector<std::vector<Index>>{{0, 1}, {2}});
  CHECK(c3.vertices() == std::vector<Index>{0, 1, 2});
  CHECK_THROWS_AS(critical_graph(eps_matrix<MaxScalar>(2, 2)), NoCriticalGraphError);
}

TEST_CASE("critical edges lie on circuits of maximum mean") {
  Gen g(24);
  for (int t = 0; t < 150; ++t) {
    const MaxMatrix a = g.matrix(1 + g.index(5));
    const MaxScalar lambda = brute_max_cycle_mean(a);
    if (!lambda.is_finite()) continue;
    std::set<std::pair<Index, Index>> expected;
    for (const auto& c : brute_circuits(a))
      if (c.weight.root(static_cast<long>(c.vertices.size())) == lambda)
        for (std::size_t k = 0; k < c.vertices.size(); ++k)
          expected.emplace(c.vertices[k], c.vertices[(k + 1) % c.vertices.size()]);
    std::set<std::pair<Index, Index>> got;
    for (const auto& e : critical_graph(a).graph.edges()) got.emplace(e.from, e.to);
    CHECK(got == expected);
  }
}

TEST_CASE("lambda_maximal_multicircuits") {
  CHECK(names(lambda_maximal_multicircuits(A1(), q(2))) ==
        std::set<std::string>{"{(1),(2)}", "{(1,2)}", "{(1),(2),(3)}", "{(1,2),(3)}"});
  CHECK(names(lambda_maximal_multicircuits(A2(), q(9))) == std::set<std::string>{"{(1)}", "{(1,2)}"});
  CHECK(names(lambda_maximal_multicircuits(diag({0, 0}), E)) == std::set<std::string>{"{(1),(2)}"});
  CHECK(names(lambda_maximal_multicircuits(A2(), q(10))) == std::set<std::string>{"{}", "{(1)}"});
  CHECK(names(lambda_maximal_multicircuits(A2(), q(8))) == std::set<std::string>{"{(1,2)}", "{(1,3,4)}"});
  CHECK(names(lambda_maximal_multicircuits(A2(), q(1))) ==
        std::set<std::string>{"{(1,3,4)}", "{(1,3,4),(2)}"});
}

TEST_CASE("λ-maximal multi-circuits attain χ_A(λ)") {
  Gen g(25);
  for (int t = 0; t < 100; ++t) {
    const MaxMatrix a = g.matrix(1 + g.index(5));
    const auto all = multi_circuits(graph_of(a));
    for (long num = -6; num <= 8; num += 3) {
      const MaxScalar lambda = q(num, 2);
      const auto best = lambda_maximal_multicircuits(all, lambda);
      REQUIRE_FALSE(best.empty());
      for (const auto& c : best) CHECK(c.term(lambda) == char_value(a, lambda));
    }
  }
}
