#include "tropeig/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tropeig/algeig.hpp"
#include "tropeig/charpoly.hpp"
#include "tropeig/errors.hpp"
#include "tropeig/graph.hpp"
#include "tropeig/indep_orth.hpp"
#include "tropeig/io.hpp"
#include "tropeig/spectral.hpp"

namespace tropeig::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::string input;
  std::string format = "json";
  Index max_n = Guard{}.max_n;
  bool text = false;
  bool require = false;
  std::optional<std::string> lambda;
  bool all = false;
  std::optional<std::uint64_t> seed;
};

struct Outcome {
  Json body;
  bool verdict = true;
};

Json scalar(const MaxScalar& s) { return s.str(); }

Json vector_json(const MaxVector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i).str());
  return a;
}

Json normalized(const MaxVector& v) { return vector_json(is_trivial(v) ? v : normalize(v)); }

Json one_based(const std::vector<Index>& idx) {
  Json a = Json::array();
  for (Index i : idx) a.push_back(i + 1);
  return a;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json eig_json(const MaxMatrix& a) {
  const MaxScalar lambda = max_cycle_mean(a);
  Json j;
  j["eigenvalue"] = scalar(lambda);
  Json comps = Json::array(), basis = Json::array();
  if (lambda.is_finite()) {
    for (const auto& c : critical_graph(a).components) comps.push_back(one_based(c));
    for (const auto& v : eigenspace_basis(a).basis) basis.push_back(normalized(v));
  }
  j["critical_components"] = comps;
  j["basis"] = basis;
  return j;
}

Json charpoly_json(const TropicalPolynomial<MaxScalar>& p) {
  Json j;
  Json cs = Json::array(), rs = Json::array();
  for (const auto& c : p.coefficients()) cs.push_back(scalar(c));
  for (const auto& r : p.roots()) rs.push_back(Json{{"value", scalar(r.value)}, {"multiplicity", r.multiplicity}});
  j["coefficients"] = cs;
  j["roots"] = rs;
  return j;
}

Json eigenspace_json(const AlgebraicEigenspace& w, Index multiplicity) {
  Json j;
  j["eigenvalue"] = scalar(w.eigenvalue);
  j["multiplicity"] = multiplicity;
  j["witness"] = w.witness.str();
  Json classes = Json::array();
  for (const auto& h : w.valid_classes) classes.push_back(one_based(h));
  j["valid_classes"] = classes;
  Json basis = Json::array();
  for (const auto& v : w.basis) basis.push_back(normalized(v));
  j["basis"] = basis;
  return j;
}

Json critical_json(const CriticalCircuits& c) {
  Json circuits = Json::array();
  for (const auto& x : c.circuits) circuits.push_back(x.str());
  return Json{{"lambda", scalar(c.lambda)}, {"anchor", c.anchor.str()}, {"critical_circuits", circuits}};
}

Json hypothesis_json(const HypothesisReport& h) {
  Json j;
  j["holds"] = h.holds;
  Json per = Json::array();
  for (const auto& c : h.per_root) per.push_back(critical_json(c));
  j["per_root"] = per;
  j["violation"] = h.violation ? critical_json(*h.violation) : Json(nullptr);
  return j;
}

Json star_json(const StarCheck<MaxScalar>& s) {
  Json j;
  j["holds"] = s.holds;
  if (s.witness)
    j["witness"] = Json{{"lambda", scalar(s.witness->lambda)},
                        {"first", s.witness->first.str()},
                        {"second", s.witness->second.str()}};
  else
    j["witness"] = nullptr;
  return j;
}

Outcome indep_outcome(const MaxMatrix& a, const Guard& g) {
  Outcome o;
  const auto u = union_is_basis_of_sum(a, g);
  Json redundant = Json::array();
  for (auto k : u.redundant)
    redundant.push_back(Json{{"eigenvalue", scalar(u.vectors[k].eigenvalue)}, {"vector", normalized(u.vectors[k].vector)}});
  o.body["union_is_basis"] = u.is_basis;
  o.body["redundant"] = redundant;
  Json inter = Json::array();
  bool all_trivial = true;
  const auto roots = algebraic_eigenvalues(a, g);
  for (std::size_t p = 0; p < roots.size(); ++p)
    for (std::size_t q = p + 1; q < roots.size(); ++q) {
      const bool t = intersection_trivial(a, roots[p].value, roots[q].value, g);
      all_trivial = all_trivial && t;
      inter.push_back(Json{{"lambda", scalar(roots[p].value)}, {"mu", scalar(roots[q].value)}, {"trivial", t}});
    }
  o.body["intersections"] = inter;
  const auto h = main1_hypothesis(a, g);
  o.body["hypothesis"] = hypothesis_json(h);
  o.verdict = u.is_basis && all_trivial && h.holds;
  return o;
}

Outcome orth_outcome(const MaxMatrix& a, const Guard& g) {
  Outcome o;
  const auto r = verify_symmetric_orthogonality(a, g);
  o.body["orthogonal"] = r.orthogonal;
  Json pairs = Json::array();
  for (const auto& p : r.pairs)
    pairs.push_back(Json{{"lambda", scalar(p.lambda)},
                         {"mu", scalar(p.mu)},
                         {"x", normalized(p.report.x)},
                         {"y", normalized(p.report.y)},
                         {"product", scalar(p.report.product)},
                         {"attaining", one_based(p.report.attaining)},
                         {"orthogonal", p.report.orthogonal}});
  o.body["pairs"] = pairs;
  o.verdict = r.orthogonal;
  return o;
}

std::vector<MaxScalar> selected_lambdas(const MaxMatrix& a, const Options& opt, const Guard& g) {
  if (opt.lambda && !opt.all) return {parse_token(*opt.lambda)};
  std::vector<MaxScalar> out;
  for (const auto& r : algebraic_eigenvalues(a, g)) out.push_back(r.value);
  return out;
}

Outcome algeig_outcome(const MaxMatrix& a, const Options& opt, const Guard& g) {
  Outcome o;
  const auto poly = char_poly(a, g);
  Json spaces = Json::array();
  for (const auto& l : selected_lambdas(a, opt, g))
    spaces.push_back(eigenspace_json(algebraic_eigenspace(a, l, g), poly.multiplicity(l)));
  o.body["eigenspaces"] = spaces;
  return o;
}

Outcome oracle_outcome(const MaxMatrix& a, const Options& opt, const Guard& g) {
  Outcome o;
  PerturbOptions po;
  po.guard = g;
  const auto gp = draw_generic_perturbation(a, *opt.seed, po);
  o.body["seed"] = *opt.seed;
  o.body["draw"] = gp.draw;
  Json spaces = Json::array();
  for (const auto& l : selected_lambdas(a, opt, g)) {
    const auto w = perturb_oracle(a, l, *opt.seed, po);
    const auto direct = algebraic_eigenspace(a, l, g);
    const bool agrees = same_span(w.basis, direct.basis);
    o.verdict = o.verdict && agrees;
    Json basis = Json::array();
    for (const auto& v : w.basis) basis.push_back(normalized(v));
    spaces.push_back(Json{{"eigenvalue", scalar(l)}, {"basis", basis}, {"agrees_with_direct", agrees}});
  }
  o.body["eigenspaces"] = spaces;
  return o;
}

Outcome report_outcome(const MaxMatrix& a, const Guard& g) {
  Outcome o;
  const auto poly = char_poly(a, g);
  o.body["eigen_summary"] = eig_json(a);
  o.body["charpoly"] = charpoly_json(poly);
  Json spaces = Json::array();
  for (const auto& r : poly.roots())
    spaces.push_back(eigenspace_json(algebraic_eigenspace(a, r.value, g), r.multiplicity));
  o.body["eigenspaces"] = spaces;
  auto ind = indep_outcome(a, g);
  o.body["independence"] = Json{{"union_is_basis", ind.body["union_is_basis"]},
                                {"redundant", ind.body["redundant"]},
                                {"intersections", ind.body["intersections"]}};
  o.verdict = ind.body["union_is_basis"].get<bool>();
  for (const auto& x : ind.body["intersections"]) o.verdict = o.verdict && x["trivial"].get<bool>();
  if (is_symmetric(a)) {
    auto orth = orth_outcome(a, g);
    o.body["orthogonality"] = orth.body;
    o.verdict = o.verdict && orth.verdict;
  } else {
    o.body["orthogonality"] = nullptr;
  }
  o.body["diagnostics"] = Json{{"star", star_json(star_assumption_holds(a, g))},
                               {"hypothesis", ind.body["hypothesis"]}};
  return o;
}

bool is_leaf(const Json& j) { return !j.is_structured(); }

std::string leaf_text(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

void render_text(const Json& j, int depth, std::ostream& os) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  auto inline_array = [](const Json& arr) {
    std::string s = "[";
    bool first = true;
    for (const auto& x : arr) {
      s += (first ? "" : ", ") + leaf_text(x);
      first = false;
    }
    return s + "]";
  };
  auto emit = [&](const std::string& head, const Json& v) {
    if (is_leaf(v)) {
      os << pad << head << leaf_text(v) << "\n";
    } else if (v.is_array() && std::all_of(v.begin(), v.end(), is_leaf)) {
      os << pad << head << inline_array(v) << "\n";
    } else if (v.empty()) {
      os << pad << head << (v.is_array() ? "[]" : "{}") << "\n";
    } else {
      os << pad << (head.empty() ? "-" : head.substr(0, head.size() - 1)) << "\n";
      render_text(v, depth + 1, os);
    }
  };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) emit(k + ": ", v);
  } else if (j.is_array()) {
    for (const auto& v : j) emit("- ", v);
  } else {
    os << pad << leaf_text(j) << "\n";
  }
}

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read input file \"" + path + "\"");
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact max-plus algebraic eigenvalues and eigenvectors", "tropeig"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", opt.input, "Matrix document path, or - for stdin")->required();
    sub->add_option("--format", opt.format, "Input format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--max-n", opt.max_n, "Largest order accepted by exhaustive enumerations")
        ->check(CLI::Range(1, 63));
    auto* json_flag = sub->add_flag("--json", "JSON output (default)");
    sub->add_flag("--text", opt.text, "Indented plain-text output")->excludes(json_flag);
    sub->add_flag("--require", opt.require, "Exit 1 when the verdict is negative");
  };

  auto* eig = app.add_subcommand("eig", "Classical eigenvalue and eigenspace basis");
  auto* charpoly = app.add_subcommand("charpoly", "Characteristic polynomial and its roots");
  auto* algeig = app.add_subcommand("algeig", "Algebraic eigenspaces");
  auto* indep = app.add_subcommand("indep", "Independence of algebraic eigenspaces");
  auto* orth = app.add_subcommand("orth", "Orthogonality for symmetric matrices");
  auto* star = app.add_subcommand("check-star", "Genericity assumption on multi-circuits");
  auto* oracle = app.add_subcommand("oracle", "Algebraic eigenspaces through a random perturbation");
  auto* report = app.add_subcommand("report", "Every analysis in one document");
  for (auto* s : {eig, charpoly, algeig, indep, orth, star, oracle, report}) add_common(s);

  auto* lam = algeig->add_option("--lambda", opt.lambda, "Eigenvalue token");
  algeig->add_flag("--all", opt.all, "Every root of the characteristic polynomial")->excludes(lam);
  oracle->add_option("--seed", opt.seed, "Seed of the perturbation generator")->required();
  oracle->add_option("--lambda", opt.lambda, "Eigenvalue token (default: every root)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::string text = read_input(opt.input);
    const auto doc = parse_document(text, parse_format(opt.format));
    Guard guard;
    guard.max_n = opt.max_n;
    const MaxMatrix& a = doc.matrix;
    require_square(a, "tropeig");
    guard.check_order(a.rows(), "tropeig");

    auto* sub = app.get_subcommands().front();
    const std::string cmd = sub->get_name();
    Outcome o;
    if (sub == eig) {
      o.body = eig_json(a);
    } else if (sub == charpoly) {
      o.body = charpoly_json(char_poly(a, guard));
    } else if (sub == algeig) {
      o = algeig_outcome(a, opt, guard);
    } else if (sub == indep) {
      o = indep_outcome(a, guard);
    } else if (sub == orth) {
      o = orth_outcome(a, guard);
    } else if (sub == star) {
      const auto s = star_assumption_holds(a, guard);
      o.body = star_json(s);
      o.verdict = s.holds;
    } else if (sub == oracle) {
      o = oracle_outcome(a, opt, guard);
    } else {
      o = report_outcome(a, guard);
    }

    Json doc_out;
    doc_out["command"] = cmd;
    doc_out["name"] = doc.name;
    doc_out["input_digest"] = hex64(fnv1a64(text));
    doc_out["order"] = a.rows();
    for (auto& [k, v] : o.body.items()) doc_out[k] = v;
    if (opt.text)
      render_text(doc_out, 0, out);
    else
      out << doc_out.dump(2) << "\n";
    return opt.require && !o.verdict ? 1 : 0;
  } catch (const Error& e) {
    err << "tropeig: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace tropeig::cli
