#include <algorithm>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cterm/affine.hpp"
#include "cterm/closure.hpp"
#include "cterm/oracle.hpp"
#include "cterm/parse.hpp"
#include "cterm/program.hpp"
#include "cterm/ranking.hpp"
#include "cterm/term_oct.hpp"
#include "report.hpp"

namespace py = pybind11;
using namespace cterm;

namespace {

py::object to_py(const Int& v) {
  return py::reinterpret_steal<py::object>(PyLong_FromString(v.get_str().c_str(), nullptr, 10));
}

Int from_py(const py::handle& h) { return Int(py::str(py::int_(py::reinterpret_borrow<py::object>(h))).cast<std::string>()); }

Valuation valuation(const py::sequence& point, size_t dim) {
  if (point.size() != dim) throw py::value_error("expected " + std::to_string(dim) + " values");
  Valuation v;
  for (const auto& x : point) v.push_back(from_py(x));
  return v;
}

py::object json_to_py(const report::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

// A formula together with the names of its variables.
struct Formula {
  Dnf dnf;
  std::vector<std::string> names;

  std::string text() const { return dnf_str(report::canonical(dnf), names); }
  bool contains(const py::sequence& point) const { return eval_dnf(dnf, valuation(point, names.size())); }
  void same_vars(const Formula& o) const {
    if (o.names != names) throw py::value_error("formulas are over different variables");
  }
};

struct Relation {
  std::vector<std::string> vars;
  Dnf rel;

  Octagon octagon() const {
    auto o = dnf_as_octagon(rel);
    if (!o) throw FragmentError("relation is not a single octagon");
    return *o;
  }
  AffineRel affine() const {
    if (rel.disjuncts.size() != 1) throw FragmentError("affine relation must be a single conjunction");
    auto a = affine_from_conj(rel.disjuncts[0], vars.size());
    if (!a) throw FragmentError("relation is not of the form guard && x' == A x + b");
    return *a;
  }
  Formula set(const Dnf& d) const { return {d, vars}; }
  Formula pair(const Dnf& d) const { return {d, relation_names(vars)}; }
};

ProgramOptions options(long max_prefix, long max_period, size_t max_disjuncts) {
  ProgramOptions o;
  o.detect.max_b = max_prefix;
  o.detect.max_c = max_period;
  o.max_disjuncts = max_disjuncts;
  return o;
}

size_t state_index(const Program& p, const std::string& name) {
  auto q = p.state(name);
  if (!q) throw py::key_error("unknown state '" + name + "'");
  return *q;
}

py::dict rank(const Relation& r) {
  TerminationProof p = prove_termination(r.octagon());
  py::dict d;
  d["well_founded"] = p.well_founded;
  if (!p.well_founded) {
    d["wnt"] = r.set(octagon_to_dnf(p.wnt_set));
    return d;
  }
  d["trivial"] = p.trivial;
  if (p.trivial) return d;
  const RankingWitness& w = p.witness;
  py::dict coeffs;
  for (const auto& [v, c] : w.function.coeffs()) coeffs[py::str(r.vars.at(static_cast<size_t>(v)))] = to_py(Int(c.get_num()));
  d["ranking_function"] = report::term_text(w.function, r.vars);
  d["coefficients"] = coeffs;
  d["constant"] = to_py(Int(w.function.constant().get_num()));
  d["decrease"] = to_py(w.decrease);
  d["lower_bound"] = to_py(w.lower_bound);
  d["witness_relation"] = r.pair(octagon_to_dnf(w.witness_relation));
  d["verified"] = verify_lrf(w.witness_relation, w.function, w.decrease, w.lower_bound);
  return d;
}

py::dict analyze(const Program& p, long max_prefix, long max_period, size_t max_disjuncts) {
  PrecondResult r = nt_program(p, options(max_prefix, max_period, max_disjuncts));
  py::dict d;
  d["precondition"] = Formula{r.precondition, p.vars};
  d["flat"] = r.flat;
  d["exact"] = r.exact;
  d["budget_exhausted"] = r.budget_exhausted;
  std::vector<StateContribution> sorted = r.per_state;
  std::sort(sorted.begin(), sorted.end(),
            [&](const auto& a, const auto& b) { return p.states[a.state] < p.states[b.state]; });
  py::list per;
  for (const auto& sc : sorted) {
    py::dict s;
    s["state"] = p.states[sc.state];
    s["method"] = sc.method;
    s["exact"] = sc.exact;
    s["wnt"] = Formula{sc.wnt, p.vars};
    s["pre"] = Formula{sc.pre, p.vars};
    per.append(s);
  }
  d["per_state"] = per;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Conditional termination of integer loops and programs";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<FragmentError>(m, "FragmentError", PyExc_ValueError);

  py::class_<Formula>(m, "Formula")
      .def_property_readonly("vars", [](const Formula& f) { return f.names; })
      .def_property_readonly("text", &Formula::text)
      .def("contains", &Formula::contains, py::arg("point"))
      .def("is_false", [](const Formula& f) { return !dnf_sat(f.dnf); })
      .def("entails",
           [](const Formula& a, const Formula& b) {
             a.same_vars(b);
             return entails(a.dnf, b.dnf);
           })
      .def("equivalent",
           [](const Formula& a, const Formula& b) {
             a.same_vars(b);
             return equivalent(a.dnf, b.dnf);
           })
      .def("to_json", [](const Formula& f) { return json_to_py(report::formula_to_json(f.dnf, f.names)); })
      .def("__str__", &Formula::text)
      .def("__repr__", [](const Formula& f) { return "Formula(" + f.text() + ")"; });

  m.def(
      "parse_formula",
      [](const std::string& text, const std::vector<std::string>& vars) {
        return Formula{parse_formula(text, vars, false), vars};
      },
      py::arg("text"), py::arg("vars"));

  py::class_<Relation>(m, "Relation")
      .def(py::init([](const std::string& text) {
             ParsedRelation pr = parse_relation(text);
             return Relation{pr.vars, pr.rel};
           }),
           py::arg("text"))
      .def_property_readonly("vars", [](const Relation& r) { return r.vars; })
      .def_property_readonly("text", [](const Relation& r) { return r.pair(r.rel).text(); })
      .def("is_octagonal", [](const Relation& r) { return dnf_as_octagon(r.rel).has_value(); })
      .def("wnt", [](const Relation& r) { return r.set(octagon_to_dnf(wnt(r.octagon()).set)); })
      .def("is_well_founded", [](const Relation& r) { return is_well_founded(r.octagon()); })
      .def("rank", &rank)
      .def(
          "power", [](const Relation& r, long n) {
            if (n < 1) throw py::value_error("n must be at least 1");
            return r.pair(octagon_to_dnf(fast_power(r.octagon(), Int(n))));
          },
          py::arg("n"))
      .def(
          "pre", [](const Relation& r, long n) {
            if (n < 1) throw py::value_error("n must be at least 1");
            return r.set(octagon_to_dnf(domain_of_power(r.octagon(), n)));
          },
          py::arg("n"))
      .def(
          "closure",
          [](const Relation& r, bool reflexive, long max_prefix, long max_period) {
            Dnf rd = octagon_to_dnf(r.octagon());
            RelResult star = loop_closure({rd}, r.vars.size(), options(max_prefix, max_period, 256));
            Dnf out = reflexive ? star.rel : simplify(rel_compose(rd, star.rel));
            py::dict d;
            d["relation"] = r.pair(out);
            d["exact"] = star.exact;
            d["budget_exhausted"] = star.budget_exhausted;
            return d;
          },
          py::arg("reflexive") = true, py::arg("max_prefix") = 64, py::arg("max_period") = 64)
      .def(
          "lasso_starts",
          [](const Relation& r, long box) {
            py::list out;
            for (const auto& v : kleene_fixpoint_pre(r.octagon(), BoxDomain::cube(r.vars.size(), -box, box))) {
              py::list p;
              for (const auto& x : v) p.append(to_py(x));
              out.append(py::tuple(p));
            }
            return out;
          },
          py::arg("box") = 8)
      .def("affine_wnt",
           [](const Relation& r) {
             AffineRel a = r.affine();
             if (!is_finite_monoid(a.A)) throw FragmentError("update matrix does not generate a finite monoid");
             return r.set(finite_monoid_wnt(a));
           })
      .def(
          "affine_terminates",
          [](const Relation& r, unsigned long prefix_steps) {
            SufficientOptions so;
            so.prefix_steps = prefix_steps;
            auto s = sufficient_termination(r.affine(), so);
            if (!s) throw FragmentError("update matrix is not polynomially bounded");
            return r.set(*s);
          },
          py::arg("prefix_steps") = 0)
      .def("affine_matrix",
           [](const Relation& r) {
             py::list rows;
             for (const auto& row : r.affine().A) {
               py::list l;
               for (const auto& x : row) l.append(to_py(x));
               rows.append(l);
             }
             return rows;
           })
      .def("is_finite_monoid", [](const Relation& r) { return is_finite_monoid(r.affine().A); })
      .def("__repr__", [](const Relation& r) { return "Relation(" + r.pair(r.rel).text() + ")"; });

  py::class_<Program>(m, "Program")
      .def(py::init([](const std::string& text) { return parse_program(text); }), py::arg("text"))
      .def_property_readonly("vars", [](const Program& p) { return p.vars; })
      .def_property_readonly("states", [](const Program& p) { return p.states; })
      .def_property_readonly("init", [](const Program& p) { return p.states.at(p.init); })
      .def("is_flat", [](const Program& p) { return is_flat(p).flat; })
      .def("analyze", &analyze, py::arg("max_prefix") = 64, py::arg("max_period") = 64, py::arg("max_disjuncts") = 256)
      .def(
          "summary",
          [](const Program& p, const std::string& from, const std::string& to, bool reflexive) {
            const size_t a = state_index(p, from), b = state_index(p, to);
            RelResult r = reflexive ? reflexive_transitive_relation(p, a, b) : transitive_relation(p, a, b);
            py::dict d;
            d["relation"] = Formula{r.rel, relation_names(p.vars)};
            d["exact"] = r.exact;
            d["budget_exhausted"] = r.budget_exhausted;
            return d;
          },
          py::arg("source"), py::arg("target"), py::arg("reflexive") = false)
      .def(
          "nonterminating_starts",
          [](const Program& p, long box) {
            py::list out;
            for (const auto& v : nonterminating_starts(p, BoxDomain::cube(p.nvars(), -box, box))) {
              py::list l;
              for (const auto& x : v) l.append(to_py(x));
              out.append(py::tuple(l));
            }
            return out;
          },
          py::arg("box") = 4);
}
