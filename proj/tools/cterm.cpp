#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cterm/affine.hpp"
#include "cterm/closure.hpp"
#include "cterm/oracle.hpp"
#include "cterm/parse.hpp"
#include "cterm/program.hpp"
#include "cterm/ranking.hpp"
#include "cterm/term_oct.hpp"
#include "report.hpp"

using namespace cterm;
using report::json;

namespace {

enum Exit { Ok = 0, Usage = 1, Parse = 2, Fragment = 3, Budget = 4 };

struct CliConfig {
  std::string format = "text";
  long max_prefix = 64;
  long max_period = 64;
  size_t max_disjuncts = 256;
  long box = 8;
  unsigned long seed = 1;

  ProgramOptions program_options() const {
    ProgramOptions o;
    o.detect.max_b = max_prefix;
    o.detect.max_c = max_period;
    o.max_disjuncts = max_disjuncts;
    return o;
  }
  DetectOptions detect() const { return program_options().detect; }
  bool json_out() const { return format == "json"; }
};

// "-" reads stdin, an existing path reads the file, anything else is the text itself.
std::string read_input(const std::string& arg) {
  std::stringstream ss;
  if (arg == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    ss << in.rdbuf();
    return ss.str();
  }
  return arg;
}

Program read_program(const std::string& arg) {
  std::error_code ec;
  if (arg != "-" && !std::filesystem::is_regular_file(arg, ec))
    throw std::runtime_error("cannot read program file '" + arg + "'");
  return parse_program(read_input(arg));
}

struct OctRelation {
  std::vector<std::string> vars;
  Octagon rel;
};

OctRelation read_octagon(const std::string& arg) {
  ParsedRelation pr = parse_relation(read_input(arg));
  auto o = dnf_as_octagon(pr.rel);
  if (!o) throw FragmentError("relation is not a single octagon: " + dnf_str(pr.rel, relation_names(pr.vars)));
  return {pr.vars, *o};
}

struct AffineInput {
  std::vector<std::string> vars;
  AffineRel rel;
};

AffineInput read_affine(const std::string& arg) {
  ParsedRelation pr = parse_relation(read_input(arg));
  if (pr.rel.disjuncts.size() != 1) throw FragmentError("affine relation must be a single conjunction");
  auto a = affine_from_conj(pr.rel.disjuncts[0], pr.vars.size());
  if (!a) throw FragmentError("relation is not of the form guard && x' == A x + b");
  return {pr.vars, *a};
}

void emit(const CliConfig& cfg, const json& j, const std::string& text) {
  if (cfg.json_out())
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

std::string matrix_text(const IntMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < m.size(); ++i) {
    os << (i ? ", [" : "[");
    for (size_t j = 0; j < m[i].size(); ++j) os << (j ? ", " : "") << m[i][j].get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

std::string poly_text(const Poly& p) {
  std::ostringstream os;
  bool first = true;
  for (size_t d = p.size(); d-- > 0;) {
    const Rational& c = p[d];
    if (c == 0) continue;
    Rational a = abs(c);
    os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
    if (d == 0 || a != 1) os << a.get_str() << (d ? "*" : "");
    if (d) os << "k" << (d > 1 ? "^" + std::to_string(d) : "");
    first = false;
  }
  return first ? "0" : os.str();
}

// rel ------------------------------------------------------------------------------------------

int rel_wnt(const CliConfig& cfg, const std::string& in) {
  OctRelation r = read_octagon(in);
  WntResult w = wnt(r.rel);
  Dnf set = octagon_to_dnf(w.set);
  json j{{"command", "rel wnt"}, {"vars", r.vars}, {"well_founded", w.set.is_bottom()},
         {"wnt", report::formula_to_json(set, r.vars)}};
  emit(cfg, j, dnf_str(report::canonical(set), r.vars) + "\n");
  return Ok;
}

int rel_rank(const CliConfig& cfg, const std::string& in) {
  OctRelation r = read_octagon(in);
  auto names = relation_names(r.vars);
  TerminationProof p = prove_termination(r.rel);
  json j{{"command", "rel rank"}, {"vars", r.vars}, {"well_founded", p.well_founded}};
  std::ostringstream os;
  os << "well-founded: " << (p.well_founded ? "yes" : "no") << "\n";
  if (!p.well_founded) {
    Dnf s = octagon_to_dnf(p.wnt_set);
    j["wnt"] = report::formula_to_json(s, r.vars);
    os << "wnt: " << dnf_str(report::canonical(s), r.vars) << "\n";
  } else if (p.trivial) {
    j["trivial"] = true;
    os << "every run is shorter than the witness power; no ranking function needed\n";
  } else {
    const RankingWitness& w = p.witness;
    bool ok = verify_lrf(w.witness_relation, w.function, w.decrease, w.lower_bound);
    Dnf wr = octagon_to_dnf(w.witness_relation);
    j["trivial"] = false;
    j["ranking_function"] = report::term_text(w.function, r.vars);
    j["decrease"] = report::int_to_json(w.decrease);
    j["lower_bound"] = report::int_to_json(w.lower_bound);
    j["witness_relation"] = report::formula_to_json(wr, names);
    j["verified"] = ok;
    os << "ranking function: " << report::term_text(w.function, r.vars) << "\n";
    os << "decrease: " << w.decrease.get_str() << "\n";
    os << "lower bound: " << w.lower_bound.get_str() << "\n";
    os << "witness relation: " << dnf_str(report::canonical(wr), names) << "\n";
    os << "verified: " << (ok ? "yes" : "no") << "\n";
  }
  emit(cfg, j, os.str());
  return Ok;
}

int rel_closure(const CliConfig& cfg, const std::string& in, bool plus) {
  OctRelation r = read_octagon(in);
  auto names = relation_names(r.vars);
  Dnf rd = octagon_to_dnf(r.rel);
  RelResult star = loop_closure({rd}, r.vars.size(), cfg.program_options());
  Dnf out = plus ? simplify(rel_compose(rd, star.rel)) : star.rel;
  json j{{"command", plus ? "rel closure --plus" : "rel closure"},
         {"vars", r.vars},
         {"status", star.budget_exhausted ? "budget-exhausted" : "ok"},
         {"exact", star.exact},
         {"closure", report::formula_to_json(out, names)}};
  std::string text = dnf_str(report::canonical(out), names) + "\n";
  if (star.budget_exhausted) text = "budget exhausted; over-approximation:\n" + text;
  emit(cfg, j, text);
  return star.budget_exhausted ? Budget : Ok;
}

int rel_power(const CliConfig& cfg, const std::string& in, long n) {
  if (n < 1) throw CLI::ValidationError("power", "n must be at least 1");
  OctRelation r = read_octagon(in);
  auto names = relation_names(r.vars);
  Dnf p = octagon_to_dnf(fast_power(r.rel, Int(n)));
  json j{{"command", "rel power"}, {"vars", r.vars}, {"n", n}, {"power", report::formula_to_json(p, names)}};
  emit(cfg, j, dnf_str(report::canonical(p), names) + "\n");
  return Ok;
}

int rel_pre(const CliConfig& cfg, const std::string& in, long n) {
  if (n < 1) throw CLI::ValidationError("pre", "n must be at least 1");
  OctRelation r = read_octagon(in);
  Dnf p = octagon_to_dnf(domain_of_power(r.rel, n));
  json j{{"command", "rel pre"}, {"vars", r.vars}, {"n", n}, {"pre", report::formula_to_json(p, r.vars)}};
  emit(cfg, j, dnf_str(report::canonical(p), r.vars) + "\n");
  return Ok;
}

// Box points with an in-box infinite run, compared with wnt.
int rel_lasso(const CliConfig& cfg, const std::string& in) {
  OctRelation r = read_octagon(in);
  BoxDomain box = BoxDomain::cube(r.vars.size(), -cfg.box, cfg.box);
  auto starts = kleene_fixpoint_pre(r.rel, box);
  Octagon w = wnt(r.rel).set;
  size_t outside = 0;
  for (const auto& v : starts)
    if (!w.contains(v)) ++outside;
  json j{{"command", "rel lasso"}, {"vars", r.vars}, {"box", cfg.box}, {"lasso_starts", starts.size()},
         {"outside_wnt", outside}};
  std::ostringstream os;
  os << "box [" << -cfg.box << "," << cfg.box << "]^" << r.vars.size() << ": " << starts.size()
     << " points with an in-box infinite run, " << outside << " outside wnt\n";
  if (!starts.empty()) {
    auto l = find_lasso(octagon_to_dnf(r.rel), box, starts.front());
    if (l) {
      auto show = [&](const Valuation& v) {
        std::string s = "(";
        for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
        return s + ")";
      };
      os << "example:";
      for (const auto& v : l->stem) os << " " << show(v);
      os << " [";
      for (size_t i = 0; i < l->cycle.size(); ++i) os << (i ? " " : "") << show(l->cycle[i]);
      os << "]^omega\n";
    }
  }
  emit(cfg, j, os.str());
  return outside == 0 ? Ok : Usage;
}

// affine -----------------------------------------------------------------------------------------

int affine_check(const CliConfig& cfg, const std::string& in) {
  AffineInput a = read_affine(in);
  bool fm = is_finite_monoid(a.rel.A);
  auto pf = poly_matrix_power(a.rel.A);
  json j{{"command", "affine check"}, {"vars", a.vars}, {"finite_monoid", fm}, {"polynomially_bounded", pf.has_value()}};
  std::ostringstream os;
  os << "matrix: " << matrix_text(a.rel.A) << "\n";
  os << "finite monoid: " << (fm ? "yes" : "no") << "\n";
  if (fm) {
    auto per = monoid_period(a.rel.A);
    if (per) {
      j["period"] = {{"b", per->b}, {"c", per->c}};
      os << "period: A^" << per->b + per->c << " = A^" << per->b << "\n";
    }
  }
  os << "polynomially bounded: " << (pf ? "yes" : "no") << "\n";
  if (pf) {
    json forms = json::array();
    for (unsigned long r = 0; r < pf->L; ++r) {
      json rows = json::array();
      std::string lhs = pf->L == 1 ? "A^k" : "A^(" + std::to_string(pf->L) + "k + " + std::to_string(r) + ")";
      os << lhs << " = [";
      for (size_t i = 0; i < pf->n; ++i) {
        json row = json::array();
        os << (i ? ", [" : "[");
        for (size_t c = 0; c < pf->n; ++c) {
          std::string t = poly_text(pf->p[r][i][c]);
          row.push_back(t);
          os << (c ? ", " : "") << t;
        }
        os << "]";
        rows.push_back(row);
      }
      os << "]" << (pf->k0 ? "  for k >= " + std::to_string(pf->k0) : "") << "\n";
      forms.push_back({{"residue", r}, {"matrix", rows}});
    }
    j["closed_form"] = {{"modulus", pf->L}, {"from_k", pf->k0}, {"residues", forms}};
  }
  emit(cfg, j, os.str());
  return Ok;
}

int affine_wnt(const CliConfig& cfg, const std::string& in) {
  AffineInput a = read_affine(in);
  if (!is_finite_monoid(a.rel.A)) throw FragmentError("update matrix does not generate a finite monoid");
  Dnf w = finite_monoid_wnt(a.rel);
  json j{{"command", "affine wnt"}, {"vars", a.vars}, {"wnt", report::formula_to_json(w, a.vars)}};
  emit(cfg, j, dnf_str(report::canonical(w), a.vars) + "\n");
  return Ok;
}

int affine_terminate(const CliConfig& cfg, const std::string& in, unsigned long prefix) {
  AffineInput a = read_affine(in);
  SufficientOptions so;
  so.prefix_steps = prefix;
  auto s = sufficient_termination(a.rel, so);
  if (!s) throw FragmentError("update matrix is not polynomially bounded");
  json j{{"command", "affine terminate"}, {"vars", a.vars}, {"terminates", report::formula_to_json(*s, a.vars)}};
  emit(cfg, j, dnf_str(report::canonical(*s), a.vars) + "\n");
  return Ok;
}

// prog -------------------------------------------------------------------------------------------

int prog_analyze(const CliConfig& cfg, const std::string& in) {
  Program p = read_program(in);
  PrecondResult r = nt_program(p, cfg.program_options());
  emit(cfg, report::precond_to_json(r, p), report::precond_to_text(r, p));
  return r.budget_exhausted ? Budget : Ok;
}

size_t state_arg(const Program& p, const std::string& name) {
  auto q = p.state(name);
  if (!q) throw CLI::ValidationError("state", "unknown state '" + name + "'");
  return *q;
}

int prog_summary(const CliConfig& cfg, const std::string& in, const std::string& from, const std::string& to,
                 bool reflexive) {
  Program p = read_program(in);
  const size_t a = state_arg(p, from), b = state_arg(p, to);
  RelResult r = reflexive ? reflexive_transitive_relation(p, a, b, cfg.program_options())
                          : transitive_relation(p, a, b, cfg.program_options());
  auto names = relation_names(p.vars);
  json j{{"command", "prog summary"}, {"vars", p.vars},  {"from", from},
         {"to", to},                  {"exact", r.exact}, {"status", r.budget_exhausted ? "budget-exhausted" : "ok"},
         {"relation", report::formula_to_json(r.rel, names)}};
  std::ostringstream os;
  os << dnf_str(report::canonical(r.rel), names) << "\n";
  os << "exact: " << (r.exact ? "yes" : "no") << "\n";
  emit(cfg, j, os.str());
  return r.budget_exhausted ? Budget : Ok;
}

int prog_flat(const CliConfig& cfg, const std::string& in) {
  Program p = read_program(in);
  FlatResult f = is_flat(p);
  auto cycles = elementary_cycles(p);
  json cj = json::array();
  std::ostringstream os;
  os << "flat: " << (f.flat ? "yes" : "no") << "\n";
  if (!f.flat) os << "reason: " << f.reason << "\n";
  for (const auto& c : cycles) {
    std::vector<std::string> st;
    for (size_t t : c) st.push_back(p.states[p.transitions[t].src]);
    cj.push_back(st);
    os << "cycle:";
    for (const auto& s : st) os << " " << s;
    os << " -> " << st.front() << "\n";
  }
  json j{{"command", "prog flat"}, {"flat", f.flat}, {"reason", f.reason}, {"cycles", cj}};
  emit(cfg, j, os.str());
  return Ok;
}

int prog_lasso(const CliConfig& cfg, const std::string& in) {
  Program p = read_program(in);
  PrecondResult r = nt_program(p, cfg.program_options());
  BoxDomain box = BoxDomain::cube(p.nvars(), -cfg.box, cfg.box);
  auto starts = nonterminating_starts(p, box);
  size_t outside = 0;
  for (const auto& v : starts)
    if (!eval_dnf(r.precondition, v)) ++outside;
  json j{{"command", "prog lasso"}, {"box", cfg.box}, {"lasso_starts", starts.size()}, {"outside_precondition", outside}};
  std::ostringstream os;
  os << "box [" << -cfg.box << "," << cfg.box << "]^" << p.nvars() << ": " << starts.size()
     << " initial valuations with an in-box infinite run, " << outside << " outside the precondition\n";
  emit(cfg, j, os.str());
  return outside == 0 ? Ok : Usage;
}

// check ------------------------------------------------------------------------------------------

// Random octagonal relations: wnt against in-box lassos.
int random_check(const CliConfig& cfg, long count, long nvars) {
  std::mt19937_64 gen(cfg.seed);
  auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen); };
  long failures = 0;
  for (long it = 0; it < count; ++it) {
    const size_t n = static_cast<size_t>(pick(1, nvars));
    std::vector<OctAtom> atoms;
    for (long k = pick(1, 2 * static_cast<long>(n) + 1); k > 0; --k) {
      OctAtom a;
      a.i = static_cast<int>(pick(0, 2 * static_cast<long>(n) - 1));
      a.si = pick(0, 1) ? 1 : -1;
      if (pick(0, 2)) {
        a.j = static_cast<int>(pick(0, 2 * static_cast<long>(n) - 1));
        a.sj = pick(0, 1) ? 1 : -1;
        if (a.j == a.i) a.j = -1;
      }
      a.c = pick(-4, 4);
      atoms.push_back(a);
    }
    Octagon r = tight_close(Octagon::from_atoms(2 * n, atoms));
    BoxDomain box = BoxDomain::cube(n, -cfg.box, cfg.box);
    Octagon w = wnt(r).set;
    for (const auto& v : kleene_fixpoint_pre(r, box))
      if (!w.contains(v)) {
        ++failures;
        std::cerr << "mismatch: " << r.str(relation_names({"x0", "x1", "x2"})) << "\n";
        break;
      }
  }
  json j{{"command", "check"}, {"seed", cfg.seed}, {"count", count}, {"failures", failures}};
  emit(cfg, j, std::to_string(count) + " relations, " + std::to_string(failures) + " failures\n");
  return failures == 0 ? Ok : Usage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional termination analysis for integer loops and programs"};
  app.require_subcommand(1);
  CliConfig cfg;
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--max-prefix", cfg.max_prefix, "Largest prefix tried by the period search");
  app.add_option("--max-period", cfg.max_period, "Largest period tried by the period search");
  app.add_option("--max-disjuncts", cfg.max_disjuncts, "Disjunct cap before hull merging");
  app.add_option("--box", cfg.box, "Half-width of the oracle box");
  app.add_option("--seed", cfg.seed, "Seed for randomized checks");

  std::string input, from, to;
  long n = 1, count = 200, nvars = 3;
  unsigned long prefix = 0;
  bool plus = false, reflexive = false;
  std::function<int()> action;

  auto* rel = app.add_subcommand("rel", "Octagonal relations")->require_subcommand(1);
  auto add_rel = [&](const std::string& name, const std::string& help, std::function<int()> f) {
    auto* c = rel->add_subcommand(name, help);
    c->add_option("relation", input, "Relation text, file, or - for stdin")->required();
    c->callback([&action, f] { action = f; });
    return c;
  };
  add_rel("wnt", "Weakest non-termination precondition", [&] { return rel_wnt(cfg, input); });
  add_rel("rank", "Well-foundedness with a linear ranking function", [&] { return rel_rank(cfg, input); });
  add_rel("closure", "Reflexive transitive closure", [&] { return rel_closure(cfg, input, plus); })
      ->add_flag("--plus", plus, "Transitive closure without the identity");
  {
    auto* c = rel->add_subcommand("power", "n-th power");
    c->add_option("n", n)->required();
    c->add_option("relation", input)->required();
    c->callback([&] { action = [&] { return rel_power(cfg, input, n); }; });
  }
  {
    auto* c = rel->add_subcommand("pre", "Pre-image of the universe under the n-th power");
    c->add_option("n", n)->required();
    c->add_option("relation", input)->required();
    c->callback([&] { action = [&] { return rel_pre(cfg, input, n); }; });
  }
  add_rel("lasso", "Compare wnt with in-box infinite runs", [&] { return rel_lasso(cfg, input); });

  auto* aff = app.add_subcommand("affine", "Affine loops  guard && x' == A x + b")->require_subcommand(1);
  auto add_aff = [&](const std::string& name, const std::string& help, std::function<int()> f) {
    auto* c = aff->add_subcommand(name, help);
    c->add_option("input", input, "Relation text, file, or - for stdin")->required();
    c->callback([&action, f] { action = f; });
    return c;
  };
  add_aff("check", "Finite monoid and polynomial boundedness", [&] { return affine_check(cfg, input); });
  add_aff("wnt", "Exact non-termination set (finite monoid)", [&] { return affine_wnt(cfg, input); });
  add_aff("terminate", "Sufficient termination condition (polynomially bounded)",
          [&] { return affine_terminate(cfg, input, prefix); })
      ->add_option("--prefix-steps", prefix, "Also list guard violations in the first steps");

  auto* prog = app.add_subcommand("prog", "Integer programs")->require_subcommand(1);
  auto add_prog = [&](const std::string& name, const std::string& help, std::function<int()> f) {
    auto* c = prog->add_subcommand(name, help);
    c->add_option("file", input, "Program file or - for stdin")->required();
    c->callback([&action, f] { action = f; });
    return c;
  };
  add_prog("analyze", "Non-termination precondition", [&] { return prog_analyze(cfg, input); });
  {
    auto* c = add_prog("summary", "Transitive relation between two states",
                       [&] { return prog_summary(cfg, input, from, to, reflexive); });
    c->add_option("--from", from)->required();
    c->add_option("--to", to)->required();
    c->add_flag("--reflexive", reflexive, "Include the empty run");
  }
  add_prog("flat", "Flatness classification", [&] { return prog_flat(cfg, input); });
  add_prog("lasso", "Compare the precondition with in-box infinite runs", [&] { return prog_lasso(cfg, input); });

  auto* chk = app.add_subcommand("check", "Randomized wnt check against in-box infinite runs");
  chk->add_option("--count", count);
  chk->add_option("--vars", nvars)->check(CLI::Range(1, 3));
  chk->callback([&] { action = [&] { return random_check(cfg, count, nvars); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? Ok : Usage;
  }
  try {
    return action();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return Parse;
  } catch (const FragmentError& e) {
    std::cerr << "outside the supported fragment: " << e.what() << "\n";
    return Fragment;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return Usage;
  } catch (const CancelledError&) {
    std::cerr << "budget exhausted\n";
    return Budget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Usage;
  }
}
