#pragma once

#include <string>
#include <vector>

#include "cterm/program.hpp"
#include "json.hpp"

namespace cterm::report {

using nlohmann::json;

// Atoms sorted within each disjunct (divisibility last), disjuncts sorted.
Dnf canonical(const Dnf& d);

// Integers fitting in 64 bits become JSON numbers, others decimal strings.
json int_to_json(const Int& v);
Int int_from_json(const json& j);

// {"text": ..., "dnf": [{"atoms": [...], "divisibility": [...]}]}
json formula_to_json(const Dnf& d, const std::vector<std::string>& names);
Dnf formula_from_json(const json& j, const std::vector<std::string>& names);

// Linear function with integer coefficients, e.g. "x - 3*y + 2".
std::string term_text(const LinTerm& f, const std::vector<std::string>& names);

// per_state is listed in lexicographic order of state names.
json precond_to_json(const PrecondResult& r, const Program& p);
PrecondResult precond_from_json(const json& j, const Program& p);
std::string precond_to_text(const PrecondResult& r, const Program& p);

}  // namespace cterm::report
