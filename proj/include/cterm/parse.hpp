#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cterm/presburger.hpp"

namespace cterm {

struct ParseError : std::runtime_error {
  size_t line, col;
  ParseError(const std::string& msg, size_t line_, size_t col_)
      : std::runtime_error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg), line(line_), col(col_) {}
};

// The input is well-formed but outside the octagonal/affine fragment an operation needs.
struct FragmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// x, y -> x, y, x', y'
std::vector<std::string> relation_names(const std::vector<std::string>& vars);

// Formula over `vars`; when `relation` is set, primed variables are allowed and the result has
// 2N variables (x then x'), unmentioned primed variables being unconstrained.
Dnf parse_formula(const std::string& text, const std::vector<std::string>& vars, bool relation);

struct ParsedRelation {
  std::vector<std::string> vars;  // unprimed names in order of first appearance
  Dnf rel;
};
// Relation whose variables are inferred from the text.
ParsedRelation parse_relation(const std::string& text);

}  // namespace cterm
