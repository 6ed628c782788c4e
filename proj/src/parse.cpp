#include "cterm/parse.hpp"

#include <cctype>
#include <functional>
#include <optional>

#include "cterm/affine.hpp"
#include "cterm/program.hpp"

namespace cterm {

std::vector<std::string> relation_names(const std::vector<std::string>& vars) {
  std::vector<std::string> r = vars;
  for (const auto& v : vars) r.push_back(v + "'");
  return r;
}

namespace {

enum class Tok { Ident, Int, Prime, Op, End };

struct Token {
  Tok kind;
  std::string text;
  size_t line, col;
};

std::vector<Token> lex(const std::string& s) {
  static const char* ops[] = {"->", "<=", ">=", "==", "!=", "&&", "||", "<", ">", "=", "!", "(",
                              ")",  ",",  ";",  ":",  "+",  "-",  "*",  "|"};
  std::vector<Token> out;
  size_t i = 0, line = 1, col = 1;
  auto advance = [&](size_t k) {
    for (size_t t = 0; t < k; ++t) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < s.size() && s[i + 1] == '/')) {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    const size_t l = line, co = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, s.substr(i, j - i), l, co});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Int, s.substr(i, j - i), l, co});
      advance(j - i);
      continue;
    }
    if (c == '\'') {
      out.push_back({Tok::Prime, "'", l, co});
      advance(1);
      continue;
    }
    bool matched = false;
    for (const char* op : ops) {
      const size_t k = std::char_traits<char>::length(op);
      if (s.compare(i, k, op) == 0) {
        out.push_back({Tok::Op, op, l, co});
        advance(k);
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", l, co);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct Linear {
  std::map<int, Int> co;
  Int c = 0;
  Linear& operator+=(const Linear& o) {
    for (const auto& [v, k] : o.co) co[v] += k;
    c += o.c;
    return *this;
  }
  Linear scaled(const Int& k) const {
    Linear r;
    for (const auto& [v, a] : co) r.co[v] = a * k;
    r.c = c * k;
    return r;
  }
  bool constant() const {
    for (const auto& kv : co)
      if (kv.second != 0) return false;
    return true;
  }
  std::map<int, Int> clean() const {
    std::map<int, Int> r;
    for (const auto& [v, k] : co)
      if (k != 0) r[v] = k;
    return r;
  }
};

using Conjs = std::vector<Conj>;

Conjs conj_and(const Conjs& a, const Conjs& b) {
  Conjs r;
  for (const auto& x : a)
    for (const auto& y : b) {
      Conj c = x;
      c.insert(c.end(), y.begin(), y.end());
      r.push_back(std::move(c));
    }
  return r;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<std::string>* vars, bool relation, bool infer)
      : t_(std::move(toks)), vars_(vars), relation_(relation), infer_(infer) {}

  const Token& peek(size_t k = 0) const { return t_[std::min(p_ + k, t_.size() - 1)]; }
  bool at_op(const char* op) const { return peek().kind == Tok::Op && peek().text == op; }
  bool accept(const char* op) {
    if (!at_op(op)) return false;
    ++p_;
    return true;
  }
  void expect(const char* op) {
    if (!accept(op)) fail(std::string("expected '") + op + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(msg + (t.kind == Tok::End ? " at end of input" : " near '" + t.text + "'"), t.line, t.col);
  }
  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected identifier");
    return t_[p_++].text;
  }
  bool at_end() const { return peek().kind == Tok::End; }
  size_t pos() const { return p_; }

  Conjs formula() {
    Conjs r = conjunction();
    while (accept("||")) {
      Conjs b = conjunction();
      r.insert(r.end(), b.begin(), b.end());
    }
    return r;
  }

  // Variables actually mentioned so far (for relation inference).
  int nvars() const { return static_cast<int>(vars_->size()); }

 private:
  Conjs conjunction() {
    Conjs r = unary();
    while (accept("&&")) r = conj_and(r, unary());
    return r;
  }

  Conjs unary() {
    if (accept("!")) {
      Conjs inner = unary();
      return negate(inner);
    }
    if (at_op("(")) {
      const size_t save = p_;
      try {
        ++p_;
        Conjs r = formula();
        expect(")");
        if (!is_rel_op()) return r;
      } catch (const ParseError&) {
      }
      p_ = save;
    }
    if (peek().kind == Tok::Ident && (peek().text == "true" || peek().text == "false")) {
      const bool v = t_[p_++].text == "true";
      return v ? Conjs{Conj{}} : Conjs{};
    }
    if (peek().kind == Tok::Ident && peek().text == "id" && peek(1).kind == Tok::Op && peek(1).text == "(") {
      if (!relation_) fail("id(...) is only allowed in relations");
      p_ += 2;
      Conj c;
      if (!at_op(")")) {
        do {
          const Token& t = peek();
          const int v = var_index(ident(), t);
          c.push_back(PAtom::eq({{v, -1}, {prime_of(v), 1}}, 0));
        } while (accept(","));
      }
      expect(")");
      return {c};
    }
    return atom();
  }

  bool is_rel_op() const {
    if (peek().kind != Tok::Op) return false;
    const std::string& s = peek().text;
    return s == "<=" || s == "<" || s == ">=" || s == ">" || s == "==" || s == "=" || s == "!=" || s == "+" ||
           s == "-" || s == "*";
  }

  // Variables are numbered in order of appearance; primed copies are resolved at the end.
  int var_index(const std::string& name, const Token& t) {
    for (size_t i = 0; i < vars_->size(); ++i)
      if ((*vars_)[i] == name) return static_cast<int>(i);
    if (!infer_) throw ParseError("unknown variable '" + name + "'", t.line, t.col);
    vars_->push_back(name);
    return static_cast<int>(vars_->size() - 1);
  }
  // Primed variables are encoded as -(v+1) until the variable count is known.
  static int prime_of(int v) { return -(v + 1); }

  Conjs atom() {
    if (peek().kind == Tok::Int && peek(1).kind == Tok::Op && peek(1).text == "|") {
      Int m(t_[p_].text);
      p_ += 2;
      Linear e = expr();
      if (m == 0) fail("modulus must be positive");
      return {{PAtom::div(m, e.clean(), e.c)}};
    }
    Linear lhs = expr();
    if (!is_cmp()) fail("expected comparison");
    Conjs acc{Conj{}};
    while (is_cmp()) {
      const std::string op = t_[p_++].text;
      Linear rhs = expr();
      acc = conj_and(acc, compare(lhs, op, rhs));
      lhs = rhs;
    }
    return acc;
  }

  bool is_cmp() const {
    if (peek().kind != Tok::Op) return false;
    const std::string& s = peek().text;
    return s == "<=" || s == "<" || s == ">=" || s == ">" || s == "==" || s == "=" || s == "!=";
  }

  static Conjs compare(const Linear& a, const std::string& op, const Linear& b) {
    Linear d = a;
    d += b.scaled(-1);  // a - b
    if (op == "<=") return {{PAtom::le(d.clean(), d.c)}};
    if (op == "<") return {{PAtom::le(d.clean(), d.c + 1)}};
    Linear n = d.scaled(-1);
    if (op == ">=") return {{PAtom::le(n.clean(), n.c)}};
    if (op == ">") return {{PAtom::le(n.clean(), n.c + 1)}};
    if (op == "==" || op == "=") return {{PAtom::eq(d.clean(), d.c)}};
    return {{PAtom::le(d.clean(), d.c + 1)}, {PAtom::le(n.clean(), n.c + 1)}};  // !=
  }

  Linear expr() {
    Linear r;
    bool neg = false;
    if (accept("-"))
      neg = true;
    else
      accept("+");
    Linear t = term();
    r += neg ? t.scaled(-1) : t;
    for (;;) {
      if (accept("+")) {
        r += term();
      } else if (accept("-")) {
        r += term().scaled(-1);
      } else {
        break;
      }
    }
    return r;
  }

  Linear term() {
    Linear r = factor();
    while (accept("*")) {
      Linear f = factor();
      if (r.constant())
        r = f.scaled(r.c);
      else if (f.constant())
        r = r.scaled(f.c);
      else
        fail("non-linear product");
    }
    return r;
  }

  Linear factor() {
    if (accept("-")) return factor().scaled(-1);
    if (peek().kind == Tok::Int) {
      Linear r;
      r.c = Int(t_[p_++].text);
      if (peek().kind == Tok::Ident) return variable().scaled(r.c);  // 2x
      return r;
    }
    if (peek().kind == Tok::Ident) return variable();
    if (accept("(")) {
      Linear r = expr();
      expect(")");
      return r;
    }
    fail("expected a term");
  }

  Linear variable() {
    const Token& t = peek();
    if (t.text == "true" || t.text == "false" || t.text == "id") fail("unexpected keyword");
    int v = var_index(ident(), t);
    if (peek().kind == Tok::Prime) {
      if (!relation_) throw ParseError("primed variable outside a relation", t.line, t.col);
      ++p_;
      v = prime_of(v);
    }
    Linear r;
    r.co[v] = 1;
    return r;
  }

  static Conjs negate(const Conjs& d) {
    // not (c1 or c2 ...) = and_i (or of negated atoms of c_i)
    Conjs acc{Conj{}};
    for (const auto& c : d) {
      Conjs alt;
      for (const auto& a : c) {
        Dnf na = negate_atom(a, 0);
        for (auto& x : na.disjuncts) alt.push_back(std::move(x));
      }
      acc = conj_and(acc, alt);
    }
    return acc;
  }

  std::vector<Token> t_;
  size_t p_ = 0;
  std::vector<std::string>* vars_;
  bool relation_;
  bool infer_;
};

// Resolves primed placeholders and normalizes.
Dnf finish(const Conjs& cs, int n, bool relation) {
  const int nv = relation ? 2 * n : n;
  Dnf d = Dnf::falsity(nv);
  for (Conj c : cs) {
    for (auto& a : c) {
      std::map<int, Int> co;
      for (const auto& [v, k] : a.coeffs) co[v < 0 ? n + (-v - 1) : v] += k;
      a.coeffs.clear();
      for (const auto& [v, k] : co)
        if (k != 0) a.coeffs[v] = k;
    }
    if (normalize_conj(c)) d.disjuncts.push_back(std::move(c));
  }
  return d;
}

Dnf parse_with(Parser& p, int n, bool relation) {
  Conjs cs = p.formula();
  return finish(cs, n, relation);
}

}  // namespace

Dnf parse_formula(const std::string& text, const std::vector<std::string>& vars, bool relation) {
  std::vector<std::string> v = vars;
  Parser p(lex(text), &v, relation, false);
  Dnf d = parse_with(p, static_cast<int>(v.size()), relation);
  if (!p.at_end()) p.fail("trailing input");
  return d;
}

ParsedRelation parse_relation(const std::string& text) {
  ParsedRelation r;
  Parser p(lex(text), &r.vars, true, true);
  Conjs cs = p.formula();
  if (!p.at_end()) p.fail("trailing input");
  r.rel = finish(cs, static_cast<int>(r.vars.size()), true);
  return r;
}

Program parse_program(const std::string& text) {
  std::vector<Token> toks = lex(text);
  Program prog;
  auto state_index = [&](const std::string& name) {
    for (size_t i = 0; i < prog.states.size(); ++i)
      if (prog.states[i] == name) return i;
    prog.states.push_back(name);
    return prog.states.size() - 1;
  };
  bool have_init = false;
  size_t p = 0;
  auto at = [&](size_t k) -> const Token& { return toks[std::min(p + k, toks.size() - 1)]; };
  auto err = [&](const std::string& msg) {
    throw ParseError(msg + (at(0).kind == Tok::End ? " at end of input" : " near '" + at(0).text + "'"), at(0).line,
                     at(0).col);
  };
  auto expect_op = [&](const char* op) {
    if (at(0).kind != Tok::Op || at(0).text != op) err(std::string("expected '") + op + "'");
    ++p;
  };
  auto name = [&]() {
    if (at(0).kind != Tok::Ident) err("expected identifier");
    return toks[p++].text;
  };
  while (at(0).kind != Tok::End) {
    const Token& t = at(0);
    if (t.kind == Tok::Ident && t.text == "vars" && at(1).kind != Tok::Op) {
      ++p;
      if (!prog.transitions.empty()) err("variables must be declared before transitions");
      do {
        std::string v = name();
        for (const auto& w : prog.vars)
          if (w == v) err("duplicate variable '" + v + "'");
        prog.vars.push_back(v);
      } while (at(0).kind == Tok::Op && at(0).text == "," && ++p);
      expect_op(";");
    } else if (t.kind == Tok::Ident && t.text == "init" && at(1).kind == Tok::Ident) {
      ++p;
      prog.init = state_index(name());
      have_init = true;
      expect_op(";");
    } else if (t.kind == Tok::Ident && t.text == "states" && at(1).kind == Tok::Ident) {
      ++p;
      do state_index(name());
      while (at(0).kind == Tok::Op && at(0).text == "," && ++p);
      expect_op(";");
    } else {
      const Token start = at(0);
      Transition tr;
      tr.src = state_index(name());
      expect_op("->");
      tr.dst = state_index(name());
      expect_op(":");
      // The label runs to the next ';'.
      size_t q = p;
      while (toks[q].kind != Tok::End && !(toks[q].kind == Tok::Op && toks[q].text == ";")) ++q;
      if (toks[q].kind == Tok::End) err("expected ';' after transition label");
      std::vector<Token> label(toks.begin() + static_cast<long>(p), toks.begin() + static_cast<long>(q));
      label.push_back({Tok::End, "", toks[q].line, toks[q].col});
      std::vector<std::string> vars = prog.vars;
      Parser lp(label, &vars, true, false);
      if (lp.at_end()) {
        tr.label = Dnf::truth(static_cast<int>(2 * prog.vars.size()));
      } else {
        tr.label = parse_with(lp, static_cast<int>(prog.vars.size()), true);
        if (!lp.at_end()) lp.fail("unexpected input in label");
      }
      for (const auto& c : tr.label.disjuncts)
        if (!is_octagonal(c) && !affine_from_conj(c, prog.vars.size()))
          throw FragmentError(std::to_string(start.line) + ":" + std::to_string(start.col) +
                              ": label is neither octagonal nor affine: " +
                              conj_str(c, relation_names(prog.vars)));
      tr.line = start.line;
      prog.transitions.push_back(std::move(tr));
      p = q + 1;
    }
  }
  if (!have_init) {
    if (prog.states.empty()) throw ParseError("missing 'init' declaration", at(0).line, at(0).col);
    prog.init = 0;
  }
  return prog;
}

}  // namespace cterm
