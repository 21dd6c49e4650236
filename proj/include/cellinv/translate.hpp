#pragma once

// Delta_0(R) formulas, their Paris-Wilkie translation into DeMorgan
// propositional formulas, and formula depth.
//
// Input syntax (s-expressions):
//   term    := numeral | identifier | (+ term term) | (* term term)
//   formula := (= term term) | (<= term term) | (R term term)
//            | (not formula) | (and formula...) | (or formula...)
//            | (exists y term formula) | (forall y term formula)
// Quantifiers range over y <= term.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "cellinv/coding.hpp"
#include "cellinv/error.hpp"

namespace cellinv {

using Env = std::map<std::string, std::uint64_t>;

struct ArithTerm {
  enum class Kind { constant, variable, add, mul };
  Kind kind = Kind::constant;
  std::uint64_t value = 0;
  std::string name;
  std::shared_ptr<const ArithTerm> lhs;
  std::shared_ptr<const ArithTerm> rhs;

  static ArithTerm constant(std::uint64_t v) { return {Kind::constant, v, {}, nullptr, nullptr}; }
  static ArithTerm var(std::string n) { return {Kind::variable, 0, std::move(n), nullptr, nullptr}; }
  static ArithTerm add(ArithTerm a, ArithTerm b) {
    return {Kind::add, 0, {}, std::make_shared<const ArithTerm>(std::move(a)), std::make_shared<const ArithTerm>(std::move(b))};
  }
  static ArithTerm mul(ArithTerm a, ArithTerm b) {
    return {Kind::mul, 0, {}, std::make_shared<const ArithTerm>(std::move(a)), std::make_shared<const ArithTerm>(std::move(b))};
  }
};

inline std::uint64_t eval_term(const ArithTerm& t, const Env& env) {
  switch (t.kind) {
    case ArithTerm::Kind::constant:
      return t.value;
    case ArithTerm::Kind::variable: {
      const auto it = env.find(t.name);
      if (it == env.end()) throw DomainError("unbound variable '" + t.name + "'");
      return it->second;
    }
    case ArithTerm::Kind::add:
      return eval_term(*t.lhs, env) + eval_term(*t.rhs, env);
    case ArithTerm::Kind::mul:
      return eval_term(*t.lhs, env) * eval_term(*t.rhs, env);
  }
  return 0;
}

struct Delta0Formula {
  enum class Kind { eq, le, rel, neg, conj, disj, exists, forall };
  Kind kind = Kind::eq;
  std::vector<ArithTerm> terms;         ///< atom arguments, or the quantifier bound
  std::vector<Delta0Formula> children;  ///< subformulas
  std::string bound;                    ///< quantified variable

  static Delta0Formula atom(Kind k, ArithTerm a, ArithTerm b) { return {k, {std::move(a), std::move(b)}, {}, {}}; }
  static Delta0Formula negation(Delta0Formula f) { return {Kind::neg, {}, {std::move(f)}, {}}; }
  static Delta0Formula junction(Kind k, std::vector<Delta0Formula> fs) { return {k, {}, std::move(fs), {}}; }
  static Delta0Formula quantifier(Kind k, std::string y, ArithTerm t, Delta0Formula body) {
    return {k, {std::move(t)}, {std::move(body)}, std::move(y)};
  }
};

struct PropFormula {
  enum class Kind { constant, variable, neg, conj, disj };
  Kind kind = Kind::constant;
  int value = 0;              ///< constant value
  std::uint64_t code = 0;     ///< variable r_{i,j} stored as <i,j>
  std::vector<PropFormula> children;

  static PropFormula constant(bool v) { return {Kind::constant, v ? 1 : 0, 0, {}}; }
  static PropFormula var(std::uint64_t i, std::uint64_t j) { return {Kind::variable, 0, pairing(i, j), {}}; }
  static PropFormula negation(PropFormula f) { return {Kind::neg, 0, 0, {std::move(f)}}; }
  /// n-ary junction; a single child stands for itself.
  static PropFormula junction(Kind k, std::vector<PropFormula> fs) {
    if (fs.empty()) throw DomainError("empty conjunction or disjunction");
    if (fs.size() == 1) return std::move(fs.front());
    return {k, 0, 0, std::move(fs)};
  }
  static PropFormula any(std::vector<PropFormula> fs) { return junction(Kind::disj, std::move(fs)); }
  static PropFormula all(std::vector<PropFormula> fs) { return junction(Kind::conj, std::move(fs)); }

  bool operator==(const PropFormula&) const = default;
};

/// <A>_env
inline PropFormula pw_translate(const Delta0Formula& a, const Env& env) {
  using K = Delta0Formula::Kind;
  switch (a.kind) {
    case K::eq:
      return PropFormula::constant(eval_term(a.terms[0], env) == eval_term(a.terms[1], env));
    case K::le:
      return PropFormula::constant(eval_term(a.terms[0], env) <= eval_term(a.terms[1], env));
    case K::rel:
      return PropFormula::var(eval_term(a.terms[0], env), eval_term(a.terms[1], env));
    case K::neg:
      return PropFormula::negation(pw_translate(a.children[0], env));
    case K::conj:
    case K::disj: {
      std::vector<PropFormula> parts;
      for (const auto& c : a.children) parts.push_back(pw_translate(c, env));
      return PropFormula::junction(a.kind == K::conj ? PropFormula::Kind::conj : PropFormula::Kind::disj,
                                   std::move(parts));
    }
    case K::exists:
    case K::forall: {
      const std::uint64_t top = eval_term(a.terms[0], env);
      Env inner = env;
      std::vector<PropFormula> parts;
      for (std::uint64_t m = 0; m <= top; ++m) {
        inner[a.bound] = m;
        parts.push_back(pw_translate(a.children[0], inner));
      }
      return PropFormula::junction(a.kind == K::forall ? PropFormula::Kind::conj : PropFormula::Kind::disj,
                                   std::move(parts));
    }
  }
  return PropFormula::constant(false);
}

namespace detail {
inline void block_leaves(const PropFormula& f, PropFormula::Kind k, std::vector<const PropFormula*>& out) {
  for (const auto& c : f.children) {
    if (c.kind == k) {
      block_leaves(c, k, out);
    } else {
      out.push_back(&c);
    }
  }
}
}  // namespace detail

/// dp: variables and constants 0; a negation of a negation adds nothing;
/// a maximal block of one connective adds 1 over its deepest operand.
inline int depth(const PropFormula& f) {
  using K = PropFormula::Kind;
  switch (f.kind) {
    case K::constant:
    case K::variable:
      return 0;
    case K::neg: {
      const auto& b = f.children[0];
      return b.kind == K::neg ? depth(b) : 1 + depth(b);
    }
    case K::conj:
    case K::disj: {
      std::vector<const PropFormula*> leaves;
      detail::block_leaves(f, f.kind, leaves);
      int d = 0;
      for (const auto* c : leaves) d = std::max(d, depth(*c));
      return 1 + d;
    }
  }
  return 0;
}

/// Symbol count: leaves 1, negation 1, a k-ary junction k-1.
inline std::uint64_t formula_size(const PropFormula& f) {
  using K = PropFormula::Kind;
  if (f.kind == K::constant || f.kind == K::variable) return 1;
  std::uint64_t s = f.kind == K::neg ? 1 : f.children.size() - 1;
  for (const auto& c : f.children) s += formula_size(c);
  return s;
}

inline std::string to_infix(const PropFormula& f, bool top = true) {
  using K = PropFormula::Kind;
  switch (f.kind) {
    case K::constant:
      return f.value ? "1" : "0";
    case K::variable: {
      const auto [i, j] = unpair(f.code);
      return "r_{" + std::to_string(i) + "," + std::to_string(j) + "}";
    }
    case K::neg:
      return "~" + to_infix(f.children[0], false);
    case K::conj:
    case K::disj: {
      std::string s;
      for (std::size_t k = 0; k < f.children.size(); ++k) {
        if (k) s += f.kind == K::conj ? " & " : " | ";
        s += to_infix(f.children[k], false);
      }
      return top ? s : "(" + s + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// S-expression parsing.

namespace detail {
struct SExp {
  std::string atom;
  std::vector<SExp> list;
  bool is_list = false;
};

inline std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(cur), cur.clear();
  };
  for (char ch : text) {
    if (ch == '(' || ch == ')') {
      flush();
      out.emplace_back(1, ch);
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else {
      cur.push_back(ch);
    }
  }
  flush();
  return out;
}

inline SExp read_sexp(const std::vector<std::string>& toks, std::size_t& pos) {
  if (pos >= toks.size()) throw ParseError("unexpected end of formula");
  const std::string& t = toks[pos++];
  if (t == ")") throw ParseError("unexpected ')'");
  if (t != "(") return SExp{t, {}, false};
  SExp e;
  e.is_list = true;
  while (true) {
    if (pos >= toks.size()) throw ParseError("missing ')'");
    if (toks[pos] == ")") {
      ++pos;
      return e;
    }
    e.list.push_back(read_sexp(toks, pos));
  }
}

inline bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

inline ArithTerm to_term(const SExp& e) {
  if (!e.is_list) {
    if (!e.atom.empty() && std::all_of(e.atom.begin(), e.atom.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return ArithTerm::constant(std::stoull(e.atom));
    }
    if (is_identifier(e.atom)) return ArithTerm::var(e.atom);
    throw ParseError("bad term '" + e.atom + "'");
  }
  if (e.list.size() != 3 || e.list[0].is_list) throw ParseError("terms are (+ t s) or (* t s)");
  const std::string& op = e.list[0].atom;
  if (op == "+") return ArithTerm::add(to_term(e.list[1]), to_term(e.list[2]));
  if (op == "*") return ArithTerm::mul(to_term(e.list[1]), to_term(e.list[2]));
  throw ParseError("unknown term operator '" + op + "'");
}

inline Delta0Formula to_formula(const SExp& e) {
  using K = Delta0Formula::Kind;
  if (!e.is_list || e.list.empty() || e.list[0].is_list) throw ParseError("formulas are parenthesized");
  const std::string& op = e.list[0].atom;
  const auto argc = e.list.size() - 1;
  if (op == "=" || op == "<=" || op == "R") {
    if (argc != 2) throw ParseError("'" + op + "' takes two terms");
    const K k = op == "=" ? K::eq : op == "<=" ? K::le : K::rel;
    return Delta0Formula::atom(k, to_term(e.list[1]), to_term(e.list[2]));
  }
  if (op == "not") {
    if (argc != 1) throw ParseError("'not' takes one formula");
    return Delta0Formula::negation(to_formula(e.list[1]));
  }
  if (op == "and" || op == "or") {
    if (argc == 0) throw ParseError("'" + op + "' needs at least one formula");
    std::vector<Delta0Formula> parts;
    for (std::size_t k = 1; k < e.list.size(); ++k) parts.push_back(to_formula(e.list[k]));
    return Delta0Formula::junction(op == "and" ? K::conj : K::disj, std::move(parts));
  }
  if (op == "exists" || op == "forall") {
    if (argc != 3 || e.list[1].is_list || !is_identifier(e.list[1].atom)) {
      throw ParseError("'" + op + "' takes a variable, a bound and a formula");
    }
    return Delta0Formula::quantifier(op == "exists" ? K::exists : K::forall, e.list[1].atom, to_term(e.list[2]),
                                     to_formula(e.list[3]));
  }
  throw ParseError("unknown connective '" + op + "'");
}
}  // namespace detail

inline Delta0Formula parse_delta0(const std::string& text) {
  const auto toks = detail::tokenize(text);
  std::size_t pos = 0;
  const auto e = detail::read_sexp(toks, pos);
  if (pos != toks.size()) throw ParseError("trailing input after formula");
  return detail::to_formula(e);
}

/// Parses "x=2,y=3".
inline Env parse_env(const std::string& text) {
  Env env;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || !detail::is_identifier(item.substr(0, eq))) throw ParseError("bad binding '" + item + "'");
    const std::string v = item.substr(eq + 1);
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) throw ParseError("bad value in '" + item + "'");
    env[item.substr(0, eq)] = std::stoull(v);
  }
  return env;
}

struct ScanRow {
  std::uint64_t value = 0;
  std::uint64_t size = 0;
  int depth = 0;
};

/// Size and depth of <A> as `var` runs over [lo, hi], other variables from
/// `env`. An empty range gives an empty table.
inline std::vector<ScanRow> size_depth_scan(const Delta0Formula& a, const std::string& var, std::uint64_t lo,
                                            std::uint64_t hi, Env env = {}) {
  std::vector<ScanRow> rows;
  for (std::uint64_t x = lo; x <= hi && lo <= hi; ++x) {
    env[var] = x;
    const PropFormula f = pw_translate(a, env);
    rows.push_back({x, formula_size(f), depth(f)});
    if (x == UINT64_MAX) break;
  }
  return rows;
}

}  // namespace cellinv
