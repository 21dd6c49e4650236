#pragma once

// CNF formulas in their relational encoding: a total map from
// (clause, variable) pairs to {-1, 0, 1}.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cellinv/error.hpp"

namespace cellinv {

/// Occurrence of a variable in a clause.
enum class Literal { absent, pos, neg };

/// A truth assignment a_1..a_m. Index 1 is the first variable.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<std::uint8_t> values) : values_(std::move(values)) {
    for (auto v : values_) {
      if (v > 1) throw DomainError("assignment values must be 0 or 1");
    }
  }

  /// The assignment whose bits spell `index` with a_1 as the most significant
  /// bit, so that increasing indices enumerate {0,1}^m lexicographically.
  static Assignment from_index(int m, std::uint64_t index) {
    std::vector<std::uint8_t> v(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) v[static_cast<std::size_t>(j)] = (index >> (m - 1 - j)) & 1U;
    return Assignment(std::move(v));
  }

  /// Parses "0110" or "0,1,1,0".
  static Assignment parse(std::string_view text) {
    std::vector<std::uint8_t> v;
    for (char ch : text) {
      if (ch == '0' || ch == '1') {
        v.push_back(static_cast<std::uint8_t>(ch - '0'));
      } else if (ch != ',' && ch != ' ') {
        throw ParseError("assignment must consist of 0/1 digits");
      }
    }
    if (v.empty()) throw ParseError("empty assignment");
    return Assignment(std::move(v));
  }

  int size() const { return static_cast<int>(values_.size()); }
  /// 1-based access.
  int operator[](int j) const { return values_.at(static_cast<std::size_t>(j - 1)); }
  const std::vector<std::uint8_t>& values() const { return values_; }

  std::string str() const {
    std::string s;
    for (auto v : values_) s.push_back(static_cast<char>('0' + v));
    return s;
  }

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<std::uint8_t> values_;
};

class CnfFormula {
 public:
  /// `rel` is row-major: rel[(i-1)*m + (j-1)] for clause i, variable j.
  CnfFormula(int n, int m, std::vector<std::int8_t> rel) : n_(n), m_(m), rel_(std::move(rel)) {
    if (n < 1 || m < 1) throw DomainError("a formula needs at least one clause and one variable");
    if (rel_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(m)) {
      throw DomainError("relation size does not match n*m");
    }
    for (auto v : rel_) {
      if (v < -1 || v > 1) throw DomainError("relation values must lie in {-1,0,1}");
    }
  }

  /// Builds a formula from DIMACS-style clauses (signed 1-based literals).
  static CnfFormula from_clauses(int m, const std::vector<std::vector<int>>& clauses) {
    if (clauses.empty()) throw DomainError("a formula needs at least one clause");
    const int n = static_cast<int>(clauses.size());
    std::vector<std::int8_t> rel(static_cast<std::size_t>(n) * static_cast<std::size_t>(m), 0);
    for (int i = 0; i < n; ++i) {
      const auto& clause = clauses[static_cast<std::size_t>(i)];
      if (clause.empty()) throw DomainError("empty clause " + std::to_string(i + 1));
      for (int lit : clause) {
        const int var = lit < 0 ? -lit : lit;
        if (lit == 0 || var > m) {
          throw DomainError("literal " + std::to_string(lit) + " out of range in clause " + std::to_string(i + 1));
        }
        auto& cell = rel[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) + static_cast<std::size_t>(var - 1)];
        const std::int8_t sign = lit > 0 ? 1 : -1;
        if (cell == -sign) {
          throw DomainError("clause " + std::to_string(i + 1) + " contains both " + std::to_string(var) + " and -" +
                            std::to_string(var));
        }
        cell = sign;
      }
    }
    return CnfFormula(n, m, std::move(rel));
  }

  int clauses() const { return n_; }
  int variables() const { return m_; }

  /// rel(i, j) for 1 <= i <= n, 1 <= j <= m.
  int rel(int i, int j) const {
    check_index(i, j);
    return rel_[index(i, j)];
  }

  const std::vector<std::int8_t>& relation() const { return rel_; }

  /// Signed literals of clause i, in variable order.
  std::vector<int> clause(int i) const {
    check_index(i, 1);
    std::vector<int> lits;
    for (int j = 1; j <= m_; ++j) {
      const int s = rel_[index(i, j)];
      if (s != 0) lits.push_back(s * j);
    }
    return lits;
  }

  bool operator==(const CnfFormula&) const = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(j - 1);
  }
  void check_index(int i, int j) const {
    if (i < 1 || i > n_ || j < 1 || j > m_) {
      throw DomainError("index (" + std::to_string(i) + "," + std::to_string(j) + ") outside " +
                        std::to_string(n_) + "x" + std::to_string(m_));
    }
  }

  int n_;
  int m_;
  std::vector<std::int8_t> rel_;
};

// ---------------------------------------------------------------------------
// DIMACS

inline CnfFormula parse_dimacs(std::istream& in) {
  std::string line;
  long declared_vars = -1;
  long declared_clauses = -1;
  std::vector<std::vector<int>> clauses;
  std::vector<int> current;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first[0] == 'c') continue;
    if (first == "%") break;  // SATLIB trailer
    if (first == "p") {
      if (declared_vars >= 0) throw ParseError("duplicate header on line " + std::to_string(line_no));
      std::string fmt;
      if (!(ls >> fmt >> declared_vars >> declared_clauses) || fmt != "cnf") {
        throw ParseError("malformed header on line " + std::to_string(line_no));
      }
      std::string extra;
      if (ls >> extra) throw ParseError("trailing text after header on line " + std::to_string(line_no));
      if (declared_vars < 1 || declared_clauses < 1) {
        throw ParseError("header must declare at least one variable and one clause");
      }
      continue;
    }
    if (declared_vars < 0) throw ParseError("clause data before header on line " + std::to_string(line_no));

    ls.clear();
    ls.str(line);
    std::string tok;
    while (ls >> tok) {
      long lit = 0;
      try {
        std::size_t used = 0;
        lit = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError("bad literal '" + tok + "' on line " + std::to_string(line_no));
      }
      if (lit == 0) {
        if (current.empty()) throw ParseError("empty clause on line " + std::to_string(line_no));
        if (static_cast<long>(clauses.size()) >= declared_clauses) {
          throw ParseError("more clauses than declared (" + std::to_string(declared_clauses) + ")");
        }
        clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (lit > declared_vars || -lit > declared_vars) {
        throw ParseError("variable " + std::to_string(lit < 0 ? -lit : lit) + " exceeds declared count " +
                         std::to_string(declared_vars));
      }
      current.push_back(static_cast<int>(lit));
    }
  }
  if (declared_vars < 0) throw ParseError("missing 'p cnf' header");
  if (!current.empty()) throw ParseError("last clause is not terminated by 0");
  if (static_cast<long>(clauses.size()) != declared_clauses) {
    throw ParseError("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                     std::to_string(clauses.size()));
  }
  try {
    return CnfFormula::from_clauses(static_cast<int>(declared_vars), clauses);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

inline CnfFormula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

inline void write_dimacs(std::ostream& out, const CnfFormula& phi) {
  out << "p cnf " << phi.variables() << ' ' << phi.clauses() << '\n';
  for (int i = 1; i <= phi.clauses(); ++i) {
    for (int lit : phi.clause(i)) out << lit << ' ';
    out << "0\n";
  }
}

/// Canonical dump of rel: a "rel n m" header then one "i j s" line per pair.
inline void write_rel_dump(std::ostream& out, const CnfFormula& phi) {
  out << "rel " << phi.clauses() << ' ' << phi.variables() << '\n';
  for (int i = 1; i <= phi.clauses(); ++i) {
    for (int j = 1; j <= phi.variables(); ++j) out << i << ' ' << j << ' ' << phi.rel(i, j) << '\n';
  }
}

inline CnfFormula parse_rel_dump(std::istream& in) {
  std::string tag;
  int n = 0;
  int m = 0;
  if (!(in >> tag >> n >> m) || tag != "rel" || n < 1 || m < 1) throw ParseError("malformed rel header");
  std::vector<std::int8_t> rel(static_cast<std::size_t>(n) * static_cast<std::size_t>(m), 0);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= m; ++j) {
      int ri = 0;
      int rj = 0;
      int s = 0;
      if (!(in >> ri >> rj >> s)) throw ParseError("truncated rel dump");
      if (ri != i || rj != j || s < -1 || s > 1) throw ParseError("rel dump entries out of canonical order");
      rel[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(m) + static_cast<std::size_t>(j - 1)] =
          static_cast<std::int8_t>(s);
    }
  }
  return CnfFormula(n, m, std::move(rel));
}

// ---------------------------------------------------------------------------
// Evaluation

inline Literal clause_restriction(const CnfFormula& phi, int i, int j) {
  switch (phi.rel(i, j)) {
    case 1:
      return Literal::pos;
    case -1:
      return Literal::neg;
    default:
      return Literal::absent;
  }
}

/// Truth value of the literal C_{i,j} under `a` (false when absent).
inline bool literal_true(int flag, int value) { return (flag == 1 && value == 1) || (flag == -1 && value == 0); }

namespace detail {
inline void check_assignment(const CnfFormula& phi, const Assignment& a) {
  if (a.size() != phi.variables()) {
    throw DomainError("assignment has " + std::to_string(a.size()) + " values, formula has " +
                      std::to_string(phi.variables()) + " variables");
  }
}
}  // namespace detail

/// (OR_{u<=j} C_{i,u})(a)
inline bool partial_disjunction(const CnfFormula& phi, const Assignment& a, int i, int j) {
  detail::check_assignment(phi, a);
  phi.rel(i, j);  // range check
  for (int u = 1; u <= j; ++u) {
    if (literal_true(phi.rel(i, u), a[u])) return true;
  }
  return false;
}

/// (AND_{v<=i} C_v)(a)
inline bool partial_conjunction(const CnfFormula& phi, const Assignment& a, int i) {
  detail::check_assignment(phi, a);
  phi.rel(i, 1);
  for (int v = 1; v <= i; ++v) {
    if (!partial_disjunction(phi, a, v, phi.variables())) return false;
  }
  return true;
}

inline bool is_satisfied(const CnfFormula& phi, const Assignment& a) {
  detail::check_assignment(phi, a);
  for (int i = 1; i <= phi.clauses(); ++i) {
    bool sat = false;
    for (int j = 1; j <= phi.variables() && !sat; ++j) sat = literal_true(phi.rel(i, j), a[j]);
    if (!sat) return false;
  }
  return true;
}

/// Appends a copy of the last clause when the clause count is even.
inline CnfFormula normalize_odd(const CnfFormula& phi) {
  if (phi.clauses() % 2 == 1) return phi;
  auto rel = phi.relation();
  const auto m = static_cast<std::size_t>(phi.variables());
  const std::vector<std::int8_t> last(rel.end() - static_cast<std::ptrdiff_t>(m), rel.end());
  rel.insert(rel.end(), last.begin(), last.end());
  return CnfFormula(phi.clauses() + 1, phi.variables(), std::move(rel));
}

// ---------------------------------------------------------------------------
// Pigeonhole generators. Variable p_{ij} (pigeon i in [k+1], hole j in [k])
// is numbered i*k + j + 1.

inline int php_variable(int k, int pigeon, int hole) { return pigeon * k + hole + 1; }

namespace detail {
inline void php_groups_1_2(int k, std::vector<std::vector<int>>& clauses) {
  for (int i = 0; i <= k; ++i) {
    std::vector<int> c;
    for (int j = 0; j < k; ++j) c.push_back(php_variable(k, i, j));
    clauses.push_back(std::move(c));
  }
  for (int i1 = 0; i1 <= k; ++i1) {
    for (int i2 = i1 + 1; i2 <= k; ++i2) {
      for (int j = 0; j < k; ++j) clauses.push_back({-php_variable(k, i1, j), -php_variable(k, i2, j)});
    }
  }
}
}  // namespace detail

/// The negated onto pigeonhole principle with k+1 pigeons and k holes.
inline CnfFormula gen_onto_php(int k) {
  if (k < 1) throw DomainError("pigeonhole size must be at least 1");
  std::vector<std::vector<int>> clauses;
  detail::php_groups_1_2(k, clauses);
  for (int i = 0; i <= k; ++i) {
    for (int j1 = 0; j1 < k; ++j1) {
      for (int j2 = j1 + 1; j2 < k; ++j2) clauses.push_back({-php_variable(k, i, j1), -php_variable(k, i, j2)});
    }
  }
  for (int j = 0; j < k; ++j) {
    std::vector<int> c;
    for (int i = 0; i <= k; ++i) c.push_back(php_variable(k, i, j));
    clauses.push_back(std::move(c));
  }
  return CnfFormula::from_clauses(k * (k + 1), clauses);
}

/// The weak pigeonhole principle: groups (1) and (2) only.
inline CnfFormula gen_weak_php(int k) {
  if (k < 1) throw DomainError("pigeonhole size must be at least 1");
  std::vector<std::vector<int>> clauses;
  detail::php_groups_1_2(k, clauses);
  return CnfFormula::from_clauses(k * (k + 1), clauses);
}

/// Exhaustive scan in lexicographic order; returns the first satisfying
/// assignment, if any. Limited to `max_vars` variables.
inline std::optional<Assignment> first_satisfying(const CnfFormula& phi, int max_vars = 24) {
  const int m = phi.variables();
  if (m > max_vars) {
    throw BudgetError("exhaustive assignment scan limited to " + std::to_string(max_vars) + " variables, formula has " +
                      std::to_string(m));
  }
  const std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    auto a = Assignment::from_index(m, idx);
    if (is_satisfied(phi, a)) return a;
  }
  return std::nullopt;
}

}  // namespace cellinv
