#pragma once

// Inverse automata for A_phi, the local inverse condition, refutation objects
// and their verifier.
//
// Refutation text format (see docs/formats.md):
//
//   cellinv-refutation 1
//   dims <n> <m>
//   states <s> <digest hex>
//   mu <mu>
//   offsets <dr>,<dc> ...            (mu entries)
//   t <decimal>
//   base structural <rel values, row-major>     or
//   base table <bit length> <hex payload>
//   overrides <count>
//   <sequence code hex> <output index>          (count lines)
//   end

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cellinv/analysis.hpp"
#include "cellinv/automaton.hpp"
#include "cellinv/bounded.hpp"
#include "cellinv/catable.hpp"
#include "cellinv/coding.hpp"
#include "cellinv/configuration.hpp"
#include "cellinv/formula.hpp"

namespace cellinv {

/// Every offset (dr, dc) with |dr| <= n and |dc| <= m+1, row-major. From any
/// cell of the rectangle this window covers the whole rectangle.
inline std::vector<Offset> inverse_offsets(int n, int m) {
  std::vector<Offset> out;
  for (int dr = -n; dr <= n; ++dr)
    for (int dc = -(m + 1); dc <= m + 1; ++dc) out.push_back({dr, dc});
  return out;
}

inline std::uint64_t inverse_mu(int n, int m) {
  return static_cast<std::uint64_t>(2 * n + 1) * static_cast<std::uint64_t>(2 * m + 3);
}

/// Raised when an inverse is requested for a non-injective A_phi.
class NotInjectiveError : public Error {
 public:
  NotInjectiveError(Assignment a, Configuration witness, std::size_t cycle_length)
      : Error("formula is satisfied by " + a.str() + "; A_phi is not injective"),
        assignment(std::move(a)),
        witness(std::move(witness)),
        cycle_length(cycle_length) {}
  Assignment assignment;
  Configuration witness;
  std::size_t cycle_length;
};

/// Procedure-backed inverse: reads the image over a window covering the whole
/// rectangle, recovers labels along chains and returns the centre's preimage
/// state. Windows that are not images of a unique configuration map to their
/// centre.
class StructuralInverse {
 public:
  explicit StructuralInverse(const CnfFormula& phi) : a_(phi), offsets_(inverse_offsets(a_.n(), a_.m())) {}

  const Automaton& automaton() const { return a_; }
  std::size_t state_count() const { return a_.states().size(); }
  StateId quiescent() const { return a_.states().quiescent(); }
  std::span<const Offset> offsets() const { return offsets_; }

  /// Image configuration and centre position described by a window, if the
  /// window shows exactly one rectangle surrounded by q.
  std::optional<std::pair<Configuration, Pos>> locate(std::span<const StateId> w) const {
    const int n = a_.n();
    const int m = a_.m();
    const int wc = 2 * m + 3;
    const StateId q = quiescent();
    auto at = [&](int dr, int dc) { return w[static_cast<std::size_t>((dr + n) * wc + dc + m + 1)]; };
    if (w.size() != offsets_.size() || at(0, 0) == q) return std::nullopt;
    int r0 = 0;
    while (r0 < n && at(-r0 - 1, 0) != q) ++r0;
    int c0 = 0;
    while (c0 < m + 1 && at(0, -c0 - 1) != q) ++c0;
    std::vector<CellState> cells;
    cells.reserve(static_cast<std::size_t>((n + 1) * (m + 2)));
    for (int dr = -n; dr <= n; ++dr) {
      for (int dc = -(m + 1); dc <= m + 1; ++dc) {
        const bool in_rect = dr >= -r0 && dr <= n - r0 && dc >= -c0 && dc <= m + 1 - c0;
        const StateId v = at(dr, dc);
        if (in_rect != (v != q)) return std::nullopt;
        if (in_rect) cells.push_back(a_.states()[v]);
      }
    }
    return std::make_pair(Configuration(n, m, std::move(cells)), Pos{r0, c0});
  }

  StateId local(std::span<const StateId> w) const {
    const StateId centre = w[offsets_.size() / 2];
    const auto found = locate(w);
    if (!found) return centre;
    const auto pre = preimages(a_, found->first);
    if (pre.size() != 1) return centre;
    return a_.states().index_of(pre.front().at(found->second));
  }

 private:
  Automaton a_;
  std::vector<Offset> offsets_;
};

/// The inverse of A_phi, when A_phi is injective.
inline StructuralInverse structural_inverse(const CnfFormula& phi) {
  const InjectivityResult r = decide_injectivity(phi);
  if (!r.injective) {
    const Automaton A(phi);
    const auto d = decompose(A, r.witness->first);
    throw NotInjectiveError(*r.assignment, r.witness->first, d.cycle.size());
  }
  return StructuralInverse(phi);
}

/// One synchronous application of B to a configuration of A_phi.
template <BoundedCA B>
Configuration apply_inverse(const Automaton& A, const B& b, const Configuration& c) {
  A.check_dims(c);
  if (b.state_count() != A.states().size()) throw DomainError("inverse uses a different state set");
  return to_configuration(A.states(), apply(b, to_index_grid(A.states(), c)));
}

enum class CheckMode { exhaustive, sampled };

/// B(A(C)) = C over Config_{n,m}: every configuration (within `budget`) or
/// `samples` configurations from the mixed distribution.
template <BoundedCA B>
InverseCheck check_inverse_global(const Automaton& A, const B& b, CheckMode mode, std::uint64_t samples = 10000,
                                  std::uint64_t seed = kDefaultSeed, std::uint64_t budget = 1ULL << 24) {
  const PhiCA a(A);
  if (mode == CheckMode::exhaustive) return check_inverse_exhaustive(a, b, A.n() + 1, A.m() + 2, budget);
  return check_inverse_sampled(a, b, A.n() + 1, A.m() + 2, samples, mixed_sampler(A), seed);
}

/// |S|^{10 mu}
inline BigInt size_gate(std::uint64_t s, std::uint64_t mu) { return big_pow(s, 10 * mu); }

struct LocalOptions {
  std::uint64_t budget = 1ULL << 24;  ///< per-cell exhaustive limit
  std::uint64_t samples = 10000;      ///< per-cell samples beyond the limit
  std::uint64_t seed = kDefaultSeed;
};

struct LocalVerdict {
  bool size_ok = false;
  InverseCheck check;
  bool ok() const { return size_ok && check.ok; }
};

/// Inv(n, m, A_phi, B, t): the size gate |S|^{10 mu} < t, then the local
/// inverse condition on every cell.
template <BoundedCA B>
LocalVerdict check_inv_local(const Automaton& A, const B& b, const BigInt& t, const LocalOptions& opt = {}) {
  LocalVerdict v;
  v.size_ok = size_gate(A.states().size(), b.offsets().size()) < t;
  if (!v.size_ok) return v;
  v.check = check_local_condition(PhiCA(A), b, A.n() + 1, A.m() + 2, opt.budget, opt.samples, mixed_sampler(A), opt.seed);
  return v;
}

// ---------------------------------------------------------------------------
// Refutations.

struct Refutation {
  int n = 0;
  int m = 0;
  std::uint64_t s = 0;
  std::uint64_t digest = 0;
  std::vector<Offset> offsets;
  BigInt t;
  /// Explicit table: s^mu outputs, window read as a base-s number with the
  /// first offset most significant.
  std::optional<std::vector<StateId>> table;
  /// Otherwise the structural inverse of this formula, patched by overrides.
  std::optional<CnfFormula> source;
  std::map<std::vector<StateId>, StateId> overrides;

  unsigned width() const { return static_cast<unsigned>(std::bit_width(s - 1)); }
};

/// The inverse automaton a refutation describes.
class RefutationCA {
 public:
  explicit RefutationCA(const Refutation& r) : r_(&r) {
    if (r.source) base_.emplace(*r.source);
  }
  std::size_t state_count() const { return r_->s; }
  StateId quiescent() const { return static_cast<StateId>(r_->s - 1); }
  std::span<const Offset> offsets() const { return r_->offsets; }
  StateId local(std::span<const StateId> w) const {
    if (r_->table) {
      std::size_t idx = 0;
      for (StateId v : w) idx = idx * r_->s + v;
      return (*r_->table)[idx];
    }
    if (!r_->overrides.empty()) {
      const auto it = r_->overrides.find(std::vector<StateId>(w.begin(), w.end()));
      if (it != r_->overrides.end()) return it->second;
    }
    return base_->local(w);
  }

 private:
  const Refutation* r_;
  std::optional<StructuralInverse> base_;
};

/// Refutation of an unsatisfiable formula from its structural inverse, with
/// t = |S|^{10 mu} + 1 unless given.
inline Refutation make_refutation(const CnfFormula& phi, std::optional<BigInt> t = std::nullopt) {
  const StructuralInverse b = structural_inverse(phi);
  const Automaton& A = b.automaton();
  Refutation r;
  r.n = A.n();
  r.m = A.m();
  r.s = A.states().size();
  r.digest = A.states().digest();
  r.offsets.assign(b.offsets().begin(), b.offsets().end());
  r.t = t ? *t : size_gate(r.s, r.offsets.size()) + 1;
  r.source = A.formula();
  return r;
}

/// Explicit-table refutation built by tabulating any B over the state set of
/// A_phi.
template <BoundedCA B>
Refutation make_table_refutation(const Automaton& A, const B& b, std::optional<BigInt> t = std::nullopt,
                                 std::uint64_t row_budget = 1ULL << 24) {
  TableCA tab = tabulate(b, row_budget);
  Refutation r;
  r.n = A.n();
  r.m = A.m();
  r.s = A.states().size();
  r.digest = A.states().digest();
  r.offsets.assign(b.offsets().begin(), b.offsets().end());
  r.t = t ? *t : size_gate(r.s, r.offsets.size()) + 1;
  r.table = tab.rows();
  return r;
}

enum class RefutationStage { accepted, malformed, state_set, size_gate, overrides, local };

inline const char* stage_name(RefutationStage s) {
  switch (s) {
    case RefutationStage::accepted: return "accepted";
    case RefutationStage::malformed: return "malformed";
    case RefutationStage::state_set: return "state-set";
    case RefutationStage::size_gate: return "size-gate";
    case RefutationStage::overrides: return "override-row";
    case RefutationStage::local: return "local-condition";
  }
  return "?";
}

struct RefutationVerdict {
  bool accepted = false;
  RefutationStage stage = RefutationStage::malformed;
  std::string reason;
  InverseCheck check;                          ///< local check or override counterexample
  std::optional<std::vector<StateId>> window;  ///< offending override window
};

namespace detail {
/// Exact check of one override row: every configuration whose image shows
/// `window` around some cell must map back to the override output there.
inline std::optional<InverseCheck> check_override(const Automaton& A, const std::vector<StateId>& window,
                                                  StateId output) {
  const StructuralInverse probe(A.formula());
  const auto found = probe.locate(window);
  if (!found) return std::nullopt;  // no image of a bounded configuration shows this window
  for (const Configuration& pre : preimages(A, found->first)) {
    const StateId want = A.states().index_of(pre.at(found->second));
    if (want != output) {
      InverseCheck c;
      c.ok = false;
      c.exhaustive = true;
      c.checked = 1;
      c.counterexample = to_index_grid(A.states(), pre);
      c.cell = found->second;
      c.expected = want;
      c.got = output;
      return c;
    }
  }
  return std::nullopt;
}
}  // namespace detail

/// Checks a refutation against phi: state set, size gate, override rows,
/// then the local inverse condition.
inline RefutationVerdict verify_refutation(const CnfFormula& phi, const Refutation& r, const LocalOptions& opt = {}) {
  RefutationVerdict v;
  const Automaton A(phi);
  const StateSet& st = A.states();
  if (r.n != A.n() || r.m != A.m() || r.s != st.size() || r.digest != st.digest()) {
    v.stage = RefutationStage::state_set;
    v.reason = "state set differs from S_{n,m} of the normalized formula";
    return v;
  }
  const std::uint64_t mu = r.offsets.size();
  if (mu == 0) {
    v.stage = RefutationStage::malformed;
    v.reason = "empty neighbourhood";
    return v;
  }
  if (!(size_gate(r.s, mu) < r.t)) {
    v.stage = RefutationStage::size_gate;
    v.reason = "t <= |S|^(10 mu)";
    return v;
  }
  if (r.table) {
    if (!r.table->empty() && BigInt(r.table->size()) * r.width() > r.t) {
      v.stage = RefutationStage::size_gate;
      v.reason = "table encoding longer than t";
      return v;
    }
  } else if (r.source) {
    if (r.source->clauses() != r.n || r.source->variables() != r.m || r.offsets != inverse_offsets(r.n, r.m)) {
      v.stage = RefutationStage::malformed;
      v.reason = "structural base does not match the dimensions";
      return v;
    }
    for (const auto& [window, output] : r.overrides) {
      if (auto bad = detail::check_override(A, window, output)) {
        v.stage = RefutationStage::overrides;
        v.reason = "override row maps an image window to the wrong state";
        v.check = *bad;
        v.window = window;
        return v;
      }
    }
  } else {
    v.stage = RefutationStage::malformed;
    v.reason = "refutation has neither a table nor a structural base";
    return v;
  }
  const RefutationCA b(r);
  const LocalVerdict lv = check_inv_local(A, b, r.t, opt);
  v.check = lv.check;
  if (!lv.ok()) {
    v.stage = RefutationStage::local;
    v.reason = "local inverse condition fails";
    return v;
  }
  v.accepted = true;
  v.stage = RefutationStage::accepted;
  v.reason = v.check.exhaustive ? "accepted (exhaustive)" : "accepted (sampled, " + std::to_string(opt.samples) +
                                                                 " assignments per cell beyond the budget)";
  return v;
}

// ---------------------------------------------------------------------------
// Refutation files.

inline void write_refutation(std::ostream& out, const Refutation& r) {
  out << "cellinv-refutation 1\n";
  out << "dims " << r.n << ' ' << r.m << '\n';
  out << "states " << r.s << ' ' << std::hex << r.digest << std::dec << '\n';
  out << "mu " << r.offsets.size() << '\n';
  out << "offsets";
  for (const Offset& o : r.offsets) out << ' ' << o.dr << ',' << o.dc;
  out << '\n';
  out << "t " << r.t.str() << '\n';
  if (r.table) {
    BitString bits;
    for (StateId v : *r.table) bits.push(v, r.width());
    std::ostringstream hex;
    hex << std::hex;
    for (auto byte : bits.bytes()) hex << (byte >> 4) << (byte & 15);
    out << "base table " << bits.size() << ' ' << (bits.bytes().empty() ? "-" : hex.str()) << '\n';
  } else if (r.source) {
    out << "base structural";
    for (auto v : r.source->relation()) out << ' ' << static_cast<int>(v);
    out << '\n';
  }
  out << "overrides " << r.overrides.size() << '\n';
  for (const auto& [window, output] : r.overrides) {
    out << to_hex(sequence_code(window, r.width())) << ' ' << output << '\n';
  }
  out << "end\n";
}

inline std::string refutation_text(const Refutation& r) {
  std::ostringstream out;
  write_refutation(out, r);
  return out.str();
}

inline Refutation parse_refutation(std::istream& in) {
  auto line_of = [&in](const std::string& key) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::istringstream ls(line);
      std::string tag;
      ls >> tag;
      if (tag != key) throw ParseError("expected '" + key + "' line, found: " + line);
      std::string rest;
      std::getline(ls, rest);
      return rest;
    }
    throw ParseError("refutation truncated before '" + key + "'");
  };
  auto number = [](std::istringstream& ls, const std::string& what) {
    long long v = 0;
    if (!(ls >> v)) throw ParseError("bad " + what);
    return v;
  };
  Refutation r;
  {
    std::istringstream ls(line_of("cellinv-refutation"));
    if (number(ls, "version") != 1) throw ParseError("unsupported refutation version");
  }
  {
    std::istringstream ls(line_of("dims"));
    r.n = static_cast<int>(number(ls, "n"));
    r.m = static_cast<int>(number(ls, "m"));
    if (r.n < 1 || r.m < 1) throw ParseError("bad dimensions");
  }
  {
    std::istringstream ls(line_of("states"));
    const long long s = number(ls, "state count");
    if (s < 2) throw ParseError("bad state count");
    r.s = static_cast<std::uint64_t>(s);
    std::string hex;
    ls >> hex;
    r.digest = static_cast<std::uint64_t>(from_hex(hex));
  }
  std::size_t mu = 0;
  {
    std::istringstream ls(line_of("mu"));
    const long long v = number(ls, "mu");
    if (v < 1 || v > 1000000) throw ParseError("bad mu");
    mu = static_cast<std::size_t>(v);
  }
  {
    std::istringstream ls(line_of("offsets"));
    std::string tok;
    while (ls >> tok) {
      Offset o;
      char comma = 0;
      std::istringstream ts(tok);
      if (!(ts >> o.dr >> comma >> o.dc) || comma != ',' || !ts.eof()) throw ParseError("bad offset '" + tok + "'");
      r.offsets.push_back(o);
    }
    if (r.offsets.size() != mu) throw ParseError("offset list does not have mu entries");
  }
  {
    std::istringstream ls(line_of("t"));
    std::string tok;
    ls >> tok;
    r.t = from_decimal(tok);
  }
  {
    std::istringstream ls(line_of("base"));
    std::string kind;
    ls >> kind;
    if (kind == "structural") {
      std::vector<std::int8_t> rel;
      int v = 0;
      while (ls >> v) rel.push_back(static_cast<std::int8_t>(v));
      if (!ls.eof()) throw ParseError("bad relation entry");
      if (rel.size() != static_cast<std::size_t>(r.n) * static_cast<std::size_t>(r.m)) {
        throw ParseError("structural base needs n*m relation entries");
      }
      try {
        r.source = CnfFormula(r.n, r.m, std::move(rel));
      } catch (const DomainError& e) {
        throw ParseError(e.what());
      }
    } else if (kind == "table") {
      std::uint64_t bits = 0;
      std::string hex;
      if (!(ls >> bits >> hex)) throw ParseError("bad table line");
      const auto rows = bounded_power(r.s, mu, std::uint64_t{1} << 32);
      if (!rows) throw ParseError("explicit table too large");
      if (bits != *rows * r.width()) throw ParseError("table bit length does not match s^mu * width");
      std::vector<std::uint8_t> bytes;
      if (hex != "-") {
        if (hex.size() % 2 != 0) throw ParseError("odd hex payload");
        for (std::size_t k = 0; k < hex.size(); k += 2) {
          bytes.push_back(static_cast<std::uint8_t>(from_hex(hex.substr(k, 2))));
        }
      }
      const BitString payload(std::move(bytes), bits);
      std::vector<StateId> table(*rows);
      for (std::uint64_t k = 0; k < *rows; ++k) {
        const auto v = payload.read(k * r.width(), r.width());
        if (v >= r.s) throw ParseError("table entry is not a state index");
        table[k] = static_cast<StateId>(v);
      }
      r.table = std::move(table);
    } else {
      throw ParseError("unknown base kind '" + kind + "'");
    }
  }
  std::size_t count = 0;
  {
    std::istringstream ls(line_of("overrides"));
    const long long v = number(ls, "override count");
    if (v < 0) throw ParseError("bad override count");
    count = static_cast<std::size_t>(v);
  }
  if (count > 0 && r.table) throw ParseError("explicit tables take no overrides");
  std::string line;
  for (std::size_t k = 0; k < count; ++k) {
    if (!std::getline(in, line)) throw ParseError("refutation truncated in override rows");
    std::istringstream ls(line);
    std::string hex;
    long long output = -1;
    if (!(ls >> hex >> output) || output < 0 || static_cast<std::uint64_t>(output) >= r.s) {
      throw ParseError("bad override row: " + line);
    }
    const auto window = sequence_decode(from_hex(hex), mu, r.width());
    for (StateId v : window) {
      if (v >= r.s) throw ParseError("override window holds a non-state index");
    }
    r.overrides[window] = static_cast<StateId>(output);
  }
  line_of("end");
  return r;
}

inline Refutation parse_refutation(const std::string& text) {
  std::istringstream in(text);
  return parse_refutation(in);
}

/// verify_refutation on serialized input; malformed text is rejected.
inline RefutationVerdict verify_refutation_text(const CnfFormula& phi, const std::string& text,
                                                const LocalOptions& opt = {}) {
  try {
    return verify_refutation(phi, parse_refutation(text), opt);
  } catch (const ParseError& e) {
    RefutationVerdict v;
    v.stage = RefutationStage::malformed;
    v.reason = e.what();
    return v;
  }
}

// ---------------------------------------------------------------------------
// Size report for the pigeonhole family.

struct SizeRow {
  int k = 0;
  int n = 0;  ///< normalized clause count
  int m = 0;
  std::uint64_t states = 0;
  std::uint64_t cells = 0;  ///< (n+1)(m+2)
  std::uint64_t mu = 0;     ///< window of the structural inverse
  double log2_table_bits = 0;
  double log2_gate = 0;
};

inline std::vector<SizeRow> size_report(int k_max) {
  std::vector<SizeRow> rows;
  for (int k = 1; k <= k_max; ++k) {
    const CnfFormula phi = normalize_odd(gen_onto_php(k));
    SizeRow row;
    row.k = k;
    row.n = phi.clauses();
    row.m = phi.variables();
    row.states = state_count(row.n, row.m);
    row.cells = static_cast<std::uint64_t>(row.n + 1) * static_cast<std::uint64_t>(row.m + 2);
    row.mu = inverse_mu(row.n, row.m);
    const double ls = std::log2(static_cast<double>(row.states));
    const double w = std::ceil(ls);
    row.log2_table_bits = static_cast<double>(row.mu) * ls + std::log2(w);
    row.log2_gate = 10.0 * static_cast<double>(row.mu) * ls;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cellinv
