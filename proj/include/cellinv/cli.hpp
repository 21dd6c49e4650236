#pragma once

// Command-line front end. Exit codes: 0 success or affirmative verdict,
// 1 negative verdict, 2 usage or format error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cellinv/analysis.hpp"
#include "cellinv/automaton.hpp"
#include "cellinv/catable.hpp"
#include "cellinv/configuration.hpp"
#include "cellinv/formula.hpp"
#include "cellinv/inverse.hpp"
#include "cellinv/tableau.hpp"
#include "cellinv/translate.hpp"

namespace cellinv::cli {

using nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(data.data(), static_cast<std::streamsize>(data.size()))) {
    throw Error("cannot write '" + path + "'");
  }
}

inline CnfFormula load_cnf(const std::string& path) { return parse_dimacs(read_file(path)); }
inline Configuration load_config(const std::string& path) { return parse_configuration(read_file(path)); }

inline json pos_json(Pos p) { return json::array({p.r, p.c}); }

inline json check_json(const InverseCheck& c) {
  json j{{"ok", c.ok}, {"exhaustive", c.exhaustive}, {"checked", c.checked}};
  if (c.cell) {
    j["cell"] = pos_json(*c.cell);
    j["expected"] = c.expected;
    j["got"] = c.got;
  }
  if (c.counterexample) j["counterexample"] = c.counterexample->cells;
  return j;
}

struct Options {
  std::string out_path;
  std::string cnf;
  std::string config;
  std::string file;
  std::string assignment;
  std::string prefix;
  std::string table_path;
  std::string refutation_out;
  std::string env;
  std::string scan;
  std::string output;
  std::uint64_t budget = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = kDefaultSeed;
  int k = 1;
  bool normalize = false;
  bool pretty = false;
  bool weak = false;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int compile(const Options& o) {
    const Automaton A(load_cnf(o.cnf));
    const auto s = A.states().size();
    const unsigned w = A.states().index_width();
    report_ = {{"n", A.n()}, {"m", A.m()}, {"states", s}, {"width", w},
               {"rows", BigInt(big_pow(s, 5)).str()}, {"table_bits", (big_pow(s, 5) * w).str()},
               {"digest", to_hex(BigInt(A.states().digest()))}};
    out_ << "n=" << A.n() << " m=" << A.m() << " states=" << s << " width=" << w << " rows=" << big_pow(s, 5)
         << " table_bits=" << big_pow(s, 5) * w << '\n';
    if (!o.table_path.empty()) {
      const CaTable t = materialize_table(A, o.budget);
      std::ostringstream bin;
      write_table_file(bin, t);
      write_file(o.table_path, bin.str());
      report_["table_file"] = o.table_path;
      out_ << "table written to " << o.table_path << '\n';
    }
    return 0;
  }

  int table(const Options& o) {
    CnfFormula phi = load_cnf(o.cnf);
    if (o.normalize) phi = normalize_odd(phi);
    const Assignment a = Assignment::parse(o.assignment);
    const Configuration c = build_table(phi, a);
    emit_config(c, o.output);
    if (o.pretty) pretty_print(out_, c);
    report_ = {{"n", c.n()}, {"m", c.m()}, {"assignment", a.str()}, {"satisfied", is_satisfied(phi, a)}};
    return 0;
  }

  int step(const Options& o) {
    const Automaton A(load_cnf(o.cnf));
    const Configuration c = load_config(o.config);
    A.check_dims(c);
    Configuration img = c;
    if (!o.table_path.empty()) {
      std::istringstream in(read_file(o.table_path));
      const CaTable t = read_table_file(in);
      img = step_with_table(t, A.states(), c);
    } else {
      img = A.step(c);
    }
    emit_config(img, o.output);
    report_ = {{"similar", similar(c, img)}, {"fixed_point", img == c}};
    return 0;
  }

  int color(const Options& o) {
    const Automaton A(load_cnf(o.cnf));
    const Configuration c = load_config(o.config);
    A.check_dims(c);
    json cells = json::array();
    int red = 0;
    for (int r = 0; r < c.rows(); ++r) {
      for (int col = 0; col < c.cols(); ++col) {
        const Pos p{r, col};
        const Verdict v = A.check(c, p);
        const Color k = A.color(c, p);
        red += k == Color::red;
        const std::string tag = k == Color::blue ? "B" : v.ok ? "R:out" : std::string("R:") + rule_name(v.rule);
        out_ << (col ? " " : "") << std::left << std::setw(6) << tag;
        cells.push_back({{"pos", pos_json(p)}, {"color", color_name(k)}, {"rule", rule_name(v.rule)}});
      }
      out_ << '\n';
    }
    report_ = {{"red", red}, {"cells", cells}};
    return 0;
  }

  int decompose_cmd(const Options& o) {
    const Automaton A(load_cnf(o.cnf));
    const Configuration c = load_config(o.config);
    A.check_dims(c);
    const ChainDecomposition d = decompose(A, c);
    json chains = json::array();
    for (const auto& ch : d.chains) {
      json path = json::array();
      for (const Pos& p : ch) path.push_back(pos_json(p));
      chains.push_back(path);
    }
    json iso = json::array();
    for (const Pos& p : d.isolated) iso.push_back(pos_json(p));
    report_ = {{"chains", chains}, {"cycle_length", d.cycle.size()}, {"isolated", iso}};
    out_ << "chains=" << d.chains.size() << " cycle_length=" << d.cycle.size() << " isolated=" << d.isolated.size()
         << '\n';
    for (const auto& ch : d.chains) {
      out_ << "chain";
      for (const Pos& p : ch) out_ << " (" << p.r << ',' << p.c << ')';
      out_ << '\n';
    }
    return 0;
  }

  int decide(const Options& o) {
    const InjectivityResult r = decide_injectivity(load_cnf(o.cnf));
    report_ = {{"verdict", r.injective ? "injective" : "non_injective"}};
    if (r.injective) {
      out_ << "injective\n";
      return 0;
    }
    out_ << "non_injective assignment=" << r.assignment->str() << '\n';
    report_["assignment"] = r.assignment->str();
    if (!o.prefix.empty()) write_witness(o.prefix, *r.witness);
    return 1;
  }

  int witness(const Options& o) {
    const CnfFormula phi = load_cnf(o.cnf);
    const Assignment a = Assignment::parse(o.assignment);
    if (!is_satisfied(phi, a)) {
      out_ << "assignment " << a.str() << " does not satisfy the formula\n";
      report_ = {{"verdict", "not_satisfying"}};
      return 1;
    }
    const Automaton A(phi);
    const auto w = witness_pair(phi, a);
    const bool collide = w.first != w.second && A.step(w.first) == A.step(w.second);
    const std::string prefix = o.prefix.empty() ? "witness" : o.prefix;
    write_witness(prefix, w);
    out_ << "collision " << (collide ? "verified" : "FAILED") << '\n';
    report_ = {{"verdict", collide ? "collision" : "failed"}, {"assignment", a.str()}};
    return collide ? 0 : 1;
  }

  int oracle(const Options& o) {
    const Automaton A(load_cnf(o.cnf));
    std::mt19937_64 rng(o.seed);
    std::uint64_t agree = 0;
    std::uint64_t total = 0;
    auto run_one = [&](const Configuration& c) {
      ++total;
      agree += class_injective(A, c) == class_injective_bruteforce(A, c);
    };
    for (std::uint64_t t = 0; t < o.samples; ++t) run_one(random_configuration(A, rng));
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << A.m()) && A.m() <= 16; ++idx) {
      run_one(build_table(A.formula(), Assignment::from_index(A.m(), idx)));
    }
    out_ << "seed=" << o.seed << " agree=" << agree << '/' << total << '\n';
    report_ = {{"seed", o.seed}, {"agree", agree}, {"total", total}};
    return agree == total ? 0 : 1;
  }

  int invert(const Options& o) {
    const CnfFormula phi = load_cnf(o.cnf);
    try {
      const StructuralInverse b = structural_inverse(phi);
      const Automaton& A = b.automaton();
      const InverseCheck chk = check_inverse_global(A, b, CheckMode::sampled, o.samples, o.seed);
      report_ = {{"verdict", "inverse"}, {"mu", b.offsets().size()}, {"seed", o.seed}, {"global", check_json(chk)}};
      out_ << "inverse mu=" << b.offsets().size() << " sampled_global=" << (chk.ok ? "pass" : "FAIL") << " ("
           << chk.checked << " configurations, seed " << o.seed << ")\n";
      if (!o.config.empty()) emit_config(apply_inverse(A, b, load_config(o.config)), o.output);
      if (!o.refutation_out.empty()) {
        write_file(o.refutation_out, refutation_text(make_refutation(phi)));
        report_["refutation"] = o.refutation_out;
      }
      return chk.ok ? 0 : 1;
    } catch (const NotInjectiveError& e) {
      out_ << "not injective: assignment=" << e.assignment.str() << " cycle_length=" << e.cycle_length << '\n';
      report_ = {{"verdict", "not_injective"}, {"assignment", e.assignment.str()}, {"cycle_length", e.cycle_length}};
      if (!o.prefix.empty()) write_file(o.prefix + ".cfg", configuration_text(e.witness));
      return 1;
    }
  }

  int verify(const Options& o) {
    const CnfFormula phi = load_cnf(o.cnf);
    LocalOptions lo;
    lo.budget = o.budget;
    lo.samples = o.samples;
    lo.seed = o.seed;
    const RefutationVerdict v = verify_refutation_text(phi, read_file(o.file), lo);
    report_ = {{"verdict", v.accepted ? "accept" : "reject"}, {"stage", stage_name(v.stage)}, {"reason", v.reason},
               {"seed", o.seed}, {"check", check_json(v.check)}};
    out_ << (v.accepted ? "accept" : "reject") << " [" << stage_name(v.stage) << "] " << v.reason << '\n';
    if (v.check.cell) {
      out_ << "counterexample cell=(" << v.check.cell->r << ',' << v.check.cell->c << ") expected=" << v.check.expected
           << " got=" << v.check.got << '\n';
    }
    if (v.stage == RefutationStage::malformed) return 2;
    return v.accepted ? 0 : 1;
  }

  int phpgen(const Options& o) {
    if (o.k < 1) throw DomainError("k must be at least 1");
    const CnfFormula phi = o.weak ? gen_weak_php(o.k) : gen_onto_php(o.k);
    std::ostringstream text;
    text << "c " << (o.weak ? "weak" : "onto") << " pigeonhole, k=" << o.k << ", p_{ij} = i*k+j+1\n";
    write_dimacs(text, phi);
    if (o.output.empty()) {
      out_ << text.str();
    } else {
      write_file(o.output, text.str());
    }
    report_ = {{"k", o.k}, {"variables", phi.variables()}, {"clauses", phi.clauses()}};
    return 0;
  }

  int translate(const Options& o) {
    const Delta0Formula a = parse_delta0(o.file);
    if (!o.scan.empty()) {
      std::string var;
      std::uint64_t lo = 0;
      std::uint64_t hi = 0;
      const auto c1 = o.scan.find(':');
      const auto c2 = o.scan.find(':', c1 == std::string::npos ? c1 : c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos) throw ParseError("--scan expects var:lo:hi");
      var = o.scan.substr(0, c1);
      lo = std::stoull(o.scan.substr(c1 + 1, c2 - c1 - 1));
      hi = std::stoull(o.scan.substr(c2 + 1));
      json rows = json::array();
      for (const ScanRow& r : size_depth_scan(a, var, lo, hi, parse_env(o.env))) {
        out_ << var << '=' << r.value << " size=" << r.size << " depth=" << r.depth << '\n';
        rows.push_back({{"value", r.value}, {"size", r.size}, {"depth", r.depth}});
      }
      report_ = {{"scan", rows}};
      return 0;
    }
    const PropFormula f = pw_translate(a, parse_env(o.env));
    out_ << to_infix(f) << '\n' << "size=" << formula_size(f) << " depth=" << depth(f) << '\n';
    report_ = {{"formula", to_infix(f)}, {"size", formula_size(f)}, {"depth", depth(f)}};
    return 0;
  }

  int sizes(const Options& o) {
    json rows = json::array();
    out_ << "k n m states cells mu log2_table_bits log2_gate\n";
    for (const SizeRow& r : size_report(o.k)) {
      out_ << r.k << ' ' << r.n << ' ' << r.m << ' ' << r.states << ' ' << r.cells << ' ' << r.mu << ' '
           << std::fixed << std::setprecision(1) << r.log2_table_bits << ' ' << r.log2_gate << '\n';
      rows.push_back({{"k", r.k}, {"n", r.n}, {"m", r.m}, {"states", r.states}, {"cells", r.cells}, {"mu", r.mu},
                      {"log2_table_bits", r.log2_table_bits}, {"log2_gate", r.log2_gate}});
    }
    report_ = {{"rows", rows}};
    return 0;
  }

  json& report() { return report_; }

 private:
  void emit_config(const Configuration& c, const std::string& path) {
    if (path.empty()) {
      write_configuration(out_, c);
    } else {
      write_file(path, configuration_text(c));
    }
  }

  void write_witness(const std::string& prefix, const std::pair<Configuration, Configuration>& w) {
    write_file(prefix + "1.cfg", configuration_text(w.first));
    write_file(prefix + "2.cfg", configuration_text(w.second));
    out_ << "witness files " << prefix << "1.cfg " << prefix << "2.cfg\n";
  }

  std::ostream& out_;
  std::ostream& err_;
  json report_;
};

/// Runs the command line `args` (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reduction from CNF formulas to cellular automata and inverse-automaton refutations", "cellinv"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--out", o.out_path, "Write a JSON report to this file");

  auto* compile = app.add_subcommand("compile", "Summarize A_phi; optionally write its transition table");
  compile->add_option("cnf", o.cnf, "DIMACS file")->required();
  compile->add_option("--table-out", o.table_path, "Binary table output file");
  compile->add_option("--budget", o.budget, "Row budget for the table")->default_val(1ULL << 28);

  auto* table = app.add_subcommand("table", "Emit the computation table Table_phi(a)");
  table->add_option("cnf", o.cnf, "DIMACS file")->required();
  table->add_option("-a,--assignment", o.assignment, "Assignment such as 011")->required();
  table->add_flag("--normalize", o.normalize, "Use the odd-normalized formula");
  table->add_flag("--pretty", o.pretty, "Also print an aligned grid");
  table->add_option("-o,--output", o.output, "Configuration output file");

  auto* step = app.add_subcommand("step", "Apply A_phi once");
  step->add_option("cnf", o.cnf, "DIMACS file")->required();
  step->add_option("config", o.config, "Configuration file")->required();
  step->add_option("--table", o.table_path, "Use a binary table instead of the rules");
  step->add_option("-o,--output", o.output, "Configuration output file");

  auto* color = app.add_subcommand("color", "Colour every cell and name the first violated rule");
  color->add_option("cnf", o.cnf, "DIMACS file")->required();
  color->add_option("config", o.config, "Configuration file")->required();

  auto* decomp = app.add_subcommand("decompose", "Pointed chains and cycle of a configuration");
  decomp->add_option("cnf", o.cnf, "DIMACS file")->required();
  decomp->add_option("config", o.config, "Configuration file")->required();

  auto* decide = app.add_subcommand("decide", "Decide injectivity of A_phi (exit 1 when not injective)");
  decide->add_option("cnf", o.cnf, "DIMACS file")->required();
  decide->add_option("--prefix", o.prefix, "Write witness configurations to <prefix>1.cfg and <prefix>2.cfg");

  auto* witness = app.add_subcommand("witness", "Write and verify the collision pair for a satisfying assignment");
  witness->add_option("cnf", o.cnf, "DIMACS file")->required();
  witness->add_option("-a,--assignment", o.assignment, "Satisfying assignment")->required();
  witness->add_option("--prefix", o.prefix, "Output prefix (default: witness)");

  auto* oracle = app.add_subcommand("oracle", "Compare the red-cell criterion with brute force on random classes");
  oracle->add_option("cnf", o.cnf, "DIMACS file")->required();
  oracle->add_option("--samples", o.samples, "Random skeletons")->default_val(1000);
  oracle->add_option("--seed", o.seed, "Random seed")->default_val(kDefaultSeed);

  auto* invert = app.add_subcommand("invert", "Build the structural inverse and check it on sampled configurations");
  invert->add_option("cnf", o.cnf, "DIMACS file")->required();
  invert->add_option("--config", o.config, "Apply the inverse to this configuration");
  invert->add_option("-o,--output", o.output, "Output file for --config");
  invert->add_option("--samples", o.samples, "Sampled configurations")->default_val(1000);
  invert->add_option("--seed", o.seed, "Random seed")->default_val(kDefaultSeed);
  invert->add_option("--refutation-out", o.refutation_out, "Write a refutation file");
  invert->add_option("--prefix", o.prefix, "Write the cycle witness to <prefix>.cfg when not injective");

  auto* verify = app.add_subcommand("verify", "Verify a refutation (exit 0 accept, 1 reject, 2 malformed)");
  verify->add_option("cnf", o.cnf, "DIMACS file")->required();
  verify->add_option("refutation", o.file, "Refutation file")->required();
  verify->add_option("--budget", o.budget, "Per-cell exhaustive budget")->default_val(1ULL << 24);
  verify->add_option("--samples", o.samples, "Per-cell samples beyond the budget")->default_val(10000);
  verify->add_option("--seed", o.seed, "Random seed")->default_val(kDefaultSeed);

  auto* php = app.add_subcommand("phpgen", "Pigeonhole CNF; variable p_{ij} is numbered i*k+j+1");
  php->add_option("k", o.k, "Number of holes")->required();
  php->add_flag("--weak", o.weak, "Only the weak pigeonhole clauses");
  php->add_option("-o,--output", o.output, "DIMACS output file");

  auto* tr = app.add_subcommand("translate", "Paris-Wilkie translation of a Delta_0(R) formula");
  tr->add_option("formula", o.file, "S-expression formula")->required();
  tr->add_option("--env", o.env, "Bindings such as x=2,y=3");
  tr->add_option("--scan", o.scan, "Report size and depth for var:lo:hi");

  auto* sizes = app.add_subcommand("sizes", "Size report for the onto pigeonhole family");
  sizes->add_option("kmax", o.k, "Largest k")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  Runner runner(out, err);
  int code = 2;
  try {
    if (*compile) code = runner.compile(o);
    if (*table) code = runner.table(o);
    if (*step) code = runner.step(o);
    if (*color) code = runner.color(o);
    if (*decomp) code = runner.decompose_cmd(o);
    if (*decide) code = runner.decide(o);
    if (*witness) code = runner.witness(o);
    if (*oracle) code = runner.oracle(o);
    if (*invert) code = runner.invert(o);
    if (*verify) code = runner.verify(o);
    if (*php) code = runner.phpgen(o);
    if (*tr) code = runner.translate(o);
    if (*sizes) code = runner.sizes(o);
  } catch (const ParseError& e) {
    err << "format error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  if (!o.out_path.empty()) {
    json& rep = runner.report();
    rep["command"] = app.get_subcommands().front()->get_name();
    rep["exit_code"] = code;
    try {
      write_file(o.out_path, rep.dump(2) + "\n");
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return code;
}

}  // namespace cellinv::cli
