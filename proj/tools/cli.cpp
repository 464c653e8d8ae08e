#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "tm2qbf/audit.hpp"
#include "tm2qbf/encoder.hpp"
#include "tm2qbf/evaluator.hpp"
#include "tm2qbf/interchange.hpp"
#include "tm2qbf/machine.hpp"
#include "tm2qbf/qbf.hpp"
#include "tm2qbf/render.hpp"
#include "tm2qbf/structure.hpp"
#include "tm2qbf/translator.hpp"

namespace tm2qbf::cli {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

// Input problems detected after argument parsing; mapped to kUsage.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes to `path` through a temporary file and a rename, or to `out` when
// the path is empty.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write " + path);
    f << text;
    if (!f) throw InputError("cannot write " + path);
  }
  std::filesystem::rename(tmp, path);
}

struct MachineInput {
  Program raw;
  Program prepared;
  Word word;
};

MachineInput load_machine(const std::string& program_path, const std::string& input) {
  MachineInput mi;
  mi.raw = parse_program(read_file(program_path));
  mi.word = parse_word(input, mi.raw.alphabet, true);
  mi.prepared = prepare_program(mi.raw);
  return mi;
}

EvalOptions eval_options(const std::string& strategy_name, long long budget_ms) {
  auto s = parse_strategy(strategy_name);
  if (!s) throw InputError("unknown strategy " + strategy_name);
  if (budget_ms < 0) throw InputError("budget must not be negative");
  EvalOptions opts;
  opts.strategy = *s;
  opts.budget.time = std::chrono::milliseconds(budget_ms);
  return opts;
}

VarOrderKey omega_order(const RecordLayout& layout) {
  return [layout](const VarId& v) { return record_order_key(v, layout); };
}

json verdict_json(Verdict v) {
  if (v == Verdict::BudgetExceeded) return "timeout";
  return v == Verdict::True;
}

struct VerifyArgs {
  std::string program;
  std::string input;
  unsigned m = 0;
  std::string strategy = "guarded";
  long long budget_ms = 300000;
  bool fallback = false;
};

// Simulation beyond this many steps is not attempted; Ω is far out of reach
// long before.
constexpr std::size_t kMaxSimulatedSteps = std::size_t{1} << 32;

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  MachineInput mi = load_machine(a.program, a.input);
  EncodingParams params = derive_params(mi.prepared, mi.word, a.m);
  const Index T = params.T;
  std::size_t steps = T > Index{kMaxSimulatedSteps} ? kMaxSimulatedSteps : static_cast<std::size_t>(T);

  auto sim_start = Clock::now();
  auto sim = std::async(std::launch::async, [&] {
    auto r = simulate(mi.prepared, mi.word, steps, false);
    return std::make_pair(r, ms_since(sim_start));
  });

  auto build_start = Clock::now();
  Encoder enc(params);
  FormulaPtr omega = enc.omega();
  double build_ms = ms_since(build_start);

  EvalOptions opts = eval_options(a.strategy, a.budget_ms);
  opts.order = omega_order(params.layout());
  EvalResult res = eval_sentence(omega, opts);
  std::string solver(to_string(opts.strategy));
  double fallback_ms = 0.0;
  if (!res.finished() && a.fallback) {
    auto start = Clock::now();
    Circuit c = parse_qcir(write_qcir(to_circuit(omega, opts.order)));
    res = solve_bdd(c, opts.budget);
    fallback_ms = ms_since(start);
    solver = "symbolic on exported QCIR";
  }
  auto [sim_result, sim_ms] = sim.get();

  const Outcome& outcome = sim_result.outcome;
  const bool accepted = outcome.accepted() && Index{outcome.step} <= T;
  json report;
  report["machine"] = std::filesystem::path(a.program).stem().string();
  report["input"] = a.input;
  report["m"] = params.m;
  report["T"] = to_decimal(T);
  report["r"] = params.r;
  report["strategy"] = std::string(to_string(opts.strategy));
  report["solver"] = solver;
  report["omega_truth"] = verdict_json(res.verdict);
  report["simulator_outcome"] = to_string(outcome);
  report["accepted_within_T"] = accepted;
  report["agree"] = res.finished() ? json(res.value() == accepted) : json(nullptr);
  report["search_nodes"] = res.nodes;
  report["wall_ms"] = {{"build", build_ms}, {"evaluate", res.ms}, {"simulate", sim_ms}};
  if (fallback_ms > 0.0) report["wall_ms"]["fallback"] = fallback_ms;
  report["lengths"] = {{"omega_len", length_natural(omega)},
                       {"omega_len_noidx", length_natural_noidx(omega)},
                       {"dag_size", dag_size(omega)}};
  out << report.dump(2) << '\n';
  if (!res.finished()) return kBudget;
  return res.value() == accepted ? kOk : kDisagree;
}

struct EncodeArgs {
  std::string program;
  std::string input;
  std::optional<unsigned> m;
  std::string format = "interchange";
  std::string out;
};

int cmd_encode(const EncodeArgs& a, std::ostream& out, std::ostream& err) {
  MachineInput mi = load_machine(a.program, a.input);
  if (!a.m) err << "warning: zone exponent defaults to |X|; evaluating this sentence is infeasible\n";
  EncodingParams params = derive_params(mi.prepared, mi.word, a.m);
  RecordLayout layout = params.layout();
  FormulaPtr omega = Encoder(std::move(params)).omega();
  std::string text;
  if (a.format == "interchange") {
    text = serialize(omega, Signature::boolean());
  } else if (a.format == "qcir") {
    text = write_qcir(to_circuit(omega, omega_order(layout)));
  } else {
    text = write_qdimacs(to_qdimacs(to_circuit(omega, omega_order(layout))));
  }
  emit(a.out, text, out);
  return kOk;
}

struct SimulateArgs {
  std::string program;
  std::string input;
  std::size_t steps = 16;
  bool trace = false;
  bool raw = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  MachineInput mi = load_machine(a.program, a.input);
  const Program& p = a.raw ? mi.raw : mi.prepared;
  SimulationResult r = simulate(p, mi.word, a.steps, a.trace);
  json j;
  j["outcome"] = to_string(r.outcome);
  if (a.trace) j["trace"] = json::parse(trace_to_json(r.trace, p.alphabet));
  out << j.dump() << '\n';
  return kOk;
}

struct EvalArgs {
  std::string formula;
  std::string format = "interchange";
  std::string strategy;
  long long budget_ms = 0;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  std::string text = read_file(a.formula);
  EvalResult res;
  std::string strategy = a.strategy;
  if (a.format == "interchange") {
    if (strategy.empty()) strategy = "guarded";
    Document doc = parse_formula(text);
    if (doc.signature.kind != Signature::Kind::BooleanAlgebra) {
      throw InputError("eval expects a Boolean-algebra sentence");
    }
    res = eval_sentence(doc.formula, eval_options(strategy, a.budget_ms));
  } else if (a.format == "qcir") {
    if (strategy.empty()) strategy = "symbolic";
    EvalOptions opts = eval_options(strategy, a.budget_ms);
    Circuit c = parse_qcir(text);
    if (opts.strategy == Strategy::Symbolic) {
      res = solve_bdd(c, opts.budget);
    } else if (opts.strategy == Strategy::QbfSearch) {
      res = solve_qdimacs(to_qdimacs(c), opts.budget);
    } else {
      throw InputError("QCIR input is decided by the symbolic or qbf-search strategy");
    }
  } else {
    if (strategy.empty()) strategy = "qbf-search";
    EvalOptions opts = eval_options(strategy, a.budget_ms);
    if (opts.strategy != Strategy::QbfSearch) throw InputError("QDIMACS input is decided by qbf-search");
    res = solve_qdimacs(parse_qdimacs(text), opts.budget);
  }
  json j = {{"verdict", std::string(to_string(res.verdict))},
            {"strategy", strategy},
            {"nodes", res.nodes},
            {"ms", res.ms}};
  out << j.dump() << '\n';
  return res.finished() ? kOk : kBudget;
}

struct TranslateArgs {
  std::string formula;
  std::string mode;
  std::string n_formula;
  std::string model;
  bool check = false;
  std::string out;
};

int cmd_translate(const TranslateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.mode == "2.2" && a.n_formula.empty()) throw InputError("mode 2.2 needs --n-formula");
  Document doc = parse_formula(read_file(a.formula));
  if (doc.signature.kind != Signature::Kind::BooleanAlgebra) {
    throw InputError("translate expects a Boolean-algebra sentence");
  }
  TranslationStats stats;
  FormulaPtr target;
  if (a.mode == "2.0") {
    target = translate_20(doc.formula, &stats);
  } else if (a.mode == "2.1") {
    target = translate_21(doc.formula, &stats);
  } else {
    Document n = parse_formula(read_file(a.n_formula));
    target = translate_22(doc.formula, n.formula, &stats);
  }
  for (const auto& w : stats.warnings) err << "warning: " << w << '\n';
  emit(a.out, serialize(target), out);
  if (!a.check && a.model.empty()) return kOk;

  EqStructure model;
  if (!a.model.empty()) {
    model = parse_structure(read_file(a.model));
  } else if (a.mode == "2.0") {
    model = EqStructure::classes(2, 2, true);
  } else if (a.mode == "2.1") {
    model = EqStructure::classes(3, 2, false);
  } else {
    model = EqStructure::equality(3);
  }
  EvalResult source = eval_sentence(doc.formula);
  if (!source.finished()) return kBudget;
  bool target_value = eval_relational(target, model);
  json j = {{"source", source.value()},
            {"target", target_value},
            {"equivalent", source.value() == target_value},
            {"passes", stats.passes}};
  err << j.dump() << '\n';
  return source.value() == target_value ? kOk : kDisagree;
}

struct ReduceArgs {
  std::string program;
  std::string compare;
};

int cmd_reduce(const ReduceArgs& a, std::ostream& out) {
  Program p = parse_program(read_file(a.program));
  if (a.compare.empty()) {
    out << format_program(reduce_clone(p));
    return kOk;
  }
  Program q = parse_program(read_file(a.compare));
  out << json{{"monoclonal", monoclonal(p, q)}}.dump() << '\n';
  return kOk;
}

struct StatsArgs {
  std::string program;
  std::vector<std::size_t> lengths{4, 8, 16, 32};
  bool as_json = false;
};

constexpr double kMaxSlope = 2.5;

int cmd_stats(const StatsArgs& a, std::ostream& out, std::ostream& err) {
  if (a.lengths.empty()) throw InputError("no input lengths");
  Program p = parse_program(read_file(a.program));
  AuditReport report = length_audit(p, a.lengths);
  bool slope_ok = report.rows.size() < 2 || report.slope <= kMaxSlope;
  out << (a.as_json ? audit_json(report) + "\n" : audit_csv(report));
  err << "slope " << report.slope << (slope_ok ? " ok" : " above 2.5") << "; lengths "
      << (report.lengths_cover_input ? "cover" : "do not cover") << " the input\n";
  return slope_ok && report.lengths_cover_input ? kOk : kDisagree;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Encode Turing machine runs as Boolean-algebra sentences and check them", "tm2qbf"};
  app.require_subcommand(1);

  const std::vector<std::string> strategies{"naive", "short-circuit", "guarded", "qbf-search", "symbolic"};

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Evaluate Ω and compare with the simulator");
  verify->add_option("--program", va.program, "Machine file")->required()->check(CLI::ExistingFile);
  verify->add_option("--input", va.input, "Input word")->required();
  verify->add_option("--zone-exp", va.m, "Zone exponent m (T = 2^m)")->required();
  verify->add_option("--strategy", va.strategy)->check(CLI::IsMember(strategies));
  verify->add_option("--budget-ms", va.budget_ms, "0 means unlimited");
  verify->add_flag("--fallback", va.fallback, "On timeout, decide the exported QCIR symbolically");

  EncodeArgs ea;
  auto* encode = app.add_subcommand("encode", "Write Ω for a machine and input");
  encode->add_option("--program", ea.program)->required()->check(CLI::ExistingFile);
  encode->add_option("--input", ea.input)->required();
  encode->add_option("--zone-exp", ea.m, "Defaults to |X|");
  encode->add_option("--format", ea.format)->check(CLI::IsMember({"interchange", "qcir", "qdimacs"}));
  encode->add_option("--out", ea.out, "Output file (default stdout)");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Run the machine");
  sim->add_option("--program", sa.program)->required()->check(CLI::ExistingFile);
  sim->add_option("--input", sa.input)->required();
  sim->add_option("--steps", sa.steps);
  sim->add_flag("--trace", sa.trace);
  sim->add_flag("--raw", sa.raw, "Skip normalization and the idle run");

  EvalArgs eva;
  auto* eval = app.add_subcommand("eval", "Decide a sentence");
  eval->add_option("--formula", eva.formula)->required()->check(CLI::ExistingFile);
  eval->add_option("--format", eva.format)->check(CLI::IsMember({"interchange", "qcir", "qdimacs"}));
  eval->add_option("--strategy", eva.strategy)->check(CLI::IsMember(strategies));
  eval->add_option("--budget-ms", eva.budget_ms, "0 means unlimited");

  TranslateArgs ta;
  auto* translate = app.add_subcommand("translate", "Rewrite into a relational signature");
  translate->add_option("--formula", ta.formula)->required()->check(CLI::ExistingFile);
  translate->add_option("--mode", ta.mode)->required()->check(CLI::IsMember({"2.0", "2.1", "2.2"}));
  translate->add_option("--n-formula", ta.n_formula)->check(CLI::ExistingFile);
  translate->add_option("--model", ta.model, "Structure JSON for --check-model")->check(CLI::ExistingFile);
  translate->add_flag("--check-model", ta.check, "Compare source and target truth");
  translate->add_option("--out", ta.out);

  ReduceArgs ra;
  auto* reduce = app.add_subcommand("reduce", "Print the irreducible clone");
  reduce->add_option("--program", ra.program)->required()->check(CLI::ExistingFile);
  reduce->add_option("--compare", ra.compare, "Report whether the two machines are monoclonal")
      ->check(CLI::ExistingFile);

  StatsArgs st;
  auto* stats = app.add_subcommand("stats", "Length audit of Ω with m = |X|");
  stats->add_option("--program", st.program)->required()->check(CLI::ExistingFile);
  stats->add_option("--lengths", st.lengths, "Input lengths")->delimiter(',');
  stats->add_flag("--json", st.as_json);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*verify) return cmd_verify(va, out);
    if (*encode) return cmd_encode(ea, out, err);
    if (*sim) return cmd_simulate(sa, out);
    if (*eval) return cmd_eval(eva, out);
    if (*translate) return cmd_translate(ta, out, err);
    if (*reduce) return cmd_reduce(ra, out);
    if (*stats) return cmd_stats(st, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    // Malformed files, parameter validation, structure errors, residual terms.
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace tm2qbf::cli
