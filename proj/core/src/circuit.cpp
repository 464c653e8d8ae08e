#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "tm2qbf/qbf.hpp"

namespace tm2qbf {

QbfFormatError::QbfFormatError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

int Circuit::add(Gate g, std::string label) {
  gates.push_back(std::move(g));
  labels.push_back(std::move(label));
  return static_cast<int>(gates.size());
}

std::size_t Circuit::input_count() const {
  return static_cast<std::size_t>(
      std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.op == Op::Input; }));
}

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<const void*, std::size_t>& k) const noexcept {
    return std::hash<const void*>{}(k.first) ^ (k.second * 0x9E3779B97F4A7C15ULL);
  }
};

class Builder {
 public:
  explicit Builder(const VarOrderKey& order) : order_(order) {}

  Circuit run(const FormulaPtr& f) {
    contexts_.push_back({});
    c_.output = formula(f, 0);
    return renumber();
  }

 private:
  using Op = Circuit::Op;

  int gate(Op op, std::vector<int> inputs) { return c_.add({op, std::move(inputs), {}}); }

  int truth() {
    if (true_ == 0) true_ = gate(Op::And, {});
    return true_;
  }

  int term(const TermPtr& t, std::size_t ctx) {
    auto key = std::make_pair(static_cast<const void*>(t.get()), ctx);
    if (auto it = term_memo_.find(key); it != term_memo_.end()) return it->second;
    int lit = 0;
    switch (t->kind) {
      case TermKind::Zero: lit = -truth(); break;
      case TermKind::One: lit = truth(); break;
      case TermKind::Var: {
        auto it = contexts_[ctx].find(t->var);
        if (it == contexts_[ctx].end()) throw EvaluationError("free variable " + to_string(t->var));
        lit = it->second;
        break;
      }
      case TermKind::Complement: lit = -term(t->a, ctx); break;
      case TermKind::Meet: lit = gate(Op::And, {term(t->a, ctx), term(t->b, ctx)}); break;
      case TermKind::Join: lit = gate(Op::Or, {term(t->a, ctx), term(t->b, ctx)}); break;
      default: throw EvaluationError("relational constant in a Boolean-algebra term");
    }
    term_memo_.emplace(key, lit);
    return lit;
  }

  int formula(const FormulaPtr& f, std::size_t ctx) {
    auto key = std::make_pair(static_cast<const void*>(f.get()), ctx);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    int lit = 0;
    switch (f->kind) {
      case FormulaKind::Eq: {
        int x = term(f->lhs, ctx);
        int y = term(f->rhs, ctx);
        lit = gate(Op::Or, {gate(Op::And, {x, y}), gate(Op::And, {-x, -y})});
        break;
      }
      case FormulaKind::Not: lit = -formula(f->a, ctx); break;
      case FormulaKind::And: lit = gate(Op::And, {formula(f->a, ctx), formula(f->b, ctx)}); break;
      case FormulaKind::Or: lit = gate(Op::Or, {formula(f->a, ctx), formula(f->b, ctx)}); break;
      case FormulaKind::Implies: lit = gate(Op::Or, {-formula(f->a, ctx), formula(f->b, ctx)}); break;
      case FormulaKind::ForAll:
      case FormulaKind::Exists: {
        auto inner = contexts_[ctx];
        std::vector<int> bound;
        for (const auto& v : f->vars) {
          int id = c_.add({Op::Input, {}, {}}, to_string(v));
          origin_.emplace(id, v);
          inner[v] = id;
          bound.push_back(id);
        }
        contexts_.push_back(std::move(inner));
        int body = formula(f->a, contexts_.size() - 1);
        lit = c_.add({f->kind == FormulaKind::ForAll ? Op::ForAll : Op::Exists, {body}, std::move(bound)});
        break;
      }
      default:
        throw EvaluationError("relational atom in a Boolean-algebra sentence");
    }
    memo_.emplace(key, lit);
    return lit;
  }

  // Inputs first (ordered by key, then creation), gates after in creation
  // order, which is already topological.
  Circuit renumber() {
    std::vector<int> inputs, others;
    for (int id = 1; id <= static_cast<int>(c_.size()); ++id) {
      (c_.at(id).op == Op::Input ? inputs : others).push_back(id);
    }
    if (order_) {
      std::stable_sort(inputs.begin(), inputs.end(),
                       [&](int a, int b) { return order_(origin_.at(a)) < order_(origin_.at(b)); });
    }
    std::vector<int> map(c_.size() + 1, 0);
    int next = 0;
    for (int id : inputs) map[id] = ++next;
    for (int id : others) map[id] = ++next;
    auto lit = [&](int l) { return l < 0 ? -map[-l] : map[l]; };
    Circuit out;
    out.gates.resize(c_.size());
    out.labels.resize(c_.size());
    for (int id = 1; id <= static_cast<int>(c_.size()); ++id) {
      Circuit::Gate g = c_.at(id);
      for (int& l : g.inputs) l = lit(l);
      for (int& b : g.bound) b = lit(b);
      out.gates[map[id] - 1] = std::move(g);
      out.labels[map[id] - 1] = c_.labels[id - 1];
    }
    out.output = lit(c_.output);
    return out;
  }

  const VarOrderKey& order_;
  Circuit c_;
  int true_ = 0;
  std::vector<std::map<VarId, int>> contexts_;
  std::map<int, VarId> origin_;
  std::unordered_map<std::pair<const void*, std::size_t>, int, PairHash> term_memo_;
  std::unordered_map<std::pair<const void*, std::size_t>, int, PairHash> memo_;
};

std::string join_ints(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(xs[i]);
  }
  return out;
}

std::vector<int> reachable(const Circuit& c, int output) {
  std::vector<char> seen(c.size() + 1, 0);
  std::vector<int> stack{std::abs(output)}, order;
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    if (id == 0 || seen[id]) continue;
    seen[id] = 1;
    for (int l : c.at(id).inputs) stack.push_back(std::abs(l));
  }
  for (int id = 1; id <= static_cast<int>(c.size()); ++id) {
    if (seen[id]) order.push_back(id);
  }
  return order;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

class QcirParser {
 public:
  Circuit run(std::string_view text) {
    auto lines = split_lines(text);
    declare_variables(lines);
    std::vector<std::pair<Circuit::Op, std::vector<int>>> prefix;
    std::string output_name;
    std::size_t output_line = 0;
    bool header = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      line_ = i + 1;
      std::string_view s = trim(lines[i]);
      if (s.empty()) continue;
      if (s.front() == '#') {
        if (!header && s.rfind("#QCIR-G14", 0) == 0) header = true;
        continue;
      }
      if (!header) fail("missing #QCIR-G14 header");
      auto open = s.find('(');
      if (open == std::string_view::npos || s.back() != ')') fail("expected a statement");
      auto eq = s.find('=');
      if (eq != std::string_view::npos && eq < open) {
        gate(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
        continue;
      }
      std::string_view kw = trim(s.substr(0, open));
      std::string_view args = s.substr(open + 1, s.size() - open - 2);
      if (kw == "output") {
        output_name = std::string(trim(args));
        output_line = line_;
      } else if (kw == "forall" || kw == "exists") {
        if (!output_name.empty()) fail("quantifier block after output");
        std::vector<int> vars;
        for (auto name : names(args)) vars.push_back(literal(name));
        prefix.emplace_back(kw == "forall" ? Circuit::Op::ForAll : Circuit::Op::Exists, std::move(vars));
      } else if (kw != "free") {
        fail("unknown statement '" + std::string(kw) + "'");
      }
    }
    if (output_name.empty()) fail("missing output statement");
    line_ = output_line;
    int out = literal(output_name);
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
      out = c_.add({it->first, {out}, it->second});
    }
    c_.output = out;
    return std::move(c_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw QbfFormatError(line_, what); }

  static std::vector<std::string_view> names(std::string_view args) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= args.size()) {
      std::size_t end = args.find(',', start);
      if (end == std::string_view::npos) end = args.size();
      auto name = trim(args.substr(start, end - start));
      if (!name.empty()) out.push_back(name);
      start = end + 1;
    }
    return out;
  }

  // Quantifier gates bind variables that the gates before them already use,
  // so every declaration is collected first. Inputs are created in numeric
  // order when all names are numbers (keeping the variable order of files
  // written by write_qcir), otherwise in order of appearance.
  void declare_variables(const std::vector<std::string_view>& lines) {
    std::vector<std::string> declared;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      line_ = i + 1;
      std::string_view s = trim(lines[i]);
      if (s.empty() || s.front() == '#') continue;
      auto open = s.find('(');
      if (open == std::string_view::npos || s.back() != ')') continue;
      std::string_view args = s.substr(open + 1, s.size() - open - 2);
      auto eq = s.find('=');
      std::string_view kw = eq != std::string_view::npos && eq < open ? trim(s.substr(eq + 1, open - eq - 1))
                                                                      : trim(s.substr(0, open));
      if (kw != "forall" && kw != "exists" && kw != "free") continue;
      if (eq != std::string_view::npos && eq < open) {
        auto semi = args.find(';');
        if (semi == std::string_view::npos) fail("quantifier gate needs ';'");
        args = args.substr(0, semi);
      }
      for (auto name : names(args)) {
        if (!seen_.insert(std::string(name)).second) {
          fail("variable '" + std::string(name) + "' declared twice");
        }
        declared.emplace_back(name);
      }
    }
    auto numeric = [](const std::string& n) {
      return !n.empty() && n.size() < 10 && std::all_of(n.begin(), n.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    if (std::all_of(declared.begin(), declared.end(), numeric)) {
      std::sort(declared.begin(), declared.end(),
                [](const std::string& a, const std::string& b) { return std::stol(a) < std::stol(b); });
    }
    for (const auto& name : declared) {
      int id = c_.add({Circuit::Op::Input, {}, {}}, name);
      ids_.emplace(name, id);
    }
  }

  int literal(std::string_view name) {
    bool neg = !name.empty() && name.front() == '-';
    if (neg) name.remove_prefix(1);
    auto it = ids_.find(std::string(name));
    if (it == ids_.end()) fail("undefined literal '" + std::string(name) + "'");
    return neg ? -it->second : it->second;
  }

  void gate(std::string_view name, std::string_view def) {
    if (name.empty()) fail("gate without a name");
    if (ids_.count(std::string(name))) fail("gate '" + std::string(name) + "' defined twice");
    auto open = def.find('(');
    if (open == std::string_view::npos || def.back() != ')') fail("malformed gate");
    std::string_view op = trim(def.substr(0, open));
    std::string_view args = def.substr(open + 1, def.size() - open - 2);
    int id = 0;
    if (op == "and" || op == "or") {
      std::vector<int> lits;
      for (auto n : names(args)) lits.push_back(literal(n));
      id = c_.add({op == "and" ? Circuit::Op::And : Circuit::Op::Or, std::move(lits), {}});
    } else if (op == "xor") {
      auto ns = names(args);
      if (ns.size() != 2) fail("xor takes two literals");
      int x = literal(ns[0]), y = literal(ns[1]);
      int l = c_.add({Circuit::Op::And, {x, -y}, {}});
      int r = c_.add({Circuit::Op::And, {-x, y}, {}});
      id = c_.add({Circuit::Op::Or, {l, r}, {}});
    } else if (op == "ite") {
      auto ns = names(args);
      if (ns.size() != 3) fail("ite takes three literals");
      int i = literal(ns[0]), t = literal(ns[1]), e = literal(ns[2]);
      int l = c_.add({Circuit::Op::And, {i, t}, {}});
      int r = c_.add({Circuit::Op::And, {-i, e}, {}});
      id = c_.add({Circuit::Op::Or, {l, r}, {}});
    } else if (op == "forall" || op == "exists") {
      auto semi = args.find(';');
      if (semi == std::string_view::npos) fail("quantifier gate needs ';'");
      std::vector<int> bound;
      for (auto n : names(args.substr(0, semi))) bound.push_back(literal(n));
      int body = literal(trim(args.substr(semi + 1)));
      id = c_.add({op == "forall" ? Circuit::Op::ForAll : Circuit::Op::Exists, {body}, std::move(bound)});
    } else {
      fail("unknown gate type '" + std::string(op) + "'");
    }
    ids_.emplace(std::string(name), id);
  }

  Circuit c_;
  std::unordered_map<std::string, int> ids_;
  std::unordered_set<std::string> seen_;
  std::size_t line_ = 0;
};

// Prenexing over the circuit. Every quantifier gate occurrence gets fresh
// variables; quantifier-free gates are copied once per binding context.
class Prenexer {
 public:
  explicit Prenexer(const Circuit& c) : c_(c), has_q_(c.size() + 1, 0) {
    for (int id = 1; id <= static_cast<int>(c.size()); ++id) {
      const auto& g = c.at(id);
      bool q = g.op == Circuit::Op::ForAll || g.op == Circuit::Op::Exists;
      for (int l : g.inputs) q = q || has_q_[std::abs(l)];
      has_q_[id] = q;
    }
  }

  Qdimacs run() {
    ctx_parent_.push_back(0);
    ctx_map_.emplace_back();
    int root = translate(c_.output, true, 0);
    // Tseitin variables for matrix gates.
    std::vector<int> aux;
    std::vector<int> tseitin(mgates_.size(), 0);
    for (std::size_t i = 0; i < mgates_.size(); ++i) {
      tseitin[i] = ++vars_;
      aux.push_back(tseitin[i]);
    }
    auto lit = [&](int l) {
      int v = std::abs(l);
      int mapped = v > kGateBase ? tseitin[static_cast<std::size_t>(v - kGateBase - 1)] : v;
      return l < 0 ? -mapped : mapped;
    };
    for (std::size_t i = 0; i < mgates_.size(); ++i) {
      const auto& [is_and, ins] = mgates_[i];
      int g = tseitin[i];
      std::vector<int> big{is_and ? g : -g};
      for (int l : ins) {
        int x = lit(l);
        out_.clauses.push_back(is_and ? std::vector<int>{-g, x} : std::vector<int>{g, -x});
        big.push_back(is_and ? -x : x);
      }
      out_.clauses.push_back(std::move(big));
    }
    out_.clauses.push_back({lit(root)});
    if (!aux.empty()) blocks_.emplace_back(false, std::move(aux));
    for (auto& b : blocks_) {
      if (b.second.empty()) continue;
      if (!out_.prefix.empty() && out_.prefix.back().first == b.first) {
        auto& dst = out_.prefix.back().second;
        dst.insert(dst.end(), b.second.begin(), b.second.end());
      } else {
        out_.prefix.push_back(std::move(b));
      }
    }
    out_.num_vars = vars_;
    return std::move(out_);
  }

 private:
  static constexpr int kGateBase = 1 << 29;

  int lookup(std::size_t ctx, int input) const {
    for (;;) {
      auto it = ctx_map_[ctx].find(input);
      if (it != ctx_map_[ctx].end()) return it->second;
      if (ctx == 0) throw EvaluationError("circuit input " + std::to_string(input) + " is not bound");
      ctx = ctx_parent_[ctx];
    }
  }

  int translate(int l, bool positive, std::size_t ctx) {
    int id = std::abs(l);
    bool neg = l < 0;
    bool pol = positive != neg;
    const auto& g = c_.at(id);
    int result;
    if (g.op == Circuit::Op::Input) {
      result = lookup(ctx, id);
    } else if (g.op == Circuit::Op::ForAll || g.op == Circuit::Op::Exists) {
      bool universal = (g.op == Circuit::Op::ForAll) == pol;
      ctx_parent_.push_back(ctx);
      ctx_map_.emplace_back();
      std::size_t inner = ctx_map_.size() - 1;
      std::vector<int> fresh;
      for (int b : g.bound) {
        fresh.push_back(++vars_);
        ctx_map_[inner][b] = vars_;
      }
      blocks_.emplace_back(universal, std::move(fresh));
      result = translate(g.inputs.at(0), pol, inner);
    } else {
      auto key = std::make_tuple(id, ctx, has_q_[id] ? pol : true);
      if (auto it = memo_.find(key); it != memo_.end()) {
        result = it->second;
      } else {
        std::vector<int> ins;
        for (int in : g.inputs) ins.push_back(translate(in, pol, ctx));
        mgates_.emplace_back(g.op == Circuit::Op::And, std::move(ins));
        result = kGateBase + static_cast<int>(mgates_.size());
        memo_.emplace(key, result);
      }
    }
    return neg ? -result : result;
  }

  const Circuit& c_;
  std::vector<char> has_q_;
  std::vector<std::size_t> ctx_parent_;
  std::vector<std::unordered_map<int, int>> ctx_map_;
  std::vector<std::pair<bool, std::vector<int>>> blocks_;
  std::vector<std::pair<bool, std::vector<int>>> mgates_;
  std::map<std::tuple<int, std::size_t, bool>, int> memo_;
  Qdimacs out_;
  int vars_ = 0;
};

}  // namespace

Circuit to_circuit(const FormulaPtr& sentence, const VarOrderKey& order) {
  return Builder(order).run(sentence);
}

std::string write_qcir(const Circuit& c) {
  std::ostringstream out;
  out << "#QCIR-G14\n";
  int top = c.output;
  while (top > 0) {
    const auto& g = c.at(top);
    if (g.op != Circuit::Op::ForAll && g.op != Circuit::Op::Exists) break;
    out << (g.op == Circuit::Op::ForAll ? "forall(" : "exists(") << join_ints(g.bound) << ")\n";
    top = g.inputs.at(0);
  }
  out << "output(" << top << ")\n";
  for (int id : reachable(c, top)) {
    const auto& g = c.at(id);
    switch (g.op) {
      case Circuit::Op::Input: break;
      case Circuit::Op::And: out << id << " = and(" << join_ints(g.inputs) << ")\n"; break;
      case Circuit::Op::Or: out << id << " = or(" << join_ints(g.inputs) << ")\n"; break;
      case Circuit::Op::ForAll:
      case Circuit::Op::Exists:
        out << id << (g.op == Circuit::Op::ForAll ? " = forall(" : " = exists(") << join_ints(g.bound)
            << "; " << g.inputs.at(0) << ")\n";
        break;
    }
  }
  return out.str();
}

Circuit parse_qcir(std::string_view text) { return QcirParser{}.run(text); }

Qdimacs to_qdimacs(const Circuit& c) { return Prenexer(c).run(); }

std::string write_qdimacs(const Qdimacs& q) {
  std::ostringstream out;
  out << "p cnf " << q.num_vars << ' ' << q.clauses.size() << '\n';
  for (const auto& [universal, vars] : q.prefix) {
    out << (universal ? 'a' : 'e');
    for (int v : vars) out << ' ' << v;
    out << " 0\n";
  }
  for (const auto& cl : q.clauses) {
    for (int l : cl) out << l << ' ';
    out << "0\n";
  }
  return out.str();
}

Qdimacs parse_qdimacs(std::string_view text) {
  Qdimacs q;
  bool header = false;
  std::size_t declared = 0;
  std::vector<int> current;
  std::vector<char> quantified;
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t line = i + 1;
    std::string_view s = trim(lines[i]);
    if (s.empty() || s.front() == 'c') continue;
    std::istringstream in{std::string(s)};
    if (s.front() == 'p') {
      std::string p, fmt;
      long long vars = -1, clauses = -1;
      in >> p >> fmt >> vars >> clauses;
      if (fmt != "cnf" || vars < 0 || clauses < 0) throw QbfFormatError(line, "malformed problem line");
      q.num_vars = static_cast<int>(vars);
      declared = static_cast<std::size_t>(clauses);
      quantified.assign(static_cast<std::size_t>(vars) + 1, 0);
      header = true;
      continue;
    }
    if (!header) throw QbfFormatError(line, "missing problem line");
    auto read_int = [&](long long& v) -> bool {
      std::string tok;
      if (!(in >> tok)) return false;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) throw QbfFormatError(line, "bad token '" + tok + "'");
      return true;
    };
    if (s.front() == 'a' || s.front() == 'e') {
      if (!q.clauses.empty()) throw QbfFormatError(line, "quantifier line after clauses");
      char kind;
      in >> kind;
      std::vector<int> vars;
      long long v;
      bool closed = false;
      while (read_int(v)) {
        if (v == 0) {
          closed = true;
          break;
        }
        if (v < 0 || v > q.num_vars) throw QbfFormatError(line, "variable out of range");
        if (quantified[static_cast<std::size_t>(v)]) throw QbfFormatError(line, "variable quantified twice");
        quantified[static_cast<std::size_t>(v)] = 1;
        vars.push_back(static_cast<int>(v));
      }
      if (!closed) throw QbfFormatError(line, "quantifier line without terminating 0");
      bool universal = kind == 'a';
      if (!q.prefix.empty() && q.prefix.back().first == universal) {
        auto& dst = q.prefix.back().second;
        dst.insert(dst.end(), vars.begin(), vars.end());
      } else {
        q.prefix.emplace_back(universal, std::move(vars));
      }
      continue;
    }
    long long v;
    while (read_int(v)) {
      if (v == 0) {
        q.clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (std::llabs(v) > q.num_vars) throw QbfFormatError(line, "literal out of range");
        current.push_back(static_cast<int>(v));
      }
    }
  }
  if (!header) throw QbfFormatError(lines.size(), "missing problem line");
  if (!current.empty()) throw QbfFormatError(lines.size(), "unterminated clause");
  if (q.clauses.size() != declared) {
    throw QbfFormatError(lines.size(), "clause count " + std::to_string(q.clauses.size()) +
                                           " differs from declared " + std::to_string(declared));
  }
  return q;
}

}  // namespace tm2qbf
