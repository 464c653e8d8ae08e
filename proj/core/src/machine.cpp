#include "tm2qbf/machine.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace tm2qbf {

namespace {

bool symbol_char(char c) {
  return c == '_' || c == '>' || c == '0' || c == '1' || (c >= 'a' && c <= 'z');
}

std::size_t digit_count(std::uint64_t v) {
  std::size_t d = 1;
  while (v >= 10) {
    v /= 10;
    ++d;
  }
  return d;
}

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

State parse_state(const Token& tok, std::size_t line_no) {
  if (tok.text.size() < 2 || tok.text[0] != 'q') {
    throw ParseError(line_no, tok.column, "expected a state like q0, got '" + std::string(tok.text) + "'");
  }
  State value = 0;
  auto digits = tok.text.substr(1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw ParseError(line_no, tok.column + 1, "state index out of range");
  }
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw ParseError(line_no, tok.column, "malformed state '" + std::string(tok.text) + "'");
  }
  return value;
}

char single_char(const Token& tok, std::size_t line_no, const char* what) {
  if (tok.text.size() != 1) {
    throw ParseError(line_no, tok.column, std::string("expected a single-character ") + what +
                                              ", got '" + std::string(tok.text) + "'");
  }
  return tok.text[0];
}

void check_start_marker_rule(const Instruction& ins, std::size_t line_no, std::size_t column) {
  if (ins.read == kStart) {
    if (ins.action.kind == Action::Kind::Write && ins.action.symbol != kStart) {
      throw ParseError(line_no, column, "instruction reading '>' must not erase it");
    }
  } else if (ins.action.kind == Action::Kind::Write && ins.action.symbol == kStart) {
    throw ParseError(line_no, column, "writes '>' over a non-'>' cell");
  }
}

char action_char(const Action& a, const Alphabet& alphabet) {
  switch (a.kind) {
    case Action::Kind::Left:
      return 'L';
    case Action::Kind::Right:
      return 'R';
    case Action::Kind::Write:
      break;
  }
  return alphabet.spelling(a.symbol);
}

// Spelling-based key, so that programs over differently ordered alphabets compare sensibly.
using SpelledInstruction = std::tuple<State, char, State, char>;

std::set<SpelledInstruction> spelled(const Program& p) {
  std::set<SpelledInstruction> out;
  for (const auto& ins : p.instructions) {
    out.emplace(ins.from, p.alphabet.spelling(ins.read), ins.to, action_char(ins.action, p.alphabet));
  }
  return out;
}

}  // namespace

Alphabet::Alphabet() : spellings_{'_', '>', '0', '1'} {}

std::optional<Symbol> Alphabet::find(char c) const {
  auto it = std::find(spellings_.begin(), spellings_.end(), c);
  if (it == spellings_.end()) return std::nullopt;
  return static_cast<Symbol>(it - spellings_.begin());
}

Symbol Alphabet::intern(char c) {
  if (auto s = find(c)) return *s;
  spellings_.push_back(c);
  return static_cast<Symbol>(spellings_.size() - 1);
}

State Program::max_state() const {
  State u = 0;
  for (const auto& ins : instructions) u = std::max({u, ins.from, ins.to});
  return u;
}

const Instruction* Program::find(State state, Symbol read) const {
  for (const auto& ins : instructions) {
    if (ins.from == state && ins.read == read) return &ins;
  }
  return nullptr;
}

std::vector<Instruction> Program::sorted_instructions() const {
  auto out = instructions;
  std::sort(out.begin(), out.end());
  return out;
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

Program parse_program(std::string_view text) {
  Program p;
  std::map<std::pair<State, Symbol>, std::size_t> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (toks.size() != 5) {
      throw ParseError(line_no, toks.front().column,
                       "expected 'q<i> <sym> -> q<j> <act>', found " + std::to_string(toks.size()) +
                           " tokens");
    }
    if (toks[2].text != "->") throw ParseError(line_no, toks[2].column, "expected '->'");

    Instruction ins;
    ins.from = parse_state(toks[0], line_no);
    char read = single_char(toks[1], line_no, "symbol");
    if (!symbol_char(read)) {
      throw ParseError(line_no, toks[1].column, std::string("illegal tape symbol '") + read + "'");
    }
    ins.read = p.alphabet.intern(read);
    ins.to = parse_state(toks[3], line_no);
    char act = single_char(toks[4], line_no, "action");
    if (act == 'L') {
      ins.action = Action::left();
    } else if (act == 'R') {
      ins.action = Action::right();
    } else if (symbol_char(act)) {
      ins.action = Action::write(p.alphabet.intern(act));
    } else {
      throw ParseError(line_no, toks[4].column, std::string("illegal action '") + act + "'");
    }
    check_start_marker_rule(ins, line_no, toks[4].column);

    auto key = std::make_pair(ins.from, ins.read);
    if (auto it = seen.find(key); it != seen.end()) {
      throw ParseError(line_no, toks[0].column,
                       "nondeterministic on (" + std::to_string(ins.from) + ", " +
                           std::string(1, read) + "), first defined on line " +
                           std::to_string(it->second));
    }
    seen.emplace(key, line_no);
    p.instructions.push_back(ins);
  }
  return p;
}

std::string format_instruction(const Instruction& ins, const Alphabet& a) {
  std::string out = "q" + std::to_string(ins.from) + " " + a.spelling(ins.read) + " -> q" +
                    std::to_string(ins.to) + " " + action_char(ins.action, a);
  return out;
}

std::string format_program(const Program& p) {
  std::string out;
  for (const auto& ins : p.instructions) {
    out += format_instruction(ins, p.alphabet);
    out += '\n';
  }
  return out;
}

std::size_t program_length(const Program& p) {
  std::size_t len = 0;
  for (const auto& ins : p.instructions) {
    // q, digits, read symbol, arrow, q, digits, action
    len += 5 + digit_count(ins.from) + digit_count(ins.to);
  }
  return len;
}

Word parse_word(std::string_view text, Alphabet& alphabet, bool extend) {
  Word w;
  w.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '>' || !symbol_char(c)) {
      throw ParseError(1, i + 1, std::string("illegal input symbol '") + c + "'");
    }
    auto s = alphabet.find(c);
    if (!s) {
      if (!extend) throw ParseError(1, i + 1, std::string("symbol '") + c + "' is not in the alphabet");
      s = alphabet.intern(c);
    }
    w.push_back(*s);
  }
  return w;
}

std::string format_word(const Word& w, const Alphabet& a) {
  std::string out;
  for (Symbol s : w) out += a.spelling(s);
  return out;
}

Program normalize(const Program& p) {
  Program out;
  out.alphabet = p.alphabet;
  std::set<State> targets;
  for (auto ins : p.instructions) {
    // A blocked move still counts its original target as reachable.
    targets.insert(ins.to);
    if (ins.read == kStart && ins.action.kind == Action::Kind::Left) {
      ins.to = ins.from;
      ins.action = Action::write(kStart);
      targets.insert(ins.to);
    }
    out.instructions.push_back(ins);
  }
  for (State j : targets) {
    if (j == kStartState || j == kAcceptState || j == kRejectState) continue;
    for (std::size_t a = 0; a < out.alphabet.size(); ++a) {
      auto sym = static_cast<Symbol>(a);
      if (!out.find(j, sym)) out.instructions.push_back({j, sym, j, Action::write(sym)});
    }
  }
  return out;
}

Program add_idle_run(const Program& p) {
  Program out = p;
  for (State k : {kAcceptState, kRejectState}) {
    for (std::size_t a = 0; a < out.alphabet.size(); ++a) {
      auto sym = static_cast<Symbol>(a);
      if (!out.find(k, sym)) out.instructions.push_back({k, sym, k, Action::write(sym)});
    }
  }
  return out;
}

Program reduce_clone(const Program& p) {
  Program out = p;
  while (true) {
    std::set<State> targets;
    for (const auto& ins : out.instructions) targets.insert(ins.to);
    auto removable = [&](const Instruction& ins) {
      if (ins.from == kStartState || ins.from == kAcceptState || ins.from == kRejectState) {
        return false;
      }
      return targets.count(ins.from) == 0;
    };
    auto before = out.instructions.size();
    out.instructions.erase(
        std::remove_if(out.instructions.begin(), out.instructions.end(), removable),
        out.instructions.end());
    if (out.instructions.size() == before) break;
  }
  return out;
}

bool monoclonal(const Program& p, const Program& q) {
  return spelled(reduce_clone(p)) == spelled(reduce_clone(q));
}

std::size_t Configuration::extent() const {
  std::size_t e = tape.size();
  while (e > 0 && tape[e - 1] == kBlank) --e;
  return e;
}

bool Configuration::operator==(const Configuration& o) const {
  if (state != o.state || head != o.head || step != o.step) return false;
  std::size_t len = std::max(tape.size(), o.tape.size());
  for (std::size_t i = 0; i < len; ++i) {
    if (at(i) != o.at(i)) return false;
  }
  return true;
}

Configuration initial_configuration(const Word& input) {
  Configuration c;
  c.tape.reserve(input.size() + 2);
  c.tape.push_back(kStart);
  c.tape.insert(c.tape.end(), input.begin(), input.end());
  return c;
}

std::string to_string(const Outcome& o) {
  switch (o.status) {
    case Outcome::Status::Accepted:
      return "Accepted(" + std::to_string(o.step) + ")";
    case Outcome::Status::Rejected:
      return "Rejected(" + std::to_string(o.step) + ")";
    case Outcome::Status::Running:
      break;
  }
  return "Running";
}

Configuration step_once(const Program& p, const Configuration& c) {
  const Instruction* ins = p.find(c.state, c.scanned());
  if (!ins) {
    throw SimulationError("no instruction for state q" + std::to_string(c.state) + " reading '" +
                          std::string(1, p.alphabet.spelling(c.scanned())) + "' at step " +
                          std::to_string(c.step + 1));
  }
  Configuration next = c;
  next.step = c.step + 1;
  next.state = ins->to;
  switch (ins->action.kind) {
    case Action::Kind::Write:
      if (next.head >= next.tape.size()) next.tape.resize(next.head + 1, kBlank);
      next.tape[next.head] = ins->action.symbol;
      break;
    case Action::Kind::Right:
      ++next.head;
      if (next.head >= next.tape.size()) next.tape.resize(next.head + 1, kBlank);
      break;
    case Action::Kind::Left:
      if (next.head == 0) {
        throw SimulationError("left move off cell 0 at step " + std::to_string(next.step));
      }
      --next.head;
      break;
  }
  return next;
}

SimulationResult simulate(const Program& p, const Word& input, std::size_t max_steps, bool trace) {
  SimulationResult result;
  Configuration c = initial_configuration(input);
  if (trace) {
    result.trace.reserve(max_steps + 1);
    result.trace.push_back(c);
  }
  for (std::size_t t = 1; t <= max_steps; ++t) {
    c = step_once(p, c);
    if (trace) result.trace.push_back(c);
    if (result.outcome.status == Outcome::Status::Running &&
        (c.state == kAcceptState || c.state == kRejectState)) {
      result.outcome.status =
          c.state == kAcceptState ? Outcome::Status::Accepted : Outcome::Status::Rejected;
      result.outcome.step = t;
      if (!trace) break;
    }
  }
  return result;
}

std::string trace_to_json(const std::vector<Configuration>& trace, const Alphabet& a) {
  auto arr = nlohmann::json::array();
  for (const auto& c : trace) {
    std::string tape;
    std::size_t len = std::max(c.extent(), c.head + 1);
    for (std::size_t i = 0; i < len; ++i) tape += a.spelling(c.at(i));
    arr.push_back({{"step", c.step}, {"state", c.state}, {"head", c.head}, {"tape", tape}});
  }
  return arr.dump();
}

}  // namespace tm2qbf
