#pragma once

// Deterministic single-tape Turing machines with single-operand instructions
// q_i a -> q_j b, where b is a tape symbol or one of the moves L, R.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tm2qbf {

using Symbol = std::uint16_t;
using State = std::uint32_t;

// Fixed alphabet slots. Every alphabet starts with these four.
inline constexpr Symbol kBlank = 0;  // spelled '_'
inline constexpr Symbol kStart = 1;  // spelled '>'
inline constexpr Symbol kZero = 2;
inline constexpr Symbol kOne = 3;

inline constexpr State kStartState = 0;
inline constexpr State kAcceptState = 1;
inline constexpr State kRejectState = 2;

class Alphabet {
 public:
  Alphabet();

  std::size_t size() const { return spellings_.size(); }
  char spelling(Symbol s) const { return spellings_.at(s); }
  std::optional<Symbol> find(char c) const;
  // Returns the existing symbol or appends a new one.
  Symbol intern(char c);

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<char> spellings_;
};

struct Action {
  enum class Kind : std::uint8_t { Write, Left, Right };
  Kind kind = Kind::Write;
  Symbol symbol = kBlank;  // meaningful for Write only

  static Action write(Symbol s) { return {Kind::Write, s}; }
  static Action left() { return {Kind::Left, kBlank}; }
  static Action right() { return {Kind::Right, kBlank}; }

  bool is_move() const { return kind != Kind::Write; }
  auto operator<=>(const Action&) const = default;
};

struct Instruction {
  State from = 0;
  Symbol read = kBlank;
  State to = 0;
  Action action;

  auto operator<=>(const Instruction&) const = default;
};

struct Program {
  Alphabet alphabet;
  std::vector<Instruction> instructions;

  // U: the largest state index occurring in any instruction.
  State max_state() const;
  const Instruction* find(State state, Symbol read) const;
  std::vector<Instruction> sorted_instructions() const;
};

using Word = std::vector<Symbol>;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Lines "q<i> <sym> -> q<j> <act>", '#' comments, blank lines ignored.
Program parse_program(std::string_view text);
std::string format_program(const Program& p);
std::string format_instruction(const Instruction& ins, const Alphabet& a);

// Natural-language length of a program: one symbol per letter, digit, arrow.
std::size_t program_length(const Program& p);

// Parses an input word; unknown letters are added to the alphabet when
// `extend` is set, otherwise they are an error. '>' is never allowed.
Word parse_word(std::string_view text, Alphabet& alphabet, bool extend);
std::string format_word(const Word& w, const Alphabet& a);

// Left-edge blocking and hanging-state completion.
Program normalize(const Program& p);
// Adds q_k a -> q_k a for k in {accept, reject} and every a, where absent.
Program add_idle_run(const Program& p);
// Irreducible clone: repeatedly drops instructions whose source state is not
// the target of any instruction. States 0, 1, 2 are never dropped.
Program reduce_clone(const Program& p);
bool monoclonal(const Program& p, const Program& q);

struct Configuration {
  std::vector<Symbol> tape;  // tape[0] is the start marker; cells beyond are blank
  std::size_t head = 0;
  State state = kStartState;
  std::size_t step = 0;

  Symbol at(std::size_t cell) const { return cell < tape.size() ? tape[cell] : kBlank; }
  Symbol scanned() const { return at(head); }
  // Index one past the last non-blank cell.
  std::size_t extent() const;
  bool operator==(const Configuration& o) const;
};

Configuration initial_configuration(const Word& input);

struct Outcome {
  enum class Status { Accepted, Rejected, Running };
  Status status = Status::Running;
  std::size_t step = 0;

  bool accepted() const { return status == Status::Accepted; }
  bool operator==(const Outcome&) const = default;
};

std::string to_string(const Outcome& o);

struct SimulationResult {
  Outcome outcome;
  std::vector<Configuration> trace;  // K(0) ... K(max_steps) when requested
};

class SimulationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

Configuration step_once(const Program& p, const Configuration& c);
SimulationResult simulate(const Program& p, const Word& input, std::size_t max_steps,
                          bool trace);

// JSON array of {step, state, head, tape}.
std::string trace_to_json(const std::vector<Configuration>& trace, const Alphabet& a);

}  // namespace tm2qbf
