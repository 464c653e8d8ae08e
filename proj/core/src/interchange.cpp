#include "tm2qbf/interchange.hpp"

#include <cctype>
#include <vector>

namespace tm2qbf {

FormatError::FormatError(std::size_t offset, const std::string& what)
    : std::runtime_error("offset " + std::to_string(offset) + ": " + what), offset_(offset) {}

namespace {

constexpr std::string_view kMagic = "tm2qbf-formula v1";

void write_term(const TermPtr& t, std::string& out) {
  switch (t->kind) {
    case TermKind::Zero:
      out += '0';
      return;
    case TermKind::One:
      out += '1';
      return;
    case TermKind::C0:
      out += "c0";
      return;
    case TermKind::C1:
      out += "c1";
      return;
    case TermKind::Var:
      out += to_string(t->var);
      return;
    case TermKind::Complement:
      out += "(comp ";
      write_term(t->a, out);
      out += ')';
      return;
    case TermKind::Meet:
    case TermKind::Join:
      out += t->kind == TermKind::Meet ? "(meet " : "(join ";
      write_term(t->a, out);
      out += ' ';
      write_term(t->b, out);
      out += ')';
      return;
  }
}

const char* formula_keyword(FormulaKind k) {
  switch (k) {
    case FormulaKind::Eq:
      return "eq";
    case FormulaKind::Sim:
      return "sim";
    case FormulaKind::Pred:
      return "pred";
    case FormulaKind::Not:
      return "not";
    case FormulaKind::And:
      return "and";
    case FormulaKind::Or:
      return "or";
    case FormulaKind::Implies:
      return "imp";
    case FormulaKind::ForAll:
      return "forall";
    case FormulaKind::Exists:
      return "exists";
  }
  return "?";
}

void write_formula(const FormulaPtr& f, std::string& out) {
  out += '(';
  out += formula_keyword(f->kind);
  switch (f->kind) {
    case FormulaKind::Pred:
      out += ' ';
      out += f->pred;
      [[fallthrough]];
    case FormulaKind::Eq:
    case FormulaKind::Sim:
      out += ' ';
      write_term(f->lhs, out);
      out += ' ';
      write_term(f->rhs, out);
      break;
    case FormulaKind::Not:
      out += ' ';
      write_formula(f->a, out);
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      out += ' ';
      write_formula(f->a, out);
      out += ' ';
      write_formula(f->b, out);
      break;
    case FormulaKind::ForAll:
    case FormulaKind::Exists: {
      out += " (";
      bool first = true;
      for (const auto& v : f->vars) {
        if (!first) out += ' ';
        first = false;
        out += to_string(v);
      }
      out += ") ";
      write_formula(f->a, out);
      break;
    }
  }
  out += ')';
}

class Parser {
 public:
  Parser(std::string_view text, std::size_t base, Signature sig)
      : text_(text), base_(base), sig_(std::move(sig)) {}

  FormulaPtr formula() {
    expect('(');
    std::size_t at = pos_;
    std::string kw = word();
    FormulaPtr out;
    if (kw == "eq" || kw == "sim") {
      require(kw == "eq" ? boolean() : !boolean(), at, kw == "eq" ? "≈" : "∼");
      auto l = term();
      auto r = term();
      out = kw == "eq" ? fo::eq(l, r) : fo::sim(l, r);
    } else if (kw == "pred") {
      std::string name = word();
      require(!boolean() && name == sig_.predicate, at, "predicate " + name);
      auto l = term();
      auto r = term();
      out = fo::pred(name, l, r);
    } else if (kw == "not") {
      out = fo::neg(formula());
    } else if (kw == "and" || kw == "or" || kw == "imp") {
      auto a = formula();
      auto b = formula();
      out = kw == "and" ? fo::conj(a, b) : kw == "or" ? fo::disj(a, b) : fo::implies(a, b);
    } else if (kw == "forall" || kw == "exists") {
      expect('(');
      std::vector<VarId> vars;
      while (true) {
        skip_space();
        if (peek() == ')') break;
        std::size_t vat = pos_;
        auto v = parse_var(word(), vat);
        vars.push_back(v);
      }
      expect(')');
      if (vars.empty()) fail(pos_, "empty quantifier variable list");
      out = fo::quantifier(kw == "forall" ? FormulaKind::ForAll : FormulaKind::Exists,
                           std::move(vars), formula());
    } else {
      fail(at, "unknown formula keyword '" + kw + "'");
    }
    expect(')');
    return out;
  }

  void finish() {
    skip_space();
    if (pos_ != text_.size()) fail(pos_, "trailing characters");
  }

 private:
  TermPtr term() {
    skip_space();
    if (peek() == '(') {
      ++pos_;
      std::size_t at = pos_;
      std::string kw = word();
      TermPtr out;
      require(boolean(), at, kw);
      if (kw == "comp") {
        out = term::comp(term());
      } else if (kw == "meet" || kw == "join") {
        auto a = term();
        auto b = term();
        out = kw == "meet" ? term::meet(a, b) : term::join(a, b);
      } else {
        fail(at, "unknown term operator '" + kw + "'");
      }
      expect(')');
      return out;
    }
    std::size_t at = pos_;
    std::string w = word();
    if (w == "0" || w == "1") {
      require(boolean(), at, w);
      return w == "0" ? term::zero() : term::one();
    }
    if (w == "c0" || w == "c1") {
      require(!boolean() && sig_.constants, at, w);
      return w == "c0" ? term::c0() : term::c1();
    }
    return term::var(parse_var(w, at));
  }

  VarId parse_var(const std::string& w, std::size_t at) {
    auto comma = w.find(',');
    if (w.size() < 4 || comma == std::string::npos || !std::islower(static_cast<unsigned char>(w[0]))) {
      fail(at, "expected a variable like x0,1, got '" + w + "'");
    }
    auto group = parse_decimal(std::string_view(w).substr(1, comma - 1));
    auto bit = parse_decimal(std::string_view(w).substr(comma + 1));
    if (!group || !bit || *bit > 0xFFFFFFFFu) fail(at, "malformed variable '" + w + "'");
    return VarId{w[0], *group, static_cast<std::uint32_t>(*bit)};
  }

  std::string word() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      ++pos_;
    }
    if (start == pos_) fail(pos_, "expected a token");
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_space();
    if (peek() != c) fail(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool boolean() const { return sig_.kind == Signature::Kind::BooleanAlgebra; }

  void require(bool declared, std::size_t at, const std::string& symbol) const {
    if (!declared) fail(at, "symbol '" + symbol + "' is not declared by '" + signature_line(sig_) + "'");
  }

  [[noreturn]] void fail(std::size_t at, const std::string& what) const {
    throw FormatError(base_ + at, what);
  }

  std::string_view text_;
  std::size_t base_;
  Signature sig_;
  std::size_t pos_ = 0;
};

std::string_view next_line(std::string_view text, std::size_t& pos) {
  std::size_t nl = text.find('\n', pos);
  if (nl == std::string_view::npos) nl = text.size();
  auto line = text.substr(pos, nl - pos);
  pos = nl < text.size() ? nl + 1 : nl;
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

Signature parse_signature(std::string_view line, std::size_t offset) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t s = i;
    while (i < line.size() && line[i] != ' ') ++i;
    if (s < i) words.emplace_back(line.substr(s, i - s));
  }
  if (words.size() < 2 || words[0] != "signature") throw FormatError(offset, "expected a signature line");
  if (words[1] == "boolean") {
    if (words.size() != 2) throw FormatError(offset, "unexpected words after 'signature boolean'");
    return Signature::boolean();
  }
  if (words[1] != "relational") throw FormatError(offset, "unknown signature '" + words[1] + "'");
  Signature sig = Signature::relational(false);
  for (std::size_t k = 2; k < words.size(); ++k) {
    if (words[k] == "constants") {
      sig.constants = true;
    } else if (words[k] == "predicate" && k + 1 < words.size()) {
      sig.predicate = words[++k];
    } else {
      throw FormatError(offset, "unexpected signature word '" + words[k] + "'");
    }
  }
  return sig;
}

}  // namespace

std::string signature_line(const Signature& sig) {
  if (sig.kind == Signature::Kind::BooleanAlgebra) return "signature boolean";
  std::string out = "signature relational";
  if (sig.constants) out += " constants";
  if (!sig.predicate.empty()) out += " predicate " + sig.predicate;
  return out;
}

std::string serialize(const FormulaPtr& f, const Signature& sig) {
  validate(f, sig);
  std::string out(kMagic);
  out += '\n';
  out += signature_line(sig);
  out += '\n';
  write_formula(f, out);
  out += '\n';
  return out;
}

std::string serialize(const FormulaPtr& f) { return serialize(f, infer_signature(f)); }

Document parse_formula(std::string_view text) {
  std::size_t pos = 0;
  if (next_line(text, pos) != kMagic) throw FormatError(0, "missing 'tm2qbf-formula v1' header");
  std::size_t sig_offset = pos;
  Document doc;
  doc.signature = parse_signature(next_line(text, pos), sig_offset);
  Parser parser(text.substr(pos), pos, doc.signature);
  doc.formula = parser.formula();
  parser.finish();
  return doc;
}

}  // namespace tm2qbf
