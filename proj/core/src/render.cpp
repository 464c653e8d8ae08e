#include "tm2qbf/render.hpp"

#include <unordered_map>

namespace tm2qbf {

namespace {

int term_level(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Meet:
      return 1;
    case TermKind::Join:
      return 2;
    default:
      return 0;
  }
}

int formula_level(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::And:
      return 1;
    case FormulaKind::Or:
      return 2;
    case FormulaKind::Implies:
      return 3;
    default:
      return 0;
  }
}

// Parenthesization decisions shared by the renderer and the length counter.
bool paren_term_child(const TermPtr& parent, const TermPtr& child) {
  switch (parent->kind) {
    case TermKind::Complement:
      return term_level(child) > 0;
    case TermKind::Meet:
      return term_level(child) > 1;
    default:
      return false;
  }
}

bool paren_formula_child(const FormulaPtr& parent, const FormulaPtr& child) {
  int lc = formula_level(child);
  switch (parent->kind) {
    case FormulaKind::Not:
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      return lc > 0;
    case FormulaKind::And:
      return lc > 1;
    case FormulaKind::Or:
      return lc > 2;
    case FormulaKind::Implies:
      return lc >= 3;
    default:
      return false;
  }
}

const char* atom_symbol(FormulaKind k) { return k == FormulaKind::Eq ? "≈" : "∼"; }

const char* connective(FormulaKind k) {
  switch (k) {
    case FormulaKind::And:
      return "∧";
    case FormulaKind::Or:
      return "∨";
    default:
      return "→";
  }
}

void render_term(const TermPtr& t, std::string& out) {
  auto child = [&](const TermPtr& c) {
    bool p = paren_term_child(t, c);
    if (p) out += '(';
    render_term(c, out);
    if (p) out += ')';
  };
  switch (t->kind) {
    case TermKind::Zero:
      out += '0';
      break;
    case TermKind::One:
      out += '1';
      break;
    case TermKind::C0:
      out += "c0";
      break;
    case TermKind::C1:
      out += "c1";
      break;
    case TermKind::Var:
      out += to_string(t->var);
      break;
    case TermKind::Complement:
      out += 'C';
      child(t->a);
      break;
    case TermKind::Meet:
      child(t->a);
      out += "∩";
      child(t->b);
      break;
    case TermKind::Join:
      child(t->a);
      out += "∪";
      child(t->b);
      break;
  }
}

void render_formula(const FormulaPtr& f, std::string& out) {
  auto child = [&](const FormulaPtr& c) {
    bool p = paren_formula_child(f, c);
    if (p) out += '(';
    render_formula(c, out);
    if (p) out += ')';
  };
  switch (f->kind) {
    case FormulaKind::Eq:
    case FormulaKind::Sim:
      render_term(f->lhs, out);
      out += atom_symbol(f->kind);
      render_term(f->rhs, out);
      break;
    case FormulaKind::Pred:
      out += f->pred;
      out += '(';
      render_term(f->lhs, out);
      out += ',';
      render_term(f->rhs, out);
      out += ')';
      break;
    case FormulaKind::Not:
      out += "¬";
      child(f->a);
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      child(f->a);
      out += connective(f->kind);
      child(f->b);
      break;
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      for (const auto& v : f->vars) {
        out += f->kind == FormulaKind::ForAll ? "∀" : "∃";
        out += to_string(v);
      }
      child(f->a);
      break;
  }
}

class LengthCounter {
 public:
  explicit LengthCounter(bool count_indices) : count_indices_(count_indices) {}

  std::size_t var(const VarId& v) const {
    if (!count_indices_) return 1;
    return 2 + decimal_digits(v.group) + decimal_digits(v.bit);
  }

  std::size_t term(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::Zero:
      case TermKind::One:
        return 1;
      case TermKind::C0:
      case TermKind::C1:
        return 2;
      case TermKind::Var:
        return var(t->var);
      default:
        break;
    }
    if (auto it = terms_.find(t.get()); it != terms_.end()) return it->second;
    std::size_t len = 0;
    auto child = [&](const TermPtr& c) { return term(c) + (paren_term_child(t, c) ? 2 : 0); };
    if (t->kind == TermKind::Complement) {
      len = 1 + child(t->a);
    } else {
      len = child(t->a) + 1 + child(t->b);
    }
    terms_.emplace(t.get(), len);
    return len;
  }

  std::size_t formula(const FormulaPtr& f) {
    if (auto it = formulas_.find(f.get()); it != formulas_.end()) return it->second;
    std::size_t len = 0;
    auto child = [&](const FormulaPtr& c) { return formula(c) + (paren_formula_child(f, c) ? 2 : 0); };
    switch (f->kind) {
      case FormulaKind::Eq:
      case FormulaKind::Sim:
        len = term(f->lhs) + 1 + term(f->rhs);
        break;
      case FormulaKind::Pred:
        len = f->pred.size() + 3 + term(f->lhs) + term(f->rhs);
        break;
      case FormulaKind::Not:
        len = 1 + child(f->a);
        break;
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies:
        len = child(f->a) + 1 + child(f->b);
        break;
      case FormulaKind::ForAll:
      case FormulaKind::Exists:
        for (const auto& v : f->vars) len += 1 + var(v);
        len += child(f->a);
        break;
    }
    formulas_.emplace(f.get(), len);
    return len;
  }

 private:
  bool count_indices_;
  std::unordered_map<const Term*, std::size_t> terms_;
  std::unordered_map<const Formula*, std::size_t> formulas_;
};

}  // namespace

std::string render_natural(const TermPtr& t) {
  std::string out;
  render_term(t, out);
  return out;
}

std::string render_natural(const FormulaPtr& f) {
  std::string out;
  render_formula(f, out);
  return out;
}

std::size_t length_natural(const FormulaPtr& f) { return LengthCounter(true).formula(f); }

std::size_t length_natural_noidx(const FormulaPtr& f) { return LengthCounter(false).formula(f); }

}  // namespace tm2qbf
