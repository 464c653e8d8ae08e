#include "tm2qbf/encoder.hpp"

#include <string>

#include "tm2qbf/substitution.hpp"

namespace tm2qbf {

namespace {

void append(VarTuple& out, const VarTuple& part) { out.insert(out.end(), part.begin(), part.end()); }
void append(TermTuple& out, const TermTuple& part) { out.insert(out.end(), part.begin(), part.end()); }

VarTuple slice(char kind, Index group, std::size_t offset, std::size_t width) {
  VarTuple out;
  out.reserve(width);
  for (std::size_t i = 0; i < width; ++i) {
    out.push_back({kind, group, static_cast<std::uint32_t>(offset + i)});
  }
  return out;
}

// The limit keeps Ψ L(t), which lists every cell of the zone, at desk scale.
constexpr Index kMaxListedZone = Index{1} << 16;

}  // namespace

VarTuple RecordVars::all() const {
  VarTuple out;
  append(out, x);
  append(out, q);
  append(out, z);
  append(out, d);
  append(out, f);
  return out;
}

TermTuple Record::all() const {
  TermTuple out;
  append(out, x);
  append(out, q);
  append(out, z);
  append(out, d);
  append(out, f);
  return out;
}

RecordVars basic_record_vars(Index color, const RecordLayout& layout) {
  return {var_tuple('x', color, layout.address_width()), var_tuple('q', color, layout.code_width()),
          var_tuple('z', color, layout.address_width()), var_tuple('d', color, layout.code_width()),
          var_tuple('f', color, layout.code_width())};
}

RecordVars flat_record_vars(char kind, Index group, const RecordLayout& layout) {
  std::size_t a = layout.address_width();
  std::size_t c = layout.code_width();
  return {slice(kind, group, 0, a), slice(kind, group, a, c), slice(kind, group, a + c, a),
          slice(kind, group, 2 * a + c, c), slice(kind, group, 2 * a + 2 * c, c)};
}

Record as_terms(const RecordVars& vars) {
  return {as_terms(vars.x), as_terms(vars.q), as_terms(vars.z), as_terms(vars.d), as_terms(vars.f)};
}

TermTuple EncodingParams::symbol_code(Symbol s) const {
  if (s >= program.alphabet.size()) throw EncodingError("symbol outside the alphabet");
  return constant_tuple(s, r + 1);
}

TermTuple EncodingParams::state_code(State q) const { return constant_tuple(q, r + 1); }

TermTuple EncodingParams::address(Index cell) const { return constant_tuple(cell, m + 1); }

Program prepare_program(const Program& p) { return add_idle_run(normalize(p)); }

unsigned minimal_code_width(std::size_t alphabet_size, State max_state) {
  Index need = Index{alphabet_size} + max_state;
  unsigned r = 0;
  while ((Index{1} << (r + 1)) < need) ++r;
  return r;
}

EncodingParams derive_params(const Program& program, const Word& x, std::optional<unsigned> m_override) {
  EncodingParams p;
  p.program = program;
  p.input = x;
  p.n = x.size();
  p.m = m_override ? *m_override : static_cast<unsigned>(x.size());
  if (p.m > kMaxZoneExponent) {
    throw EncodingError("zone exponent " + std::to_string(p.m) + " exceeds the supported maximum " +
                        std::to_string(kMaxZoneExponent));
  }
  p.T = Index{1} << p.m;
  if (Index{p.n} > p.T) {
    throw EncodingError("zone exponent " + std::to_string(p.m) + " is too small: cells 0.." +
                        to_decimal(p.T) + " cannot hold the start marker and " +
                        std::to_string(p.n) + " input symbols");
  }
  for (Symbol s : x) {
    if (s == kStart || s >= program.alphabet.size()) {
      throw EncodingError("input word uses a symbol outside the machine alphabet");
    }
  }
  p.r = minimal_code_width(program.alphabet.size(), program.max_state());
  return p;
}

Encoder::Encoder(EncodingParams params) : params_(std::move(params)) {}

FormulaPtr Encoder::clause(const Record& rec, const TermTuple& mu, const TermTuple& eps) const {
  return fo::implies(eq_tuple(rec.x, mu), eq_tuple(rec.f, eps));
}

FormulaPtr Encoder::timer(const Record& rec, const TermTuple& alpha, const TermTuple& delta,
                          const TermTuple& xi) const {
  return fo::conj(fo::conj(eq_tuple(rec.d, alpha), eq_tuple(rec.q, delta)), eq_tuple(rec.z, xi));
}

const Instruction& Encoder::instruction(std::size_t k) const {
  const auto& ins = params_.program.instructions;
  if (k == 0 || k > ins.size()) {
    throw EncodingError("instruction index " + std::to_string(k) + " outside 1.." +
                        std::to_string(ins.size()));
  }
  return ins[k - 1];
}

FormulaPtr Encoder::phi_k(std::size_t k, const Record& src, const Record& dst) const {
  const Instruction& ins = instruction(k);
  const RecordLayout layout = params_.layout();
  VarTuple u = var_tuple('u', k, layout.address_width());
  VarTuple w = var_tuple('w', k, layout.address_width());
  VarTuple g = var_tuple('g', k, layout.code_width());
  VarTuple h = var_tuple('h', k, layout.code_width());
  TermTuple ut = as_terms(u);
  TermTuple wt = as_terms(w);
  TermTuple gt = as_terms(g);
  TermTuple ht = as_terms(h);

  TermTuple u_beta;
  switch (ins.action.kind) {
    case Action::Kind::Right:
      u_beta = shifted_tuple(ut, +1);
      break;
    case Action::Kind::Left:
      u_beta = shifted_tuple(ut, -1);
      break;
    case Action::Kind::Write:
      u_beta = ut;
      break;
  }

  FormulaPtr copy = fo::forall(
      w, fo::implies(fo::neg(eq_tuple(wt, u_beta)),
                     fo::exists(g, fo::conj(clause(src, wt, gt), clause(dst, wt, gt)))));
  FormulaPtr retrieval = ins.action.is_move() ? clause(src, u_beta, ht)
                                              : eq_tuple(ht, params_.symbol_code(ins.action.symbol));
  FormulaPtr write = clause(dst, u_beta, ht);
  FormulaPtr after = timer(dst, ht, params_.state_code(ins.to), u_beta);
  FormulaPtr inner = fo::forall(h, fo::implies(retrieval, fo::conj(write, after)));
  FormulaPtr before = timer(src, params_.symbol_code(ins.read), params_.state_code(ins.from), ut);
  return fo::forall(u, fo::implies(before, fo::conj(copy, inner)));
}

const FormulaPtr& Encoder::phi0_template() const {
  if (!phi0_template_) {
    if (instruction_count() == 0) throw EncodingError("program has no instructions");
    Record src = basic(0);
    Record dst = basic(1);
    std::vector<FormulaPtr> parts;
    parts.reserve(instruction_count());
    for (std::size_t k = 1; k <= instruction_count(); ++k) parts.push_back(phi_k(k, src, dst));
    phi0_template_ = fo::conj_all(parts);
  }
  return phi0_template_;
}

FormulaPtr Encoder::phi0(const Record& src, const Record& dst) const {
  Substitution s;
  s.add(basic_vars(0).all(), src.all());
  s.add(basic_vars(1).all(), dst.all());
  return substitute(phi0_template(), s);
}

FormulaPtr Encoder::phi_s(unsigned s, const Record& src, const Record& dst) const {
  if (s == 0) return phi0(src, dst);
  const RecordLayout layout = params_.layout();
  RecordVars v = flat_record_vars('v', s, layout);
  RecordVars a = flat_record_vars('a', s, layout);
  RecordVars b = flat_record_vars('b', s, layout);
  Record vt = as_terms(v);
  Record at = as_terms(a);
  Record bt = as_terms(b);
  FormulaPtr guard = fo::disj(fo::conj(eq_tuple(src.all(), at.all()), eq_tuple(vt.all(), bt.all())),
                              fo::conj(eq_tuple(vt.all(), at.all()), eq_tuple(bt.all(), dst.all())));
  FormulaPtr body = fo::implies(guard, phi_s(s - 1, at, bt));
  return fo::exists(v.all(), fo::forall(a.all(), fo::forall(b.all(), body)));
}

FormulaPtr Encoder::psi_config(const Configuration& cfg, Index color) const {
  if (params_.T > kMaxListedZone) {
    throw EncodingError("configuration formulas list every cell; zone 2^" +
                        std::to_string(params_.m) + " is too wide");
  }
  if (Index{cfg.head} > params_.T || Index{cfg.extent()} > params_.T + 1) {
    throw EncodingError("configuration at step " + std::to_string(cfg.step) +
                        " does not fit the zone 0.." + to_decimal(params_.T));
  }
  Record rec = basic(color);
  std::vector<FormulaPtr> parts;
  parts.reserve(static_cast<std::size_t>(params_.T) + 2);
  parts.push_back(timer(rec, params_.symbol_code(cfg.scanned()), params_.state_code(cfg.state),
                        params_.address(cfg.head)));
  for (Index mu = 0; mu <= params_.T; ++mu) {
    parts.push_back(clause(rec, params_.address(mu),
                           params_.symbol_code(cfg.at(static_cast<std::size_t>(mu)))));
  }
  return fo::conj_all(parts);
}

FormulaPtr Encoder::chi0() const {
  Record rec = basic(0);
  std::vector<FormulaPtr> parts;
  parts.reserve(params_.n + 3);
  parts.push_back(timer(rec, params_.symbol_code(kStart), params_.state_code(kStartState), params_.address(0)));
  for (std::size_t eta = 0; eta <= params_.n; ++eta) {
    Symbol s = eta == 0 ? kStart : params_.input[eta - 1];
    parts.push_back(clause(rec, params_.address(eta), params_.symbol_code(s)));
  }
  VarTuple u0 = var_tuple('u', 0, params_.layout().address_width());
  TermTuple u0t = as_terms(u0);
  parts.push_back(fo::forall(u0, fo::implies(lex_less(params_.address(params_.n), u0t),
                                             clause(rec, u0t, params_.symbol_code(kBlank)))));
  return fo::conj_all(parts);
}

FormulaPtr Encoder::chi_omega() const {
  return eq_tuple(basic(params_.T).q, params_.state_code(kAcceptState));
}

FormulaPtr Encoder::omega_s(const Configuration& from, const Configuration& to, unsigned s) const {
  if (s > params_.m) {
    throw EncodingError("depth " + std::to_string(s) + " exceeds the zone exponent " +
                        std::to_string(params_.m));
  }
  Index t = from.step;
  Index t2 = t + (Index{1} << s);
  Configuration target = to;
  target.step = static_cast<std::size_t>(t2);
  return fo::implies(fo::conj(psi_config(from, t), phi_s(s, basic(t), basic(t2))),
                     psi_config(target, t2));
}

FormulaPtr Encoder::omega_s_sentence(const Configuration& from, const Configuration& to,
                                     unsigned s) const {
  Index t = from.step;
  Index t2 = t + (Index{1} << s);
  return close_universally({basic_vars(t).all(), basic_vars(t2).all()}, omega_s(from, to, s));
}

FormulaPtr Encoder::omega() const {
  const RecordLayout layout = params_.layout();
  const unsigned m = params_.m;
  RecordVars y0 = basic_vars(0);
  RecordVars yT = basic_vars(params_.T);
  Record y0t = as_terms(y0);
  Record yTt = as_terms(yT);

  FormulaPtr middle;
  if (m == 0) {
    middle = phi0(y0t, yTt);
  } else {
    std::vector<RecordVars> v(m + 2), a(m + 2), b(m + 2);
    std::vector<Record> at(m + 2), bt(m + 2), vt(m + 2);
    for (unsigned s = 1; s <= m; ++s) {
      v[s] = flat_record_vars('v', s, layout);
      a[s] = flat_record_vars('a', s, layout);
      b[s] = flat_record_vars('b', s, layout);
      vt[s] = as_terms(v[s]);
      at[s] = as_terms(a[s]);
      bt[s] = as_terms(b[s]);
    }
    at[m + 1] = y0t;
    bt[m + 1] = yTt;
    std::vector<FormulaPtr> theta;
    theta.reserve(m);
    for (unsigned s = 1; s <= m; ++s) {
      theta.push_back(fo::disj(
          fo::conj(eq_tuple(at[s + 1].all(), at[s].all()), eq_tuple(vt[s].all(), bt[s].all())),
          fo::conj(eq_tuple(vt[s].all(), at[s].all()), eq_tuple(bt[s].all(), bt[s + 1].all()))));
    }
    middle = fo::implies(fo::conj_all(theta), phi0(at[1], bt[1]));
    for (unsigned s = 1; s <= m; ++s) {
      middle = fo::exists(v[s].all(), fo::forall(a[s].all(), fo::forall(b[s].all(), middle)));
    }
  }
  return close_universally({y0.all(), yT.all()}, fo::implies(fo::conj(chi0(), middle), chi_omega()));
}

std::uint64_t record_order_key(const VarId& v, const RecordLayout& layout) {
  const std::uint64_t a = layout.address_width();
  const std::uint64_t c = layout.code_width();
  std::uint64_t pos = v.bit;
  switch (v.kind) {
    case 'q': pos = a + v.bit; break;
    case 'z': pos = a + c + v.bit; break;
    case 'd': pos = 2 * a + c + v.bit; break;
    case 'f':
    case 'g':
    case 'h': pos = 2 * a + 2 * c + v.bit; break;
    default: break;  // x, u, w and the flat records already count from the start
  }
  const std::uint64_t group = v.group > Index{0xFFFFFF} ? 0xFFFFFF : static_cast<std::uint64_t>(v.group);
  return (pos << 32) | (group << 8) | static_cast<unsigned char>(v.kind);
}

FormulaPtr close_universally(const std::vector<VarTuple>& tuples, const FormulaPtr& body) {
  VarTuple all;
  for (const auto& t : tuples) append(all, t);
  return fo::forall(std::move(all), body);
}

}  // namespace tm2qbf
