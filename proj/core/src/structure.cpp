#include "tm2qbf/structure.hpp"

#include <json.hpp>

namespace tm2qbf {

void EqStructure::check() const {
  if (domain_size == 0) throw StructureError("domain is empty");
  std::vector<int> seen(domain_size, 0);
  for (const auto& cls : partition) {
    if (cls.empty()) throw StructureError("empty class in partition");
    for (std::size_t e : cls) {
      if (e >= domain_size) throw StructureError("class element " + std::to_string(e) + " outside the domain");
      if (seen[e]++) throw StructureError("element " + std::to_string(e) + " in two classes");
    }
  }
  for (std::size_t e = 0; e < domain_size; ++e) {
    if (!seen[e]) throw StructureError("element " + std::to_string(e) + " in no class");
  }
  if (constants && (constants->first >= domain_size || constants->second >= domain_size)) {
    throw StructureError("constant outside the domain");
  }
  for (const auto& [name, pairs] : relations) {
    for (const auto& [x, y] : pairs) {
      if (x >= domain_size || y >= domain_size) throw StructureError("relation " + name + " leaves the domain");
    }
  }
}

std::size_t EqStructure::class_of(std::size_t element) const {
  for (std::size_t i = 0; i < partition.size(); ++i) {
    for (std::size_t e : partition[i]) {
      if (e == element) return i;
    }
  }
  throw StructureError("element " + std::to_string(element) + " in no class");
}

EqStructure EqStructure::equality(std::size_t n) { return classes(n, n, false); }

EqStructure EqStructure::classes(std::size_t n, std::size_t k, bool with_constants) {
  EqStructure s;
  s.domain_size = n;
  s.partition.assign(std::min(n, k), {});
  for (std::size_t e = 0; e < n; ++e) s.partition[e % s.partition.size()].push_back(e);
  if (with_constants) s.constants = std::make_pair(std::size_t{0}, static_cast<std::size_t>(n > 1 ? 1 : 0));
  return s;
}

EqStructure parse_structure(std::string_view text) {
  EqStructure s;
  try {
    auto j = nlohmann::json::parse(text);
    s.domain_size = j.at("domain_size").get<std::size_t>();
    s.partition = j.at("partition").get<std::vector<std::vector<std::size_t>>>();
    if (j.contains("constants")) {
      const auto& c = j.at("constants");
      s.constants = std::make_pair(c.at("c0").get<std::size_t>(), c.at("c1").get<std::size_t>());
    }
    if (j.contains("relations")) {
      for (const auto& [name, pairs] : j.at("relations").items()) {
        auto& rel = s.relations[name];
        for (const auto& p : pairs) rel.emplace(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw StructureError(std::string("malformed structure: ") + e.what());
  }
  s.check();
  return s;
}

std::string structure_json(const EqStructure& s) {
  nlohmann::json j;
  j["domain_size"] = s.domain_size;
  j["partition"] = s.partition;
  if (s.constants) j["constants"] = {{"c0", s.constants->first}, {"c1", s.constants->second}};
  if (!s.relations.empty()) {
    nlohmann::json rel = nlohmann::json::object();
    for (const auto& [name, pairs] : s.relations) {
      nlohmann::json list = nlohmann::json::array();
      for (const auto& [x, y] : pairs) list.push_back({x, y});
      rel[name] = list;
    }
    j["relations"] = rel;
  }
  return j.dump();
}

namespace {

class ModelChecker {
 public:
  explicit ModelChecker(const EqStructure& m) : m_(m), cls_(m.domain_size) {
    for (std::size_t e = 0; e < m.domain_size; ++e) cls_[e] = m.class_of(e);
  }

  bool eval(const FormulaPtr& f) {
    switch (f->kind) {
      case FormulaKind::Sim: return cls_[element(f->lhs)] == cls_[element(f->rhs)];
      case FormulaKind::Pred: {
        auto it = m_.relations.find(f->pred);
        if (it == m_.relations.end()) throw StructureError("no interpretation for predicate " + f->pred);
        return it->second.count({element(f->lhs), element(f->rhs)}) > 0;
      }
      case FormulaKind::Eq: throw StructureError("Boolean-algebra equation in a relational sentence");
      case FormulaKind::Not: return !eval(f->a);
      case FormulaKind::And: return eval(f->a) && eval(f->b);
      case FormulaKind::Or: return eval(f->a) || eval(f->b);
      case FormulaKind::Implies: return !eval(f->a) || eval(f->b);
      case FormulaKind::ForAll:
      case FormulaKind::Exists: return quant(f, 0);
    }
    return false;
  }

 private:
  bool quant(const FormulaPtr& f, std::size_t i) {
    if (i == f->vars.size()) return eval(f->a);
    const VarId& v = f->vars[i];
    auto saved = env_.find(v) != env_.end() ? std::optional<std::size_t>(env_[v]) : std::nullopt;
    const bool forall = f->kind == FormulaKind::ForAll;
    bool result = forall;
    for (std::size_t e = 0; e < m_.domain_size; ++e) {
      env_[v] = e;
      if (quant(f, i + 1) != forall) {
        result = !forall;
        break;
      }
    }
    if (saved) {
      env_[v] = *saved;
    } else {
      env_.erase(v);
    }
    return result;
  }

  std::size_t element(const TermPtr& t) const {
    switch (t->kind) {
      case TermKind::Var: {
        auto it = env_.find(t->var);
        if (it == env_.end()) throw StructureError("free variable " + to_string(t->var));
        return it->second;
      }
      case TermKind::C0:
      case TermKind::C1:
        if (!m_.constants) throw StructureError("structure does not interpret c0, c1");
        return t->kind == TermKind::C0 ? m_.constants->first : m_.constants->second;
      default:
        throw StructureError("Boolean-algebra term in a relational sentence");
    }
  }

  const EqStructure& m_;
  std::vector<std::size_t> cls_;
  std::map<VarId, std::size_t> env_;
};

}  // namespace

bool eval_relational(const FormulaPtr& sentence, const EqStructure& model) {
  model.check();
  return ModelChecker(model).eval(sentence);
}

}  // namespace tm2qbf
