#include "stratkit/export.hpp"

#include <stdexcept>

namespace stratkit::jsonio {

namespace {

const char* kind_name(FormulaKind k) {
  switch (k) {
    case FormulaKind::Bottom: return "bot";
    case FormulaKind::Atom: return "atom";
    case FormulaKind::Eq: return "eq";
    case FormulaKind::Mem: return "in";
    case FormulaKind::Sub: return "sub";
    case FormulaKind::SubT: return "subT";
    case FormulaKind::Not: return "not";
    case FormulaKind::And: return "and";
    case FormulaKind::Or: return "or";
    case FormulaKind::Imp: return "imp";
    case FormulaKind::Forall:
    case FormulaKind::BForall: return "forall";
    case FormulaKind::Exists:
    case FormulaKind::BExists: return "exists";
  }
  return "?";
}

const char* connective_symbol(FormulaKind k) {
  switch (k) {
    case FormulaKind::Not: return "~";
    case FormulaKind::And: return "&";
    case FormulaKind::Or: return "|";
    case FormulaKind::Imp: return "->";
    case FormulaKind::Eq: return "=";
    case FormulaKind::Mem: return "in";
    case FormulaKind::Sub: return "sub";
    case FormulaKind::SubT: return "subT";
    case FormulaKind::Bottom: return "bot";
    default: return "";
  }
}

}  // namespace

json ast(const Term& t) {
  json j;
  j["kind"] = t.is_var() ? "var" : "app";
  j["symbol"] = t.name;
  j["children"] = json::array();
  for (const auto& a : t.args) j["children"].push_back(ast(a));
  if (t.lift) j["lift"] = t.lift;
  return j;
}

json ast(const Formula& f) {
  json j;
  j["kind"] = kind_name(f.kind());
  j["children"] = json::array();
  if (f.is_atomic()) {
    j["symbol"] = f.kind() == FormulaKind::Atom ? f.symbol() : connective_symbol(f.kind());
    for (const auto& t : f.terms()) j["children"].push_back(ast(t));
    if (f.lift()) j["lift"] = f.lift();
  } else if (f.kind() == FormulaKind::Not) {
    j["symbol"] = "~";
    j["children"].push_back(ast(f.body()));
  } else if (f.is_binary()) {
    j["symbol"] = connective_symbol(f.kind());
    j["children"].push_back(ast(f.lhs()));
    j["children"].push_back(ast(f.rhs()));
  } else {
    j["symbol"] = kind_name(f.kind());
    j["var"] = f.var();
    if (f.is_bounded_quantifier()) {
      j["bound"] = ast(f.bound());
      j["boundKind"] = f.bound_kind() == BoundKind::Member ? "in" : "sub";
    }
    j["children"].push_back(ast(f.body()));
  }
  return j;
}

Term term_from_ast(const json& j) {
  const std::string kind = j.at("kind");
  if (kind == "var") return Term::var(j.at("symbol"));
  if (kind != "app") throw std::invalid_argument("unknown term kind '" + kind + "'");
  std::vector<Term> args;
  for (const auto& c : j.at("children")) args.push_back(term_from_ast(c));
  return Term::app(j.at("symbol"), std::move(args), j.value("lift", 0));
}

Formula formula_from_ast(const json& j) {
  const std::string kind = j.at("kind");
  const auto& ch = j.at("children");
  auto term = [&](std::size_t i) { return term_from_ast(ch.at(i)); };
  auto sub = [&](std::size_t i) { return formula_from_ast(ch.at(i)); };
  const int lift = j.value("lift", 0);
  if (kind == "bot") return Formula::bottom();
  if (kind == "atom") {
    std::vector<Term> args;
    for (const auto& c : ch) args.push_back(term_from_ast(c));
    return Formula::atom(j.at("symbol"), std::move(args), lift);
  }
  if (kind == "eq") return Formula::eq(term(0), term(1), lift);
  if (kind == "in") return Formula::mem(term(0), term(1));
  if (kind == "sub") return Formula::sub(term(0), term(1));
  if (kind == "subT") return Formula::subt(term(0), term(1), lift);
  if (kind == "not") return Formula::neg(sub(0));
  if (kind == "and") return Formula::conj(sub(0), sub(1));
  if (kind == "or") return Formula::disj(sub(0), sub(1));
  if (kind == "imp") return Formula::imp(sub(0), sub(1));
  if (kind == "forall" || kind == "exists") {
    const std::string v = j.at("var");
    if (j.contains("bound")) {
      const BoundKind bk = j.at("boundKind") == "in" ? BoundKind::Member : BoundKind::Subset;
      const Term b = term_from_ast(j.at("bound"));
      return kind == "forall" ? Formula::bforall(v, b, bk, sub(0)) : Formula::bexists(v, b, bk, sub(0));
    }
    return kind == "forall" ? Formula::forall(v, sub(0)) : Formula::exists(v, sub(0));
  }
  throw std::invalid_argument("unknown formula kind '" + kind + "'");
}

json report(const strat::StratResult& r) {
  json j;
  if (r.stratified()) {
    const auto& s = *r.stratification;
    j["status"] = "stratified";
    j["types"] = json::object();
    j["termTypes"] = json::object();
    for (const auto& [k, v] : s.types) {
      j["termTypes"][k] = v;
      // variable keys are bare identifiers
      if (k.find_first_of("(<") == std::string::npos) j["types"][k] = v;
    }
    j["max"] = s.max;
  } else {
    j["status"] = "unstratifiable";
    json cyc = json::array();
    for (const auto& st : r.witness->cycle)
      cyc.push_back({{"from", st.from()}, {"to", st.to()}, {"offset", st.delta()}, {"origin", st.constraint.origin}});
    j["witness"] = {{"cycle", cyc}, {"netOffset", r.witness->net_offset()}};
  }
  return j;
}

json report(const hierarchy::Classification& c, const Formula& f) {
  json j;
  j["levy"] = c.levy ? json(c.levy->name()) : json(nullptr);
  j["takahashi"] = c.takahashi ? json(c.takahashi->name()) : json(nullptr);
  j["prefix"] = json::array();
  for (const auto& b : hierarchy::prefix_shape(f))
    j["prefix"].push_back(
        {{"quantifier", b.kind == hierarchy::QuantKind::Forall ? "forall" : "exists"}, {"length", b.length}});
  return j;
}

namespace {
json typed(const cat::TypedFormula& t) {
  json j;
  j["text"] = print(t.formula);
  j["ast"] = ast(t.formula);
  j["sorts"] = json::object();
  for (const auto& [v, o] : t.sorts) j["sorts"][v] = cat::to_string(o);
  j["sortCheck"] = cat::sort_check(t);
  return j;
}
}  // namespace

json report(const cat::Translation& t) {
  json j;
  j["source"] = {{"text", print(t.source)}, {"ast", ast(t.source)}};
  j["max"] = t.stratification.max;
  j["phiIota"] = typed(t.phi_iota);
  j["phiSubT"] = typed(t.phi_subT);
  j["retyping"] = json::object();
  for (const auto& [v, r] : t.retyping)
    j["retyping"][v] = {{"name", r.name}, {"k", r.k}, {"sort", cat::to_string(r.sort)}};
  return j;
}

json condition(const bf::Condition& c) {
  json a = json::array();
  for (const auto& [x, y] : c) a.push_back({{"x", to_string(x)}, {"fx", to_string(y)}});
  return a;
}

json checks(const std::vector<bf::Check>& cs) {
  json a = json::array();
  for (const auto& c : cs)
    a.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}, {"scope", c.in_limit ? "limit" : "prefix"}});
  return a;
}

json report(const bf::Run& r) {
  json j;
  j["condition"] = condition(r.result);
  j["checks"] = checks(r.checks);
  j["pass"] = r.all_pass();
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json report(const bf::Family& f) {
  json j;
  j["branches"] = json::array();
  for (const auto& b : f.branches)
    j["branches"].push_back({{"index", b.index},
                             {"bound", to_string(b.bound)},
                             {"cut", b.cut.describe()},
                             {"run", report(b.run)}});
  j["checks"] = checks(f.checks);
  j["comparisons"] = f.comparisons;
  j["pass"] = f.all_pass();
  return j;
}

}  // namespace stratkit::jsonio
