#include "stratkit/tarski.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace stratkit::bf {

namespace {

struct Prepared {
  Formula f;
  std::string var;
  Formula body;
  std::vector<std::string> params;
};

Prepared prepare(const Formula& g) {
  const Formula f = normalize_bounded(g, BoundedDirection::Desugar);
  if (f.kind() != FormulaKind::Exists)
    throw std::invalid_argument("Tarski test formulas must be existential: " + print(g));
  const auto fv = free_vars(f);
  if (fv.size() > kMaxTarskiParams)
    throw std::invalid_argument("formula has " + std::to_string(fv.size()) + " parameters; at most " +
                                std::to_string(kMaxTarskiParams) + " are supported: " + print(g));
  return {f, f.var(), f.body(), std::vector<std::string>(fv.begin(), fv.end())};
}

// Generic driver: Val maps names to elements, holds(f, v) decides truth in M.
template <class Elem, class Holds, class Show>
TarskiResult run(const std::vector<Elem>& S, const std::vector<Elem>& M, const std::vector<Formula>& gamma,
                 Holds holds, Show show) {
  TarskiResult r;
  for (const auto& g : gamma) {
    const Prepared p = prepare(g);
    std::map<std::string, Elem> v;
    std::vector<std::size_t> idx(p.params.size(), 0);
    if (!p.params.empty() && S.empty()) continue;
    while (true) {
      for (std::size_t i = 0; i < idx.size(); ++i) v.insert_or_assign(p.params[i], S[idx[i]]);
      ++r.cases;
      auto witness_from = [&](const std::vector<Elem>& pool) -> const Elem* {
        for (const auto& e : pool) {
          auto w = v;
          w.insert_or_assign(p.var, e);
          if (holds(p.body, w)) return &e;
        }
        return nullptr;
      };
      if (const Elem* wm = witness_from(M); wm && !witness_from(S)) {
        TarskiFailure fail;
        fail.formula = print(g);
        for (const auto& name : p.params) fail.params[name] = show(v.at(name));
        fail.witness = show(*wm);
        r.ok = false;
        r.failure = std::move(fail);
        return r;
      }
      std::size_t i = 0;
      while (i < idx.size() && ++idx[i] == S.size()) idx[i++] = 0;
      if (i == idx.size()) break;
    }
  }
  return r;
}

}  // namespace

TarskiResult tarski_check(const std::vector<hf::HFSet>& S, const hf::FinModel& M, const std::vector<Formula>& gamma) {
  for (const auto& s : S)
    if (!M.contains(s)) throw std::invalid_argument("substructure element " + hf::to_string(s) + " is not in M");
  return run(S, M.domain(), gamma,
             [&](const Formula& f, const hf::Valuation& v) { return hf::eval(f, M, v); },
             [](const hf::HFSet& x) { return hf::to_string(x); });
}

bool eval_order(const Formula& f, const std::vector<Rational>& M, const std::map<std::string, Rational>& v) {
  auto val = [&](const Term& t) -> const Rational& {
    if (!t.is_var()) throw std::invalid_argument("order formulas take variables only: " + print(t));
    auto it = v.find(t.name);
    if (it == v.end()) throw std::invalid_argument("unassigned variable '" + t.name + "'");
    return it->second;
  };
  switch (f.kind()) {
    case FormulaKind::Bottom: return false;
    case FormulaKind::Atom:
      if (f.symbol() != "lt" || f.terms().size() != 2 || f.lift() != 0)
        throw std::invalid_argument("order formulas use lt(a, b) only: " + print(f));
      return val(f.terms()[0]) < val(f.terms()[1]);
    case FormulaKind::Eq: return val(f.terms()[0]) == val(f.terms()[1]);
    case FormulaKind::Not: return !eval_order(f.body(), M, v);
    case FormulaKind::And: return eval_order(f.lhs(), M, v) && eval_order(f.rhs(), M, v);
    case FormulaKind::Or: return eval_order(f.lhs(), M, v) || eval_order(f.rhs(), M, v);
    case FormulaKind::Imp: return !eval_order(f.lhs(), M, v) || eval_order(f.rhs(), M, v);
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      const bool all = f.kind() == FormulaKind::Forall;
      auto w = v;
      for (const auto& m : M) {
        w.insert_or_assign(f.var(), m);
        if (eval_order(f.body(), M, w) != all) return !all;
      }
      return all;
    }
    default: throw std::invalid_argument("unsupported construct in an order formula: " + print(f));
  }
}

TarskiResult tarski_check(const std::vector<Rational>& S, const std::vector<Rational>& M,
                          const std::vector<Formula>& gamma) {
  for (const auto& s : S)
    if (std::find(M.begin(), M.end(), s) == M.end())
      throw std::invalid_argument("substructure element " + to_string(s) + " is not in M");
  return run(S, M, gamma,
             [&](const Formula& f, const std::map<std::string, Rational>& v) { return eval_order(f, M, v); },
             [](const Rational& x) { return to_string(x); });
}

}  // namespace stratkit::bf
