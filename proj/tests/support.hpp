#pragma once

// Seeded generators and small enumerations shared by the unit tests and the
// acceptance driver.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "stratkit/class_model.hpp"
#include "stratkit/formula.hpp"
#include "stratkit/hfsets.hpp"
#include "stratkit/kripke.hpp"

namespace stratkit::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

struct GenOptions {
  std::vector<std::string> vars{"x", "y", "z"};
  int depth = 3;
  bool bounded = true;      // member-bounded quantifiers
  bool subset = false;      // sub atoms and subset bounds
  bool pairs = false;       // <a,b> terms
  bool sethood = false;     // S(x) atoms
  bool unbounded = true;    // plain forall / exists
  std::vector<std::string> unary;  // extra unary relations
  std::vector<std::string> binary; // extra binary relations
  bool membership = true;
  bool equality = true;
};

inline Term random_term(Rng& rng, const GenOptions& o, int depth = 1) {
  if (o.pairs && depth > 0 && coin(rng, 0.2))
    return Term::pair(random_term(rng, o, depth - 1), random_term(rng, o, depth - 1));
  return Term::var(o.vars[pick(rng, o.vars.size())]);
}

inline Formula random_atom(Rng& rng, const GenOptions& o) {
  std::vector<std::function<Formula()>> makers;
  if (o.membership) makers.push_back([&] { return Formula::mem(random_term(rng, o), random_term(rng, o)); });
  if (o.equality) makers.push_back([&] { return Formula::eq(random_term(rng, o), random_term(rng, o)); });
  if (o.subset) makers.push_back([&] { return Formula::sub(random_term(rng, o, 0), random_term(rng, o, 0)); });
  if (o.sethood) makers.push_back([&] { return Formula::atom("S", {random_term(rng, o)}); });
  for (const auto& r : o.unary) makers.push_back([&, r] { return Formula::atom(r, {random_term(rng, o, 0)}); });
  for (const auto& r : o.binary)
    makers.push_back([&, r] { return Formula::atom(r, {random_term(rng, o, 0), random_term(rng, o, 0)}); });
  if (makers.empty()) return Formula::bottom();
  return makers[pick(rng, makers.size())]();
}

inline Formula random_formula(Rng& rng, const GenOptions& o, int depth) {
  if (depth <= 0 || coin(rng, 0.25)) {
    if (coin(rng, 0.04)) return Formula::bottom();
    return random_atom(rng, o);
  }
  const std::string v = o.vars[pick(rng, o.vars.size())];
  std::size_t choice = pick(rng, 7);
  if ((choice == 4 && !o.unbounded) || (choice >= 5 && !o.bounded && !o.subset)) choice = pick(rng, 4);
  switch (choice) {
    case 0: return Formula::neg(random_formula(rng, o, depth - 1));
    case 1: return Formula::conj(random_formula(rng, o, depth - 1), random_formula(rng, o, depth - 1));
    case 2: return Formula::disj(random_formula(rng, o, depth - 1), random_formula(rng, o, depth - 1));
    case 3: return Formula::imp(random_formula(rng, o, depth - 1), random_formula(rng, o, depth - 1));
    case 4:
      return coin(rng) ? Formula::forall(v, random_formula(rng, o, depth - 1))
                       : Formula::exists(v, random_formula(rng, o, depth - 1));
    default: {
      // the bound must not mention the bound variable
      std::vector<std::string> others;
      for (const auto& w : o.vars)
        if (w != v) others.push_back(w);
      if (others.empty()) return Formula::forall(v, random_formula(rng, o, depth - 1));
      const Term b = Term::var(others[pick(rng, others.size())]);
      BoundKind k = BoundKind::Member;
      if (o.subset && (!o.bounded || coin(rng))) k = BoundKind::Subset;
      return coin(rng) ? Formula::bforall(v, b, k, random_formula(rng, o, depth - 1))
                       : Formula::bexists(v, b, k, random_formula(rng, o, depth - 1));
    }
  }
}

inline Formula random_formula(Rng& rng, const GenOptions& o) { return random_formula(rng, o, o.depth); }

/// Every assignment of values from `domain` to `names`, as a callback.
template <class T, class F>
void for_each_assignment(const std::vector<std::string>& names, const std::vector<T>& domain, F&& f) {
  std::map<std::string, T> v;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == names.size()) {
      f(v);
      return;
    }
    for (const auto& d : domain) {
      v[names[i]] = d;
      go(i + 1);
    }
  };
  go(0);
}

inline std::vector<std::string> free_list(const Formula& f) {
  const auto s = free_vars(f);
  return {s.begin(), s.end()};
}

/// a and b have the same truth value under every valuation of their free
/// variables over V_3.
inline bool equivalent_v3(const Formula& a, const Formula& b) {
  static const hf::FinModel v3 = hf::v_stage(3);
  auto fv = free_vars(a);
  const auto fb = free_vars(b);
  fv.insert(fb.begin(), fb.end());
  bool same = true;
  for_each_assignment(std::vector<std::string>(fv.begin(), fv.end()), v3.domain(), [&](const hf::Valuation& v) {
    if (same && hf::eval(a, v3, v) != hf::eval(b, v3, v)) same = false;
  });
  return same;
}

// ---------------------------------------------------------------------------
// Posets and presheaves

/// One poset per isomorphism type with 1..3 nodes.
inline std::vector<kripke::FinPoset> small_posets() {
  using kripke::FinPoset;
  return {
      FinPoset(1, {}),
      FinPoset(2, {}),
      FinPoset(2, {{0, 1}}),
      FinPoset(3, {}),
      FinPoset(3, {{0, 1}}),
      FinPoset(3, {{0, 1}, {1, 2}}),
      FinPoset(3, {{0, 1}, {0, 2}}),
      FinPoset(3, {{0, 2}, {1, 2}}),
  };
}

/// Every presheaf on P with carriers of size <= max_card (all restriction
/// maps along strict pairs, functorial ones kept).
inline std::vector<kripke::Presheaf> all_presheaves(const kripke::FinPoset& P, std::size_t max_card,
                                                   std::size_t min_card = 0) {
  std::vector<kripke::Presheaf> out;
  const std::size_t n = P.size();
  std::vector<std::pair<std::size_t, std::size_t>> strict;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q : P.up(p))
      if (q != p) strict.emplace_back(p, q);
  std::vector<std::size_t> cards(n, min_card);
  while (true) {
    // maps along each strict pair, as mixed-radix counters
    std::vector<std::size_t> count(strict.size());
    std::size_t total = 1;
    bool empty_codomain = false;
    for (std::size_t i = 0; i < strict.size(); ++i) {
      const auto [p, q] = strict[i];
      std::size_t c = 1;
      for (std::size_t x = 0; x < cards[p]; ++x) c *= cards[q];
      if (c == 0) empty_codomain = true;
      count[i] = c;
      total *= c;
    }
    if (!empty_codomain) {
      for (std::size_t code = 0; code < total; ++code) {
        kripke::Presheaf X(P);
        for (std::size_t p = 0; p < n; ++p) X.set_card(p, cards[p]);
        std::size_t rest = code;
        for (std::size_t i = 0; i < strict.size(); ++i) {
          const auto [p, q] = strict[i];
          std::size_t m = rest % count[i];
          rest /= count[i];
          std::vector<std::size_t> map(cards[p]);
          for (std::size_t x = 0; x < cards[p]; ++x) {
            map[x] = m % cards[q];
            m /= cards[q];
          }
          X.set_res(p, q, std::move(map));
        }
        try {
          X.validate();
          out.push_back(std::move(X));
        } catch (const kripke::StructureError&) {
        }
      }
    }
    std::size_t i = 0;
    while (i < n && ++cards[i] > max_card) cards[i++] = min_card;
    if (i == n) break;
  }
  return out;
}

/// Every natural transformation X -> Y.
inline std::vector<kripke::NatTrans> all_nat_trans(const kripke::Presheaf& X, const kripke::Presheaf& Y) {
  std::vector<kripke::NatTrans> out;
  const std::size_t n = X.poset().size();
  kripke::NatTrans f;
  f.comp.resize(n);
  for (std::size_t p = 0; p < n; ++p) f.comp[p].assign(X.card(p), 0);
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t p = 0; p < n; ++p) {
    if (X.card(p) > 0 && Y.card(p) == 0) return out;
    for (std::size_t x = 0; x < X.card(p); ++x) slots.emplace_back(p, x);
  }
  while (true) {
    if (kripke::is_natural(X, Y, f)) out.push_back(f);
    std::size_t i = 0;
    while (i < slots.size()) {
      auto [p, x] = slots[i];
      if (++f.comp[p][x] < Y.card(p)) break;
      f.comp[p][x] = 0;
      ++i;
    }
    if (i == slots.size()) break;
  }
  return out;
}

/// Random presheaf with carriers in [lo, hi]: restrictions generated along a
/// topological order so functoriality holds.
inline kripke::Presheaf random_presheaf(Rng& rng, const kripke::FinPoset& P, std::size_t lo, std::size_t hi) {
  for (int attempt = 0;; ++attempt) {
    kripke::Presheaf X(P);
    const std::size_t n = P.size();
    std::vector<std::size_t> cards(n);
    for (std::size_t p = 0; p < n; ++p) {
      cards[p] = lo + pick(rng, hi - lo + 1);
      X.set_card(p, cards[p]);
    }
    // carriers along the order must not become empty
    bool ok = true;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q : P.up(p))
        if (cards[p] > 0 && cards[q] == 0) ok = false;
    if (!ok) continue;
    // choose maps along strict pairs, then force composites
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q : P.up(p)) {
        if (q == p) continue;
        std::vector<std::size_t> m(cards[p]);
        for (auto& v : m) v = pick(rng, cards[q]);
        X.set_res(p, q, m);
      }
    try {
      X.validate();
      return X;
    } catch (const kripke::StructureError&) {
      if (attempt > 200) return kripke::Presheaf::constant(P, lo);
    }
  }
}

/// Random restriction-closed selection over X.
inline kripke::Subpresheaf random_subpresheaf(Rng& rng, const kripke::Presheaf& X, double density = 0.4) {
  const std::size_t n = X.poset().size();
  kripke::Subpresheaf A;
  A.sel.resize(n);
  for (std::size_t p = 0; p < n; ++p) A.sel[p].assign(X.card(p), false);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t x = 0; x < X.card(p); ++x)
      if (coin(rng, density))
        for (std::size_t q : X.poset().up(p)) A.sel[q][X.res(p, q, x)] = true;
  return A;
}

/// One-sorted structure U with relations P (unary), R (binary) and "in".
inline kripke::CatStructure random_structure(Rng& rng, const kripke::FinPoset& P, std::size_t max_card = 2) {
  kripke::CatStructure M(P);
  M.sorts.emplace("U", random_presheaf(rng, P, 1, max_card));
  for (const auto& [name, arity] : std::vector<std::pair<std::string, std::size_t>>{{"P", 1}, {"Q", 1}, {"R", 2}, {"in", 2}}) {
    std::vector<std::string> sorts(arity, "U");
    const kripke::Product prod = M.product(sorts);
    M.relations[name] = {sorts, random_subpresheaf(rng, prod.presheaf(), 0.35)};
  }
  M.validate();
  return M;
}

inline kripke::FinPoset random_poset(Rng& rng, std::size_t max_nodes = 3) {
  const auto all = small_posets();
  std::vector<kripke::FinPoset> ok;
  for (const auto& P : all)
    if (P.size() <= max_nodes) ok.push_back(P);
  return ok[pick(rng, ok.size())];
}

// ---------------------------------------------------------------------------
// Finite L_Set structures

/// Random N satisfying Ext_S whose non-sets have no members.
inline kripke::SetStructure random_set_structure(Rng& rng, std::size_t n) {
  kripke::SetStructure N;
  N.n = n;
  N.sethood.assign(n, false);
  N.mem.assign(n, std::vector<bool>(n, false));
  std::set<std::uint64_t> used;
  for (std::size_t x = 0; x < n; ++x) {
    if (!coin(rng, 0.6)) continue;
    for (int attempt = 0; attempt < 20; ++attempt) {
      std::uint64_t ext = std::uniform_int_distribution<std::uint64_t>(0, (std::uint64_t{1} << n) - 1)(rng);
      if (used.insert(ext).second) {
        N.sethood[x] = true;
        for (std::size_t u = 0; u < n; ++u) N.mem[u][x] = (ext >> u) & 1u;
        break;
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (coin(rng, 0.15)) N.pair.insert({a, b, pick(rng, n)});
  // keep it a function
  std::set<std::array<std::size_t, 3>> fn;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& t : N.pair)
    if (seen.insert({t[0], t[1]}).second) fn.insert(t);
  N.pair = fn;
  N.validate();
  return N;
}

inline hf::HFSet random_hfset(Rng& rng, unsigned max_rank) {
  static const hf::FinModel v4 = hf::v_stage(4);
  if (max_rank >= 4) return v4.domain()[pick(rng, v4.size())];
  const hf::FinModel vm = hf::v_stage(max_rank + 1);
  return vm.domain()[pick(rng, vm.size())];
}

}  // namespace stratkit::testing
