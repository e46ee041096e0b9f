#include "stratkit/kripke.hpp"

#include <algorithm>
#include <functional>

namespace stratkit::kripke {

// ---------------------------------------------------------------------------
// FinPoset

FinPoset::FinPoset(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                   std::vector<std::string> names)
    : n_(n), le_(n * n, false), up_(n), names_(std::move(names)) {
  for (std::size_t p = 0; p < n; ++p) le_[p * n + p] = true;
  for (const auto& [p, q] : pairs) {
    if (p >= n || q >= n) throw StructureError("poset pair outside node range");
    le_[p * n + q] = true;
  }
  // Warshall closure.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (le_[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (le_[k * n + j]) le_[i * n + j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (le_[i * n + j] && le_[j * n + i]) throw StructureError("poset order is not antisymmetric");
  for (std::size_t p = 0; p < n; ++p) {
    up_[p].push_back(p);
    for (std::size_t q = 0; q < n; ++q)
      if (q != p && le_[p * n + q]) up_[p].push_back(q);
  }
  if (names_.empty())
    for (std::size_t p = 0; p < n; ++p) names_.push_back(std::to_string(p));
  if (names_.size() != n) throw StructureError("poset: wrong number of node names");
}

FinPoset FinPoset::chain(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
  return FinPoset(n, pairs);
}

std::size_t FinPoset::index(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw StructureError("unknown node '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

// ---------------------------------------------------------------------------
// Presheaf

Presheaf::Presheaf(const FinPoset& P)
    : poset_(std::make_shared<const FinPoset>(P)), card_(P.size(), 0), res_(P.size() * P.size()) {
  for (std::size_t p = 0; p < P.size(); ++p) res_[p * P.size() + p] = {};
}

Presheaf Presheaf::constant(const FinPoset& P, std::size_t k) {
  Presheaf X(P);
  std::vector<std::size_t> id(k);
  for (std::size_t i = 0; i < k; ++i) id[i] = i;
  for (std::size_t p = 0; p < P.size(); ++p) X.card_[p] = k;
  for (std::size_t p = 0; p < P.size(); ++p)
    for (std::size_t q : P.up(p)) X.res_[p * P.size() + q] = id;
  return X;
}

void Presheaf::set_card(std::size_t p, std::size_t k) {
  card_[p] = k;
  std::vector<std::size_t> id(k);
  for (std::size_t i = 0; i < k; ++i) id[i] = i;
  res_[p * poset_->size() + p] = id;
}

std::size_t Presheaf::res(std::size_t p, std::size_t q, std::size_t x) const {
  return res_[p * poset_->size() + q][x];
}

void Presheaf::set_res(std::size_t p, std::size_t q, std::vector<std::size_t> map) {
  if (!poset_->le(p, q)) throw StructureError("restriction along a non-order pair");
  res_[p * poset_->size() + q] = std::move(map);
}

const std::vector<std::size_t>& Presheaf::res_map(std::size_t p, std::size_t q) const {
  return res_[p * poset_->size() + q];
}

void Presheaf::validate() const {
  const FinPoset& P = *poset_;
  const std::size_t n = P.size();
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q : P.up(p)) {
      const auto& m = res_[p * n + q];
      if (m.size() != card_[p]) throw StructureError("restriction map has the wrong domain size");
      for (std::size_t x = 0; x < card_[p]; ++x) {
        if (m[x] >= card_[q]) throw StructureError("restriction map leaves the carrier");
        if (p == q && m[x] != x) throw StructureError("restriction along p <= p is not the identity");
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q : P.up(p))
      for (std::size_t r : P.up(q))
        for (std::size_t x = 0; x < card_[p]; ++x)
          if (res(q, r, res(p, q, x)) != res(p, r, x)) throw StructureError("restriction maps are not functorial");
}

// ---------------------------------------------------------------------------
// Subobject lattice

namespace {
void same_shape(const Presheaf& X, const Subpresheaf& A) {
  if (A.sel.size() != X.poset().size()) throw StructureError("subpresheaf over a different ambient");
  for (std::size_t p = 0; p < A.sel.size(); ++p)
    if (A.sel[p].size() != X.card(p)) throw StructureError("subpresheaf over a different ambient");
}
}  // namespace

bool is_subpresheaf(const Presheaf& X, const Subpresheaf& A) {
  if (A.sel.size() != X.poset().size()) return false;
  for (std::size_t p = 0; p < A.sel.size(); ++p)
    if (A.sel[p].size() != X.card(p)) return false;
  for (std::size_t p = 0; p < A.sel.size(); ++p)
    for (std::size_t x = 0; x < X.card(p); ++x)
      if (A.sel[p][x])
        for (std::size_t q : X.poset().up(p))
          if (!A.sel[q][X.res(p, q, x)]) return false;
  return true;
}

bool leq(const Subpresheaf& A, const Subpresheaf& B) {
  for (std::size_t p = 0; p < A.sel.size(); ++p)
    for (std::size_t x = 0; x < A.sel[p].size(); ++x)
      if (A.sel[p][x] && !B.sel[p][x]) return false;
  return true;
}

Subpresheaf top(const Presheaf& X) {
  Subpresheaf A;
  for (std::size_t p = 0; p < X.poset().size(); ++p) A.sel.emplace_back(X.card(p), true);
  return A;
}

Subpresheaf bottom(const Presheaf& X) {
  Subpresheaf A;
  for (std::size_t p = 0; p < X.poset().size(); ++p) A.sel.emplace_back(X.card(p), false);
  return A;
}

Subpresheaf meet(const Presheaf& X, const Subpresheaf& A, const Subpresheaf& B) {
  same_shape(X, A);
  same_shape(X, B);
  Subpresheaf C = A;
  for (std::size_t p = 0; p < C.sel.size(); ++p)
    for (std::size_t x = 0; x < C.sel[p].size(); ++x) C.sel[p][x] = A.sel[p][x] && B.sel[p][x];
  return C;
}

Subpresheaf join(const Presheaf& X, const Subpresheaf& A, const Subpresheaf& B) {
  same_shape(X, A);
  same_shape(X, B);
  Subpresheaf C = A;
  for (std::size_t p = 0; p < C.sel.size(); ++p)
    for (std::size_t x = 0; x < C.sel[p].size(); ++x) C.sel[p][x] = A.sel[p][x] || B.sel[p][x];
  return C;
}

Subpresheaf implies(const Presheaf& X, const Subpresheaf& A, const Subpresheaf& B) {
  same_shape(X, A);
  same_shape(X, B);
  Subpresheaf C = bottom(X);
  for (std::size_t p = 0; p < C.sel.size(); ++p)
    for (std::size_t x = 0; x < X.card(p); ++x) {
      bool ok = true;
      for (std::size_t q : X.poset().up(p)) {
        const std::size_t y = X.res(p, q, x);
        if (A.sel[q][y] && !B.sel[q][y]) {
          ok = false;
          break;
        }
      }
      C.sel[p][x] = ok;
    }
  return C;
}

Subpresheaf negation(const Presheaf& X, const Subpresheaf& A) { return implies(X, A, bottom(X)); }

std::vector<Subpresheaf> all_subpresheaves(const Presheaf& X) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t p = 0; p < X.poset().size(); ++p)
    for (std::size_t x = 0; x < X.card(p); ++x) slots.emplace_back(p, x);
  if (slots.size() > 22) throw StructureError("all_subpresheaves: ambient too large");
  std::vector<Subpresheaf> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << slots.size()); ++mask) {
    Subpresheaf A = bottom(X);
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (mask >> i & 1) A.sel[slots[i].first][slots[i].second] = true;
    if (is_subpresheaf(X, A)) out.push_back(std::move(A));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Natural transformations and the adjoint triple

bool is_natural(const Presheaf& X, const Presheaf& Y, const NatTrans& f) {
  const FinPoset& P = X.poset();
  if (f.comp.size() != P.size()) return false;
  for (std::size_t p = 0; p < P.size(); ++p) {
    if (f.comp[p].size() != X.card(p)) return false;
    for (std::size_t x = 0; x < X.card(p); ++x)
      if (f.comp[p][x] >= Y.card(p)) return false;
  }
  for (std::size_t p = 0; p < P.size(); ++p)
    for (std::size_t q : P.up(p))
      for (std::size_t x = 0; x < X.card(p); ++x)
        if (f.comp[q][X.res(p, q, x)] != Y.res(p, q, f.comp[p][x])) return false;
  return true;
}

Subpresheaf exists_along(const Presheaf& X, const Presheaf& Y, const NatTrans& f, const Subpresheaf& A) {
  same_shape(X, A);
  Subpresheaf B = bottom(Y);
  for (std::size_t p = 0; p < B.sel.size(); ++p)
    for (std::size_t x = 0; x < X.card(p); ++x)
      if (A.sel[p][x]) B.sel[p][f.comp[p][x]] = true;
  return B;
}

Subpresheaf inverse_image(const Presheaf& X, const Presheaf& Y, const NatTrans& f, const Subpresheaf& B) {
  same_shape(Y, B);
  Subpresheaf A = bottom(X);
  for (std::size_t p = 0; p < A.sel.size(); ++p)
    for (std::size_t x = 0; x < X.card(p); ++x) A.sel[p][x] = B.sel[p][f.comp[p][x]];
  return A;
}

Subpresheaf forall_along(const Presheaf& X, const Presheaf& Y, const NatTrans& f, const Subpresheaf& A) {
  same_shape(X, A);
  Subpresheaf B = bottom(Y);
  // bad[q][y]: some x over y at q lies outside A.
  std::vector<std::vector<bool>> bad;
  for (std::size_t q = 0; q < Y.poset().size(); ++q) {
    bad.emplace_back(Y.card(q), false);
    for (std::size_t x = 0; x < X.card(q); ++x)
      if (!A.sel[q][x]) bad[q][f.comp[q][x]] = true;
  }
  for (std::size_t p = 0; p < B.sel.size(); ++p)
    for (std::size_t y = 0; y < Y.card(p); ++y) {
      bool ok = true;
      for (std::size_t q : Y.poset().up(p))
        if (bad[q][Y.res(p, q, y)]) {
          ok = false;
          break;
        }
      B.sel[p][y] = ok;
    }
  return B;
}

// ---------------------------------------------------------------------------
// Products

Product::Product(const FinPoset& P, std::vector<const Presheaf*> factors)
    : arity_(factors.size()), radix_(P.size()), X_(P) {
  for (std::size_t p = 0; p < P.size(); ++p) {
    std::size_t total = 1;
    for (const auto* F : factors) {
      radix_[p].push_back(F->card(p));
      total *= F->card(p);
    }
    X_.set_card(p, total);
  }
  for (std::size_t p = 0; p < P.size(); ++p)
    for (std::size_t q : P.up(p)) {
      if (q == p) continue;
      std::vector<std::size_t> m(X_.card(p));
      for (std::size_t c = 0; c < X_.card(p); ++c) {
        auto t = decode(p, c);
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = factors[i]->res(p, q, t[i]);
        m[c] = encode(q, t);
      }
      X_.set_res(p, q, std::move(m));
    }
}

std::size_t Product::encode(std::size_t p, const std::vector<std::size_t>& tuple) const {
  std::size_t code = 0, mult = 1;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    code += tuple[i] * mult;
    mult *= radix_[p][i];
  }
  return code;
}

std::vector<std::size_t> Product::decode(std::size_t p, std::size_t code) const {
  std::vector<std::size_t> t(radix_[p].size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = code % radix_[p][i];
    code /= radix_[p][i];
  }
  return t;
}

NatTrans Product::projection(const std::vector<std::size_t>& positions, const Product& target) const {
  NatTrans f;
  for (std::size_t p = 0; p < radix_.size(); ++p) {
    std::vector<std::size_t> comp(X_.card(p));
    for (std::size_t c = 0; c < comp.size(); ++c) {
      const auto t = decode(p, c);
      std::vector<std::size_t> s;
      for (std::size_t i : positions) s.push_back(t[i]);
      comp[c] = target.encode(p, s);
    }
    f.comp.push_back(std::move(comp));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Structures

Presheaf& CatStructure::add_sort(const std::string& name, std::size_t constant_size) {
  auto [it, inserted] = sorts.emplace(name, Presheaf::constant(poset_, constant_size));
  if (!inserted) throw StructureError("duplicate sort '" + name + "'");
  return it->second;
}

const Presheaf& CatStructure::sort(const std::string& name) const {
  auto it = sorts.find(name);
  if (it == sorts.end()) throw InterpretError("unknown sort '" + name + "'");
  return it->second;
}

Product CatStructure::product(const std::vector<std::string>& sort_names) const {
  std::vector<const Presheaf*> fs;
  for (const auto& s : sort_names) fs.push_back(&sort(s));
  return Product(poset_, fs);
}

void CatStructure::validate() const {
  for (const auto& [name, X] : sorts) {
    try {
      X.validate();
    } catch (const StructureError& e) {
      throw StructureError("sort '" + name + "': " + e.what());
    }
  }
  for (const auto& [name, R] : relations) {
    const Product P = product(R.sorts);
    if (!is_subpresheaf(P.presheaf(), R.sel))
      throw StructureError("relation '" + name + "' is not closed under restriction");
  }
  for (const auto& [name, F] : functions) {
    const Product P = product(F.args);
    if (!is_natural(P.presheaf(), sort(F.result), F.map))
      throw StructureError("function '" + name + "' is not a natural transformation");
  }
}

// ---------------------------------------------------------------------------
// Interpretation

namespace {

std::string bound_sort(const std::string& var, const CatStructure& M, const SortMap& sorts) {
  auto it = sorts.find(var);
  if (it != sorts.end()) {
    if (!M.has_sort(it->second)) throw InterpretError("unknown sort '" + it->second + "'");
    return it->second;
  }
  if (M.sorts.size() == 1) return M.sorts.begin()->first;
  throw InterpretError("no sort given for variable '" + var + "'");
}

const CatStructure::Relation& relation_for(const Formula& f, const CatStructure& M) {
  std::string name;
  switch (f.kind()) {
    case FormulaKind::Atom: name = f.symbol(); break;
    case FormulaKind::Mem: name = "in"; break;
    case FormulaKind::Sub: name = "sub"; break;
    case FormulaKind::SubT: name = "subT"; break;
    default: throw InterpretError("not a relation atom");
  }
  if (f.lift() != 0) name = "T^" + std::to_string(f.lift()) + "." + name;
  auto it = M.relations.find(name);
  if (it == M.relations.end()) throw InterpretError("no interpretation for relation symbol '" + name + "'");
  if (it->second.sorts.size() != f.terms().size()) throw InterpretError("arity mismatch for '" + name + "'");
  return it->second;
}

const CatStructure::Function& function_for(const Term& t, const CatStructure& M) {
  std::string name = t.name;
  if (t.lift != 0) name = "T^" + std::to_string(t.lift) + "." + name;
  auto it = M.functions.find(name);
  if (it == M.functions.end()) throw InterpretError("no interpretation for function symbol '" + name + "'");
  if (it->second.args.size() != t.args.size()) throw InterpretError("arity mismatch for '" + name + "'");
  return it->second;
}

std::size_t encode_at(const CatStructure& M, const std::vector<std::string>& sorts, std::size_t p,
                      const std::vector<std::size_t>& vals) {
  std::size_t code = 0, mult = 1;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    code += vals[i] * mult;
    mult *= M.sort(sorts[i]).card(p);
  }
  return code;
}

// A term in context, tabulated: value[p][tuple code].
struct TermTable {
  std::string sort;
  std::vector<std::vector<std::size_t>> value;
};

class Interpreter {
 public:
  Interpreter(const CatStructure& M, const SortMap& sorts) : M_(M), sorts_(sorts) {}

  Subpresheaf formula(const Formula& f, const Context& ctx) {
    const Product P = product(ctx);
    const Presheaf& X = P.presheaf();
    switch (f.kind()) {
      case FormulaKind::Bottom:
        return bottom(X);
      case FormulaKind::Eq: {
        auto a = term(f.terms()[0], ctx, P);
        auto b = term(f.terms()[1], ctx, P);
        if (a.sort != b.sort) throw InterpretError("sort mismatch in equation " + print(f));
        Subpresheaf A = bottom(X);
        for (std::size_t p = 0; p < A.sel.size(); ++p)
          for (std::size_t c = 0; c < X.card(p); ++c) A.sel[p][c] = a.value[p][c] == b.value[p][c];
        return A;
      }
      case FormulaKind::Atom:
      case FormulaKind::Mem:
      case FormulaKind::Sub:
      case FormulaKind::SubT: {
        const auto& R = relation_for(f, M_);
        std::vector<TermTable> ts;
        for (std::size_t i = 0; i < f.terms().size(); ++i) {
          ts.push_back(term(f.terms()[i], ctx, P));
          if (ts.back().sort != R.sorts[i]) throw InterpretError("sort mismatch in atom " + print(f));
        }
        Subpresheaf A = bottom(X);
        std::vector<std::size_t> vals(ts.size());
        for (std::size_t p = 0; p < A.sel.size(); ++p)
          for (std::size_t c = 0; c < X.card(p); ++c) {
            for (std::size_t i = 0; i < ts.size(); ++i) vals[i] = ts[i].value[p][c];
            A.sel[p][c] = R.sel.sel[p][encode_at(M_, R.sorts, p, vals)];
          }
        return A;
      }
      case FormulaKind::Not:
        return negation(X, formula(f.body(), ctx));
      case FormulaKind::And:
        return meet(X, formula(f.lhs(), ctx), formula(f.rhs(), ctx));
      case FormulaKind::Or:
        return join(X, formula(f.lhs(), ctx), formula(f.rhs(), ctx));
      case FormulaKind::Imp:
        return implies(X, formula(f.lhs(), ctx), formula(f.rhs(), ctx));
      case FormulaKind::Forall:
      case FormulaKind::Exists: {
        const std::string& x = f.var();
        Context rest;
        std::vector<std::size_t> keep;  // positions of ctx surviving into rest
        for (std::size_t i = 0; i < ctx.size(); ++i)
          if (ctx[i].first != x) {
            rest.push_back(ctx[i]);
            keep.push_back(i);
          }
        Context ext = rest;
        ext.emplace_back(x, bound_sort(x, M_, sorts_));
        const Subpresheaf B = formula(f.body(), ext);
        const Product Pext = product(ext);
        const Product Prest = product(rest);
        std::vector<std::size_t> first(rest.size());
        for (std::size_t i = 0; i < rest.size(); ++i) first[i] = i;
        const NatTrans pi = Pext.projection(first, Prest);
        Subpresheaf Q = f.kind() == FormulaKind::Exists ? exists_along(Pext.presheaf(), Prest.presheaf(), pi, B)
                                                        : forall_along(Pext.presheaf(), Prest.presheaf(), pi, B);
        if (rest.size() == ctx.size()) return Q;
        // x was in the context: weaken back along the projection ctx -> rest.
        return inverse_image(X, Prest.presheaf(), P.projection(keep, Prest), Q);
      }
      default:
        throw InterpretError("bounded quantifiers must be desugared before interpretation");
    }
  }

 private:
  Product product(const Context& ctx) const {
    std::vector<std::string> names;
    for (const auto& [v, s] : ctx) names.push_back(s);
    return M_.product(names);
  }

  TermTable term(const Term& t, const Context& ctx, const Product& P) {
    const Presheaf& X = P.presheaf();
    const std::size_t n = X.poset().size();
    TermTable out;
    if (t.is_var()) {
      std::size_t pos = ctx.size();
      for (std::size_t i = ctx.size(); i-- > 0;)
        if (ctx[i].first == t.name) {
          pos = i;
          break;
        }
      if (pos == ctx.size()) throw InterpretError("variable '" + t.name + "' is not in the context");
      out.sort = ctx[pos].second;
      out.value.resize(n);
      for (std::size_t p = 0; p < n; ++p) {
        out.value[p].resize(X.card(p));
        for (std::size_t c = 0; c < X.card(p); ++c) out.value[p][c] = P.decode(p, c)[pos];
      }
      return out;
    }
    const auto& F = function_for(t, M_);
    std::vector<TermTable> args;
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      args.push_back(term(t.args[i], ctx, P));
      if (args.back().sort != F.args[i]) throw InterpretError("sort mismatch in term " + stratkit::print(t));
    }
    out.sort = F.result;
    out.value.resize(n);
    std::vector<std::size_t> vals(args.size());
    for (std::size_t p = 0; p < n; ++p) {
      out.value[p].resize(X.card(p));
      for (std::size_t c = 0; c < X.card(p); ++c) {
        for (std::size_t i = 0; i < args.size(); ++i) vals[i] = args[i].value[p][c];
        out.value[p][c] = F.map.comp[p][encode_at(M_, F.args, p, vals)];
      }
    }
    return out;
  }

  const CatStructure& M_;
  const SortMap& sorts_;
};

struct Binding {
  std::string var;
  std::string sort;
  std::size_t value;
};

class Forcer {
 public:
  Forcer(const CatStructure& M, const SortMap& sorts) : M_(M), sorts_(sorts) {}

  bool run(const Formula& f, std::size_t p, std::vector<Binding>& env) {
    switch (f.kind()) {
      case FormulaKind::Bottom:
        return false;
      case FormulaKind::Eq: {
        auto [sa, a] = term(f.terms()[0], p, env);
        auto [sb, b] = term(f.terms()[1], p, env);
        if (sa != sb) throw InterpretError("sort mismatch in equation " + print(f));
        return a == b;
      }
      case FormulaKind::Atom:
      case FormulaKind::Mem:
      case FormulaKind::Sub:
      case FormulaKind::SubT: {
        const auto& R = relation_for(f, M_);
        std::vector<std::size_t> vals;
        for (std::size_t i = 0; i < f.terms().size(); ++i) {
          auto [s, v] = term(f.terms()[i], p, env);
          if (s != R.sorts[i]) throw InterpretError("sort mismatch in atom " + print(f));
          vals.push_back(v);
        }
        return R.sel.sel[p][encode_at(M_, R.sorts, p, vals)];
      }
      case FormulaKind::And:
        return run(f.lhs(), p, env) && run(f.rhs(), p, env);
      case FormulaKind::Or:
        return run(f.lhs(), p, env) || run(f.rhs(), p, env);
      case FormulaKind::Not:
      case FormulaKind::Imp: {
        for (std::size_t q : M_.poset().up(p)) {
          auto env_q = restrict(env, p, q);
          const Formula& a = f.kind() == FormulaKind::Not ? f.body() : f.lhs();
          if (run(a, q, env_q) && (f.kind() == FormulaKind::Not || !run(f.rhs(), q, env_q))) return false;
        }
        return true;
      }
      case FormulaKind::Exists: {
        const std::string s = bound_sort(f.var(), M_, sorts_);
        const std::size_t k = M_.sort(s).card(p);
        env.push_back({f.var(), s, 0});
        bool found = false;
        for (std::size_t a = 0; a < k && !found; ++a) {
          env.back().value = a;
          found = run(f.body(), p, env);
        }
        env.pop_back();
        return found;
      }
      case FormulaKind::Forall: {
        const std::string s = bound_sort(f.var(), M_, sorts_);
        for (std::size_t q : M_.poset().up(p)) {
          auto env_q = restrict(env, p, q);
          env_q.push_back({f.var(), s, 0});
          for (std::size_t a = 0; a < M_.sort(s).card(q); ++a) {
            env_q.back().value = a;
            if (!run(f.body(), q, env_q)) return false;
          }
        }
        return true;
      }
      default:
        throw InterpretError("bounded quantifiers must be desugared before forcing");
    }
  }

 private:
  std::vector<Binding> restrict(const std::vector<Binding>& env, std::size_t p, std::size_t q) const {
    if (p == q) return env;
    std::vector<Binding> out = env;
    for (auto& b : out) b.value = M_.sort(b.sort).res(p, q, b.value);
    return out;
  }

  std::pair<std::string, std::size_t> term(const Term& t, std::size_t p, const std::vector<Binding>& env) {
    if (t.is_var()) {
      for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->var == t.name) return {it->sort, it->value};
      throw InterpretError("variable '" + t.name + "' is not in the context");
    }
    const auto& F = function_for(t, M_);
    std::vector<std::size_t> vals;
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      auto [s, v] = term(t.args[i], p, env);
      if (s != F.args[i]) throw InterpretError("sort mismatch in term " + stratkit::print(t));
      vals.push_back(v);
    }
    return {F.result, F.map.comp[p][encode_at(M_, F.args, p, vals)]};
  }

  const CatStructure& M_;
  const SortMap& sorts_;
};

Formula prepare(const Formula& f) { return normalize_bounded(f, BoundedDirection::Desugar, {true}); }

}  // namespace

Subpresheaf interpret(const Formula& f, const CatStructure& M, const Context& ctx, const SortMap& bound_sorts) {
  for (const auto& v : free_vars(f)) {
    if (std::none_of(ctx.begin(), ctx.end(), [&](const auto& e) { return e.first == v; }))
      throw InterpretError("free variable '" + v + "' is not in the context");
  }
  // Subset atoms are primitive only if the structure interprets them.
  const Formula g = M.relations.count("sub") ? normalize_bounded(f, BoundedDirection::Desugar) : prepare(f);
  return Interpreter(M, bound_sorts).formula(g, ctx);
}

Context default_context(const Formula& f, const CatStructure& M, const SortMap& sorts) {
  Context ctx;
  for (const auto& v : free_vars(f)) ctx.emplace_back(v, bound_sort(v, M, sorts));
  return ctx;
}

bool valid(const Formula& f, const CatStructure& M, const SortMap& sorts) {
  const Context ctx = default_context(f, M, sorts);
  const Product P = [&] {
    std::vector<std::string> names;
    for (const auto& [v, s] : ctx) names.push_back(s);
    return M.product(names);
  }();
  return interpret(f, M, ctx, sorts) == top(P.presheaf());
}

bool force(const Formula& f, const CatStructure& M, std::size_t node, const Context& ctx,
           const std::vector<std::size_t>& values, const SortMap& bound_sorts) {
  if (values.size() != ctx.size()) throw InterpretError("force: valuation does not match the context");
  std::vector<Binding> env;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (values[i] >= M.sort(ctx[i].second).card(node)) throw InterpretError("force: value outside the carrier");
    env.push_back({ctx[i].first, ctx[i].second, values[i]});
  }
  for (const auto& v : free_vars(f))
    if (std::none_of(ctx.begin(), ctx.end(), [&](const auto& e) { return e.first == v; }))
      throw InterpretError("free variable '" + v + "' is not in the context");
  const Formula g = M.relations.count("sub") ? normalize_bounded(f, BoundedDirection::Desugar) : prepare(f);
  return Forcer(M, bound_sorts).run(g, node, env);
}

InterpretationTable interpretation_table(const Formula& f, const CatStructure& M, const SortMap& sorts) {
  InterpretationTable t;
  t.context = default_context(f, M, sorts);
  std::vector<std::string> names;
  for (const auto& [v, s] : t.context) names.push_back(s);
  const Product P = M.product(names);
  const Subpresheaf A = interpret(f, M, t.context, sorts);
  t.rows.resize(M.poset().size());
  for (std::size_t p = 0; p < M.poset().size(); ++p)
    for (std::size_t c = 0; c < P.presheaf().card(p); ++c)
      if (A.sel[p][c]) t.rows[p].push_back(P.decode(p, c));
  return t;
}

}  // namespace stratkit::kripke
