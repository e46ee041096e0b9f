#include "stratkit/class_model.hpp"

#include <algorithm>
#include <map>

namespace stratkit::kripke {

std::uint64_t SetStructure::extension(std::size_t x) const {
  std::uint64_t m = 0;
  for (std::size_t u = 0; u < n; ++u)
    if (mem[u][x]) m |= std::uint64_t{1} << u;
  return m;
}

void SetStructure::validate() const {
  if (sethood.size() != n || mem.size() != n) throw StructureError("set structure: size mismatch");
  for (const auto& row : mem)
    if (row.size() != n) throw StructureError("set structure: size mismatch");
  for (const auto& t : pair)
    for (std::size_t v : t)
      if (v >= n) throw StructureError("set structure: pair value outside the carrier");
}

SetStructure from_hf(const hf::FinModel& model) {
  const auto& d = model.domain();
  SetStructure N;
  N.n = d.size();
  N.sethood.assign(N.n, true);
  N.mem.assign(N.n, std::vector<bool>(N.n, false));
  std::map<std::size_t, std::size_t> idx;
  for (std::size_t i = 0; i < d.size(); ++i) idx.emplace(d[i].id(), i);
  for (std::size_t a = 0; a < N.n; ++a)
    for (std::size_t b = 0; b < N.n; ++b) N.mem[a][b] = d[b].contains(d[a]);
  for (std::size_t a = 0; a < N.n; ++a)
    for (std::size_t b = 0; b < N.n; ++b) {
      auto it = idx.find(hf::HFSet::kuratowski(d[a], d[b]).id());
      if (it != idx.end()) N.pair.insert({a, b, it->second});
    }
  return N;
}

namespace {

CatStructure one_sorted(std::size_t size) {
  CatStructure M;
  M.add_sort(Signature::kDefaultSort, size);
  return M;
}

void add_unary(CatStructure& M, const std::string& name, const std::vector<bool>& v) {
  Subpresheaf A;
  A.sel.push_back(v);
  M.relations[name] = {{Signature::kDefaultSort}, std::move(A)};
}

void add_binary(CatStructure& M, const std::string& name, const std::vector<std::vector<bool>>& r) {
  const std::size_t n = r.size();
  Subpresheaf A;
  A.sel.emplace_back(n * n, false);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) A.sel[0][a + b * n] = r[a][b];
  M.relations[name] = {{Signature::kDefaultSort, Signature::kDefaultSort}, std::move(A)};
}

void add_ternary(CatStructure& M, const std::string& name, std::size_t n,
                 const std::set<std::array<std::size_t, 3>>& r) {
  Subpresheaf A;
  A.sel.emplace_back(n * n * n, false);
  for (const auto& [a, b, c] : r) A.sel[0][a + b * n + c * n * n] = true;
  const std::string U = Signature::kDefaultSort;
  M.relations[name] = {{U, U, U}, std::move(A)};
}

}  // namespace

CatStructure as_structure(const SetStructure& N) {
  N.validate();
  CatStructure M = one_sorted(N.n);
  add_unary(M, Signature::kSethood, N.sethood);
  add_binary(M, "in", N.mem);
  add_ternary(M, "P", N.n, N.pair);
  return M;
}

ExtensionalityViolation::ExtensionalityViolation(std::size_t a, std::size_t b)
    : std::runtime_error("Ext_S fails: sets " + std::to_string(a) + " and " + std::to_string(b) +
                         " have the same extension"),
      a_(a),
      b_(b) {}

SethoodViolation::SethoodViolation(std::size_t x)
    : std::runtime_error("Sethood fails: element " + std::to_string(x) + " has members but is not a set"), x_(x) {}

CatStructure ClassModel::structure() const {
  CatStructure M = one_sorted(size);
  add_unary(M, Signature::kClass, C);
  add_unary(M, Signature::kSetom, setom);
  add_unary(M, Signature::kSethood, S);
  add_binary(M, "in", mem);
  add_ternary(M, "P", size, pair);
  return M;
}

ClassModel build_class_model(const SetStructure& N) {
  N.validate();
  if (N.n > kMaxClassModelBase)
    throw StructureError("build_class_model: carrier of size " + std::to_string(N.n) + " exceeds guard " +
                         std::to_string(kMaxClassModelBase));
  std::map<std::uint64_t, std::size_t> set_with_ext;
  for (std::size_t x = 0; x < N.n; ++x) {
    const std::uint64_t e = N.extension(x);
    if (!N.sethood[x]) {
      if (e != 0) throw SethoodViolation(x);
      continue;
    }
    auto [it, inserted] = set_with_ext.emplace(e, x);
    if (!inserted) throw ExtensionalityViolation(it->second, x);
  }

  ClassModel M;
  M.t.resize(N.n);
  for (std::size_t x = 0; x < N.n; ++x) M.t[x] = x;
  std::size_t next = N.n;
  const std::uint64_t subsets = std::uint64_t{1} << N.n;
  M.p.resize(subsets);
  for (std::uint64_t y = 0; y < subsets; ++y) {
    auto it = set_with_ext.find(y);
    M.p[y] = it != set_with_ext.end() ? M.t[it->second] : next++;
  }
  M.size = next;
  M.C.assign(M.size, false);
  M.setom.assign(M.size, false);
  M.S.assign(M.size, false);
  M.mem.assign(M.size, std::vector<bool>(M.size, false));
  for (std::uint64_t y = 0; y < subsets; ++y) {
    M.C[M.p[y]] = true;
    for (std::size_t x = 0; x < N.n; ++x)
      if (y >> x & 1) M.mem[M.t[x]][M.p[y]] = true;
  }
  for (std::size_t x = 0; x < N.n; ++x) {
    M.setom[M.t[x]] = true;
    if (N.sethood[x]) M.S[M.t[x]] = true;
  }
  for (const auto& [a, b, c] : N.pair) M.pair.insert({M.t[a], M.t[b], M.t[c]});
  return M;
}

bool verify_pushout(const SetStructure& N, const ClassModel& M) {
  std::vector<int> hits(M.size, 0);
  std::set<std::size_t> t_img(M.t.begin(), M.t.end());
  std::set<std::size_t> p_img(M.p.begin(), M.p.end());
  if (t_img.size() != M.t.size() || p_img.size() != M.p.size()) return false;
  for (std::size_t x = 0; x < N.n; ++x)
    for (std::uint64_t y = 0; y < M.p.size(); ++y) {
      const bool glued = M.t[x] == M.p[y];
      const bool forced = N.sethood[x] && N.extension(x) == y;
      if (glued != forced) return false;
    }
  for (std::size_t u = 0; u < M.size; ++u)
    if (!t_img.count(u) && !p_img.count(u)) return false;
  return true;
}

bool verify_setom_iso(const SetStructure& N, const ClassModel& M) {
  for (std::size_t u = 0; u < M.size; ++u) {
    const bool in_image = std::find(M.t.begin(), M.t.end(), u) != M.t.end();
    if (M.setom[u] != in_image) return false;
  }
  for (std::size_t x = 0; x < N.n; ++x) {
    if (N.sethood[x] != M.S[M.t[x]]) return false;
    for (std::size_t y = 0; y < N.n; ++y)
      if (N.mem[x][y] != M.mem[M.t[x]][M.t[y]]) return false;
  }
  std::set<std::array<std::size_t, 3>> image;
  for (const auto& [a, b, c] : N.pair) image.insert({M.t[a], M.t[b], M.t[c]});
  return image == M.pair;
}

Formula relativize(const Formula& f, const std::string& predicate) {
  const Formula g = normalize_bounded(f, BoundedDirection::Desugar);
  std::function<Formula(const Formula&)> go = [&](const Formula& h) -> Formula {
    if (h.is_atomic()) return h;
    switch (h.kind()) {
      case FormulaKind::Not: return Formula::neg(go(h.body()));
      case FormulaKind::And: return Formula::conj(go(h.lhs()), go(h.rhs()));
      case FormulaKind::Or: return Formula::disj(go(h.lhs()), go(h.rhs()));
      case FormulaKind::Imp: return Formula::imp(go(h.lhs()), go(h.rhs()));
      case FormulaKind::Forall:
        return Formula::forall(h.var(), Formula::imp(Formula::atom(predicate, {Term::var(h.var())}), go(h.body())));
      case FormulaKind::Exists:
        return Formula::exists(h.var(), Formula::conj(Formula::atom(predicate, {Term::var(h.var())}), go(h.body())));
      default: return h;
    }
  };
  return go(g);
}

bool holds(const Formula& f, const CatStructure& M) {
  const Context ctx = default_context(f, M);
  std::vector<std::size_t> radix;
  for (const auto& [v, s] : ctx) radix.push_back(M.sort(s).card(0));
  for (std::size_t p = 0; p < M.poset().size(); ++p) {
    std::vector<std::size_t> vals(ctx.size(), 0);
    while (true) {
      if (!force(f, M, p, ctx, vals)) return false;
      std::size_t i = 0;
      while (i < vals.size() && ++vals[i] == M.sort(ctx[i].second).card(p)) vals[i++] = 0;
      if (i == vals.size()) break;
    }
  }
  return true;
}

ClassModelReport check_class_model(const SetStructure& N, const ClassModel& M) {
  const Signature sig = Signature::permissive();
  const CatStructure S = M.structure();
  ClassModelReport r;
  r.ext_c = holds(parse("forall x. forall y. C(x) & C(y) & (forall z. (z in x <-> z in y)) -> x = y", sig), S);
  r.classhood = holds(parse("forall z. forall x. z in x -> C(x)", sig), S);
  r.setomhood = holds(parse("forall z. forall x. z in x -> Setom(z)", sig), S);
  r.s_is_sm_cap_c = holds(parse("forall x. S(x) <-> Setom(x) & C(x)", sig), S);
  r.setom_iso = verify_setom_iso(N, M);
  r.pushout = verify_pushout(N, M);
  return r;
}

namespace {
Formula iff(const Formula& a, const Formula& b) { return Formula::iff(a, b); }

Formula close_over(Formula body, const std::set<std::string>& params, const std::string& pred) {
  for (auto it = params.rbegin(); it != params.rend(); ++it) {
    if (pred.empty())
      body = Formula::forall(*it, body);
    else
      body = Formula::forall(*it, Formula::imp(Formula::atom(pred, {Term::var(*it)}), body));
  }
  return body;
}

std::set<std::string> params_of(const Formula& phi, const std::string& z, const std::string& x) {
  auto fv = free_vars(phi);
  if (fv.count(x)) throw std::invalid_argument("comprehension: '" + x + "' must not be free in the body");
  fv.erase(z);
  return fv;
}
}  // namespace

Formula class_comprehension(const Formula& phi, const std::string& z, const std::string& x) {
  const auto params = params_of(phi, z, x);
  const Term zt = Term::var(z), xt = Term::var(x);
  Formula body = Formula::exists(
      x, Formula::conj(Formula::atom(Signature::kClass, {xt}),
                       Formula::forall(z, Formula::imp(Formula::atom(Signature::kSetom, {zt}),
                                                       iff(Formula::mem(zt, xt), phi)))));
  return close_over(body, params, "");
}

Formula set_comprehension_in_class(const Formula& phi, const std::string& z, const std::string& x) {
  const auto params = params_of(phi, z, x);
  const Term zt = Term::var(z), xt = Term::var(x);
  const std::string Sm = Signature::kSetom;
  Formula body = Formula::exists(
      x, Formula::conj(Formula::conj(Formula::atom(Sm, {xt}), Formula::atom(Signature::kSethood, {xt})),
                       Formula::forall(z, Formula::imp(Formula::atom(Sm, {zt}),
                                                       iff(Formula::mem(zt, xt), relativize(phi, Sm))))));
  return close_over(body, params, Sm);
}

Formula set_comprehension(const Formula& phi, const std::string& z, const std::string& x) {
  const auto params = params_of(phi, z, x);
  const Term zt = Term::var(z), xt = Term::var(x);
  Formula body = Formula::exists(
      x, Formula::conj(Formula::atom(Signature::kSethood, {xt}),
                       Formula::forall(z, iff(Formula::mem(zt, xt), normalize_bounded(phi, BoundedDirection::Desugar)))));
  return close_over(body, params, "");
}

}  // namespace stratkit::kripke
