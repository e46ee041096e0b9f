#include "stratkit/strat2cat.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

namespace stratkit::cat {

// ---------------------------------------------------------------------------
// ObjExpr

ObjExpr ObjExpr::one() {
  ObjExpr o;
  o.kind_ = Kind::One;
  return o;
}

ObjExpr ObjExpr::t(ObjExpr a) {
  ObjExpr o;
  o.kind_ = Kind::T;
  o.args_.push_back(std::move(a));
  return o;
}

ObjExpr ObjExpr::p(ObjExpr a) {
  ObjExpr o;
  o.kind_ = Kind::P;
  o.args_.push_back(std::move(a));
  return o;
}

ObjExpr ObjExpr::prod(ObjExpr a, ObjExpr b) {
  ObjExpr o;
  o.kind_ = Kind::Prod;
  o.args_.push_back(std::move(a));
  o.args_.push_back(std::move(b));
  return o;
}

ObjExpr ObjExpr::t_pow(ObjExpr a, int k) {
  for (int i = 0; i < k; ++i) a = t(std::move(a));
  return a;
}

ObjExpr ObjExpr::p_pow(ObjExpr a, int k) {
  for (int i = 0; i < k; ++i) a = p(std::move(a));
  return a;
}

std::size_t ObjExpr::size() const {
  std::size_t n = 1;
  for (const auto& a : args_) n += a.size();
  return n;
}

bool operator<(const ObjExpr& a, const ObjExpr& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
  return std::lexicographical_compare(a.args_.begin(), a.args_.end(), b.args_.begin(), b.args_.end());
}

std::string to_string(const ObjExpr& o) {
  switch (o.kind()) {
    case ObjExpr::Kind::U: return "U";
    case ObjExpr::Kind::One: return "1";
    case ObjExpr::Kind::T: return "T(" + to_string(o.arg()) + ")";
    case ObjExpr::Kind::P: return "P(" + to_string(o.arg()) + ")";
    case ObjExpr::Kind::Prod: return "Prod(" + to_string(o.arg(0)) + ", " + to_string(o.arg(1)) + ")";
  }
  return "?";
}

namespace {

struct ObjParser {
  const std::string& s;
  std::size_t i = 0;

  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("object expression: " + what + " at offset " + std::to_string(i));
  }
  void expect(char c) {
    ws();
    if (i >= s.size() || s[i] != c) fail(std::string("expected '") + c + "'");
    ++i;
  }
  ObjExpr parse() {
    ws();
    if (i >= s.size()) fail("unexpected end");
    const char c = s[i];
    if (c == 'U') {
      ++i;
      return ObjExpr::u();
    }
    if (c == '1') {
      ++i;
      return ObjExpr::one();
    }
    if (s.compare(i, 4, "Prod") == 0) {
      i += 4;
      expect('(');
      ObjExpr a = parse();
      expect(',');
      ObjExpr b = parse();
      expect(')');
      return ObjExpr::prod(std::move(a), std::move(b));
    }
    if (c == 'T' || c == 'P') {
      ++i;
      expect('(');
      ObjExpr a = parse();
      expect(')');
      return c == 'T' ? ObjExpr::t(std::move(a)) : ObjExpr::p(std::move(a));
    }
    fail("unexpected character");
  }
};

}  // namespace

ObjExpr parse_obj(const std::string& text) {
  ObjParser p{text};
  ObjExpr o = p.parse();
  p.ws();
  if (p.i != text.size()) p.fail("trailing input");
  return o;
}

ObjExpr normalize_obj(const ObjExpr& o) {
  switch (o.kind()) {
    case ObjExpr::Kind::U:
    case ObjExpr::Kind::One: return o;
    case ObjExpr::Kind::T: return ObjExpr::t(normalize_obj(o.arg()));
    case ObjExpr::Kind::Prod: return ObjExpr::prod(normalize_obj(o.arg(0)), normalize_obj(o.arg(1)));
    case ObjExpr::Kind::P: {
      ObjExpr z = normalize_obj(o.arg());
      int k = 0;
      while (z.kind() == ObjExpr::Kind::T) {
        ObjExpr inner = z.arg();
        z = std::move(inner);
        ++k;
      }
      return ObjExpr::t_pow(ObjExpr::p(std::move(z)), k);
    }
  }
  return o;
}

std::vector<ObjExpr> rewrite_steps(const ObjExpr& o) {
  std::vector<ObjExpr> out;
  if (o.kind() == ObjExpr::Kind::P && o.arg().kind() == ObjExpr::Kind::T)
    out.push_back(ObjExpr::t(ObjExpr::p(o.arg().arg())));
  for (std::size_t i = 0; i < o.args().size(); ++i)
    for (auto& r : rewrite_steps(o.arg(i))) {
      switch (o.kind()) {
        case ObjExpr::Kind::T: out.push_back(ObjExpr::t(std::move(r))); break;
        case ObjExpr::Kind::P: out.push_back(ObjExpr::p(std::move(r))); break;
        case ObjExpr::Kind::Prod:
          out.push_back(i == 0 ? ObjExpr::prod(std::move(r), o.arg(1)) : ObjExpr::prod(o.arg(0), std::move(r)));
          break;
        default: break;
      }
    }
  return out;
}

std::vector<ObjExpr> all_objexprs(std::size_t max_size) {
  // by_size[n] = all expressions with exactly n constructors
  std::vector<std::vector<ObjExpr>> by_size(max_size + 1);
  if (max_size >= 1) by_size[1] = {ObjExpr::u(), ObjExpr::one()};
  for (std::size_t n = 2; n <= max_size; ++n) {
    for (const auto& a : by_size[n - 1]) {
      by_size[n].push_back(ObjExpr::t(a));
      by_size[n].push_back(ObjExpr::p(a));
    }
    for (std::size_t l = 1; l + 1 < n; ++l)
      for (const auto& a : by_size[l])
        for (const auto& b : by_size[n - 1 - l]) by_size[n].push_back(ObjExpr::prod(a, b));
  }
  std::vector<ObjExpr> all;
  for (auto& v : by_size) all.insert(all.end(), v.begin(), v.end());
  return all;
}

namespace {
std::size_t count_t(const ObjExpr& o) {
  std::size_t n = o.kind() == ObjExpr::Kind::T ? 1 : 0;
  for (const auto& a : o.args()) n += count_t(a);
  return n;
}
}  // namespace

std::size_t t_weight(const ObjExpr& o) {
  std::size_t w = 0;
  if (o.kind() == ObjExpr::Kind::P) w += count_t(o.arg());
  for (const auto& a : o.args()) w += t_weight(a);
  return w;
}

// ---------------------------------------------------------------------------
// Sort checking

namespace {

struct SortError {
  std::string msg;
};

bool strip_t(ObjExpr& o, int k) {
  for (int i = 0; i < k; ++i) {
    if (o.kind() != ObjExpr::Kind::T) return false;
    ObjExpr inner = o.arg();
    o = std::move(inner);
  }
  return true;
}

ObjExpr term_sort(const Term& t, const TypedFormula& tf) {
  if (t.is_var()) {
    auto it = tf.sorts.find(t.name);
    if (it == tf.sorts.end()) throw SortError{"variable '" + t.name + "' has no sort"};
    return it->second;
  }
  if (t.name == kIota) return ObjExpr::t(term_sort(t.args.at(0), tf));
  auto it = tf.functions.find(t.name);
  if (it == tf.functions.end()) throw SortError{"function '" + t.name + "' has no sort"};
  const FnSort& fs = it->second;
  if (fs.args.size() != t.args.size()) throw SortError{"arity mismatch in " + print(t)};
  for (std::size_t i = 0; i < t.args.size(); ++i)
    if (term_sort(t.args[i], tf) != ObjExpr::t_pow(fs.args[i], t.lift))
      throw SortError{"argument " + std::to_string(i + 1) + " of " + print(t) + " is ill sorted"};
  return ObjExpr::t_pow(fs.result, t.lift);
}

void check(const Formula& f, const TypedFormula& tf) {
  switch (f.kind()) {
    case FormulaKind::Bottom: return;
    case FormulaKind::Atom: {
      auto it = tf.relations.find(f.symbol());
      if (it == tf.relations.end()) throw SortError{"relation '" + f.symbol() + "' has no sort"};
      if (it->second.size() != f.terms().size()) throw SortError{"arity mismatch in " + print(f)};
      for (std::size_t i = 0; i < f.terms().size(); ++i)
        if (term_sort(f.terms()[i], tf) != ObjExpr::t_pow(it->second[i], f.lift()))
          throw SortError{"argument " + std::to_string(i + 1) + " of " + print(f) + " is ill sorted"};
      return;
    }
    case FormulaKind::Eq:
      if (term_sort(f.terms()[0], tf) != term_sort(f.terms()[1], tf)) throw SortError{"ill-sorted equality " + print(f)};
      return;
    case FormulaKind::Mem: {
      if (term_sort(f.terms()[1], tf) != ObjExpr::p(term_sort(f.terms()[0], tf)))
        throw SortError{"ill-sorted membership " + print(f)};
      return;
    }
    case FormulaKind::Sub: {
      const ObjExpr a = term_sort(f.terms()[0], tf);
      if (a.kind() != ObjExpr::Kind::P || a != term_sort(f.terms()[1], tf))
        throw SortError{"ill-sorted subset atom " + print(f)};
      return;
    }
    case FormulaKind::SubT: {
      ObjExpr a = term_sort(f.terms()[0], tf);
      ObjExpr b = term_sort(f.terms()[1], tf);
      if (!strip_t(a, f.lift()) || !strip_t(b, f.lift()) || a.kind() != ObjExpr::Kind::T ||
          b.kind() != ObjExpr::Kind::P || a.arg() != b.arg())
        throw SortError{"ill-sorted shifted subset atom " + print(f)};
      return;
    }
    case FormulaKind::Not: check(f.body(), tf); return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Imp:
      check(f.lhs(), tf);
      check(f.rhs(), tf);
      return;
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      if (!tf.sorts.count(f.var())) throw SortError{"bound variable '" + f.var() + "' has no sort"};
      check(f.body(), tf);
      return;
    case FormulaKind::BForall:
    case FormulaKind::BExists:
      if (!tf.sorts.count(f.var())) throw SortError{"bound variable '" + f.var() + "' has no sort"};
      term_sort(f.bound(), tf);
      check(f.body(), tf);
      return;
  }
}

}  // namespace

std::optional<std::string> sort_error(const TypedFormula& f) {
  try {
    check(f.formula, f);
  } catch (const SortError& e) {
    return e.msg;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Translation

namespace {

Term iota_pow(Term t, int k) {
  for (int i = 0; i < k; ++i) t = Term::app(kIota, {std::move(t)});
  return t;
}

std::string describe(const strat::UnstratWitness& w) {
  std::string s = "formula is not stratifiable (cycle of net offset " + std::to_string(w.net_offset()) + ":";
  for (const auto& step : w.cycle) s += " " + step.constraint.origin + ";";
  return s + ")";
}

std::map<std::string, int> propagate_types(const Formula& g, const std::map<std::string, int>& seed) {
  std::map<std::string, int> types = seed;
  const auto cs = strat::constraints(g, strat::Mode::Typed);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& c : cs) {
      const bool l = types.count(c.left), r = types.count(c.right);
      if (l && !r) {
        types[c.right] = types[c.left] + c.offset;
        changed = true;
      } else if (r && !l) {
        types[c.left] = types[c.right] - c.offset;
        changed = true;
      }
    }
  }
  for (const auto& key : strat::terms(g)) types.emplace(key, 0);
  return types;
}

class Translator {
 public:
  Translator(const Formula& g, const strat::Stratification& st, const TranslateOptions& opts)
      : g_(g), st_(st), used_(all_vars(g)) {
    for (const auto& v : all_vars(g)) {
      const int s = type(Term::var(v));
      auto it = opts.sorts.find(v);
      sorts_[v] = it != opts.sorts.end() ? it->second : ObjExpr::p_pow(ObjExpr::u(), s);
    }
    for (const auto& v : all_vars(g)) {
      const int k = st_.max - type(Term::var(v));
      std::string name = v + "_t" + std::to_string(k);
      while (used_.count(name)) name += "_";
      used_.insert(name);
      retyping_[v] = {name, k, ObjExpr::t_pow(sorts_.at(v), k)};
    }
  }

  Translation run() {
    Translation out;
    out.source = g_;
    out.stratification = st_;
    infer_symbols(g_);
    out.phi_iota.formula = lift(g_, false);
    out.phi_subT.formula = lift(g_, true);
    out.phi_iota.sorts = sorts_;
    for (const auto& [v, r] : retyping_) {
      out.phi_subT.sorts[r.name] = r.sort;
      out.phi_subT.origin[r.name] = v;
    }
    out.phi_iota.relations = out.phi_subT.relations = relations_;
    out.phi_iota.functions = out.phi_subT.functions = functions_;
    out.retyping = retyping_;
    return out;
  }

 private:
  int type(const Term& t) const {
    auto it = st_.types.find(print(t));
    if (it == st_.types.end()) throw TranslationError("term '" + print(t) + "' has no stratification type");
    return it->second;
  }

  ObjExpr sort_of(const Term& t) {
    if (t.is_var()) return sorts_.at(t.name);
    if (t.name == kIota) throw TranslationError("input already contains iota");
    std::vector<ObjExpr> args;
    for (const auto& a : t.args) args.push_back(sort_of(a));
    FnSort fs{args, ObjExpr::p_pow(ObjExpr::u(), type(t))};
    auto [it, inserted] = functions_.emplace(t.name, fs);
    if (!inserted && !(it->second.args == fs.args && it->second.result == fs.result))
      throw TranslationError("function '" + t.name + "' is used at two different sorts");
    return it->second.result;
  }

  void infer_symbols(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Bottom: return;
      case FormulaKind::Atom: {
        if (f.lift() != 0) throw TranslationError("input already contains lifted symbols");
        std::vector<ObjExpr> ss;
        for (const auto& t : f.terms()) ss.push_back(sort_of(t));
        auto [it, inserted] = relations_.emplace(f.symbol(), ss);
        if (!inserted && it->second != ss)
          throw TranslationError("relation '" + f.symbol() + "' is used at two different sorts");
        return;
      }
      case FormulaKind::Eq:
        if (f.lift() != 0) throw TranslationError("input already contains lifted symbols");
        if (sort_of(f.terms()[0]) != sort_of(f.terms()[1]))
          throw TranslationError("ill-sorted equality " + print(f));
        return;
      case FormulaKind::Mem:
        if (sort_of(f.terms()[1]) != ObjExpr::p(sort_of(f.terms()[0])))
          throw TranslationError("ill-sorted membership " + print(f) + ": the right side must have sort P(" +
                                 to_string(sort_of(f.terms()[0])) + ")");
        return;
      case FormulaKind::Sub:
      case FormulaKind::SubT: throw TranslationError("unexpected atom " + print(f));
      case FormulaKind::Not: infer_symbols(f.body()); return;
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Imp:
        infer_symbols(f.lhs());
        infer_symbols(f.rhs());
        return;
      case FormulaKind::Forall:
      case FormulaKind::Exists: infer_symbols(f.body()); return;
      default: throw TranslationError("bounded quantifier survived desugaring");
    }
  }

  // iota^k applied to t, with iota pushed through applications and
  // variables renamed (stage two), or left on the outside (stage one).
  Term raise(const Term& t, int k, bool second) const {
    if (!second) return iota_pow(t, k);
    if (t.is_var()) {
      const Retyping& r = retyping_.at(t.name);
      if (r.k != k) throw TranslationError("internal: inconsistent lift for '" + t.name + "'");
      return Term::var(r.name);
    }
    std::vector<Term> args;
    for (const auto& a : t.args) args.push_back(raise(a, k, true));
    return Term::app(t.name, std::move(args), t.lift + k);
  }

  std::vector<Term> raise_all(const std::vector<Term>& ts, int k, bool second) const {
    std::vector<Term> out;
    for (const auto& t : ts) out.push_back(raise(t, k, second));
    return out;
  }

  Formula lift(const Formula& f, bool second) const {
    switch (f.kind()) {
      case FormulaKind::Bottom: return f;
      case FormulaKind::Atom: {
        const int k = f.terms().empty() ? 0 : st_.max - type(f.terms()[0]);
        return Formula::atom(f.symbol(), raise_all(f.terms(), k, second), k);
      }
      case FormulaKind::Eq: {
        const int k = st_.max - type(f.terms()[0]);
        return Formula::eq(raise(f.terms()[0], k, second), raise(f.terms()[1], k, second), k);
      }
      case FormulaKind::Mem: {
        const int kv = st_.max - type(f.terms()[1]);
        const int ku = st_.max - type(f.terms()[0]);
        if (ku != kv + 1) throw TranslationError("internal: membership types are not consecutive");
        return Formula::subt(raise(f.terms()[0], ku, second), raise(f.terms()[1], kv, second), kv);
      }
      case FormulaKind::Not: return Formula::neg(lift(f.body(), second));
      case FormulaKind::And: return Formula::conj(lift(f.lhs(), second), lift(f.rhs(), second));
      case FormulaKind::Or: return Formula::disj(lift(f.lhs(), second), lift(f.rhs(), second));
      case FormulaKind::Imp: return Formula::imp(lift(f.lhs(), second), lift(f.rhs(), second));
      case FormulaKind::Forall:
      case FormulaKind::Exists: {
        const std::string v = second ? retyping_.at(f.var()).name : f.var();
        Formula b = lift(f.body(), second);
        return f.kind() == FormulaKind::Forall ? Formula::forall(v, std::move(b)) : Formula::exists(v, std::move(b));
      }
      default: throw TranslationError("unexpected node in translation");
    }
  }

  const Formula& g_;
  const strat::Stratification& st_;
  std::set<std::string> used_;
  std::map<std::string, ObjExpr> sorts_;
  std::map<std::string, Retyping> retyping_;
  std::map<std::string, std::vector<ObjExpr>> relations_;
  std::map<std::string, FnSort> functions_;
};

}  // namespace

Translation translate(const Formula& f, const TranslateOptions& opts) {
  const Formula g = rectify(normalize_bounded(f, BoundedDirection::Desugar, {.expand_subset = true}));
  strat::Stratification st;
  if (opts.types) {
    if (!strat::check_stratification(g, *opts.types, strat::Mode::Typed))
      throw TranslationError("the given types are not a stratification of the formula");
    st.types = propagate_types(g, *opts.types);
  } else {
    const auto r = strat::stratify(g, strat::Mode::Typed);
    if (!r.stratified()) throw TranslationError(describe(*r.witness));
    st = *r.stratification;
  }
  st.max = 0;
  for (const auto& [k, v] : st.types) st.max = std::max(st.max, v);
  return Translator(g, st, opts).run();
}

// ---------------------------------------------------------------------------
// Degenerate collapse

namespace {

Term collapse_term(const Term& t, const std::map<std::string, std::string>& origin) {
  if (t.is_var()) {
    auto it = origin.find(t.name);
    return Term::var(it != origin.end() ? it->second : t.name);
  }
  if (t.name == kIota) return collapse_term(t.args.at(0), origin);
  std::vector<Term> args;
  for (const auto& a : t.args) args.push_back(collapse_term(a, origin));
  return Term::app(t.name, std::move(args));
}

Formula collapse(const Formula& f, const std::map<std::string, std::string>& origin) {
  auto terms = [&] {
    std::vector<Term> out;
    for (const auto& t : f.terms()) out.push_back(collapse_term(t, origin));
    return out;
  };
  auto name = [&](const std::string& v) {
    auto it = origin.find(v);
    return it != origin.end() ? it->second : v;
  };
  switch (f.kind()) {
    case FormulaKind::Bottom: return f;
    case FormulaKind::Atom: return Formula::atom(f.symbol(), terms());
    case FormulaKind::Eq: {
      auto ts = terms();
      return Formula::eq(ts[0], ts[1]);
    }
    case FormulaKind::Mem:
    case FormulaKind::SubT: {
      auto ts = terms();
      return Formula::mem(ts[0], ts[1]);
    }
    case FormulaKind::Sub: {
      auto ts = terms();
      return Formula::sub(ts[0], ts[1]);
    }
    case FormulaKind::Not: return Formula::neg(collapse(f.body(), origin));
    case FormulaKind::And: return Formula::conj(collapse(f.lhs(), origin), collapse(f.rhs(), origin));
    case FormulaKind::Or: return Formula::disj(collapse(f.lhs(), origin), collapse(f.rhs(), origin));
    case FormulaKind::Imp: return Formula::imp(collapse(f.lhs(), origin), collapse(f.rhs(), origin));
    case FormulaKind::Forall: return Formula::forall(name(f.var()), collapse(f.body(), origin));
    case FormulaKind::Exists: return Formula::exists(name(f.var()), collapse(f.body(), origin));
    case FormulaKind::BForall:
      return Formula::bforall(name(f.var()), collapse_term(f.bound(), origin), f.bound_kind(),
                              collapse(f.body(), origin));
    case FormulaKind::BExists:
      return Formula::bexists(name(f.var()), collapse_term(f.bound(), origin), f.bound_kind(),
                              collapse(f.body(), origin));
  }
  return f;
}

}  // namespace

Formula collapse_degenerate(const TypedFormula& f) { return collapse(f.formula, f.origin); }
Formula collapse_degenerate(const Formula& f) { return collapse(f, {}); }

// ---------------------------------------------------------------------------
// Comprehension

Formula comprehension_target(const Formula& phi, const std::string& z, const std::string& x) {
  if (free_vars(phi).count(x)) throw std::invalid_argument("comprehension: '" + x + "' must not be free in the body");
  return Formula::exists(x, Formula::forall(z, Formula::iff(Formula::mem(Term::var(z), Term::var(x)), phi)));
}

bool has_comprehension_shape(const TypedFormula& f, std::string* why) {
  auto no = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const Formula& e = f.formula;
  if (e.kind() != FormulaKind::Exists) return no("outermost node is not an existential");
  const Formula& a = e.body();
  if (a.kind() != FormulaKind::Forall) return no("second node is not a universal");
  const Formula& c = a.body();
  if (c.kind() != FormulaKind::And || c.lhs().kind() != FormulaKind::Imp || c.rhs().kind() != FormulaKind::Imp)
    return no("matrix is not a biconditional");
  const Formula& atom = c.lhs().lhs();
  if (atom != c.rhs().rhs()) return no("biconditional halves do not match");
  if (atom.kind() != FormulaKind::SubT) return no("left side of the biconditional is not a shifted subset atom");
  const int k = atom.lift();
  const Term zt = Term::var(a.var()), xt = Term::var(e.var());
  if (atom.terms()[0] != zt || atom.terms()[1] != xt) return no("shifted subset atom does not relate z' and x'");
  auto xs = f.sorts.find(e.var());
  auto zs = f.sorts.find(a.var());
  if (xs == f.sorts.end() || zs == f.sorts.end()) return no("missing sorts");
  ObjExpr xn = normalize_obj(xs->second), zn = normalize_obj(zs->second);
  if (!strip_t(xn, k) || xn.kind() != ObjExpr::Kind::P) return no("x' does not have sort T^k(P A)");
  if (!strip_t(zn, k + 1) || normalize_obj(zn) != normalize_obj(xn.arg())) return no("z' does not have sort T^(k+1)(A)");
  return true;
}

}  // namespace stratkit::cat
