#include "stratkit/backforth.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace stratkit::bf {

// ---------------------------------------------------------------------------
// Enumerated structures

struct EnumStructure::Source {
  std::function<const Rational&(std::size_t)> raw;
  std::optional<Cut> filter;
  std::deque<Rational> kept;  // filtered elements, when filter is set
  std::size_t raw_pos = 0;

  const Rational& at(std::size_t i) {
    if (!filter) return raw(i);
    while (kept.size() <= i) {
      const Rational& q = raw(raw_pos++);
      if (filter->contains(q)) kept.push_back(q);
    }
    return kept[i];
  }
};

EnumStructure EnumStructure::rationals() {
  EnumStructure s;
  s.name_ = "Q";
  s.rational_base_ = true;
  auto e = std::make_shared<RationalEnumeration>();
  s.src_ = std::make_shared<Source>();
  s.src_->raw = [e](std::size_t i) -> const Rational& { return e->at(i); };
  return s;
}

EnumStructure EnumStructure::dyadics() {
  EnumStructure s;
  s.name_ = "dyadics";
  auto e = std::make_shared<DyadicEnumeration>();
  s.src_ = std::make_shared<Source>();
  s.src_->raw = [e](std::size_t i) -> const Rational& { return e->at(i); };
  return s;
}

EnumStructure EnumStructure::below(EnumStructure base, Cut cut) {
  EnumStructure s;
  s.name_ = base.name_ + " below " + cut.describe();
  s.rational_base_ = base.rational_base_;
  auto inner = base.src_;
  s.src_ = std::make_shared<Source>();
  s.src_->raw = [inner](std::size_t i) -> const Rational& { return inner->at(i); };
  s.src_->filter = cut;
  if (base.filter_) throw std::invalid_argument("nested cut filters are not supported");
  s.filter_ = cut;
  return s;
}

const Rational& EnumStructure::at(std::size_t i) const { return src_->at(i); }

std::optional<std::size_t> EnumStructure::index_of(const Rational& q, std::size_t budget) const {
  if (!admits(q)) return std::nullopt;
  for (std::size_t i = 0; i < budget; ++i)
    if (at(i) == q) return i;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Conditions

bool is_partial_embedding(const Condition& c) {
  const Rational* prev = nullptr;
  for (const auto& [x, y] : c) {
    if (prev && !(*prev < y)) return false;
    prev = &y;
  }
  return true;
}

bool extends(const Condition& c, const Condition& d) {
  for (const auto& [x, y] : d) {
    auto it = c.find(x);
    if (it == c.end() || it->second != y) return false;
  }
  return true;
}

std::string DenseSpec::name() const {
  switch (kind) {
    case Kind::Domain: return "C_" + std::to_string(index);
    case Kind::Image: return "D_" + std::to_string(index);
    case Kind::Contractive: return "Contractive";
    case Kind::BelowBound: return "BelowBound";
    case Kind::InitialBelowCut: return "InitialBelowCut_" + std::to_string(index);
  }
  return "?";
}

namespace {

bool in_image(const Condition& c, const Rational& y) {
  return std::any_of(c.begin(), c.end(), [&](const auto& kv) { return kv.second == y; });
}

bool side_conditions(const Setting& s, const Condition& c) {
  for (const auto& [x, y] : c) {
    if (s.contractive && !(y < x)) return false;
    if (s.bound && !s.bound->contains(y)) return false;
    if (!s.B.admits(y) || !s.A.admits(x)) return false;
  }
  return true;
}

struct Interval {
  const Rational* lo = nullptr;  // exclusive
  const Rational* hi = nullptr;  // exclusive
  const Rational* hi2 = nullptr;
  const Rational* lo2 = nullptr;
  const Cut* cut = nullptr;      // also below the cut

  bool has(const Rational& q) const {
    if (lo && !(*lo < q)) return false;
    if (lo2 && !(*lo2 < q)) return false;
    if (hi && !(q < *hi)) return false;
    if (hi2 && !(q < *hi2)) return false;
    if (cut && !cut->contains(q)) return false;
    return true;
  }
};

Rational least_in(const EnumStructure& E, const Interval& iv, std::size_t budget, const std::string& what) {
  std::vector<const Cut*> cuts;
  if (iv.cut) cuts.push_back(iv.cut);
  if (E.filter()) cuts.push_back(&*E.filter());
  if (E.rational_base() && cuts.size() <= 1) {
    OpenInterval oi;
    for (const Rational* p : {iv.lo, iv.lo2})
      if (p) oi.lo.push_back(*p);
    for (const Rational* p : {iv.hi, iv.hi2})
      if (p) oi.hi.push_back(*p);
    for (const Cut* c : cuts) oi.hi_cut.push_back(*c);
    if (auto q = least_rational_in(oi)) return *q;
    throw BudgetExhausted("no " + what + " in " + E.name() + ": the interval is empty");
  }
  for (std::size_t i = 0; i < budget; ++i) {
    const Rational& q = E.at(i);
    if (iv.has(q) && E.admits(q)) return q;
  }
  throw BudgetExhausted("no " + what + " among the first " + std::to_string(budget) + " elements of " + E.name());
}

Condition forth(const Setting& s, const Condition& c, const Rational& x) {
  if (c.count(x)) return c;
  Interval iv;
  auto next = c.upper_bound(x);
  if (next != c.end()) iv.hi = &next->second;
  if (next != c.begin()) iv.lo = &std::prev(next)->second;
  if (s.contractive) iv.hi2 = &x;
  if (s.bound) iv.cut = &*s.bound;
  Condition out = c;
  out.emplace(x, least_in(s.B, iv, s.budget, "image for " + to_string(x)));
  return out;
}

Condition back(const Setting& s, const Condition& c, const Rational& y) {
  if (in_image(c, y)) return c;
  Interval iv;
  // Image order equals domain order; find the neighbours of y.
  auto it = c.begin();
  while (it != c.end() && it->second < y) ++it;
  if (it != c.end()) iv.hi = &it->first;
  if (it != c.begin()) iv.lo = &std::prev(it)->first;
  if (s.contractive) iv.lo2 = &y;
  Condition out = c;
  out.emplace(least_in(s.A, iv, s.budget, "preimage for " + to_string(y)), y);
  return out;
}

}  // namespace

bool in_family(const Setting& s, const Condition& c, const DenseSpec& d) {
  switch (d.kind) {
    case DenseSpec::Kind::Domain: return c.count(s.A.at(d.index)) != 0;
    case DenseSpec::Kind::Image: return in_image(c, s.B.at(d.index));
    case DenseSpec::Kind::InitialBelowCut: {
      const Rational& y = s.B.at(d.index);
      if (s.bound && !s.bound->contains(y)) return true;
      return in_image(c, y);
    }
    case DenseSpec::Kind::Contractive:
      return std::all_of(c.begin(), c.end(), [](const auto& kv) { return kv.second < kv.first; });
    case DenseSpec::Kind::BelowBound:
      return !s.bound || std::all_of(c.begin(), c.end(), [&](const auto& kv) { return s.bound->contains(kv.second); });
  }
  return false;
}

Condition extend(const Setting& s, const Condition& c, const DenseSpec& d) {
  Condition out;
  switch (d.kind) {
    case DenseSpec::Kind::Domain: out = forth(s, c, s.A.at(d.index)); break;
    case DenseSpec::Kind::Image: {
      const Rational& y = s.B.at(d.index);
      if (s.bound && !s.bound->contains(y))
        throw BudgetExhausted("image target " + to_string(y) + " is not below the bound");
      out = back(s, c, y);
      break;
    }
    case DenseSpec::Kind::InitialBelowCut: {
      const Rational& y = s.B.at(d.index);
      out = s.bound && !s.bound->contains(y) ? c : back(s, c, y);
      break;
    }
    case DenseSpec::Kind::Contractive:
    case DenseSpec::Kind::BelowBound: out = c; break;
  }
  if (!extends(out, c) || !is_partial_embedding(out) || !side_conditions(s, out) || !in_family(s, out, d))
    throw ContractViolation("extend for " + d.name() + " left its family");
  return out;
}

std::vector<Condition> generic_chain(const Setting& s, const Condition& start, const std::vector<DenseSpec>& specs,
                                     std::optional<std::size_t> steps) {
  if (specs.empty()) return {start};
  const std::size_t n = steps.value_or(specs.size());
  std::vector<Condition> chain;
  chain.reserve(n);
  const Condition* prev = &start;
  for (std::size_t k = 0; k < n; ++k) {
    chain.push_back(extend(s, *prev, specs[k % specs.size()]));
    prev = &chain.back();
  }
  return chain;
}

bool Run::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

bool Family::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

std::string join_rationals(const std::vector<Rational>& v, std::size_t limit = 8) {
  std::string s;
  for (std::size_t i = 0; i < v.size() && i < limit; ++i) s += (i ? ", " : "") + to_string(v[i]);
  if (v.size() > limit) s += ", ...";
  return s;
}

Check coverage(const std::string& name, const EnumStructure& E, std::size_t n,
               const std::function<bool(const Rational&)>& covered) {
  std::vector<Rational> missing;
  for (std::size_t i = 0; i < n; ++i)
    if (!covered(E.at(i))) missing.push_back(E.at(i));
  return {name, missing.empty(),
          missing.empty() ? std::to_string(n) + " elements" : "missing " + join_rationals(missing)};
}

bool chain_descends(const Condition& start, const std::vector<Condition>& chain) {
  const Condition* prev = &start;
  for (const auto& c : chain) {
    if (!extends(c, *prev)) return false;
    prev = &c;
  }
  return true;
}

}  // namespace

Run build_iso(const EnumStructure& A, const EnumStructure& B, std::size_t steps) {
  Setting s;
  s.A = A;
  s.B = B;
  std::vector<DenseSpec> specs;
  for (std::size_t i = 0; i < steps; ++i) specs.push_back(i % 2 == 0 ? DenseSpec::domain(i / 2) : DenseSpec::image(i / 2));
  Run run;
  const auto chain = generic_chain(s, {}, specs, steps);
  run.result = chain.back();
  const std::size_t half = steps / 2;
  run.checks.push_back({"order-isomorphism", is_partial_embedding(run.result),
                        std::to_string(run.result.size()) + " pairs"});
  run.checks.push_back({"descending chain", chain_descends({}, chain), ""});
  run.checks.push_back(coverage("domain covers prefix of " + A.name(), A, half,
                                [&](const Rational& x) { return run.result.count(x) != 0; }));
  run.checks.push_back(coverage("image covers prefix of " + B.name(), B, half,
                                [&](const Rational& y) { return in_image(run.result, y); }));
  return run;
}

Run build_self_embedding(const Rational& q, const Cut& cut, std::size_t steps, int initial_height) {
  if (cut.contains(q))
    throw std::invalid_argument("the cut " + cut.describe() + " must lie below the bound " + to_string(q));
  Setting s;
  s.contractive = true;
  s.bound = cut;
  std::vector<DenseSpec> specs;
  for (std::size_t i = 0; i < steps; ++i)
    specs.push_back(i % 2 == 0 ? DenseSpec::domain(i / 2) : DenseSpec::initial_below_cut(i / 2));
  Run run;
  const auto chain = steps ? generic_chain(s, {}, specs, steps) : std::vector<Condition>{{}};
  const Condition& f = run.result = chain.back();

  run.checks.push_back({"order-preserving", is_partial_embedding(f), std::to_string(f.size()) + " pairs"});
  run.checks.push_back({"descending chain", chain_descends({}, chain), ""});
  run.checks.push_back({"contractive f(x) < x", in_family(s, f, DenseSpec::contractive()), ""});
  run.checks.push_back({"values below " + cut.describe(), in_family(s, f, DenseSpec::below_bound()), ""});
  const bool bounded = std::all_of(f.begin(), f.end(), [&](const auto& kv) { return kv.second < q; });
  run.checks.push_back({"bounded by " + to_string(q), bounded, ""});

  if (initial_height > 0) {
    std::vector<Rational> missing;
    std::size_t wanted = 0;
    for (int d = 1; d <= initial_height; ++d)
      for (int p = -initial_height; p <= initial_height; ++p) {
        if (std::gcd(p, d) != 1) continue;
        const Rational r(p, d);
        if (!cut.contains(r)) continue;
        ++wanted;
        if (!in_image(f, r)) missing.push_back(r);
      }
    run.checks.push_back({"initial: rationals of height <= " + std::to_string(initial_height) + " below the cut are values",
                          missing.empty(),
                          missing.empty() ? std::to_string(wanted) + " rationals" : "missing " + join_rationals(missing),
                          true});
  }

  // Toplessness: every enumerated upper bound of the image has a smaller one.
  {
    const Rational* top = nullptr;
    for (const auto& kv : f)
      if (!top || *top < kv.second) top = &kv.second;
    bool ok = top != nullptr;
    std::string detail;
    std::size_t tested = 0;
    if (ok) {
      std::vector<Rational> probe;
      for (std::size_t i = 0; i < std::max<std::size_t>(steps, 1); ++i) probe.push_back(s.A.at(i));
      for (const auto& kv : f) probe.push_back(kv.first);
      for (const Rational& u : probe) {
        if (!(*top < u)) continue;
        ++tested;
        Interval iv;
        iv.lo = top;
        iv.hi = &u;
        try {
          least_in(s.A, iv, s.budget, "smaller upper bound");
        } catch (const BudgetExhausted&) {
          ok = false;
          detail = "no smaller upper bound below " + to_string(u);
          break;
        }
      }
      if (ok) detail = std::to_string(tested) + " upper bounds";
    } else {
      detail = "empty image";
    }
    run.checks.push_back({"topless: each enumerated upper bound has a smaller one", ok, detail, true});
  }
  run.note =
      "The embedding lands in the rationals below the irrational cut " + cut.describe() +
      "; initiality and toplessness hold in the limit by construction, and only their finite surrogates are checked.";
  return run;
}

Family embedding_family(std::size_t depth, std::size_t steps) {
  if (depth > kMaxFamilyDepth)
    throw std::invalid_argument("depth " + std::to_string(depth) + " exceeds " + std::to_string(kMaxFamilyDepth));
  Family fam;
  const Rational delta = depth == 0 ? Rational(2) : Rational(1, Integer(1) << (depth - 1));
  for (std::size_t g = 0; g < (std::size_t{1} << depth); ++g) {
    Branch b;
    b.bound = -1;
    for (std::size_t j = 1; j <= depth; ++j) {
      const bool bit = (g >> (depth - j)) & 1;
      b.index += bit ? '1' : '0';
      if (bit) b.bound += Rational(1, Integer(1) << (j - 1));
    }
    b.cut = Cut(b.bound - delta, delta / 2);
    b.run = build_self_embedding(b.bound, b.cut, steps, 0);
    fam.branches.push_back(std::move(b));
  }
  bool branches_ok = true;
  std::string bad;
  for (const auto& b : fam.branches)
    if (!b.run.all_pass()) {
      branches_ok = false;
      bad += " " + (b.index.empty() ? std::string("()") : b.index);
    }
  fam.checks.push_back({"every branch is a contractive bounded embedding", branches_ok,
                        branches_ok ? std::to_string(fam.branches.size()) + " branches" : "failing:" + bad});

  auto top = [](const Condition& c) -> std::optional<Rational> {
    std::optional<Rational> t;
    for (const auto& kv : c)
      if (!t || *t < kv.second) t = kv.second;
    return t;
  };
  bool lex_ok = true;
  std::string why;
  for (std::size_t i = 0; i < fam.branches.size(); ++i)
    for (std::size_t j = i + 1; j < fam.branches.size(); ++j) {
      ++fam.comparisons;
      const auto& g = fam.branches[i];
      const auto& h = fam.branches[j];
      const auto tg = top(g.run.result), th = top(h.run.result);
      const bool ok = g.bound < h.bound && tg && th && *tg < *th;
      if (!ok && lex_ok) {
        lex_ok = false;
        why = g.index + " vs " + h.index;
      }
    }
  fam.checks.push_back({"lex order on indices gives strict bound order", lex_ok,
                        lex_ok ? std::to_string(fam.comparisons) + " comparisons" : "fails at " + why});
  return fam;
}

Equalizer equalizer_prefix(const Condition& j, const Condition& j2) {
  Equalizer e;
  Condition restricted;
  for (const auto& [x, y] : j) {
    auto it = j2.find(x);
    if (it != j2.end() && it->second == y) {
      e.points.push_back(x);
      restricted.emplace(x, y);
    }
  }
  e.order_embedding = is_partial_embedding(restricted) && std::is_sorted(e.points.begin(), e.points.end());
  return e;
}

}  // namespace stratkit::bf
