#include "stratkit/hfsets.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "stratkit/hierarchy.hpp"

namespace stratkit::hf {

namespace detail {
struct Node {
  std::vector<HFSet> elems;
  unsigned rank = 0;
  std::size_t id = 0;
};
}  // namespace detail

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<const detail::Node*>& k) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (const auto* p : k) {
      h ^= p->id + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

class InternTable {
 public:
  InternTable() {
    auto n = std::make_unique<detail::Node>();
    empty_ = n.get();
    nodes_.emplace(std::vector<const detail::Node*>{}, std::move(n));
  }

  const detail::Node* empty() const { return empty_; }

  const detail::Node* intern(std::vector<HFSet>&& elems) {
    std::vector<const detail::Node*> key;
    key.reserve(elems.size());
    for (const auto& e : elems) key.push_back(e.node());
    {
      std::shared_lock lock(mu_);
      auto it = nodes_.find(key);
      if (it != nodes_.end()) return it->second.get();
    }
    std::unique_lock lock(mu_);
    auto it = nodes_.find(key);
    if (it != nodes_.end()) return it->second.get();
    auto n = std::make_unique<detail::Node>();
    unsigned r = 0;
    for (const auto& e : elems) r = std::max(r, e.rank() + 1);
    n->rank = r;
    n->id = nodes_.size();
    n->elems = std::move(elems);
    const detail::Node* raw = n.get();
    nodes_.emplace(std::move(key), std::move(n));
    return raw;
  }

 private:
  std::shared_mutex mu_;
  std::unordered_map<std::vector<const detail::Node*>, std::unique_ptr<detail::Node>, KeyHash> nodes_;
  const detail::Node* empty_ = nullptr;
};

InternTable& table() {
  static InternTable t;
  return t;
}

}  // namespace

HFSet::HFSet() : n_(table().empty()) {}

HFSet intern_sorted(std::vector<HFSet> elems) { return HFSet(table().intern(std::move(elems))); }

int compare(const HFSet& a, const HFSet& b) {
  if (a == b) return 0;
  const auto& x = a.elements();
  const auto& y = b.elements();
  std::size_t i = x.size(), j = y.size();
  while (i > 0 && j > 0 && x[i - 1] == y[j - 1]) {
    --i;
    --j;
  }
  if (i == 0) return -1;  // j > 0, otherwise a == b
  if (j == 0) return 1;
  return compare(x[i - 1], y[j - 1]);
}

bool operator<(const HFSet& a, const HFSet& b) { return compare(a, b) < 0; }

HFSet HFSet::of(std::vector<HFSet> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return intern_sorted(std::move(elems));
}

HFSet HFSet::singleton(const HFSet& a) { return intern_sorted({a}); }
HFSet HFSet::pair_set(const HFSet& a, const HFSet& b) { return of({a, b}); }
HFSet HFSet::kuratowski(const HFSet& a, const HFSet& b) { return pair_set(singleton(a), pair_set(a, b)); }

HFSet HFSet::ordinal(unsigned n) {
  std::vector<HFSet> elems;
  HFSet cur;
  for (unsigned k = 0; k < n; ++k) {
    elems.push_back(cur);
    cur = intern_sorted(elems);  // von Neumann ordinals are increasing in the canonical order
  }
  return cur;
}

const std::vector<HFSet>& HFSet::elements() const { return n_->elems; }
std::size_t HFSet::size() const { return n_->elems.size(); }
unsigned HFSet::rank() const { return n_->rank; }
std::size_t HFSet::id() const { return n_->id; }

bool HFSet::contains(const HFSet& x) const {
  if (x.rank() >= rank()) return false;
  return std::binary_search(n_->elems.begin(), n_->elems.end(), x);
}

bool HFSet::subset_of(const HFSet& y) const {
  if (size() > y.size()) return false;
  return std::all_of(n_->elems.begin(), n_->elems.end(), [&](const HFSet& e) { return y.contains(e); });
}

namespace {
void write(std::string& out, const HFSet& x) {
  out += '{';
  bool first = true;
  for (const auto& e : x.elements()) {
    if (!first) out += ',';
    first = false;
    write(out, e);
  }
  out += '}';
}

class HFParser {
 public:
  explicit HFParser(std::string_view s) : s_(s) {}

  HFSet parse() {
    HFSet x = set();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return x;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("hf set: " + msg + " at offset " + std::to_string(i_));
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  HFSet set() {
    skip();
    if (i_ >= s_.size() || s_[i_] != '{') fail("expected '{'");
    ++i_;
    std::vector<HFSet> elems;
    skip();
    if (i_ < s_.size() && s_[i_] == '}') {
      ++i_;
      return HFSet();
    }
    while (true) {
      elems.push_back(set());
      skip();
      if (i_ < s_.size() && s_[i_] == ',') {
        ++i_;
        continue;
      }
      if (i_ < s_.size() && s_[i_] == '}') {
        ++i_;
        break;
      }
      fail("expected ',' or '}'");
    }
    return HFSet::of(std::move(elems));
  }

  std::string_view s_;
  std::size_t i_ = 0;
};
}  // namespace

std::string to_string(const HFSet& x) {
  std::string out;
  write(out, x);
  return out;
}

HFSet parse_hf(std::string_view text) { return HFParser(text).parse(); }

HFSet set_union(const HFSet& a, const HFSet& b) {
  std::vector<HFSet> out;
  std::set_union(a.elements().begin(), a.elements().end(), b.elements().begin(), b.elements().end(),
                 std::back_inserter(out));
  return intern_sorted(std::move(out));
}

HFSet big_union(const HFSet& a) {
  std::vector<HFSet> all;
  for (const auto& e : a.elements()) all.insert(all.end(), e.elements().begin(), e.elements().end());
  return HFSet::of(std::move(all));
}

std::vector<HFSet> subsets(const HFSet& a) {
  const auto& el = a.elements();
  if (el.size() > 20) throw GuardError("subsets: set has " + std::to_string(el.size()) + " elements");
  std::vector<HFSet> out;
  out.reserve(std::size_t{1} << el.size());
  for (std::size_t mask = 0; mask < (std::size_t{1} << el.size()); ++mask) {
    std::vector<HFSet> s;
    for (std::size_t i = 0; i < el.size(); ++i)
      if (mask >> i & 1) s.push_back(el[i]);
    out.push_back(intern_sorted(std::move(s)));
  }
  return out;
}

HFSet powerset(const HFSet& a) { return HFSet::of(subsets(a)); }

unsigned rank(const HFSet& x) { return x.rank(); }

HFSet tc(const HFSet& x) {
  std::vector<HFSet> out;
  std::vector<HFSet> work(x.elements().begin(), x.elements().end());
  std::set<std::size_t> seen;
  while (!work.empty()) {
    HFSet u = work.back();
    work.pop_back();
    if (!seen.insert(u.id()).second) continue;
    out.push_back(u);
    for (const auto& e : u.elements()) work.push_back(e);
  }
  return HFSet::of(std::move(out));
}

HFSet stc(const HFSet& x) {
  if (x.rank() > kMaxStcRank)
    throw GuardError("stc: rank " + std::to_string(x.rank()) + " exceeds guard " + std::to_string(kMaxStcRank));
  std::vector<HFSet> out;
  std::vector<HFSet> work(x.elements().begin(), x.elements().end());
  std::set<std::size_t> seen;
  while (!work.empty()) {
    HFSet u = work.back();
    work.pop_back();
    if (!seen.insert(u.id()).second) continue;
    out.push_back(u);
    for (const auto& e : u.elements()) work.push_back(e);
    for (const auto& r : subsets(u)) work.push_back(r);
  }
  return HFSet::of(std::move(out));
}

bool is_transitive(const HFSet& x) {
  for (const auto& u : x.elements())
    if (!u.subset_of(x)) return false;
  return true;
}

bool is_supertransitive(const HFSet& x) {
  if (!is_transitive(x)) return false;
  for (const auto& u : x.elements())
    for (const auto& r : subsets(u))
      if (!x.contains(r)) return false;
  return true;
}

FinModel::FinModel(std::vector<HFSet> domain) : domain_(std::move(domain)) {
  std::sort(domain_.begin(), domain_.end());
  domain_.erase(std::unique(domain_.begin(), domain_.end()), domain_.end());
}

bool FinModel::contains(const HFSet& x) const { return std::binary_search(domain_.begin(), domain_.end(), x); }

bool FinModel::is_supertransitive() const { return hf::is_supertransitive(intern_sorted(domain_)); }

FinModel v_stage(unsigned n) {
  if (n > kMaxStage)
    throw GuardError("v_stage: n = " + std::to_string(n) + " exceeds guard " + std::to_string(kMaxStage));
  static const std::vector<std::vector<HFSet>> stages = [] {
    std::vector<std::vector<HFSet>> st{{}};
    for (unsigned k = 0; k < kMaxStage; ++k) {
      auto next = subsets(intern_sorted(st.back()));
      std::sort(next.begin(), next.end());
      st.push_back(std::move(next));
    }
    return st;
  }();
  return FinModel(stages[n]);
}

NotWellFounded::NotWellFounded(std::vector<std::size_t> cycle)
    : std::runtime_error("graph is not well-founded"), cycle_(std::move(cycle)) {}

NotExtensional::NotExtensional(std::size_t a, std::size_t b)
    : std::runtime_error("graph is not extensional: nodes " + std::to_string(a) + " and " + std::to_string(b) +
                         " have the same members"),
      a_(a),
      b_(b) {}

std::vector<HFSet> mostowski(const FinDigraph& g) {
  std::vector<std::vector<std::size_t>> children(g.nodes);
  for (const auto& [c, p] : g.edges) {
    if (c >= g.nodes || p >= g.nodes) throw std::invalid_argument("mostowski: edge outside node list");
    children[p].push_back(c);
  }
  for (auto& ch : children) {
    std::sort(ch.begin(), ch.end());
    ch.erase(std::unique(ch.begin(), ch.end()), ch.end());
  }

  // Post-order DFS; colour 1 = on stack, 2 = done.
  std::vector<int> colour(g.nodes, 0);
  std::vector<std::size_t> order;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < g.nodes; ++s) {
    if (colour[s]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> it{{s, 0}};
    colour[s] = 1;
    stack.push_back(s);
    while (!it.empty()) {
      auto& [u, k] = it.back();
      if (k < children[u].size()) {
        const std::size_t c = children[u][k++];
        if (colour[c] == 1) {
          auto pos = std::find(stack.begin(), stack.end(), c);
          throw NotWellFounded(std::vector<std::size_t>(pos, stack.end()));
        }
        if (colour[c] == 0) {
          colour[c] = 1;
          stack.push_back(c);
          it.push_back({c, 0});
        }
      } else {
        colour[u] = 2;
        order.push_back(u);
        stack.pop_back();
        it.pop_back();
      }
    }
  }

  std::map<std::vector<std::size_t>, std::size_t> by_children;
  for (std::size_t u = 0; u < g.nodes; ++u) {
    auto [pos, inserted] = by_children.emplace(children[u], u);
    if (!inserted) throw NotExtensional(pos->second, u);
  }

  std::vector<HFSet> mos(g.nodes);
  for (std::size_t u : order) {
    std::vector<HFSet> el;
    for (std::size_t c : children[u]) el.push_back(mos[c]);
    mos[u] = HFSet::of(std::move(el));
  }
  return mos;
}

FinDigraph graph_of(const HFSet& x, std::vector<HFSet>* labels) {
  std::vector<HFSet> nodes = tc(x).elements();
  nodes.push_back(x);
  std::map<std::size_t, std::size_t> idx;
  for (std::size_t i = 0; i < nodes.size(); ++i) idx.emplace(nodes[i].id(), i);
  FinDigraph g;
  g.nodes = nodes.size();
  g.point = nodes.size() - 1;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (const auto& e : nodes[i].elements()) g.edges.emplace_back(idx.at(e.id()), i);
  if (labels) *labels = std::move(nodes);
  return g;
}

// ---------------------------------------------------------------------------
// Satisfaction

HFSet eval_term(const Term& t, const Valuation& v) {
  if (t.is_var()) {
    auto it = v.find(t.name);
    if (it == v.end()) throw EvalError("unassigned variable '" + t.name + "'");
    return it->second;
  }
  if (t.is_pair() && t.args.size() == 2) return HFSet::kuratowski(eval_term(t.args[0], v), eval_term(t.args[1], v));
  throw EvalError("no interpretation for function symbol '" + t.name + "'");
}

namespace {

class Evaluator {
 public:
  Evaluator(const FinModel& m, Valuation v) : m_(m), v_(std::move(v)) {}

  bool run(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Bottom:
        return false;
      case FormulaKind::Atom:
        if (f.symbol() == Signature::kSethood && f.terms().size() == 1) {
          (void)eval_term(f.terms()[0], v_);
          return true;
        }
        throw EvalError("no interpretation for relation symbol '" + f.symbol() + "'");
      case FormulaKind::Eq:
        return term(f.terms()[0]) == term(f.terms()[1]);
      case FormulaKind::Mem:
        return term(f.terms()[1]).contains(term(f.terms()[0]));
      case FormulaKind::Sub:
        return term(f.terms()[0]).subset_of(term(f.terms()[1]));
      case FormulaKind::SubT:
        throw EvalError("subT atoms have no set-theoretic interpretation");
      case FormulaKind::Not:
        return !run(f.body());
      case FormulaKind::And:
        return run(f.lhs()) && run(f.rhs());
      case FormulaKind::Or:
        return run(f.lhs()) || run(f.rhs());
      case FormulaKind::Imp:
        return !run(f.lhs()) || run(f.rhs());
      case FormulaKind::Forall:
      case FormulaKind::Exists:
        return quantify(f, m_.domain());
      case FormulaKind::BForall:
      case FormulaKind::BExists: {
        const HFSet b = term(f.bound());
        std::vector<HFSet> range;
        if (f.bound_kind() == BoundKind::Member) {
          for (const auto& e : b.elements())
            if (m_.contains(e)) range.push_back(e);
        } else if (b.size() <= 12) {
          for (const auto& s : subsets(b))
            if (m_.contains(s)) range.push_back(s);
        } else {
          for (const auto& s : m_.domain())
            if (s.subset_of(b)) range.push_back(s);
        }
        return quantify(f, range);
      }
    }
    return false;
  }

 private:
  HFSet term(const Term& t) { return eval_term(t, v_); }

  bool quantify(const Formula& f, const std::vector<HFSet>& range) {
    const bool universal = f.kind() == FormulaKind::Forall || f.kind() == FormulaKind::BForall;
    auto saved = v_.find(f.var());
    std::optional<HFSet> old;
    if (saved != v_.end()) old = saved->second;
    bool result = universal;
    for (const auto& x : range) {
      v_[f.var()] = x;
      if (run(f.body()) != universal) {
        result = !universal;
        break;
      }
    }
    if (old)
      v_[f.var()] = *old;
    else
      v_.erase(f.var());
    return result;
  }

  const FinModel& m_;
  Valuation v_;
};

}  // namespace

bool eval(const Formula& f, const FinModel& model, const Valuation& v) {
  for (const auto& x : free_vars(f)) {
    auto it = v.find(x);
    if (it == v.end()) throw EvalError("unassigned free variable '" + x + "'");
    if (!model.contains(it->second))
      throw EvalError("value of '" + x + "' = " + to_string(it->second) + " is outside the model domain");
  }
  return Evaluator(model, v).run(f);
}

bool sat_delta0p(const Formula& f, const Valuation& v) {
  if (!hierarchy::is_delta0(f, hierarchy::Family::Takahashi))
    throw EvalError("sat_delta0p: formula is not Takahashi-Delta0");
  std::vector<HFSet> params;
  for (const auto& x : free_vars(f)) {
    auto it = v.find(x);
    if (it == v.end()) throw EvalError("unassigned free variable '" + x + "'");
    params.push_back(it->second);
  }
  const HFSet closure = stc(HFSet::of(std::move(params)));
  return eval(f, FinModel(closure.elements()), v);
}

}  // namespace stratkit::hf
