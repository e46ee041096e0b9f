#include "stratkit/strat.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace stratkit::strat {

int Stratification::type_of(const std::string& key) const {
  auto it = types.find(key);
  if (it == types.end()) throw std::out_of_range("no type for term '" + key + "'");
  return it->second;
}

int UnstratWitness::net_offset() const {
  int s = 0;
  for (const auto& st : cycle) s += st.delta();
  return s;
}

namespace {

struct Collector {
  Mode mode;
  std::vector<std::string> order;
  std::set<std::string> seen;
  std::vector<OffsetConstraint> out;

  void note(const std::string& key) {
    if (seen.insert(key).second) order.push_back(key);
  }

  std::string term(const Term& t) {
    std::string key = print(t);
    if (!t.is_var()) {
      for (const auto& a : t.args) {
        std::string ak = term(a);
        out.push_back({ak, key, 0, key});
      }
    }
    note(key);
    return key;
  }

  void formula(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Bottom:
        return;
      case FormulaKind::Atom: {
        std::vector<std::string> keys;
        for (const auto& t : f.terms()) keys.push_back(term(t));
        if (mode == Mode::Typed)
          for (std::size_t i = 1; i < keys.size(); ++i) out.push_back({keys[0], keys[i], 0, print(f)});
        return;
      }
      case FormulaKind::Eq:
      case FormulaKind::Sub:
      case FormulaKind::Mem:
      case FormulaKind::SubT: {
        std::string a = term(f.terms()[0]);
        std::string b = term(f.terms()[1]);
        const bool raises = f.kind() == FormulaKind::Mem || f.kind() == FormulaKind::SubT;
        out.push_back({a, b, raises ? 1 : 0, print(f)});
        return;
      }
      case FormulaKind::Not:
        formula(f.body());
        return;
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Imp:
        formula(f.lhs());
        formula(f.rhs());
        return;
      default:
        // Bounded nodes are desugared before collection.
        note(f.var());
        formula(f.body());
        return;
    }
  }
};

Collector collect(const Formula& f, Mode mode) {
  Collector c{mode, {}, {}, {}};
  c.formula(normalize_bounded(f, BoundedDirection::Desugar));
  return c;
}

/// Union-find over term indices where pot[i] = type(i) - type(parent(i)).
class OffsetUnionFind {
 public:
  explicit OffsetUnionFind(std::size_t n) : parent_(n), rank_(n, 0), pot_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  // Returns root; `potential` receives type(i) - type(root).
  std::size_t find(std::size_t i, long& potential) {
    if (parent_[i] == i) {
      potential = 0;
      return i;
    }
    long up = 0;
    const std::size_t r = find(parent_[i], up);
    pot_[i] += up;
    parent_[i] = r;
    potential = pot_[i];
    return r;
  }

  // Imposes type(b) = type(a) + d.  Returns false on inconsistency.
  bool unite(std::size_t a, std::size_t b, long d) {
    long pa = 0, pb = 0;
    std::size_t ra = find(a, pa), rb = find(b, pb);
    if (ra == rb) return pb - pa == d;
    // type(rb) - type(ra) = d + pa - pb
    long off = d + pa - pb;
    if (rank_[ra] < rank_[rb]) {
      std::swap(ra, rb);
      off = -off;
    }
    parent_[rb] = ra;
    pot_[rb] = off;
    if (rank_[ra] == rank_[rb]) ++rank_[ra];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
  std::vector<long> pot_;
};

struct Edge {
  std::size_t to;
  std::size_t constraint;
  bool forward;
};

// Path in the spanning forest from `from` to `to` (both in one tree).
std::vector<WitnessStep> forest_path(const std::vector<std::vector<Edge>>& adj,
                                     const std::vector<OffsetConstraint>& cs, std::size_t from, std::size_t to) {
  std::vector<long> prev(adj.size(), -1);
  std::vector<const Edge*> via(adj.size(), nullptr);
  std::deque<std::size_t> q{from};
  prev[from] = static_cast<long>(from);
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop_front();
    if (u == to) break;
    for (const auto& e : adj[u]) {
      if (prev[e.to] != -1) continue;
      prev[e.to] = static_cast<long>(u);
      via[e.to] = &e;
      q.push_back(e.to);
    }
  }
  std::vector<WitnessStep> path;
  for (std::size_t v = to; v != from; v = static_cast<std::size_t>(prev[v])) {
    const Edge* e = via[v];
    path.push_back({cs[e->constraint], e->forward});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::vector<std::string> terms(const Formula& f) { return collect(f, Mode::Set).order; }

std::vector<OffsetConstraint> constraints(const Formula& f, Mode mode) { return collect(f, mode).out; }

StratResult stratify(const Formula& f, Mode mode) {
  Collector c = collect(f, mode);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < c.order.size(); ++i) index.emplace(c.order[i], i);

  OffsetUnionFind uf(c.order.size());
  std::vector<std::vector<Edge>> adj(c.order.size());
  for (std::size_t k = 0; k < c.out.size(); ++k) {
    const auto& oc = c.out[k];
    const std::size_t a = index.at(oc.left), b = index.at(oc.right);
    if (!uf.unite(a, b, oc.offset)) {
      UnstratWitness w;
      w.cycle.push_back({oc, true});
      auto back = forest_path(adj, c.out, b, a);
      w.cycle.insert(w.cycle.end(), back.begin(), back.end());
      return {std::nullopt, std::move(w)};
    }
    adj[a].push_back({b, k, true});
    adj[b].push_back({a, k, false});
  }

  std::vector<long> pot(c.order.size());
  std::vector<std::size_t> root(c.order.size());
  std::unordered_map<std::size_t, long> low;
  for (std::size_t i = 0; i < c.order.size(); ++i) {
    root[i] = uf.find(i, pot[i]);
    auto [it, inserted] = low.emplace(root[i], pot[i]);
    if (!inserted) it->second = std::min(it->second, pot[i]);
  }
  Stratification s;
  for (std::size_t i = 0; i < c.order.size(); ++i) {
    const int t = static_cast<int>(pot[i] - low.at(root[i]));
    s.types.emplace(c.order[i], t);
    s.max = std::max(s.max, t);
  }
  return {std::move(s), std::nullopt};
}

bool check_stratification(const Formula& f, const std::map<std::string, int>& assignment, Mode mode) {
  Collector c = collect(f, mode);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < c.order.size(); ++i) index.emplace(c.order[i], i);
  const std::size_t ground = c.order.size();
  OffsetUnionFind uf(ground + 1);

  for (const auto& v : all_vars(normalize_bounded(f, BoundedDirection::Desugar))) {
    auto it = assignment.find(v);
    if (it == assignment.end() || it->second < 0) return false;
    if (!uf.unite(ground, index.at(v), it->second)) return false;
  }
  for (const auto& oc : c.out)
    if (!uf.unite(index.at(oc.left), index.at(oc.right), oc.offset)) return false;

  long gp = 0;
  const std::size_t groot = uf.find(ground, gp);
  for (std::size_t i = 0; i < ground; ++i) {
    long p = 0;
    if (uf.find(i, p) == groot && p - gp < 0) return false;
  }
  return true;
}

bool verify_witness(const Formula& f, const UnstratWitness& w, Mode mode) {
  if (w.cycle.empty()) return false;
  const auto cs = constraints(f, mode);
  for (std::size_t i = 0; i < w.cycle.size(); ++i) {
    const auto& st = w.cycle[i];
    if (std::find(cs.begin(), cs.end(), st.constraint) == cs.end()) return false;
    const auto& nxt = w.cycle[(i + 1) % w.cycle.size()];
    if (st.to() != nxt.from()) return false;
  }
  return w.net_offset() != 0;
}

}  // namespace stratkit::strat
