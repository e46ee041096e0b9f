#include <algorithm>
#include <sstream>

#include "stratkit/kripke.hpp"

namespace stratkit::kripke {

namespace {

struct SortDraft {
  std::vector<std::vector<std::string>> elems;           // per node
  std::map<std::pair<std::size_t, std::size_t>, std::map<std::string, std::string>> res;
};

struct RelDraft {
  std::vector<std::string> sorts;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> tuples;
};

struct FunDraft {
  std::vector<std::string> args;
  std::string result;
  std::vector<std::tuple<std::size_t, std::vector<std::string>, std::string>> values;
};

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw StructureError("fixture line " + std::to_string(line) + ": " + msg);
}

std::size_t elem_index(const SortDraft& s, const std::string& sort, std::size_t node, const std::string& name,
                       std::size_t line) {
  const auto& v = s.elems[node];
  auto it = std::find(v.begin(), v.end(), name);
  if (it == v.end()) fail(line, "no element '" + name + "' of sort " + sort + " at this node");
  return static_cast<std::size_t>(it - v.begin());
}

}  // namespace

CatStructure parse_fixture(const std::string& text) {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> order;
  std::vector<std::string> sort_order;
  std::map<std::string, SortDraft> sorts;
  std::map<std::string, RelDraft> rels;
  std::map<std::string, FunDraft> funs;

  // First pass: collect directives; nodes must be declared before use.
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  struct Line {
    std::size_t no;
    std::vector<std::string> w;
  };
  std::vector<Line> lines;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream ls(raw);
    std::vector<std::string> w;
    for (std::string tok; ls >> tok;) w.push_back(tok);
    if (!w.empty()) lines.push_back({lineno, std::move(w)});
  }
  for (const auto& [no, w] : lines) {
    if (w[0] == "node") {
      if (w.size() != 2) fail(no, "usage: node <name>");
      if (std::find(nodes.begin(), nodes.end(), w[1]) != nodes.end()) fail(no, "duplicate node");
      nodes.push_back(w[1]);
    } else if (w[0] == "le") {
      if (w.size() != 3) fail(no, "usage: le <p> <q>");
      order.emplace_back(w[1], w[2]);
    }
  }
  if (nodes.empty()) nodes.push_back("0");
  auto node_index = [&](const std::string& name, std::size_t no) {
    auto it = std::find(nodes.begin(), nodes.end(), name);
    if (it == nodes.end()) fail(no, "unknown node '" + name + "'");
    return static_cast<std::size_t>(it - nodes.begin());
  };
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < order.size(); ++i) pairs.emplace_back(node_index(order[i].first, 0), node_index(order[i].second, 0));
  FinPoset P(nodes.size(), pairs, nodes);

  for (const auto& [no, w] : lines) {
    const std::string& d = w[0];
    if (d == "node" || d == "le") continue;
    if (d == "sort") {
      if (w.size() != 2) fail(no, "usage: sort <name>");
      if (sorts.count(w[1])) fail(no, "duplicate sort");
      sorts[w[1]].elems.resize(nodes.size());
      sort_order.push_back(w[1]);
    } else if (d == "elem") {
      if (w.size() != 4) fail(no, "usage: elem <sort> <node> <name>");
      auto it = sorts.find(w[1]);
      if (it == sorts.end()) fail(no, "unknown sort '" + w[1] + "'");
      auto& v = it->second.elems[node_index(w[2], no)];
      if (std::find(v.begin(), v.end(), w[3]) != v.end()) fail(no, "duplicate element");
      v.push_back(w[3]);
    } else if (d == "restrict") {
      if (w.size() != 6) fail(no, "usage: restrict <sort> <p> <q> <a> <b>");
      auto it = sorts.find(w[1]);
      if (it == sorts.end()) fail(no, "unknown sort '" + w[1] + "'");
      const std::size_t p = node_index(w[2], no), q = node_index(w[3], no);
      if (!P.le(p, q) || p == q) fail(no, "restriction needs p < q");
      it->second.res[{p, q}][w[4]] = w[5];
    } else if (d == "rel") {
      if (w.size() < 2) fail(no, "usage: rel <name> <sorts...>");
      if (rels.count(w[1])) fail(no, "duplicate relation");
      rels[w[1]].sorts.assign(w.begin() + 2, w.end());
    } else if (d == "tuple") {
      if (w.size() < 3) fail(no, "usage: tuple <rel> <node> <elems...>");
      auto it = rels.find(w[1]);
      if (it == rels.end()) fail(no, "unknown relation '" + w[1] + "'");
      if (w.size() - 3 != it->second.sorts.size()) fail(no, "tuple arity mismatch");
      it->second.tuples.emplace_back(node_index(w[2], no), std::vector<std::string>(w.begin() + 3, w.end()));
    } else if (d == "fun") {
      auto colon = std::find(w.begin(), w.end(), std::string(":"));
      if (w.size() < 4 || colon == w.end() || colon + 2 != w.end()) fail(no, "usage: fun <name> <args...> : <result>");
      if (funs.count(w[1])) fail(no, "duplicate function");
      auto& f = funs[w[1]];
      f.args.assign(w.begin() + 2, colon);
      f.result = *(colon + 1);
    } else if (d == "value") {
      auto colon = std::find(w.begin(), w.end(), std::string(":"));
      if (w.size() < 5 || colon == w.end() || colon + 2 != w.end()) fail(no, "usage: value <fun> <node> <args...> : <b>");
      auto it = funs.find(w[1]);
      if (it == funs.end()) fail(no, "unknown function '" + w[1] + "'");
      std::vector<std::string> args(w.begin() + 3, colon);
      if (args.size() != it->second.args.size()) fail(no, "value arity mismatch");
      it->second.values.emplace_back(node_index(w[2], no), std::move(args), *(colon + 1));
    } else {
      fail(no, "unknown directive '" + d + "'");
    }
  }

  CatStructure M(P);
  for (const auto& name : sort_order) {
    const SortDraft& sd = sorts.at(name);
    Presheaf& X = M.add_sort(name);
    X = Presheaf(P);
    X.labels = sd.elems;
    for (std::size_t p = 0; p < P.size(); ++p) X.set_card(p, sd.elems[p].size());
    // Known maps: given ones, then close under composition.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> known;
    for (const auto& [pq, m] : sd.res) {
      const auto [p, q] = pq;
      std::vector<std::size_t> v(sd.elems[p].size(), static_cast<std::size_t>(-1));
      for (const auto& [a, b] : m) v[elem_index(sd, name, p, a, 0)] = elem_index(sd, name, q, b, 0);
      if (std::find(v.begin(), v.end(), static_cast<std::size_t>(-1)) != v.end())
        throw StructureError("sort " + name + ": restriction " + nodes[p] + " -> " + nodes[q] + " is not total");
      known[pq] = std::move(v);
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t p = 0; p < P.size(); ++p)
        for (std::size_t q : P.up(p)) {
          if (q == p || known.count({p, q})) continue;
          for (std::size_t r : P.up(p)) {
            if (r == p || r == q || !P.le(r, q)) continue;
            auto a = known.find({p, r});
            auto b = known.find({r, q});
            if (a == known.end() || b == known.end()) continue;
            std::vector<std::size_t> v(a->second.size());
            for (std::size_t x = 0; x < v.size(); ++x) v[x] = b->second[a->second[x]];
            known[{p, q}] = std::move(v);
            changed = true;
            break;
          }
        }
    }
    for (std::size_t p = 0; p < P.size(); ++p)
      for (std::size_t q : P.up(p)) {
        if (q == p) continue;
        auto it = known.find({p, q});
        if (it == known.end()) {
          if (sd.elems[p].empty()) {
            X.set_res(p, q, {});
            continue;
          }
          throw StructureError("sort " + name + ": missing restriction " + nodes[p] + " -> " + nodes[q]);
        }
        X.set_res(p, q, it->second);
      }
  }

  for (const auto& [name, rd] : rels) {
    const Product Pr = M.product(rd.sorts);
    Subpresheaf A = bottom(Pr.presheaf());
    for (const auto& [node, names] : rd.tuples) {
      std::vector<std::size_t> t;
      for (std::size_t i = 0; i < names.size(); ++i)
        t.push_back(elem_index(sorts.at(rd.sorts[i]), rd.sorts[i], node, names[i], 0));
      const std::size_t c = Pr.encode(node, t);
      // Tuples persist upward.
      for (std::size_t q : P.up(node)) A.sel[q][Pr.presheaf().res(node, q, c)] = true;
    }
    M.relations[name] = {rd.sorts, std::move(A)};
  }

  for (const auto& [name, fd] : funs) {
    const Product Pa = M.product(fd.args);
    NatTrans f;
    for (std::size_t p = 0; p < P.size(); ++p)
      f.comp.emplace_back(Pa.presheaf().card(p), static_cast<std::size_t>(-1));
    for (const auto& [node, args, res] : fd.values) {
      std::vector<std::size_t> t;
      for (std::size_t i = 0; i < args.size(); ++i)
        t.push_back(elem_index(sorts.at(fd.args[i]), fd.args[i], node, args[i], 0));
      f.comp[node][Pa.encode(node, t)] = elem_index(sorts.at(fd.result), fd.result, node, res, 0);
    }
    for (std::size_t p = 0; p < P.size(); ++p)
      for (std::size_t v : f.comp[p])
        if (v == static_cast<std::size_t>(-1))
          throw StructureError("function " + name + " is not total at node " + nodes[p]);
    M.functions[name] = {fd.args, fd.result, std::move(f)};
  }

  M.validate();
  return M;
}

}  // namespace stratkit::kripke
