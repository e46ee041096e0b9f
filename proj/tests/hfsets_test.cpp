#include "doctest.h"
#include "support.hpp"

#include <algorithm>

#include "stratkit/hfsets.hpp"
#include "stratkit/hierarchy.hpp"

using namespace stratkit;
using namespace stratkit::hf;
namespace tst = stratkit::testing;

namespace {

HFSet H(const std::string& s) { return parse_hf(s); }

const std::vector<HFSet>& v4() {
  static const FinModel m = v_stage(4);
  return m.domain();
}
Formula P(const std::string& s) { return parse(s, Signature::l_set()); }

/// V_(n+1) as all subsets of V_n, by bitmask.
std::vector<HFSet> next_stage(const std::vector<HFSet>& v) {
  std::vector<HFSet> out;
  const std::size_t n = v.size();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    std::vector<HFSet> el;
    for (std::size_t i = 0; i < n; ++i)
      if ((m >> i) & 1u) el.push_back(v[i]);
    out.push_back(HFSet::of(el));
  }
  return out;
}

unsigned rank_oracle(const HFSet& x) {
  unsigned r = 0;
  for (const auto& u : x.elements()) r = std::max(r, rank_oracle(u) + 1);
  return r;
}

/// Least supertransitive superset by fixpoint iteration.
HFSet stc_oracle(const HFSet& x) {
  std::set<std::size_t> ids;
  std::vector<HFSet> cur = x.elements();
  for (const auto& e : cur) ids.insert(e.id());
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<HFSet> snapshot = cur;
    for (const auto& u : snapshot) {
      for (const auto& e : u.elements())
        if (ids.insert(e.id()).second) cur.push_back(e), grew = true;
      for (const auto& s : subsets(u))
        if (ids.insert(s.id()).second) cur.push_back(s), grew = true;
    }
  }
  return HFSet::of(cur);
}

/// Random Takahashi-Delta0 formula over y, z, w.
Formula random_delta0p(tst::Rng& rng) {
  tst::GenOptions o;
  o.vars = {"y", "z", "w"};
  o.unbounded = false;
  o.subset = true;
  o.depth = 3;
  return tst::random_formula(rng, o);
}

}  // namespace

TEST_SUITE("hfsets") {

TEST_CASE("V_n sizes and contents match the powerset recurrence") {
  CHECK(v_stage(0).size() == 0);
  CHECK(v_stage(2).domain() == std::vector<HFSet>{H("{}"), H("{{}}")});
  std::vector<HFSet> v;
  const std::size_t expected[] = {0, 1, 2, 4, 16, 65536};
  for (unsigned n = 0; n <= kMaxStage; ++n) {
    const FinModel m = v_stage(n);
    CHECK(m.size() == expected[n]);
    std::vector<HFSet> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    CHECK(m.domain() == sorted);
    for (const auto& x : m.domain()) CHECK(rank(x) < n);
    v = next_stage(v.size() <= 16 ? v : std::vector<HFSet>{});
  }
  CHECK_THROWS_AS(v_stage(kMaxStage + 1), GuardError);
}

TEST_CASE("canonical form and equality") {
  CHECK(HFSet::of({H("{}"), H("{{}}"), H("{}")}) == H("{{},{{}}}"));
  CHECK(H("{{{}},{}}") == H("{{},{{}}}"));
  CHECK(to_string(H("{{{}},{}}")) == "{{},{{}}}");
  CHECK(HFSet::ordinal(2) == H("{{},{{}}}"));
  CHECK(HFSet::kuratowski(H("{}"), H("{{}}")) == H("{{{}},{{},{{}}}}"));
  CHECK_THROWS_AS(parse_hf("{{}"), std::invalid_argument);
  CHECK_THROWS_AS(parse_hf("{x}"), std::invalid_argument);
  for (const auto& x : v4()) CHECK(parse_hf(to_string(x)) == x);
}

TEST_CASE("Ackermann order is a strict total order") {
  const auto& d = v4();
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j) {
      CHECK((d[i] < d[j]) == (i < j));
      CHECK(compare(d[i], d[j]) == (i < j ? -1 : i == j ? 0 : 1));
    }
}

TEST_CASE("rank") {
  CHECK(rank(H("{}")) == 0);
  CHECK(rank(H("{{}}")) == 1);
  CHECK(rank(H("{{},{{{}}}}")) == 3);
  for (const auto& x : v4()) CHECK(rank(x) == rank_oracle(x));
  const auto& d = v4();
  for (const auto& x : d)
    for (const auto& y : d)
      if (y.contains(x)) CHECK(rank(x) < rank(y));
}

TEST_CASE("transitive closure") {
  CHECK(tc(H("{}")) == H("{}"));
  CHECK(tc(H("{{{}}}")) == H("{{{}},{}}"));
  tst::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const HFSet x = tst::random_hfset(rng, 3);
    const HFSet t = tc(x);
    CHECK(x.subset_of(t));
    CHECK(is_transitive(t));
  }
}

TEST_CASE("transitive closure is minimal") {
  for (const auto& x : v4()) {
    const HFSet t = tc(x);
    if (t.size() > 10) continue;
    for (const auto& s : subsets(t))
      if (s != t && x.subset_of(s)) CHECK_FALSE(is_transitive(s));
  }
}

TEST_CASE("supertransitive closure") {
  CHECK(stc(H("{}")) == H("{}"));
  CHECK(stc(H("{{{}}}")) == H("{{{}},{}}"));
  for (const auto& x : v4()) {
    const HFSet s = stc(x);
    CHECK(s == stc_oracle(x));
    CHECK(is_supertransitive(s));
    CHECK(x.subset_of(s));
  }
  CHECK_THROWS_AS(stc(HFSet::singleton(HFSet::of(v4()))), GuardError);
}

TEST_CASE("Mostowski collapse") {
  FinDigraph g;
  g.nodes = 2;
  g.edges = {{1, 0}};
  g.point = 0;
  const auto m = mostowski(g);
  CHECK(m[1] == H("{}"));
  CHECK(m[0] == H("{{}}"));

  FinDigraph cyc{3, {{0, 1}, {1, 2}, {2, 0}}, 0};
  CHECK_THROWS_AS(mostowski(cyc), NotWellFounded);
  try {
    mostowski(cyc);
  } catch (const NotWellFounded& e) {
    CHECK(e.cycle().size() >= 3);
  }

  FinDigraph dup{3, {{2, 0}, {2, 1}}, 0};
  try {
    mostowski(dup);
    FAIL("expected NotExtensional");
  } catch (const NotExtensional& e) {
    CHECK(std::set<std::size_t>{e.a(), e.b()} == std::set<std::size_t>{0, 1});
  }
}

TEST_CASE("Mostowski round trip on permuted graphs") {
  tst::Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const HFSet x = tst::random_hfset(rng, 3);
    std::vector<HFSet> labels;
    FinDigraph g = graph_of(x, &labels);
    // relabel nodes by a random permutation
    std::vector<std::size_t> perm(g.nodes);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    FinDigraph h{g.nodes, {}, perm[g.point]};
    for (auto [c, p] : g.edges) h.edges.emplace_back(perm[c], perm[p]);
    const auto m = mostowski(h);
    CHECK(m[h.point] == x);
    for (std::size_t n = 0; n < g.nodes; ++n) CHECK(m[perm[n]] == labels[n]);
    // the image of the whole graph is transitive
    CHECK(is_transitive(HFSet::of(m)));
  }
}

TEST_CASE("eval examples") {
  CHECK(eval(P("x in y"), v_stage(2), {{"x", H("{}")}, {"y", H("{{}}")}}));
  CHECK(eval(P("exists x. forall u. ~(u in x)"), v_stage(3), {}));
  CHECK(eval(P("forall x. forall y. (forall u. (u in x <-> u in y)) -> x = y"), v_stage(3), {}));
  CHECK_THROWS_AS(eval(P("x in y"), v_stage(2), {{"x", H("{}")}}), EvalError);
  CHECK(eval(P("<x, y> = <x, y> & S(x)"), v_stage(2), {{"x", H("{}")}, {"y", H("{}")}}));
}

TEST_CASE("eval follows the compositional clauses") {
  tst::Rng rng(12);
  const FinModel v3 = v_stage(3);
  tst::GenOptions o;
  o.subset = true;
  for (int i = 0; i < 300; ++i) {
    const Formula a = tst::random_formula(rng, o);
    const Formula b = tst::random_formula(rng, o);
    tst::for_each_assignment(std::vector<std::string>{"x", "y", "z"}, v3.domain(), [&](const Valuation& v) {
      const bool ea = eval(a, v3, v), eb = eval(b, v3, v);
      CHECK(eval(Formula::neg(a), v3, v) == !ea);
      CHECK(eval(Formula::conj(a, b), v3, v) == (ea && eb));
      CHECK(eval(Formula::disj(a, b), v3, v) == (ea || eb));
      CHECK(eval(Formula::imp(a, b), v3, v) == (!ea || eb));
      bool some = false, all = true;
      for (const auto& d : v3.domain()) {
        Valuation w = v;
        w["x"] = d;
        const bool e = eval(a, v3, w);
        some = some || e;
        all = all && e;
      }
      CHECK(eval(Formula::exists("x", a), v3, v) == some);
      CHECK(eval(Formula::forall("x", a), v3, v) == all);
    });
  }
}

TEST_CASE("sat_delta0p examples") {
  CHECK(sat_delta0p(P("forall v sub u. v in y"), {{"u", H("{}")}, {"y", H("{{}}")}}));
  CHECK_FALSE(sat_delta0p(P("x in x"), {{"x", H("{}")}}));
  CHECK_THROWS_AS(sat_delta0p(P("exists x. x in y"), {{"y", H("{}")}}), EvalError);
}

TEST_CASE("Delta0P absoluteness over supertransitive models") {
  tst::Rng rng(200);
  int cases = 0;
  while (cases < 200) {
    const Formula f = random_delta0p(rng);
    REQUIRE(hierarchy::is_delta0(f, hierarchy::Family::Takahashi));
    Valuation v;
    std::vector<HFSet> seed;
    for (const char* n : {"y", "z", "w"}) {
      v[n] = tst::random_hfset(rng, 2 + static_cast<unsigned>(tst::pick(rng, 2)));
      seed.push_back(v[n]);
    }
    for (std::size_t k = tst::pick(rng, 3); k > 0; --k) seed.push_back(tst::random_hfset(rng, 3));
    const FinModel M(stc(HFSet::of(seed)).elements());
    REQUIRE(M.is_supertransitive());
    CHECK_MESSAGE(eval(f, M, v) == sat_delta0p(f, v), print(f));
    ++cases;
  }
}

}
