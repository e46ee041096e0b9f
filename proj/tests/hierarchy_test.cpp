#include "corpus.hpp"
#include "doctest.h"
#include "support.hpp"

#include "stratkit/hfsets.hpp"
#include "stratkit/hierarchy.hpp"

using namespace stratkit;
using namespace stratkit::hierarchy;
namespace tst = stratkit::testing;
using tst::equivalent_v3;

namespace {

Formula P(const std::string& s) { return parse(s, Signature::l0()); }

HierarchyClass cls(Family f, Shape s, int n) { return {f, s, n}; }

}  // namespace

TEST_SUITE("hierarchy") {

TEST_CASE("Trans and Ord are Delta0 in both families") {
  for (const char* s : {tst::trans_formula(), tst::ord_formula()}) {
    const auto c = classify(P(s));
    REQUIRE(c.levy);
    REQUIRE(c.takahashi);
    CHECK(c.levy->name() == "Delta0");
    CHECK(c.takahashi->name() == "Delta0");
  }
}

TEST_CASE("powerset graph is Delta0 only for Takahashi") {
  const auto c = classify(P(tst::powerset_graph_formula()));
  CHECK_FALSE(c.levy);
  REQUIRE(c.takahashi);
  CHECK(*c.takahashi == cls(Family::Takahashi, Shape::Delta0, 0));
}

TEST_CASE("Sigma and Pi examples") {
  auto c = classify(P("exists x. x in x"));
  CHECK(*c.levy == cls(Family::Levy, Shape::Sigma, 1));
  CHECK(*c.takahashi == cls(Family::Takahashi, Shape::Sigma, 1));
  c = classify(P("forall y. exists x. x in y"));
  CHECK(c.levy->name() == "Pi2");
  CHECK(c.takahashi->name() == "Pi2");
  c = classify(P("exists a. exists b. forall c. a in c"));
  CHECK(c.levy->name() == "Sigma2");
  // a leading negation over a prefix is outside both grammars
  c = classify(P("~(forall x. x in y)"));
  CHECK_FALSE(c.levy);
  CHECK_FALSE(c.takahashi);
  c = classify(P("(forall x. x in y) & y in y"));
  CHECK_FALSE(c.levy);
}

TEST_CASE("iff is desugared before classification") {
  CHECK(classify(P("forall u in x. (u in y <-> u in z)")).levy->name() == "Delta0");
}

TEST_CASE("prefix shape") {
  CHECK(prefix_shape(P("exists a. exists b. forall c. a in c")) ==
        std::vector<Block>{{QuantKind::Exists, 2}, {QuantKind::Forall, 1}});
  CHECK(prefix_shape(P("a in b")).empty());
  CHECK(prefix_shape(P("forall u in y. exists x. x in u")).empty());
  CHECK(matrix(P("forall x. exists y. x in y")) == P("x in y"));
}

TEST_CASE("sim examples") {
  CHECK(sim(P("forall x. x in y")) == P("exists x. ~(x in y)"));
  CHECK(sim(P("forall y. exists x. x in y")) == P("exists y. forall x. ~(x in y)"));
  CHECK(sim(P("forall x. ~(x in y)")) == P("exists x. x in y"));
  CHECK_THROWS_AS(sim(P("exists x. x in y")), NotPiFormula);
  CHECK_THROWS_AS(sim(P("~(forall x. x in y)")), NotPiFormula);
  CHECK(sim(P("exists x. x in y"), true) == P("forall x. ~(x in y)"));
}

TEST_CASE("sim agrees with negation over V3") {
  for (const Formula& f : tst::sim_fixtures()) {
    const Formula s = sim(f);
    CHECK_MESSAGE(equivalent_v3(s, Formula::neg(f)), print(f));
    CHECK_MESSAGE(equivalent_v3(sim(s, true), f), print(f));
  }
}

TEST_CASE("sim maps Pi_k to Sigma_k") {
  for (const Formula& f : tst::sim_fixtures()) {
    const auto c = classify(f, Family::Takahashi);
    REQUIRE(c);
    const auto d = classify(sim(f), Family::Takahashi);
    REQUIRE(d);
    if (c->shape == Shape::Pi) {
      CHECK(d->shape == Shape::Sigma);
      CHECK(d->n == c->n);
    } else {
      CHECK(c->shape == Shape::Delta0);
      CHECK(d->shape == Shape::Delta0);
    }
  }
}

TEST_CASE("Levy acceptance implies Takahashi acceptance at no higher index") {
  tst::Rng rng(77);
  for (int i = 0; i < 500; ++i) {
    const Formula f = tst::prefix_formula(rng, static_cast<int>(tst::pick(rng, 4)), tst::coin(rng), tst::coin(rng));
    const auto c = classify(f);
    if (!c.levy) continue;
    REQUIRE(c.takahashi);
    CHECK(c.takahashi->n <= c.levy->n);
  }
}

TEST_CASE("Delta0 formulas sit inside Sigma1 and Pi1") {
  tst::Rng rng(78);
  for (int i = 0; i < 200; ++i) {
    const Formula d = tst::prefix_formula(rng, 0, true, tst::coin(rng));
    REQUIRE(is_delta0(d, Family::Takahashi));
    const auto s = classify(Formula::exists("fresh", d), Family::Takahashi);
    const auto p = classify(Formula::forall("fresh", d), Family::Takahashi);
    CHECK(s->name() == "Sigma1");
    CHECK(p->name() == "Pi1");
  }
}

}
