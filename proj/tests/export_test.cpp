#include "doctest.h"
#include "support.hpp"

#include "stratkit/export.hpp"

using namespace stratkit;
namespace tst = stratkit::testing;
using nlohmann::json;

namespace {
Formula P(const std::string& s) { return parse(s, Signature::permissive()); }
}  // namespace

TEST_SUITE("export") {

TEST_CASE("AST round trip") {
  tst::Rng rng(99);
  tst::GenOptions o;
  o.subset = o.pairs = o.sethood = true;
  o.unary = {"P"};
  o.binary = {"R"};
  for (int i = 0; i < 300; ++i) {
    const Formula f = tst::random_formula(rng, o);
    const json j = jsonio::ast(f);
    CHECK(jsonio::formula_from_ast(j) == f);
    CHECK(jsonio::formula_from_ast(json::parse(j.dump())) == f);
  }
  const Term t = Term::pair(Term::var("a"), Term::var("b"));
  CHECK(jsonio::term_from_ast(jsonio::ast(t)) == t);
}

TEST_CASE("AST shape") {
  const json j = jsonio::ast(P("forall u in x. u in y"));
  CHECK(j.contains("kind"));
  CHECK(j.contains("children"));
  CHECK(j.at("var") == "u");
  CHECK(j.contains("bound"));
  CHECK_THROWS(jsonio::formula_from_ast(json{{"kind", "nonsense"}, {"children", json::array()}}));
  CHECK_THROWS(jsonio::formula_from_ast(json::array()));
}

TEST_CASE("stratification reports") {
  json j = jsonio::report(strat::stratify(P("x in y & y in z")));
  CHECK(j.at("status") == "stratified");
  CHECK(j.at("types").at("x") == 0);
  CHECK(j.at("types").at("z") == 2);
  CHECK(j.at("max") == 2);
  j = jsonio::report(strat::stratify(P("exists x. x in x")));
  CHECK(j.at("status") == "unstratifiable");
  CHECK(j.at("witness").at("netOffset") != 0);
  CHECK_FALSE(j.at("witness").at("cycle").empty());
}

TEST_CASE("classification and translation reports") {
  const Formula f = P("forall x. exists y. x in y");
  json j = jsonio::report(hierarchy::classify(f), f);
  CHECK(j.at("levy") == "Pi2");
  CHECK(j.at("prefix").size() == 2);
  CHECK(j.at("prefix")[0].at("quantifier") == "forall");
  j = jsonio::report(cat::translate(P("x in y")));
  CHECK(j.at("phiSubT").at("text") == "x_t1 subT y_t0");
  CHECK(j.at("phiSubT").at("sortCheck") == true);
  CHECK(j.at("retyping").at("x").at("k") == 1);
}

TEST_CASE("back-and-forth reports") {
  const json j = jsonio::report(bf::build_self_embedding(0, Cut(), 20, 0));
  CHECK(j.at("pass") == true);
  CHECK(j.contains("note"));
  bool has_limit = false;
  for (const auto& c : j.at("checks")) has_limit = has_limit || c.at("scope") == "limit";
  CHECK(has_limit);
  CHECK(jsonio::condition({{1, Rational(1, 2)}}).at(0).at("fx") == "1/2");
}

}
