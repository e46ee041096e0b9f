#pragma once

// Fixture formula lists used by the tests and the acceptance driver.

#include <string>
#include <vector>

#include "support.hpp"

#include "stratkit/formula.hpp"

namespace stratkit::testing {

struct NfInstance {
  std::string name;
  std::string body;      // the formula checked for stratification
  bool stratified;
};

/// The five NF comprehension instances; the self-membered set is checked
/// through its defining body x in x.
inline std::vector<NfInstance> nf_instances() {
  return {
      {"universal set", "exists V. forall u. u in V", true},
      {"self-membered set", "exists x. x in x", false},
      {"complements", "forall x. exists y. forall u. (u in y <-> ~(u in x))", true},
      {"powersets", "forall x. exists y. forall u. (u in y <-> u sub x)", true},
      {"cardinality two",
       "exists x. forall u. (u in x <-> (exists p in u. exists q in u. (~(p = q) & forall r in u. (r = p | r = q))))",
       true},
  };
}

inline const char* russell_body() { return "forall u. (u in x <-> ~(u in u))"; }

inline const char* trans_formula() { return "forall u in x. forall r in u. r in x"; }
inline const char* ord_formula() {
  return "(forall u in x. forall r in u. r in x) & (forall u in x. forall v in x. (u in v | v in u))";
}
inline const char* powerset_graph_formula() { return "(forall v sub u. v in y) & (forall v in y. forall r in v. r in u)"; }

/// Prefix formulas over a bounded matrix: `blocks` alternating blocks over
/// the variables a, b, c with free variables y, z, outermost block
/// universal iff `start_forall`.
inline Formula prefix_formula(Rng& rng, int blocks, bool start_forall, bool takahashi) {
  GenOptions o;
  o.vars = {"a", "b", "c", "y", "z"};
  o.unbounded = false;
  o.bounded = true;
  o.subset = takahashi;
  o.depth = 3;
  Formula m = random_formula(rng, o);
  const std::vector<std::string> bvars{"a", "b", "c"};
  // blk[0] is the outermost block
  std::vector<std::vector<std::string>> blk;
  std::size_t next = 0;
  for (int i = 0; i < blocks; ++i) {
    std::vector<std::string> b;
    const std::size_t len = 1 + pick(rng, 2);
    for (std::size_t j = 0; j < len && next < bvars.size(); ++j) b.push_back(bvars[next++]);
    if (b.empty()) b.push_back(bvars[pick(rng, bvars.size())]);
    blk.push_back(b);
  }
  // apply from innermost (last) block outward
  for (int i = blocks - 1; i >= 0; --i) {
    const bool forall = (i % 2 == 0) == start_forall;
    const auto& b = blk[static_cast<std::size_t>(i)];
    for (auto it = b.rbegin(); it != b.rend(); ++it)
      m = forall ? Formula::forall(*it, m) : Formula::exists(*it, m);
  }
  return m;
}

/// 50 bar-Pi formulas (k = 0..3) for the sim round trip.
inline std::vector<Formula> sim_fixtures() {
  std::vector<Formula> out;
  const Signature l0 = Signature::l0();
  for (const char* s : {"forall x. x in y", "forall y. exists x. x in y", trans_formula(), ord_formula(),
                        "forall a. forall b. (a in b -> exists c in b. c = a)", "forall a sub y. a in z",
                        "forall a. exists b. forall c. (c in b <-> c in a & c in y)",
                        "forall a. ~(a in a) & y in z"})
    out.push_back(parse(s, l0));
  Rng rng(31337);
  while (out.size() < 50) {
    const int blocks = static_cast<int>(pick(rng, 4));
    out.push_back(prefix_formula(rng, blocks, true, coin(rng)));
  }
  return out;
}

/// Stratified formulas over in, =, S and pairs for the translation pipeline.
inline std::vector<std::string> translation_corpus() {
  return {
      "x in y",
      "x = y",
      "x in y & y in z",
      "S(x) & x in y",
      "exists y. x in y",
      "forall u. (u in x <-> u in y)",
      "forall u in x. exists r in u. r in y",
      "exists V. forall u. u in V",
      "forall x. exists y. forall u. (u in y <-> ~(u in x))",
      "forall x. exists y. forall u. (u in y <-> u sub x)",
      "exists x. forall u. (u in x <-> (exists p in u. exists q in u. (~(p = q) & forall r in u. (r = p | r = q))))",
      "x sub y",
      "forall v sub u. v in y",
      "(forall v sub u. v in y) & (forall v in y. forall r in v. r in u)",
      "<x, y> in z",
      "<x, y> = <y, x>",
      "exists p. (p = <a, b> & p in c)",
      "~(x in y) | y = z",
      "(x in y -> z in y) & z = x",
      "forall u. (u in x -> u in y) -> x sub y",
      "exists z. (z in x & z in y)",
      "forall z in x. exists w in y. z = w",
      "S(y) -> (exists x. x in y)",
      "forall a. forall b. (a in b -> exists c. (c in b & c = a))",
      "exists w. forall u. (u in w <-> u = x | u = y)",
      "exists w. forall u. (u in w <-> (exists v. (v in u & v = x)))",
      "forall x. (S(x) & x in y -> exists z. (z in x | x = x))",
      "bot -> x in y",
      "~(exists u. (u in x & ~(u in y)))",
      "forall u. (u in x <-> u in y) -> x = y",
  };
}

/// Intuitionistically provable sequents, written as implications with
/// unary atoms P, Q and binary R over the sort U.
inline std::vector<std::string> intuitionistic_sequents() {
  return {
      "P(x) -> P(x)",
      "P(x) & Q(x) -> Q(x) & P(x)",
      "P(x) | Q(x) -> Q(x) | P(x)",
      "P(x) -> (Q(x) -> P(x))",
      "(P(x) -> Q(x)) -> ((Q(x) -> R(x, x)) -> (P(x) -> R(x, x)))",
      "~~(P(x) | ~P(x))",
      "P(x) -> ~~P(x)",
      "~~~P(x) -> ~P(x)",
      "(P(x) -> Q(x)) -> (~Q(x) -> ~P(x))",
      "~(P(x) | Q(x)) <-> ~P(x) & ~Q(x)",
      "~P(x) | ~Q(x) -> ~(P(x) & Q(x))",
      "bot -> P(x)",
      "P(x) & (Q(x) | R(x, x)) <-> (P(x) & Q(x)) | (P(x) & R(x, x))",
      "(forall y. P(y)) -> P(x)",
      "P(x) -> exists y. P(y)",
      "(exists y. P(y) & Q(y)) -> (exists y. P(y)) & (exists y. Q(y))",
      "(forall y. P(y) & Q(y)) <-> (forall y. P(y)) & (forall y. Q(y))",
      "(exists y. ~P(y)) -> ~forall y. P(y)",
      "~(exists y. P(y)) <-> forall y. ~P(y)",
      "(exists y. forall z. R(y, z)) -> forall z. exists y. R(y, z)",
  };
}

/// Classically valid principles that are not intuitionistically valid.
inline std::vector<std::string> classical_principles() {
  return {
      "P(x) | ~P(x)",
      "~~P(x) -> P(x)",
      "((P(x) -> Q(x)) -> P(x)) -> P(x)",
      "~(P(x) & Q(x)) -> ~P(x) | ~Q(x)",
      "(P(x) -> Q(x)) | (Q(x) -> P(x))",
  };
}

/// Bodies phi(z, params) for class comprehension instances.
inline std::vector<std::string> class_comprehension_bodies() {
  return {
      "z = z",
      "~(z = z)",
      "z in y",
      "~(z in y)",
      "S(z)",
      "exists w. (w in z)",
      "forall w. (w in z -> w in y)",
      "~(z in z)",
      "z in y | z = y",
      "exists w. (z in w & C(w))",
  };
}

/// L_Set bodies for the set comprehension transfer check.
inline std::vector<std::string> set_comprehension_bodies() {
  return {
      "z = z",
      "~(z = z)",
      "z in y",
      "~(z in y)",
      "S(z)",
      "~(z in z)",
      "z = y",
      "exists w. z in w",
      "forall w. (w in z -> w in y)",
      "exists w. (w in z)",
  };
}

}  // namespace stratkit::testing
