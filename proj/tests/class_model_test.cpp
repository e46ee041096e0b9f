#include "corpus.hpp"
#include "doctest.h"
#include "support.hpp"

#include "stratkit/class_model.hpp"

using namespace stratkit;
using namespace stratkit::kripke;
namespace tst = stratkit::testing;

namespace {

Formula Pf(const std::string& s) { return parse(s, Signature::permissive()); }

SetStructure atoms_and_sets(std::size_t n, std::vector<std::pair<std::size_t, std::uint64_t>> sets) {
  SetStructure N;
  N.n = n;
  N.sethood.assign(n, false);
  N.mem.assign(n, std::vector<bool>(n, false));
  for (auto [x, ext] : sets) {
    N.sethood[x] = true;
    for (std::size_t u = 0; u < n; ++u) N.mem[u][x] = (ext >> u) & 1u;
  }
  return N;
}

std::size_t count(const std::vector<bool>& v) { return static_cast<std::size_t>(std::count(v.begin(), v.end(), true)); }

}  // namespace

TEST_SUITE("class_model") {

TEST_CASE("one atom") {
  const ClassModel M = build_class_model(atoms_and_sets(1, {}));
  CHECK(M.size == 3);
  CHECK(count(M.setom) == 1);
  CHECK(M.setom[M.t[0]]);
  CHECK(count(M.C) == 2);
  CHECK(count(M.S) == 0);
  CHECK(M.C[M.p[0]]);
  CHECK(M.C[M.p[1]]);
  CHECK(M.mem[M.t[0]][M.p[1]]);
  CHECK_FALSE(M.mem[M.t[0]][M.p[0]]);
}

TEST_CASE("one set with empty extension is glued to the empty class") {
  const SetStructure N = atoms_and_sets(1, {{0, 0}});
  const ClassModel M = build_class_model(N);
  CHECK(M.size == N.n + (std::size_t{1} << N.n) - 1);
  CHECK(M.t[0] == M.p[0]);
  CHECK(M.S[M.t[0]]);
  CHECK(verify_pushout(N, M));
  CHECK(verify_setom_iso(N, M));
}

TEST_CASE("violations are reported") {
  SetStructure dup = atoms_and_sets(3, {{0, 0b100}, {1, 0b100}});
  try {
    build_class_model(dup);
    FAIL("expected ExtensionalityViolation");
  } catch (const ExtensionalityViolation& e) {
    CHECK(std::set<std::size_t>{e.a(), e.b()} == std::set<std::size_t>{0, 1});
  }
  SetStructure bad = atoms_and_sets(2, {});
  bad.mem[0][1] = true;
  try {
    build_class_model(bad);
    FAIL("expected SethoodViolation");
  } catch (const SethoodViolation& e) {
    CHECK(e.element() == 1);
  }
  SetStructure big = atoms_and_sets(kMaxClassModelBase + 1, {});
  CHECK_THROWS(build_class_model(big));
}

TEST_CASE("hereditarily finite models") {
  const SetStructure N = from_hf(hf::v_stage(3));
  CHECK(N.n == 4);
  CHECK(count(N.sethood) == 4);
  const ClassModel M = build_class_model(N);
  CHECK(M.size == 4 + 16 - 4);
  CHECK(check_class_model(N, M).all());
  // <{}, {}> = {{{}}} lies in V_3
  CHECK_FALSE(N.pair.empty());
}

TEST_CASE("random structures satisfy the class axioms") {
  tst::Rng rng(50);
  std::vector<Formula> cc;
  for (const auto& s : tst::class_comprehension_bodies()) cc.push_back(class_comprehension(Pf(s)));
  std::vector<std::pair<Formula, Formula>> sc;
  for (const auto& s : tst::set_comprehension_bodies())
    sc.push_back({set_comprehension_in_class(Pf(s)), set_comprehension(Pf(s))});
  int transfer_true = 0, transfer_false = 0;
  for (int i = 0; i < 25; ++i) {
    const SetStructure N = tst::random_set_structure(rng, 1 + tst::pick(rng, 4));
    const ClassModel M = build_class_model(N);
    const ClassModelReport r = check_class_model(N, M);
    CHECK(r.ext_c);
    CHECK(r.classhood);
    CHECK(r.setomhood);
    CHECK(r.s_is_sm_cap_c);
    CHECK(r.setom_iso);
    CHECK(r.pushout);
    const CatStructure SM = M.structure();
    for (const auto& f : cc) CHECK_MESSAGE(holds(f, SM), print(f));
    const CatStructure SN = as_structure(N);
    for (const auto& [in_m, in_n] : sc) {
      const bool a = holds(in_m, SM), b = holds(in_n, SN);
      CHECK_MESSAGE(a == b, print(in_n));
      (b ? transfer_true : transfer_false)++;
    }
  }
  CHECK(transfer_true > 0);
  CHECK(transfer_false > 0);
}

TEST_CASE("relativisation guards every quantifier") {
  CHECK(relativize(Pf("forall x. exists y in x. y = y"), "Setom") ==
        Pf("forall x. (Setom(x) -> exists y. (Setom(y) & (y in x & y = y)))"));
}

TEST_CASE("comprehension builders") {
  CHECK(class_comprehension(Pf("z in y")) ==
        Pf("forall y. exists x. (C(x) & forall z. (Setom(z) -> (z in x <-> z in y)))"));
  CHECK(set_comprehension(Pf("z in y")) == Pf("forall y. exists x. (S(x) & forall z. (z in x <-> z in y))"));
  CHECK_THROWS_AS(class_comprehension(Pf("z in x")), std::invalid_argument);
}

}
