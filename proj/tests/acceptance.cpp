// Acceptance driver: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "kripke_laws.hpp"
#include "support.hpp"

#include "stratkit/backforth.hpp"
#include "stratkit/class_model.hpp"
#include "stratkit/export.hpp"
#include "stratkit/hfsets.hpp"
#include "stratkit/hierarchy.hpp"
#include "stratkit/kripke.hpp"
#include "stratkit/strat.hpp"
#include "stratkit/strat2cat.hpp"

using namespace stratkit;
namespace tst = stratkit::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  double limit_s = 0;  // 0: no time limit

  // Records a failed sub-check; the first message is kept.
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

Formula Pf(const std::string& s) { return parse(s, Signature::permissive()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- 1 ---------------------------------------------------------------------

Outcome stratification() {
  Outcome o;
  o.limit_s = 1;
  int accepted = 0;
  for (const auto& inst : tst::nf_instances()) {
    const Formula f = Pf(inst.body);
    const auto r = strat::stratify(f);
    o.require(r.stratified() == inst.stratified, inst.name + ": wrong verdict");
    if (r.stratified()) {
      ++accepted;
      o.require(strat::check_stratification(f, r.stratification->types), inst.name + ": assignment does not check");
    } else {
      o.require(r.witness && strat::verify_witness(f, *r.witness), inst.name + ": witness does not verify");
    }
  }
  const Formula russell = Pf(tst::russell_body());
  const auto r = strat::stratify(russell);
  o.require(!r.stratified() && r.witness && strat::verify_witness(russell, *r.witness),
            "Russell body not rejected with a verified witness");
  if (o.pass)
    o.detail = std::to_string(accepted) + " instances stratified, Russell witness of net offset " +
               std::to_string(r.witness->net_offset()) + " verified";
  return o;
}

// --- 2 ---------------------------------------------------------------------

Outcome hierarchy_checks() {
  using hierarchy::Family;
  Outcome o;
  const Signature l0 = Signature::l0();
  for (const char* s : {tst::trans_formula(), tst::ord_formula()}) {
    const Formula f = parse(s, l0);
    o.require(hierarchy::is_delta0(f, Family::Levy) && hierarchy::is_delta0(f, Family::Takahashi),
              std::string(s) + " is not Delta0 in both families");
  }
  const Formula pg = parse(tst::powerset_graph_formula(), l0);
  o.require(hierarchy::is_delta0(pg, Family::Takahashi), "powerset graph not Takahashi-Delta0");
  o.require(!hierarchy::is_delta0(pg, Family::Levy) && !hierarchy::classify(pg, Family::Levy),
            "powerset graph accepted by the Levy grammar");
  int mismatches = 0, n = 0;
  for (const Formula& f : tst::sim_fixtures()) {
    ++n;
    const Formula s = hierarchy::sim(f);
    if (!tst::equivalent_v3(s, Formula::neg(f)) || !tst::equivalent_v3(hierarchy::sim(s, true), f)) ++mismatches;
  }
  o.require(n == 50, "expected 50 sim fixtures");
  o.require(mismatches == 0, std::to_string(mismatches) + " sim mismatches over V_3");
  if (o.pass) o.detail = "sim round trip over V_3: " + std::to_string(n) + " formulas, 0 mismatches";
  return o;
}

// --- 3 ---------------------------------------------------------------------

Outcome hf_checks() {
  Outcome o;
  const std::size_t expected[] = {0, 1, 2, 4, 16, 65536};
  for (unsigned k = 0; k <= 5; ++k)
    o.require(hf::v_stage(k).size() == expected[k], "|V_" + std::to_string(k) + "| wrong");

  tst::Rng rng(200);
  tst::GenOptions g;
  g.vars = {"y", "z", "w"};
  g.unbounded = false;
  g.subset = true;
  g.depth = 3;
  int abs_cases = 0;
  while (abs_cases < 200) {
    const Formula f = tst::random_formula(rng, g);
    o.require(hierarchy::is_delta0(f, hierarchy::Family::Takahashi), "generator left Delta0P");
    hf::Valuation v;
    std::vector<hf::HFSet> seed;
    for (const char* name : {"y", "z", "w"}) {
      v[name] = tst::random_hfset(rng, 2 + static_cast<unsigned>(tst::pick(rng, 2)));
      seed.push_back(v[name]);
    }
    const hf::FinModel small(hf::stc(hf::HFSet::of(seed)).elements());
    seed.push_back(tst::random_hfset(rng, 3));
    seed.push_back(tst::random_hfset(rng, 3));
    const hf::FinModel large(hf::stc(hf::HFSet::of(seed)).elements());
    o.require(small.is_supertransitive() && large.is_supertransitive(), "model not supertransitive");
    const bool direct = hf::sat_delta0p(f, v);
    o.require(hf::eval(f, small, v) == direct && hf::eval(f, large, v) == direct, "absoluteness fails: " + print(f));
    ++abs_cases;
  }

  int round_trips = 0;
  for (int i = 0; i < 100; ++i) {
    const hf::HFSet x = tst::random_hfset(rng, 3);
    std::vector<hf::HFSet> labels;
    hf::FinDigraph gr = hf::graph_of(x, &labels);
    std::vector<std::size_t> perm(gr.nodes);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    hf::FinDigraph h{gr.nodes, {}, perm[gr.point]};
    for (auto [c, p] : gr.edges) h.edges.emplace_back(perm[c], perm[p]);
    const auto m = hf::mostowski(h);
    bool ok = m[h.point] == x && hf::rank(x) <= 3;
    for (std::size_t k = 0; k < gr.nodes; ++k) ok = ok && m[perm[k]] == labels[k];
    o.require(ok, "Mostowski round trip fails on " + hf::to_string(x));
    round_trips += ok;
  }
  if (o.pass)
    o.detail = "V_0..V_5 sizes ok, " + std::to_string(abs_cases) + " absoluteness cases, " +
               std::to_string(round_trips) + " Mostowski round trips";
  return o;
}

// --- 4 ---------------------------------------------------------------------

Outcome categorical() {
  using namespace kripke;
  Outcome o;
  o.limit_s = 60;
  const tst::LawReport laws = tst::exhaustive_laws(3, 2);
  o.require(laws.failures == 0, "law failure: " + laws.first_failure);

  tst::Rng rng(17);
  tst::GenOptions g;
  g.bounded = false;
  g.unary = {"P", "Q"};
  g.binary = {"R"};
  g.depth = 4;
  for (int i = 0; i < 100; ++i) {
    const CatStructure M = tst::random_structure(rng, tst::random_poset(rng), 2);
    const Formula f = tst::random_formula(rng, g);
    std::string where;
    o.require(tst::agrees_with_force(f, M, &where), "interpret differs from force on " + print(f) + " at " + where);
  }

  std::vector<Formula> seq;
  for (const auto& s : tst::intuitionistic_sequents()) seq.push_back(Pf(s));
  o.require(seq.size() == 20, "expected 20 sequents");
  std::size_t structures = 0;
  auto check_sequents = [&](const CatStructure& M) {
    ++structures;
    for (const auto& f : seq) o.require(valid(f, M), "sequent not valid: " + print(f));
  };
  for (const auto& P : tst::small_posets()) {
    if (P.size() > 2) continue;
    for (const auto& X : tst::all_presheaves(P, 2, 1)) {
      const auto subs = all_subpresheaves(X);
      for (const auto& a : subs)
        for (const auto& b : subs) {
          CatStructure M(P);
          M.sorts.emplace("U", X);
          M.relations["P"] = {{"U"}, a};
          M.relations["Q"] = {{"U"}, b};
          M.relations["R"] = {{"U", "U"}, tst::random_subpresheaf(rng, M.product({"U", "U"}).presheaf())};
          check_sequents(M);
        }
    }
  }
  for (int i = 0; i < 200; ++i) check_sequents(tst::random_structure(rng, tst::random_poset(rng), 2));

  int refuted = 0;
  for (const auto& s : tst::classical_principles()) {
    const Formula f = Pf(s);
    bool found = false;
    for (const auto& P : tst::small_posets()) {
      if (P.size() == 1 || found) continue;
      for (const auto& X : tst::all_presheaves(P, 1, 1)) {
        const auto subs = all_subpresheaves(X);
        for (const auto& a : subs)
          for (const auto& b : subs) {
            CatStructure M(P);
            M.sorts.emplace("U", X);
            M.relations["P"] = {{"U"}, a};
            M.relations["Q"] = {{"U"}, b};
            found = found || !valid(f, M);
          }
      }
    }
    o.require(found, "classical principle never fails: " + s);
    refuted += found;
  }

  const Formula lem = Pf("P(x) | ~P(x)");
  o.require(!valid(lem, tst::lem_counterexample()), "LEM holds on the 2-chain");
  for (int i = 0; i < 100; ++i) {
    const CatStructure M = tst::random_structure(rng, FinPoset::point(), 3);
    o.require(valid(lem, M) && valid(Pf("R(x, y) | ~R(x, y)"), M), "LEM fails on a point");
  }
  if (o.pass)
    o.detail = std::to_string(laws.checks) + " law checks on " + std::to_string(laws.presheaves) + " presheaves, " +
               "100 interpret/force cases, 20 sequents on " + std::to_string(structures) + " structures, " +
               std::to_string(refuted) + "/5 classical principles refuted";
  return o;
}

// --- 5 ---------------------------------------------------------------------

Outcome class_models() {
  using namespace kripke;
  Outcome o;
  o.limit_s = 30;
  std::vector<Formula> cc;
  for (const auto& s : tst::class_comprehension_bodies()) cc.push_back(class_comprehension(Pf(s)));
  std::vector<std::pair<Formula, Formula>> sc;
  for (const auto& s : tst::set_comprehension_bodies())
    sc.push_back({set_comprehension_in_class(Pf(s)), set_comprehension(Pf(s))});
  o.require(cc.size() == 10, "expected 10 class comprehension fixtures");
  tst::Rng rng(50);
  int transfers = 0;
  for (int i = 0; i < 50; ++i) {
    const SetStructure N = tst::random_set_structure(rng, 1 + tst::pick(rng, 5));
    const ClassModel M = build_class_model(N);
    const ClassModelReport r = check_class_model(N, M);
    const std::string at = " (model " + std::to_string(i) + ")";
    o.require(r.ext_c, "Ext_C fails" + at);
    o.require(r.classhood, "Classhood fails" + at);
    o.require(r.setomhood, "Setomhood fails" + at);
    o.require(r.s_is_sm_cap_c, "S != Sm & C" + at);
    o.require(r.setom_iso, "t is not an isomorphism onto Setom" + at);
    o.require(r.pushout, "pushout check fails" + at);
    const CatStructure SM = M.structure();
    for (const auto& f : cc) o.require(holds(f, SM), "CC_C fails: " + print(f) + at);
    const CatStructure SN = as_structure(N);
    for (const auto& [in_m, in_n] : sc) {
      o.require(holds(in_m, SM) == holds(in_n, SN), "SC_S transfer fails: " + print(in_n) + at);
      ++transfers;
    }
  }
  if (o.pass) o.detail = "50 models, 10 CC_C fixtures each, " + std::to_string(transfers) + " SC_S transfers";
  return o;
}

// --- 6 ---------------------------------------------------------------------

bool term_has_iota(const Term& t) {
  if (!t.is_var() && t.name == kIota) return true;
  return std::any_of(t.args.begin(), t.args.end(), term_has_iota);
}

bool free_of_mem_and_iota(const Formula& f) {
  if (f.is_atomic()) {
    if (f.kind() == FormulaKind::Mem) return false;
    const auto ts = f.terms();
    return std::none_of(ts.begin(), ts.end(), term_has_iota);
  }
  if (f.kind() == FormulaKind::Not) return free_of_mem_and_iota(f.body());
  if (f.is_quantifier())
    return free_of_mem_and_iota(f.body()) && !(f.is_bounded_quantifier() && term_has_iota(f.bound()));
  return free_of_mem_and_iota(f.lhs()) && free_of_mem_and_iota(f.rhs());
}

bool confluent(const cat::ObjExpr& o, const std::string& nf) {
  const auto steps = cat::rewrite_steps(o);
  if (steps.empty()) return cat::to_string(o) == nf;
  return std::all_of(steps.begin(), steps.end(), [&](const cat::ObjExpr& s) {
    return cat::t_weight(s) < cat::t_weight(o) && confluent(s, nf);
  });
}

Outcome translation() {
  Outcome o;
  const auto corpus = tst::translation_corpus();
  o.require(corpus.size() == 30, "expected 30 corpus formulas");
  for (const auto& s : corpus) {
    const Formula f = Pf(s);
    const cat::Translation t = cat::translate(f);
    o.require(free_of_mem_and_iota(t.phi_subT.formula), "phi_subT mentions in or iota: " + s);
    o.require(cat::sort_check(t.phi_subT), "phi_subT does not sort-check: " + s);
    const Formula back = cat::collapse_degenerate(t.phi_subT);
    o.require(alpha_equivalent(back, t.source), "collapse is not an alpha-identity: " + s);
    o.require(tst::equivalent_v3(f, back), "V_3 disagreement: " + s);
  }
  const auto objs = cat::all_objexprs(6);
  for (const auto& x : objs)
    o.require(confluent(x, cat::to_string(cat::normalize_obj(x))), "normalize_obj not confluent at " + cat::to_string(x));
  if (o.pass)
    o.detail = "30 formulas translated and collapsed, " + std::to_string(objs.size()) +
               " object expressions confluent";
  return o;
}

// --- 7 ---------------------------------------------------------------------

template <class F>
Outcome timed_reproducible(const std::string& what, F&& build, std::string* dump_out) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const std::string first = build();
  const double t = seconds_since(t0);
  o.require(t < 10, what + " took " + std::to_string(t) + " s");
  o.require(build() == first, what + " is not reproducible");
  *dump_out = first;
  return o;
}

Outcome back_and_forth() {
  Outcome o;
  std::string dump;
  bf::Run iso;
  auto r = timed_reproducible("iso", [&] {
    iso = bf::build_iso(bf::EnumStructure::rationals(), bf::EnumStructure::dyadics(), 200);
    return jsonio::report(iso).dump();
  }, &dump);
  o.require(r.pass, r.detail);
  o.require(iso.all_pass(), "iso checks fail");
  RationalEnumeration q;
  DyadicEnumeration d;
  std::set<Rational> image;
  for (const auto& [x, y] : iso.result) image.insert(y);
  for (std::size_t i = 0; i < 100; ++i) {
    o.require(iso.result.count(q.at(i)) == 1, "iso domain misses " + to_string(q.at(i)));
    o.require(image.count(d.at(i)) == 1, "iso image misses " + to_string(d.at(i)));
  }

  bf::Run se;
  r = timed_reproducible("selfembed", [&] {
    se = bf::build_self_embedding(0, Cut(), 300);
    return jsonio::report(se).dump();
  }, &dump);
  o.require(r.pass, r.detail);
  for (const char* key : {"contractive", "bounded", "initial", "topless"}) {
    const auto it = std::find_if(se.checks.begin(), se.checks.end(),
                                 [&](const bf::Check& c) { return c.name.find(key) != std::string::npos; });
    o.require(it != se.checks.end() && it->pass, std::string("selfembed check fails: ") + key);
  }

  bf::Family fam;
  r = timed_reproducible("family", [&] {
    fam = bf::embedding_family(3, 300);
    return jsonio::report(fam).dump();
  }, &dump);
  o.require(r.pass, r.detail);
  o.require(fam.all_pass(), "family checks fail");
  o.require(fam.branches.size() == 8 && fam.comparisons == 28, "family has the wrong shape");
  if (o.pass)
    o.detail = "iso " + std::to_string(iso.result.size()) + " pairs, selfembed " + std::to_string(se.result.size()) +
               " pairs, family 8 embeddings / 28 comparisons, all reproducible";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"stratification of NF instances", stratification},
      {"Levy and Takahashi hierarchies", hierarchy_checks},
      {"hereditarily finite sets", hf_checks},
      {"presheaf semantics", categorical},
      {"class model construction", class_models},
      {"translation to the categorical signature", translation},
      {"back-and-forth constructions", back_and_forth},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double t = seconds_since(t0);
    if (o.limit_s > 0 && t >= o.limit_s) {
      if (o.pass) o.detail = "over the " + std::to_string(static_cast<int>(o.limit_s)) + " s limit";
      o.pass = false;
    }
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f s", t);
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << o.detail << " ("
              << secs << ")" << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
