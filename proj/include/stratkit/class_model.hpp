#pragma once

// Finite single-world version of the set-model to class-model construction:
// M = N + P(N), with each set of N glued to its extension.

#include <array>
#include <cstddef>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratkit/formula.hpp"
#include "stratkit/hfsets.hpp"
#include "stratkit/kripke.hpp"

namespace stratkit::kripke {

/// A finite L_Set structure on {0..n-1}.
struct SetStructure {
  std::size_t n = 0;
  std::vector<bool> sethood;                    // S
  std::vector<std::vector<bool>> mem;           // mem[a][b]: a in b
  std::set<std::array<std::size_t, 3>> pair;    // graph of the (partial) pair function

  std::uint64_t extension(std::size_t x) const;  // bit u set iff u in x
  void validate() const;
};

/// All sets of the model, membership inherited, S everywhere, pairs as
/// Kuratowski pairs when they land in the model.
SetStructure from_hf(const hf::FinModel& model);

/// As a one-sorted structure (sort U) on the one-point poset, relations
/// "S", "in", "P".
CatStructure as_structure(const SetStructure& N);

class ExtensionalityViolation : public std::runtime_error {
 public:
  ExtensionalityViolation(std::size_t a, std::size_t b);
  std::size_t a() const { return a_; }
  std::size_t b() const { return b_; }

 private:
  std::size_t a_, b_;
};

/// N has a member-bearing element outside S (its members would be lost).
class SethoodViolation : public std::runtime_error {
 public:
  explicit SethoodViolation(std::size_t x);
  std::size_t element() const { return x_; }

 private:
  std::size_t x_;
};

struct ClassModel {
  std::size_t size = 0;
  std::vector<std::size_t> t;     // N -> M
  std::vector<std::size_t> p;     // subset mask of N -> M
  std::vector<bool> C, setom, S;
  std::vector<std::vector<bool>> mem;
  std::set<std::array<std::size_t, 3>> pair;

  CatStructure structure() const;  // relations "C", "Setom", "S", "in", "P"
};

constexpr std::size_t kMaxClassModelBase = 12;

/// Throws ExtensionalityViolation / SethoodViolation.
ClassModel build_class_model(const SetStructure& N);

/// The gluing is a pushout of t and p: both injective, t(x) = p(ext x)
/// exactly for sets x, and jointly surjective.
bool verify_pushout(const SetStructure& N, const ClassModel& M);

/// t is an isomorphism of N onto the Setom part (S, in, P preserved and reflected).
bool verify_setom_iso(const SetStructure& N, const ClassModel& M);

Formula relativize(const Formula& f, const std::string& predicate);

/// Classical truth of a sentence in a one-world structure (free variables
/// are universally closed).
bool holds(const Formula& f, const CatStructure& M);

struct ClassModelReport {
  bool ext_c = false;
  bool classhood = false;
  bool setomhood = false;
  bool s_is_sm_cap_c = false;
  bool setom_iso = false;
  bool pushout = false;

  bool all() const { return ext_c && classhood && setomhood && s_is_sm_cap_c && setom_iso && pushout; }
};

ClassModelReport check_class_model(const SetStructure& N, const ClassModel& M);

/// exists x. (C(x) & forall z. (Setom(z) -> (z in x <-> phi))), closed universally
/// over phi's other free variables.  `phi` must not mention x.
Formula class_comprehension(const Formula& phi, const std::string& z = "z", const std::string& x = "x");

/// forall ys in Setom. exists x. (Setom(x) & S(x) & forall z in Setom. (z in x <-> phi^Setom))
Formula set_comprehension_in_class(const Formula& phi, const std::string& z = "z", const std::string& x = "x");

/// forall ys. exists x. (S(x) & forall z. (z in x <-> phi))
Formula set_comprehension(const Formula& phi, const std::string& z = "z", const std::string& x = "x");

}  // namespace stratkit::kripke
