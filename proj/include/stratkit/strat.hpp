#pragma once

// Stratification inference: each term of a formula gets a natural-number
// type so that membership raises the type by one and equality / pairing
// keep it.  Solved as a system of difference constraints.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stratkit/formula.hpp"

namespace stratkit::strat {

enum class Mode {
  Set,    // pairs and function applications homogeneous, other relations free
  Typed,  // additionally every relation atom other than membership homogeneous
};

/// type(left) + offset == type(right).  Terms are referenced by their
/// printed form, which is canonical because printing is deterministic.
struct OffsetConstraint {
  std::string left;
  std::string right;
  int offset = 0;
  std::string origin;  // printed atom or application that produced it

  friend bool operator==(const OffsetConstraint&, const OffsetConstraint&) = default;
};

struct Stratification {
  std::map<std::string, int> types;  // term key -> type
  int max = 0;

  int type_of(const std::string& key) const;  // throws std::out_of_range
};

/// One traversal of a constraint: forward walks left -> right with +offset,
/// backward walks right -> left with -offset.
struct WitnessStep {
  OffsetConstraint constraint;
  bool forward = true;

  const std::string& from() const { return forward ? constraint.left : constraint.right; }
  const std::string& to() const { return forward ? constraint.right : constraint.left; }
  int delta() const { return forward ? constraint.offset : -constraint.offset; }
};

struct UnstratWitness {
  std::vector<WitnessStep> cycle;

  int net_offset() const;
};

struct StratResult {
  std::optional<Stratification> stratification;
  std::optional<UnstratWitness> witness;

  bool stratified() const { return stratification.has_value(); }
};

/// Every term key of the (bounded-desugared) formula, binders included.
std::vector<std::string> terms(const Formula& f);

/// Constraints generated by the (bounded-desugared) formula, in traversal order.
std::vector<OffsetConstraint> constraints(const Formula& f, Mode mode = Mode::Set);

StratResult stratify(const Formula& f, Mode mode = Mode::Set);

/// `assignment` must give a type to every variable of f; returns true iff it
/// extends to a valid stratification of all terms.
bool check_stratification(const Formula& f, const std::map<std::string, int>& assignment,
                          Mode mode = Mode::Set);

/// Linear-time check that the cycle chains end-to-start, uses only
/// constraints of f, and has nonzero net offset.
bool verify_witness(const Formula& f, const UnstratWitness& w, Mode mode = Mode::Set);

}  // namespace stratkit::strat
