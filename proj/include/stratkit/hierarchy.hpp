#pragma once

// Syntactic Levy / Takahashi classification (bar classes) and the
// prefix-flipping negation transform.

#include <optional>
#include <string>
#include <vector>

#include "stratkit/formula.hpp"

namespace stratkit::hierarchy {

enum class Family { Levy, Takahashi };
enum class Shape { Delta0, Sigma, Pi };

struct HierarchyClass {
  Family family = Family::Levy;
  Shape shape = Shape::Delta0;
  int n = 0;  // 0 for Delta0, >= 1 otherwise

  std::string name() const;  // "Delta0", "Sigma2", ...
  friend bool operator==(const HierarchyClass&, const HierarchyClass&) = default;
};

struct Classification {
  std::optional<HierarchyClass> levy;
  std::optional<HierarchyClass> takahashi;
};

enum class QuantKind { Forall, Exists };

struct Block {
  QuantKind kind;
  int length;
  friend bool operator==(const Block&, const Block&) = default;
};

/// Blocks of the maximal unbounded-quantifier prefix.
std::vector<Block> prefix_shape(const Formula& f);

/// What remains after stripping the unbounded prefix.
Formula matrix(const Formula& f);

/// Every quantifier in f is bounded (member-bounded only, for Levy).
bool is_delta0(const Formula& f, Family family);

std::optional<HierarchyClass> classify(const Formula& f, Family family);
Classification classify(const Formula& f);

class NotPiFormula : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Flips every prefix quantifier and negates the matrix at its top
/// connective (a matrix ~psi becomes psi).  Accepts bar-Pi_k formulas of the
/// Takahashi family (Delta0 counts as Pi_0); with `allow_sigma` bar-Sigma_k
/// inputs are accepted too, which makes sim an involution.
Formula sim(const Formula& f, bool allow_sigma = false);

}  // namespace stratkit::hierarchy
