#pragma once

// Back-and-forth constructions of embeddings between countable dense linear
// orders, driven by dense sets of finite partial embeddings.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratkit/rational.hpp"

namespace stratkit::bf {

/// An enumerated countable linear order of rationals, optionally filtered.
class EnumStructure {
 public:
  static EnumStructure rationals();
  static EnumStructure dyadics();
  /// The elements of `base` lying below the cut, in base order.
  static EnumStructure below(EnumStructure base, Cut cut);

  const std::string& name() const { return name_; }
  const Rational& at(std::size_t i) const;
  /// Index of q in the enumeration if found among the first `budget` elements.
  std::optional<std::size_t> index_of(const Rational& q, std::size_t budget) const;
  bool admits(const Rational& q) const { return !filter_ || filter_->contains(q); }
  const std::optional<Cut>& filter() const { return filter_; }
  /// The underlying enumeration is RationalEnumeration (least elements of
  /// intervals can then be computed instead of searched).
  bool rational_base() const { return rational_base_; }

 private:
  struct Source;
  bool rational_base_ = false;
  std::string name_;
  std::shared_ptr<Source> src_;  // owned per structure; copies share the cache
  std::optional<Cut> filter_;
};

/// A finite partial order-embedding, keyed by domain element.
using Condition = std::map<Rational, Rational>;

bool is_partial_embedding(const Condition& c);
/// c extends d: d is the restriction of c to dom(d).
bool extends(const Condition& c, const Condition& d);

struct DenseSpec {
  enum class Kind { Domain, Image, Contractive, BelowBound, InitialBelowCut };
  Kind kind = Kind::Domain;
  std::size_t index = 0;  // enumeration index for Domain / Image / InitialBelowCut

  static DenseSpec domain(std::size_t m) { return {Kind::Domain, m}; }
  static DenseSpec image(std::size_t n) { return {Kind::Image, n}; }
  static DenseSpec contractive() { return {Kind::Contractive, 0}; }
  static DenseSpec below_bound() { return {Kind::BelowBound, 0}; }
  static DenseSpec initial_below_cut(std::size_t n) { return {Kind::InitialBelowCut, n}; }

  std::string name() const;
};

class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an extend step returns a condition outside its family.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

constexpr std::size_t kDefaultBudget = 1u << 20;

/// The forcing setting: source and target orders plus side conditions every
/// condition must satisfy.
struct Setting {
  EnumStructure A = EnumStructure::rationals();
  EnumStructure B = EnumStructure::rationals();
  bool contractive = false;   // f(x) < x
  std::optional<Cut> bound;   // all values below the cut
  std::size_t budget = kDefaultBudget;
};

bool in_family(const Setting& s, const Condition& c, const DenseSpec& d);
/// Least extension (by enumeration-least choices) lying in the family of d.
Condition extend(const Setting& s, const Condition& c, const DenseSpec& d);

/// d_0 = extend(start, specs[0]), d_k = extend(d_(k-1), specs[k mod |specs|]);
/// `steps` defaults to |specs|.  Empty specs give [start].
std::vector<Condition> generic_chain(const Setting& s, const Condition& start, const std::vector<DenseSpec>& specs,
                                     std::optional<std::size_t> steps = std::nullopt);

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
  bool in_limit = false;  // guaranteed only in the limit; `pass` is the prefix check
};

struct Run {
  Condition result;
  std::vector<Check> checks;
  std::string note;

  bool all_pass() const;
};

/// Alternating Domain(i) / Image(i) for i = 0, 1, ...
Run build_iso(const EnumStructure& A, const EnumStructure& B, std::size_t steps);

/// Self-embedding of Q with f(x) < x, values below `cut`, and every
/// enumerated rational below the cut eventually in the image.  Requires
/// cut < q.
Run build_self_embedding(const Rational& q, const Cut& cut, std::size_t steps, int initial_height = 6);

/// Bound and cut for the branch g of the family.
struct Branch {
  std::string index;  // binary string
  Rational bound;
  Cut cut;
  Run run;
};

constexpr std::size_t kMaxFamilyDepth = 8;

struct Family {
  std::vector<Branch> branches;  // in lex order of index
  std::vector<Check> checks;
  std::size_t comparisons = 0;

  bool all_pass() const;
};

Family embedding_family(std::size_t depth, std::size_t steps);

struct Equalizer {
  std::vector<Rational> points;
  bool order_embedding = false;
};

/// The part of the common domain where j and j2 agree.
Equalizer equalizer_prefix(const Condition& j, const Condition& j2);

}  // namespace stratkit::bf
