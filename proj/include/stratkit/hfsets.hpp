#pragma once

// Hereditarily finite sets as hash-consed canonical values, the finite
// stages V_n, closures, Mostowski collapse and brute-force satisfaction.

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stratkit/formula.hpp"

namespace stratkit::hf {

namespace detail {
struct Node;
}

/// A hereditarily finite set.  Values are interned: two HFSets are equal iff
/// they hold the same node pointer, so == is O(1).  Elements are kept in the
/// canonical (Ackermann) order.
class HFSet {
 public:
  HFSet();  // the empty set

  static HFSet empty() { return HFSet(); }
  /// Sorts and deduplicates.
  static HFSet of(std::vector<HFSet> elems);
  static HFSet singleton(const HFSet& a);
  static HFSet pair_set(const HFSet& a, const HFSet& b);  // {a, b}
  static HFSet kuratowski(const HFSet& a, const HFSet& b);  // {{a}, {a, b}}
  /// The von Neumann natural number n.
  static HFSet ordinal(unsigned n);

  const std::vector<HFSet>& elements() const;
  std::size_t size() const;
  bool is_empty() const { return size() == 0; }
  bool contains(const HFSet& x) const;
  bool subset_of(const HFSet& y) const;
  unsigned rank() const;
  std::size_t id() const;  // interning id, stable for the process lifetime

  friend bool operator==(const HFSet& a, const HFSet& b) { return a.n_ == b.n_; }
  friend bool operator!=(const HFSet& a, const HFSet& b) { return a.n_ != b.n_; }
  /// Ackermann order: compares by the largest element of the symmetric difference.
  friend bool operator<(const HFSet& a, const HFSet& b);

  const detail::Node* node() const { return n_; }

 private:
  explicit HFSet(const detail::Node* n) : n_(n) {}
  friend HFSet intern_sorted(std::vector<HFSet> elems);
  const detail::Node* n_;
};

/// Interns an element list that is already sorted and duplicate-free.
HFSet intern_sorted(std::vector<HFSet> elems);

/// Three-way Ackermann comparison (-1, 0, 1).
int compare(const HFSet& a, const HFSet& b);

/// Braces notation: {}, {{}}, {{},{{}}}; elements printed in canonical order.
std::string to_string(const HFSet& x);
HFSet parse_hf(std::string_view text);  // throws std::invalid_argument

HFSet set_union(const HFSet& a, const HFSet& b);
HFSet big_union(const HFSet& a);
HFSet powerset(const HFSet& a);
std::vector<HFSet> subsets(const HFSet& a);

unsigned rank(const HFSet& x);
HFSet tc(const HFSet& x);

constexpr unsigned kMaxStage = 5;
constexpr unsigned kMaxStcRank = 4;

class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least supertransitive superset.  Throws GuardError if rank(x) > kMaxStcRank.
HFSet stc(const HFSet& x);

bool is_transitive(const HFSet& x);
bool is_supertransitive(const HFSet& x);

class FinModel {
 public:
  FinModel() = default;
  explicit FinModel(std::vector<HFSet> domain);

  const std::vector<HFSet>& domain() const { return domain_; }
  std::size_t size() const { return domain_.size(); }
  bool contains(const HFSet& x) const;
  bool is_supertransitive() const;

 private:
  std::vector<HFSet> domain_;  // sorted, distinct
};

/// All sets of rank < n.  Throws GuardError for n > kMaxStage.
FinModel v_stage(unsigned n);

struct FinDigraph {
  std::size_t nodes = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (child, parent): child in parent
  std::size_t point = 0;
};

class NotWellFounded : public std::runtime_error {
 public:
  explicit NotWellFounded(std::vector<std::size_t> cycle);
  const std::vector<std::size_t>& cycle() const { return cycle_; }

 private:
  std::vector<std::size_t> cycle_;
};

class NotExtensional : public std::runtime_error {
 public:
  NotExtensional(std::size_t a, std::size_t b);
  std::size_t a() const { return a_; }
  std::size_t b() const { return b_; }

 private:
  std::size_t a_, b_;
};

/// Collapse map, indexed by node.
std::vector<HFSet> mostowski(const FinDigraph& g);

/// Membership graph of TC({x}) pointed at x; `labels` (optional) receives the
/// set at each node.
FinDigraph graph_of(const HFSet& x, std::vector<HFSet>* labels = nullptr);

using Valuation = std::map<std::string, HFSet>;

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Classical truth in (domain, in).  Unbounded quantifiers range over the
/// domain; bounded ones over the domain members inside / below the bound.
/// `pair` is the Kuratowski pair and S holds of everything.
bool eval(const Formula& f, const FinModel& model, const Valuation& v);

HFSet eval_term(const Term& t, const Valuation& v);

/// Truth of a Takahashi-Delta0 formula, evaluated in stc of the valuation's
/// values.  Throws EvalError if f is not Delta0, GuardError on size.
bool sat_delta0p(const Formula& f, const Valuation& v);

}  // namespace stratkit::hf
