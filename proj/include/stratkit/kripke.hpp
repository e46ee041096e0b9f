#pragma once

// Presheaves over finite posets with their subobject lattices, the adjoint
// triple along natural transformations, the categorical interpretation of
// first-order formulas, and a Kripke forcing oracle.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratkit/formula.hpp"

namespace stratkit::kripke {

class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finite partial order on nodes 0..n-1.
class FinPoset {
 public:
  FinPoset() = default;
  /// Takes the reflexive-transitive closure of `pairs` (p <= q) and checks
  /// antisymmetry.  Names default to "0", "1", ...
  FinPoset(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
           std::vector<std::string> names = {});

  static FinPoset point() { return FinPoset(1, {}); }
  static FinPoset chain(std::size_t n);

  std::size_t size() const { return n_; }
  bool le(std::size_t p, std::size_t q) const { return le_[p * n_ + q]; }
  const std::vector<std::size_t>& up(std::size_t p) const { return up_[p]; }  // all q >= p, p first
  const std::vector<std::string>& names() const { return names_; }
  std::size_t index(const std::string& name) const;

 private:
  std::size_t n_ = 0;
  std::vector<bool> le_;
  std::vector<std::vector<std::size_t>> up_;
  std::vector<std::string> names_;
};

/// Covariant functor from the poset to finite sets: carrier(p) = {0..k_p-1},
/// and for p <= q a restriction map carrier(p) -> carrier(q).
class Presheaf {
 public:
  Presheaf() = default;
  explicit Presheaf(const FinPoset& P);

  static Presheaf constant(const FinPoset& P, std::size_t k);  // identity restrictions
  static Presheaf terminal(const FinPoset& P) { return constant(P, 1); }

  const FinPoset& poset() const { return *poset_; }
  std::size_t card(std::size_t p) const { return card_[p]; }
  void set_card(std::size_t p, std::size_t k);
  std::size_t res(std::size_t p, std::size_t q, std::size_t x) const;
  void set_res(std::size_t p, std::size_t q, std::vector<std::size_t> map);
  const std::vector<std::size_t>& res_map(std::size_t p, std::size_t q) const;

  /// Identity and functoriality; throws StructureError.
  void validate() const;

  std::vector<std::vector<std::string>> labels;  // optional element names, labels[p][x]

  friend bool operator==(const Presheaf& a, const Presheaf& b) { return a.card_ == b.card_ && a.res_ == b.res_; }

 private:
  std::shared_ptr<const FinPoset> poset_;
  std::vector<std::size_t> card_;
  std::vector<std::vector<std::size_t>> res_;  // index p * n + q
};

/// Elements selected per node; a valid subpresheaf is closed under restriction.
struct Subpresheaf {
  std::vector<std::vector<bool>> sel;

  bool has(std::size_t p, std::size_t x) const { return sel[p][x]; }
  friend bool operator==(const Subpresheaf&, const Subpresheaf&) = default;
};

bool is_subpresheaf(const Presheaf& X, const Subpresheaf& A);
bool leq(const Subpresheaf& A, const Subpresheaf& B);

Subpresheaf top(const Presheaf& X);
Subpresheaf bottom(const Presheaf& X);
Subpresheaf meet(const Presheaf& X, const Subpresheaf& A, const Subpresheaf& B);
Subpresheaf join(const Presheaf& X, const Subpresheaf& A, const Subpresheaf& B);
/// (A => B)(p) = {x : for all q >= p, x|q in A(q) implies x|q in B(q)}.
Subpresheaf implies(const Presheaf& X, const Subpresheaf& A, const Subpresheaf& B);
Subpresheaf negation(const Presheaf& X, const Subpresheaf& A);

/// All subpresheaves of X (exponential; for testing small cases).
std::vector<Subpresheaf> all_subpresheaves(const Presheaf& X);

struct NatTrans {
  std::vector<std::vector<std::size_t>> comp;  // comp[p][x] in carrier of the target at p
};

bool is_natural(const Presheaf& X, const Presheaf& Y, const NatTrans& f);

Subpresheaf exists_along(const Presheaf& X, const Presheaf& Y, const NatTrans& f, const Subpresheaf& A);
Subpresheaf inverse_image(const Presheaf& X, const Presheaf& Y, const NatTrans& f, const Subpresheaf& B);
/// forall_f(A)(p) = {y : for all q >= p and x in X(q), f_q(x) = y|q implies x in A(q)}.
Subpresheaf forall_along(const Presheaf& X, const Presheaf& Y, const NatTrans& f, const Subpresheaf& A);

/// Finite product with mixed-radix tuple encoding (first factor least significant).
class Product {
 public:
  Product(const FinPoset& P, std::vector<const Presheaf*> factors);

  const Presheaf& presheaf() const { return X_; }
  std::size_t arity() const { return arity_; }
  std::size_t encode(std::size_t p, const std::vector<std::size_t>& tuple) const;
  std::vector<std::size_t> decode(std::size_t p, std::size_t code) const;
  /// Projection onto the listed factor positions; `target` must be the
  /// product of exactly those factors.
  NatTrans projection(const std::vector<std::size_t>& positions, const Product& target) const;

 private:
  std::size_t arity_ = 0;
  std::vector<std::vector<std::size_t>> radix_;  // radix_[p][i] = card of factor i at p
  Presheaf X_;
};

/// A structure for a many-sorted signature in presheaves over one poset.
/// Membership is the binary relation named "in"; `sub` atoms use "sub".
struct CatStructure {
  struct Relation {
    std::vector<std::string> sorts;
    Subpresheaf sel;  // over the product of `sorts`
  };
  struct Function {
    std::vector<std::string> args;
    std::string result;
    NatTrans map;  // from the product of `args`
  };

  explicit CatStructure(FinPoset P = FinPoset::point()) : poset_(std::move(P)) {}

  const FinPoset& poset() const { return poset_; }
  Presheaf& add_sort(const std::string& name, std::size_t constant_size = 0);
  const Presheaf& sort(const std::string& name) const;
  bool has_sort(const std::string& name) const { return sorts.count(name) != 0; }

  Product product(const std::vector<std::string>& sort_names) const;

  /// Checks presheaf laws, restriction-closure of relations and naturality
  /// of functions; throws StructureError.
  void validate() const;

  std::map<std::string, Presheaf> sorts;
  std::map<std::string, Relation> relations;
  std::map<std::string, Function> functions;

 private:
  FinPoset poset_;
};

using Context = std::vector<std::pair<std::string, std::string>>;  // (variable, sort)
using SortMap = std::map<std::string, std::string>;                // bound-variable sorts

class InterpretError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// [[ctx | f]] as a subpresheaf of the product of the context sorts.  Bound
/// variables take their sort from `bound_sorts`, or the unique sort.
Subpresheaf interpret(const Formula& f, const CatStructure& M, const Context& ctx, const SortMap& bound_sorts = {});

/// The context of free variables (sorted by name), with sorts as above.
Context default_context(const Formula& f, const CatStructure& M, const SortMap& sorts = {});

bool valid(const Formula& f, const CatStructure& M, const SortMap& sorts = {});

/// Kripke forcing p ||- f[values], values aligned with ctx and taken at p.
bool force(const Formula& f, const CatStructure& M, std::size_t node, const Context& ctx,
           const std::vector<std::size_t>& values, const SortMap& bound_sorts = {});

/// Full interpretation table: for every node, the selected context tuples.
struct InterpretationTable {
  Context context;
  std::vector<std::vector<std::vector<std::size_t>>> rows;  // rows[p] = selected tuples
};
InterpretationTable interpretation_table(const Formula& f, const CatStructure& M, const SortMap& sorts = {});

// ---------------------------------------------------------------------------
// Fixture text format (one directive per line, '#' starts a comment):
//   node <name>
//   le <p> <q>                       p <= q (closure is taken)
//   sort <S>
//   elem <S> <node> <name>           element of S at node
//   restrict <S> <p> <q> <a> <b>     a at p restricts to b at q (p < q)
//   rel <R> <S1> ... <Sn>
//   tuple <R> <node> <a1> ... <an>
//   fun <f> <S1> ... <Sn> : <T>
//   value <f> <node> <a1> ... <an> : <b>
// Missing restrictions along composites are filled in by composition.
CatStructure parse_fixture(const std::string& text);

}  // namespace stratkit::kripke
