#pragma once

// First-order syntax shared by every analysis in stratkit: signatures, terms,
// formulae, a parser/printer pair for the ASCII surface syntax, and
// binding-aware manipulation (free variables, substitution, bounded
// quantifier (de)sugaring, alpha-equivalence).

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stratkit {

// ---------------------------------------------------------------------------
// Signature

struct RelationSymbol {
  std::string name;
  std::vector<std::string> arg_sorts;
};

struct FunctionSymbol {
  std::string name;
  std::vector<std::string> arg_sorts;
  std::string result_sort;
};

/// A (possibly many-sorted) first-order signature.  Equality is always
/// available; membership, subset atoms and the built-in predicates are
/// switched on by flags so the stock languages can be expressed exactly.
class Signature {
 public:
  static constexpr const char* kPair = "pair";
  static constexpr const char* kSethood = "S";
  static constexpr const char* kClass = "C";
  static constexpr const char* kSetom = "Setom";
  static constexpr const char* kDefaultSort = "U";

  Signature() = default;

  /// {in}
  static Signature l0();
  /// {in, S, <-,->}
  static Signature l_set();
  /// {in, S, C, Setom, <-,->}
  static Signature l_class();
  /// Accepts every relation/function symbol it meets (arity fixed on first
  /// use).  Used by tools that do not want to declare symbols up front.
  static Signature permissive();

  Signature& add_sort(std::string name);
  Signature& add_relation(RelationSymbol rel);
  Signature& add_function(FunctionSymbol fn);

  bool has_membership() const { return membership_; }
  bool has_subset() const { return subset_; }
  bool is_permissive() const { return permissive_; }
  void set_membership(bool on) { membership_ = on; }

  const std::vector<std::string>& sorts() const { return sorts_; }
  const std::vector<RelationSymbol>& relations() const { return relations_; }
  const std::vector<FunctionSymbol>& functions() const { return functions_; }

  const RelationSymbol* find_relation(std::string_view name) const;
  const FunctionSymbol* find_function(std::string_view name) const;

 private:
  std::vector<std::string> sorts_{kDefaultSort};
  std::vector<RelationSymbol> relations_;
  std::vector<FunctionSymbol> functions_;
  bool membership_ = true;
  bool subset_ = true;
  bool permissive_ = false;
};

// ---------------------------------------------------------------------------
// Terms

/// A variable or a function application.  `lift` counts how many times the
/// symbol has been transported along the type-raising endofunctor; it is 0
/// for every term written by a user and only becomes positive in the output
/// of the categorical translation.
struct Term {
  enum class Kind { Var, App };

  Kind kind = Kind::Var;
  std::string name;
  std::vector<Term> args;
  int lift = 0;

  static Term var(std::string name);
  static Term app(std::string fn, std::vector<Term> args, int lift = 0);
  static Term pair(Term a, Term b);

  bool is_var() const { return kind == Kind::Var; }
  bool is_pair() const { return kind == Kind::App && name == Signature::kPair && lift == 0; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term& a, const Term& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.name <=> b.name; c != 0) return c;
    if (auto c = a.lift <=> b.lift; c != 0) return c;
    return a.args <=> b.args;
  }
};

/// Name of the type-raising isomorphism used by the categorical translation.
inline constexpr const char* kIota = "iota";

// ---------------------------------------------------------------------------
// Formulae

enum class FormulaKind {
  Bottom,
  Atom,     // R(t1, ..., tn)
  Eq,       // t = u
  Mem,      // t in u
  Sub,      // t sub u
  SubT,     // t subT u  (type-shifted subset of the categorical signature)
  Not,
  And,
  Or,
  Imp,
  Forall,
  Exists,
  BForall,  // forall v in/sub t. body
  BExists,  // exists v in/sub t. body
};

enum class BoundKind { Member, Subset };

/// Immutable, structurally shared formula tree.  Copying is O(1).
class Formula {
 public:
  struct Node;

  Formula();  // bottom

  static Formula bottom();
  static Formula atom(std::string relation, std::vector<Term> args, int lift = 0);
  static Formula eq(Term a, Term b, int lift = 0);
  static Formula mem(Term a, Term b);
  static Formula sub(Term a, Term b);
  static Formula subt(Term a, Term b, int lift);
  static Formula neg(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula imp(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);  // sugar: (a -> b) & (b -> a)
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);
  static Formula bforall(std::string var, Term bound, BoundKind kind, Formula body);
  static Formula bexists(std::string var, Term bound, BoundKind kind, Formula body);

  FormulaKind kind() const;
  bool is_quantifier() const;          // Forall/Exists/BForall/BExists
  bool is_unbounded_quantifier() const;
  bool is_bounded_quantifier() const;
  bool is_atomic() const;              // Bottom/Atom/Eq/Mem/Sub/SubT
  bool is_binary() const;              // And/Or/Imp

  const std::string& symbol() const;   // Atom relation name
  const std::vector<Term>& terms() const;  // atomic arguments
  int lift() const;
  const Formula& lhs() const;          // binary, and Not's operand
  const Formula& rhs() const;
  const Formula& body() const;         // quantifier body (or Not operand)
  const std::string& var() const;
  const Term& bound() const;
  BoundKind bound_kind() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Parsing and printing

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Raised for signature violations (unknown symbol, arity mismatch) and
/// sort mismatches.
class SignatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Formula parse(std::string_view text, const Signature& sig);
Term parse_term(std::string_view text, const Signature& sig);

std::string print(const Formula& f);
std::string print(const Term& t);

/// Throws SignatureError if an atom or application does not respect `sig`.
void check_well_formed(const Formula& f, const Signature& sig);

// ---------------------------------------------------------------------------
// Variables and substitution

std::set<std::string> free_vars(const Formula& f);
std::set<std::string> free_vars(const Term& t);
/// Every variable name occurring anywhere (free, bound, binder).
std::set<std::string> all_vars(const Formula& f);

/// Smallest `base<n>` (n >= 1, trailing digits of `base` stripped) not in
/// `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

Term substitute(const Term& t, const std::string& x, const Term& s);
/// Capture-avoiding substitution of `t` for the free occurrences of `x`.
Formula substitute(const Formula& f, const std::string& x, const Term& t);

using SortContext = std::map<std::string, std::string>;
/// As above, but first checks that `t` has the sort of `x` under `sorts`
/// (function results are looked up in `sig`).  Throws SignatureError.
Formula substitute(const Formula& f, const std::string& x, const Term& t,
                   const SortContext& sorts, const Signature& sig);

/// Renames free variables according to `renaming`; binders are untouched.
Formula rename_free(const Formula& f, const std::map<std::string, std::string>& renaming);

/// Renames every bound variable apart (deterministically) so that no name
/// is bound twice and no bound name is also free.
Formula rectify(const Formula& f);

/// Equality up to renaming of bound variables.
bool alpha_equivalent(const Formula& a, const Formula& b);

// ---------------------------------------------------------------------------
// Normalisations

enum class BoundedDirection { Desugar, Resugar };

struct BoundedOptions {
  /// Also rewrite `u sub y` atoms to `forall r. (r in u -> r in y)`.
  bool expand_subset = false;
};

/// Desugar: every bounded quantifier becomes its defining unbounded form.
/// Resugar: the exact defining patterns are folded back into bounded nodes.
Formula normalize_bounded(const Formula& f, BoundedDirection dir, BoundedOptions opts = {});

/// `to_implication`: ~p becomes p -> bot; otherwise p -> bot becomes ~p.
Formula normalize_negation(const Formula& f, bool to_implication);

/// Counts nodes, useful for generators and size guards.
std::size_t formula_size(const Formula& f);

}  // namespace stratkit
