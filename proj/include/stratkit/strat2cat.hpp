#pragma once

// Translation of stratified formulas into the categorical signature.  Stage
// one (phi_iota) lifts every atom along the type-raising map; stage two
// (phi_subT) replaces the iota-images of variables by fresh variables of the
// lifted sort, leaving no membership atom and no iota.

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratkit/formula.hpp"
#include "stratkit/strat.hpp"

namespace stratkit::cat {

class ObjExpr {
 public:
  enum class Kind { U, One, T, P, Prod };

  ObjExpr() = default;  // U

  static ObjExpr u() { return {}; }
  static ObjExpr one();
  static ObjExpr t(ObjExpr a);
  static ObjExpr p(ObjExpr a);
  static ObjExpr prod(ObjExpr a, ObjExpr b);
  static ObjExpr t_pow(ObjExpr a, int k);
  static ObjExpr p_pow(ObjExpr a, int k);

  Kind kind() const { return kind_; }
  const ObjExpr& arg(std::size_t i = 0) const { return args_.at(i); }
  const std::vector<ObjExpr>& args() const { return args_; }

  std::size_t size() const;  // constructor count

  friend bool operator==(const ObjExpr&, const ObjExpr&) = default;
  friend bool operator<(const ObjExpr& a, const ObjExpr& b);

 private:
  Kind kind_ = Kind::U;
  std::vector<ObjExpr> args_;
};

std::string to_string(const ObjExpr& o);
/// Inverse of to_string: U, 1, T(o), P(o), Prod(o, o).  Throws std::invalid_argument.
ObjExpr parse_obj(const std::string& text);

/// Pushes every T out of every P: P(T^k Z) becomes T^k(P Z), recursively.
ObjExpr normalize_obj(const ObjExpr& o);
/// All results of one application of P(T(Z)) -> T(P(Z)) at any position.
std::vector<ObjExpr> rewrite_steps(const ObjExpr& o);
/// Every ObjExpr with at most `max_size` constructors.
std::vector<ObjExpr> all_objexprs(std::size_t max_size);
/// Sum over P nodes of the number of T nodes below them; each rewrite step
/// lowers it by one.
std::size_t t_weight(const ObjExpr& o);

struct FnSort {
  std::vector<ObjExpr> args;
  ObjExpr result;
};

/// A formula with an ObjExpr sort for each of its variables (free and bound;
/// the formula is rectified so each name has one sort) and base sorts for
/// the relation and function symbols it uses.
struct TypedFormula {
  Formula formula;
  std::map<std::string, ObjExpr> sorts;
  std::map<std::string, std::vector<ObjExpr>> relations;
  std::map<std::string, FnSort> functions;
  std::map<std::string, std::string> origin;  // renamed variable -> source name
};

/// nullopt if well sorted, otherwise a description of the first violation.
std::optional<std::string> sort_error(const TypedFormula& f);
inline bool sort_check(const TypedFormula& f) { return !sort_error(f).has_value(); }

class TranslationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Retyping {
  std::string name;  // x_t<k>
  int k = 0;
  ObjExpr sort;      // T^k of the source sort
};

struct Translation {
  Formula source;  // desugared and rectified input
  strat::Stratification stratification;
  TypedFormula phi_iota;
  TypedFormula phi_subT;
  std::map<std::string, Retyping> retyping;
};

struct TranslateOptions {
  /// Explicit variable types; checked, then propagated to compound terms.
  std::optional<std::map<std::string, int>> types;
  /// Variable sorts; a variable of type s defaults to P^s(U).
  std::map<std::string, ObjExpr> sorts;
};

Translation translate(const Formula& f, const TranslateOptions& opts = {});

/// Interprets T and iota as identities, lifted symbols as themselves and the
/// shifted subset as membership, and renames variables back via `origin`.
Formula collapse_degenerate(const TypedFormula& f);
Formula collapse_degenerate(const Formula& f);

/// exists x. forall z. (z in x <-> phi); phi's other free variables stay free.
Formula comprehension_target(const Formula& phi, const std::string& z = "z", const std::string& x = "x");

/// Checks that `f` reads exists x':T^k(P A). forall z':T^(k+1)(A).
/// (z' subT[T^k] x' <-> ...), up to normalize_obj on the sorts.
bool has_comprehension_shape(const TypedFormula& f, std::string* why = nullptr);

}  // namespace stratkit::cat
