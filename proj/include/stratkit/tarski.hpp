#pragma once

// Brute-force Tarski criterion: a substructure S of a finite structure M is
// elementary for a list of existential formulas if every witness in M can be
// replaced by one in S.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stratkit/formula.hpp"
#include "stratkit/hfsets.hpp"
#include "stratkit/rational.hpp"

namespace stratkit::bf {

constexpr std::size_t kMaxTarskiParams = 4;

struct TarskiFailure {
  std::string formula;
  std::map<std::string, std::string> params;
  std::string witness;  // a witness in M with no replacement in S
};

struct TarskiResult {
  bool ok = true;
  std::optional<TarskiFailure> failure;
  std::size_t cases = 0;  // parameter tuples examined
};

/// Each formula of gamma must be `exists x. phi` (bounded forms are
/// desugared first) with at most kMaxTarskiParams free variables, which range
/// over S.  S must be a subset of M.  Throws std::invalid_argument.
TarskiResult tarski_check(const std::vector<hf::HFSet>& S, const hf::FinModel& M, const std::vector<Formula>& gamma);

/// The same over a finite linear order of rationals with relation "lt" and
/// equality.
TarskiResult tarski_check(const std::vector<Rational>& S, const std::vector<Rational>& M,
                          const std::vector<Formula>& gamma);

/// Truth in a finite linear order (atoms lt(a, b) and a = b over variables).
bool eval_order(const Formula& f, const std::vector<Rational>& M, const std::map<std::string, Rational>& v);

}  // namespace stratkit::bf
