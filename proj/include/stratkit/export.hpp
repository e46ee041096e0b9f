#pragma once

// JSON forms of formulas, terms and analysis results, as emitted by the CLI
// and the Python module.

#include "json.hpp"

#include "stratkit/backforth.hpp"
#include "stratkit/formula.hpp"
#include "stratkit/hierarchy.hpp"
#include "stratkit/strat.hpp"
#include "stratkit/strat2cat.hpp"

namespace stratkit::jsonio {

using nlohmann::json;

/// Node fields: kind, symbol, children, var, bound, boundKind (plus lift
/// when nonzero).
json ast(const Term& t);
json ast(const Formula& f);
Term term_from_ast(const json& j);
Formula formula_from_ast(const json& j);

json report(const strat::StratResult& r);
json report(const hierarchy::Classification& c, const Formula& f);
json report(const cat::Translation& t);
json report(const bf::Run& r);
json report(const bf::Family& f);
json checks(const std::vector<bf::Check>& cs);
json condition(const bf::Condition& c);

}  // namespace stratkit::jsonio
