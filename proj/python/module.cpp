#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "commands.hpp"
#include "stratkit/backforth.hpp"
#include "stratkit/export.hpp"
#include "stratkit/hfsets.hpp"
#include "stratkit/hierarchy.hpp"
#include "stratkit/strat.hpp"
#include "stratkit/strat2cat.hpp"

namespace py = pybind11;
using namespace stratkit;

namespace {

// JSON crosses the boundary as text; the Python side decodes it.
std::string dump(const nlohmann::json& j) { return j.dump(); }

Signature signature_named(const std::string& name) {
  if (name == "l0") return Signature::l0();
  if (name == "lset") return Signature::l_set();
  if (name == "lclass") return Signature::l_class();
  if (name == "permissive") return Signature::permissive();
  throw std::invalid_argument("unknown signature '" + name + "'");
}

Formula parse_with(const std::string& text, const std::string& sig) { return parse(text, signature_named(sig)); }

}  // namespace

PYBIND11_MODULE(_stratkit, m) {
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<cat::TranslationError>(m, "TranslationError", PyExc_ValueError);

  m.def("format_formula", [](const std::string& text, const std::string& sig) { return print(parse_with(text, sig)); },
        py::arg("text"), py::arg("signature") = "permissive");
  m.def("ast_json", [](const std::string& text, const std::string& sig) { return dump(jsonio::ast(parse_with(text, sig))); },
        py::arg("text"), py::arg("signature") = "permissive");
  m.def("stratify_json", [](const std::string& text, bool typed) {
    return dump(jsonio::report(strat::stratify(parse_with(text, "permissive"), typed ? strat::Mode::Typed : strat::Mode::Set)));
  }, py::arg("text"), py::arg("typed") = false);
  m.def("classify_json", [](const std::string& text) {
    const Formula f = parse_with(text, "permissive");
    return dump(jsonio::report(hierarchy::classify(f), f));
  });
  m.def("translate_json", [](const std::string& text) { return dump(jsonio::report(cat::translate(parse_with(text, "permissive")))); });
  m.def("normalize_obj", [](const std::string& o) { return cat::to_string(cat::normalize_obj(cat::parse_obj(o))); });

  m.def("v_stage", [](unsigned n) {
    const hf::FinModel M = hf::v_stage(n);
    std::vector<std::string> out;
    for (const auto& x : M.domain()) out.push_back(hf::to_string(x));
    return out;
  }, "Elements of V_n in braces notation.");
  m.def("hf_eval", [](const std::string& text, unsigned stage, const std::map<std::string, std::string>& let) {
    const hf::FinModel M = hf::v_stage(stage);
    hf::Valuation v;
    for (const auto& [k, s] : let) v.insert_or_assign(k, hf::parse_hf(s));
    return hf::eval(parse_with(text, "lset"), M, v);
  }, py::arg("text"), py::arg("stage") = 3, py::arg("let") = std::map<std::string, std::string>{});

  m.def("build_iso_json", [](std::size_t steps) {
    return dump(jsonio::report(bf::build_iso(bf::EnumStructure::rationals(), bf::EnumStructure::dyadics(), steps)));
  }, py::arg("steps") = 200);
  m.def("self_embedding_json", [](const std::string& q, std::size_t steps) {
    return dump(jsonio::report(bf::build_self_embedding(parse_rational(q), Cut(), steps)));
  }, py::arg("bound") = "0", py::arg("steps") = 300);
  m.def("embedding_family_json", [](std::size_t depth, std::size_t steps) {
    return dump(jsonio::report(bf::embedding_family(depth, steps)));
  }, py::arg("depth") = 3, py::arg("steps") = 300);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::vector<std::string> all{"stratkit"};
    all.insert(all.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : all) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, "Run one CLI command in process; returns (exit code, stdout, stderr).");
}
