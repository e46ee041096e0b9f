#include "stratkit/hierarchy.hpp"

namespace stratkit::hierarchy {

std::string HierarchyClass::name() const {
  switch (shape) {
    case Shape::Delta0: return "Delta0";
    case Shape::Sigma: return "Sigma" + std::to_string(n);
    case Shape::Pi: return "Pi" + std::to_string(n);
  }
  return "?";
}

std::vector<Block> prefix_shape(const Formula& f) {
  std::vector<Block> blocks;
  const Formula* cur = &f;
  while (cur->is_unbounded_quantifier()) {
    const QuantKind k = cur->kind() == FormulaKind::Forall ? QuantKind::Forall : QuantKind::Exists;
    if (!blocks.empty() && blocks.back().kind == k)
      ++blocks.back().length;
    else
      blocks.push_back({k, 1});
    cur = &cur->body();
  }
  return blocks;
}

Formula matrix(const Formula& f) {
  const Formula* cur = &f;
  while (cur->is_unbounded_quantifier()) cur = &cur->body();
  return *cur;
}

bool is_delta0(const Formula& f, Family family) {
  if (f.is_atomic()) return true;
  if (f.is_unbounded_quantifier()) return false;
  if (f.is_bounded_quantifier()) {
    if (family == Family::Levy && f.bound_kind() == BoundKind::Subset) return false;
    return is_delta0(f.body(), family);
  }
  if (f.kind() == FormulaKind::Not) return is_delta0(f.body(), family);
  return is_delta0(f.lhs(), family) && is_delta0(f.rhs(), family);
}

std::optional<HierarchyClass> classify(const Formula& f, Family family) {
  if (!is_delta0(matrix(f), family)) return std::nullopt;
  const auto blocks = prefix_shape(f);
  if (blocks.empty()) return HierarchyClass{family, Shape::Delta0, 0};
  const Shape s = blocks.front().kind == QuantKind::Exists ? Shape::Sigma : Shape::Pi;
  return HierarchyClass{family, s, static_cast<int>(blocks.size())};
}

Classification classify(const Formula& f) { return {classify(f, Family::Levy), classify(f, Family::Takahashi)}; }

namespace {

Formula flip(const Formula& f) {
  if (f.kind() == FormulaKind::Forall) return Formula::exists(f.var(), flip(f.body()));
  if (f.kind() == FormulaKind::Exists) return Formula::forall(f.var(), flip(f.body()));
  if (f.kind() == FormulaKind::Not) return f.body();
  return Formula::neg(f);
}

}  // namespace

Formula sim(const Formula& f, bool allow_sigma) {
  const auto c = classify(f, Family::Takahashi);
  if (!c) throw NotPiFormula("sim: formula is not in a bar class");
  if (c->shape == Shape::Sigma && !allow_sigma) throw NotPiFormula("sim: formula is " + c->name() + ", not bar-Pi");
  return flip(f);
}

}  // namespace stratkit::hierarchy
