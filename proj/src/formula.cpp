#include "stratkit/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

namespace stratkit {

// ---------------------------------------------------------------------------
// Signature

Signature Signature::l0() { return Signature{}; }

Signature Signature::l_set() {
  Signature s;
  s.add_relation({kSethood, {kDefaultSort}});
  s.add_function({kPair, {kDefaultSort, kDefaultSort}, kDefaultSort});
  return s;
}

Signature Signature::l_class() {
  Signature s = l_set();
  s.add_relation({kClass, {kDefaultSort}});
  s.add_relation({kSetom, {kDefaultSort}});
  return s;
}

Signature Signature::permissive() {
  Signature s = l_set();
  s.permissive_ = true;
  return s;
}

Signature& Signature::add_sort(std::string name) {
  if (std::find(sorts_.begin(), sorts_.end(), name) == sorts_.end()) sorts_.push_back(std::move(name));
  return *this;
}

Signature& Signature::add_relation(RelationSymbol rel) {
  if (find_relation(rel.name) != nullptr) throw SignatureError("duplicate relation symbol '" + rel.name + "'");
  relations_.push_back(std::move(rel));
  return *this;
}

Signature& Signature::add_function(FunctionSymbol fn) {
  if (find_function(fn.name) != nullptr) throw SignatureError("duplicate function symbol '" + fn.name + "'");
  functions_.push_back(std::move(fn));
  return *this;
}

const RelationSymbol* Signature::find_relation(std::string_view name) const {
  for (const auto& r : relations_)
    if (r.name == name) return &r;
  return nullptr;
}

const FunctionSymbol* Signature::find_function(std::string_view name) const {
  for (const auto& f : functions_)
    if (f.name == name) return &f;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Terms

Term Term::var(std::string name) {
  Term t;
  t.kind = Kind::Var;
  t.name = std::move(name);
  return t;
}

Term Term::app(std::string fn, std::vector<Term> args, int lift) {
  Term t;
  t.kind = Kind::App;
  t.name = std::move(fn);
  t.args = std::move(args);
  t.lift = lift;
  return t;
}

Term Term::pair(Term a, Term b) { return app(Signature::kPair, {std::move(a), std::move(b)}); }

// ---------------------------------------------------------------------------
// Formula nodes

struct Formula::Node {
  FormulaKind kind = FormulaKind::Bottom;
  std::string symbol;        // Atom
  std::vector<Term> terms;   // atomic arguments
  int lift = 0;              // Atom / Eq / SubT
  std::vector<Formula> kids; // Not: 1, binary: 2, quantifiers: 1 (body)
  std::string var;           // quantifiers
  Term bound;                // bounded quantifiers
  BoundKind bound_kind = BoundKind::Member;
};

namespace {

std::shared_ptr<const Formula::Node> bottom_node() {
  static const auto node = std::make_shared<const Formula::Node>();
  return node;
}

[[noreturn]] void wrong_kind(const char* accessor) {
  throw std::logic_error(std::string("Formula::") + accessor + " called on a node of the wrong kind");
}

}  // namespace

Formula::Formula() : node_(bottom_node()) {}

Formula Formula::bottom() { return Formula{}; }

Formula Formula::atom(std::string relation, std::vector<Term> args, int lift) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Atom;
  n->symbol = std::move(relation);
  n->terms = std::move(args);
  n->lift = lift;
  return Formula(std::move(n));
}

namespace {
std::shared_ptr<Formula::Node> binary_atom(FormulaKind k, Term a, Term b, int lift) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = k;
  n->terms = {std::move(a), std::move(b)};
  n->lift = lift;
  return n;
}
}  // namespace

Formula Formula::eq(Term a, Term b, int lift) { return Formula(binary_atom(FormulaKind::Eq, std::move(a), std::move(b), lift)); }
Formula Formula::mem(Term a, Term b) { return Formula(binary_atom(FormulaKind::Mem, std::move(a), std::move(b), 0)); }
Formula Formula::sub(Term a, Term b) { return Formula(binary_atom(FormulaKind::Sub, std::move(a), std::move(b), 0)); }
Formula Formula::subt(Term a, Term b, int lift) {
  return Formula(binary_atom(FormulaKind::SubT, std::move(a), std::move(b), lift));
}

Formula Formula::neg(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Not;
  n->kids = {std::move(f)};
  return Formula(std::move(n));
}

namespace {
std::shared_ptr<Formula::Node> binary(FormulaKind k, Formula a, Formula b) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = k;
  n->kids = {std::move(a), std::move(b)};
  return n;
}
}  // namespace

Formula Formula::conj(Formula a, Formula b) { return Formula(binary(FormulaKind::And, std::move(a), std::move(b))); }
Formula Formula::disj(Formula a, Formula b) { return Formula(binary(FormulaKind::Or, std::move(a), std::move(b))); }
Formula Formula::imp(Formula a, Formula b) { return Formula(binary(FormulaKind::Imp, std::move(a), std::move(b))); }
Formula Formula::iff(Formula a, Formula b) { return conj(imp(a, b), imp(b, a)); }

namespace {
std::shared_ptr<Formula::Node> quant(FormulaKind k, std::string v, Formula body) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = k;
  n->var = std::move(v);
  n->kids = {std::move(body)};
  return n;
}
}  // namespace

Formula Formula::forall(std::string var, Formula body) {
  return Formula(quant(FormulaKind::Forall, std::move(var), std::move(body)));
}
Formula Formula::exists(std::string var, Formula body) {
  return Formula(quant(FormulaKind::Exists, std::move(var), std::move(body)));
}

Formula Formula::bforall(std::string var, Term bound, BoundKind kind, Formula body) {
  if (free_vars(bound).count(var) != 0) throw SignatureError("bound term of a bounded quantifier mentions '" + var + "'");
  auto n = quant(FormulaKind::BForall, std::move(var), std::move(body));
  n->bound = std::move(bound);
  n->bound_kind = kind;
  return Formula(std::move(n));
}

Formula Formula::bexists(std::string var, Term bound, BoundKind kind, Formula body) {
  if (free_vars(bound).count(var) != 0) throw SignatureError("bound term of a bounded quantifier mentions '" + var + "'");
  auto n = quant(FormulaKind::BExists, std::move(var), std::move(body));
  n->bound = std::move(bound);
  n->bound_kind = kind;
  return Formula(std::move(n));
}

FormulaKind Formula::kind() const { return node_->kind; }

bool Formula::is_quantifier() const { return is_unbounded_quantifier() || is_bounded_quantifier(); }
bool Formula::is_unbounded_quantifier() const {
  return kind() == FormulaKind::Forall || kind() == FormulaKind::Exists;
}
bool Formula::is_bounded_quantifier() const {
  return kind() == FormulaKind::BForall || kind() == FormulaKind::BExists;
}
bool Formula::is_atomic() const {
  switch (kind()) {
    case FormulaKind::Bottom:
    case FormulaKind::Atom:
    case FormulaKind::Eq:
    case FormulaKind::Mem:
    case FormulaKind::Sub:
    case FormulaKind::SubT:
      return true;
    default:
      return false;
  }
}
bool Formula::is_binary() const {
  return kind() == FormulaKind::And || kind() == FormulaKind::Or || kind() == FormulaKind::Imp;
}

const std::string& Formula::symbol() const {
  if (kind() != FormulaKind::Atom) wrong_kind("symbol");
  return node_->symbol;
}
const std::vector<Term>& Formula::terms() const { return node_->terms; }
int Formula::lift() const { return node_->lift; }
const Formula& Formula::lhs() const {
  if (node_->kids.empty()) wrong_kind("lhs");
  return node_->kids[0];
}
const Formula& Formula::rhs() const {
  if (node_->kids.size() < 2) wrong_kind("rhs");
  return node_->kids[1];
}
const Formula& Formula::body() const {
  if (node_->kids.empty()) wrong_kind("body");
  return node_->kids[0];
}
const std::string& Formula::var() const {
  if (!is_quantifier()) wrong_kind("var");
  return node_->var;
}
const Term& Formula::bound() const {
  if (!is_bounded_quantifier()) wrong_kind("bound");
  return node_->bound;
}
BoundKind Formula::bound_kind() const {
  if (!is_bounded_quantifier()) wrong_kind("bound_kind");
  return node_->bound_kind;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.symbol != y.symbol || x.lift != y.lift || x.terms != y.terms || x.var != y.var)
    return false;
  if (a.is_bounded_quantifier() && (x.bound != y.bound || x.bound_kind != y.bound_kind)) return false;
  return x.kids == y.kids;
}

// ---------------------------------------------------------------------------
// Lexer

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
      line_(line),
      column_(column) {}

namespace {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LAngle,
  RAngle,
  LBracket,
  RBracket,
  Comma,
  Dot,
  Caret,
  Tilde,
  Amp,
  Bar,
  Arrow,
  DArrow,
  Equals,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string text, std::size_t len) {
    out.push_back({k, std::move(text), line, col});
    i += len;
    col += len;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      push(Tok::Ident, std::string(src.substr(i, j - i)), j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      push(Tok::Number, std::string(src.substr(i, j - i)), j - i);
      continue;
    }
    if (src.substr(i, 3) == "<->") {
      push(Tok::DArrow, "<->", 3);
      continue;
    }
    if (src.substr(i, 2) == "->") {
      push(Tok::Arrow, "->", 2);
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, "(", 1); continue;
      case ')': push(Tok::RParen, ")", 1); continue;
      case '<': push(Tok::LAngle, "<", 1); continue;
      case '>': push(Tok::RAngle, ">", 1); continue;
      case '[': push(Tok::LBracket, "[", 1); continue;
      case ']': push(Tok::RBracket, "]", 1); continue;
      case ',': push(Tok::Comma, ",", 1); continue;
      case '.': push(Tok::Dot, ".", 1); continue;
      case '^': push(Tok::Caret, "^", 1); continue;
      case '~': push(Tok::Tilde, "~", 1); continue;
      case '&': push(Tok::Amp, "&", 1); continue;
      case '|': push(Tok::Bar, "|", 1); continue;
      case '=': push(Tok::Equals, "=", 1); continue;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "forall" || s == "exists" || s == "in" || s == "sub" || s == "subT" || s == "bot";
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : toks_(lex(text)), sig_(sig) {}

  Formula parse_all() {
    Formula f = parse_iff();
    expect_end();
    return f;
  }

  Term parse_term_all() {
    Term t = parse_term();
    expect_end();
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at_ident(const char* word) const { return peek().kind == Tok::Ident && peek().text == word; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ParseError(msg + (at.kind == Tok::End ? " (found end of input)" : " (found '" + at.text + "')"), at.line,
                     at.column);
  }

  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what, peek());
    return next();
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail("unexpected trailing input", peek());
  }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (peek().kind == Tok::DArrow) {
      next();
      Formula g = parse_imp();
      f = Formula::iff(f, g);
    }
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (peek().kind == Tok::Arrow) {
      next();
      return Formula::imp(f, parse_imp());
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (peek().kind == Tok::Bar) {
      next();
      f = Formula::disj(f, parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (peek().kind == Tok::Amp) {
      next();
      f = Formula::conj(f, parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    if (peek().kind == Tok::Tilde) {
      next();
      return Formula::neg(parse_unary());
    }
    if (at_ident("forall") || at_ident("exists")) return parse_quantifier();
    return parse_primary();
  }

  Formula parse_quantifier() {
    const bool universal = next().text == "forall";
    const Token& vt = expect(Tok::Ident, "a variable name");
    if (is_keyword(vt.text)) fail("keyword used as a variable name", vt);
    std::string v = vt.text;
    std::optional<std::pair<Term, BoundKind>> bound;
    if (at_ident("in") || at_ident("sub")) {
      const Token& kw = next();
      const BoundKind k = kw.text == "in" ? BoundKind::Member : BoundKind::Subset;
      if (k == BoundKind::Member && !sig_.has_membership()) fail("membership is not in the signature", kw);
      const Token& at = peek();
      Term b = parse_term();
      if (free_vars(b).count(v) != 0) fail("bound term mentions the quantified variable '" + v + "'", at);
      bound.emplace(std::move(b), k);
    }
    expect(Tok::Dot, "'.' after quantifier");
    Formula body = parse_iff();
    if (bound) {
      return universal ? Formula::bforall(v, bound->first, bound->second, body)
                       : Formula::bexists(v, bound->first, bound->second, body);
    }
    return universal ? Formula::forall(v, body) : Formula::exists(v, body);
  }

  Formula parse_primary() {
    if (peek().kind == Tok::LParen) {
      next();
      Formula f = parse_iff();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (at_ident("bot")) {
      next();
      return Formula::bottom();
    }
    return parse_atom();
  }

  // Reads `T ^ k .` if present.
  int parse_lift_prefix() {
    if (peek().kind == Tok::Ident && peek().text == "T" && peek(1).kind == Tok::Caret) {
      next();
      next();
      const Token& n = expect(Tok::Number, "a lift count");
      expect(Tok::Dot, "'.' after lift count");
      return std::stoi(n.text);
    }
    return 0;
  }

  // Reads `[ T ^ k ]` if present.
  int parse_lift_suffix() {
    if (peek().kind != Tok::LBracket) return 0;
    next();
    const Token& t = expect(Tok::Ident, "'T'");
    if (t.text != "T") fail("expected 'T'", t);
    expect(Tok::Caret, "'^'");
    const Token& n = expect(Tok::Number, "a lift count");
    expect(Tok::RBracket, "']'");
    return std::stoi(n.text);
  }

  bool at_infix_relation() const {
    return peek().kind == Tok::Equals || at_ident("in") || at_ident("sub") || at_ident("subT");
  }

  Formula parse_atom() {
    // Relation application, possibly lifted, unless it turns out to be the
    // left operand (a function term) of an infix atom.
    const std::size_t save = pos_;
    const int lift = parse_lift_prefix();
    if (peek().kind == Tok::Ident && !is_keyword(peek().text) && peek(1).kind == Tok::LParen) {
      const Token& name = next();
      std::vector<Term> args = parse_args();
      if (!at_infix_relation()) {
        check_relation(name, args.size());
        return Formula::atom(name.text, std::move(args), lift);
      }
      pos_ = save;
    } else if (lift != 0) {
      fail("expected a symbol after lift prefix", peek());
    }
    Term lhs = parse_term();
    const Token& op = peek();
    if (op.kind == Tok::Equals) {
      next();
      const int l = parse_lift_suffix();
      return Formula::eq(std::move(lhs), parse_term(), l);
    }
    if (at_ident("in")) {
      next();
      if (!sig_.has_membership()) fail("membership is not in the signature", op);
      return Formula::mem(std::move(lhs), parse_term());
    }
    if (at_ident("sub")) {
      next();
      return Formula::sub(std::move(lhs), parse_term());
    }
    if (at_ident("subT")) {
      next();
      const int l = parse_lift_suffix();
      return Formula::subt(std::move(lhs), parse_term(), l);
    }
    fail("expected '=', 'in', 'sub' or a relation application", op);
  }

  std::vector<Term> parse_args() {
    expect(Tok::LParen, "'('");
    std::vector<Term> args;
    if (peek().kind != Tok::RParen) {
      args.push_back(parse_term());
      while (peek().kind == Tok::Comma) {
        next();
        args.push_back(parse_term());
      }
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  Term parse_term() {
    if (peek().kind == Tok::LAngle) {
      const Token& at = next();
      Term a = parse_term();
      expect(Tok::Comma, "','");
      Term b = parse_term();
      expect(Tok::RAngle, "'>'");
      check_function(Signature::kPair, 2, at);
      return Term::pair(std::move(a), std::move(b));
    }
    const int lift = parse_lift_prefix();
    const Token& id = expect(Tok::Ident, "a term");
    if (is_keyword(id.text)) fail("keyword used as a term", id);
    if (peek().kind == Tok::LParen) {
      std::vector<Term> args = parse_args();
      check_function(id.text, args.size(), id);
      return Term::app(id.text, std::move(args), lift);
    }
    if (lift != 0) fail("lift prefix on a variable", id);
    if (const auto* fn = sig_.find_function(id.text); fn != nullptr && fn->arg_sorts.empty())
      return Term::app(id.text, {});
    return Term::var(id.text);
  }

  void check_relation(const Token& name, std::size_t arity) {
    if (sig_.is_permissive()) return;
    const auto* r = sig_.find_relation(name.text);
    if (r == nullptr) throw ParseError("unknown relation symbol '" + name.text + "'", name.line, name.column);
    if (r->arg_sorts.size() != arity)
      throw ParseError("arity mismatch for '" + name.text + "': expected " + std::to_string(r->arg_sorts.size()) +
                           ", got " + std::to_string(arity),
                       name.line, name.column);
  }

  void check_function(const std::string& name, std::size_t arity, const Token& at) {
    if (name == kIota) {
      if (arity != 1) throw ParseError("arity mismatch for 'iota': expected 1", at.line, at.column);
      return;
    }
    if (sig_.is_permissive()) return;
    const auto* f = sig_.find_function(name);
    if (f == nullptr) throw ParseError("unknown function symbol '" + name + "'", at.line, at.column);
    if (f->arg_sorts.size() != arity)
      throw ParseError("arity mismatch for '" + name + "': expected " + std::to_string(f->arg_sorts.size()) +
                           ", got " + std::to_string(arity),
                       at.line, at.column);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Signature& sig_;
};

}  // namespace

Formula parse(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  Formula f = p.parse_all();
  if (sig.is_permissive()) check_well_formed(f, sig);
  return f;
}

Term parse_term(std::string_view text, const Signature& sig) { return Parser(text, sig).parse_term_all(); }

// ---------------------------------------------------------------------------
// Printer

namespace {

constexpr int kPrecImp = 1;
constexpr int kPrecOr = 2;
constexpr int kPrecAnd = 3;

void print_term(std::ostream& os, const Term& t) {
  if (t.is_var()) {
    os << t.name;
    return;
  }
  if (t.is_pair() && t.args.size() == 2) {
    os << '<';
    print_term(os, t.args[0]);
    os << ", ";
    print_term(os, t.args[1]);
    os << '>';
    return;
  }
  if (t.lift > 0) os << "T^" << t.lift << '.';
  os << t.name << '(';
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) os << ", ";
    print_term(os, t.args[i]);
  }
  os << ')';
}

void print_lift_suffix(std::ostream& os, int lift) {
  if (lift > 0) os << "[T^" << lift << ']';
}

void print_formula(std::ostream& os, const Formula& f, int ctx, bool rightmost) {
  auto binop = [&](int prec, const char* op, bool right_assoc) {
    const bool parens = prec < ctx;
    const bool rm = parens ? true : rightmost;
    if (parens) os << '(';
    print_formula(os, f.lhs(), right_assoc ? prec + 1 : prec, false);
    os << ' ' << op << ' ';
    print_formula(os, f.rhs(), right_assoc ? prec : prec + 1, rm);
    if (parens) os << ')';
  };
  switch (f.kind()) {
    case FormulaKind::Bottom:
      os << "bot";
      return;
    case FormulaKind::Atom: {
      if (f.lift() > 0) os << "T^" << f.lift() << '.';
      os << f.symbol() << '(';
      for (std::size_t i = 0; i < f.terms().size(); ++i) {
        if (i) os << ", ";
        print_term(os, f.terms()[i]);
      }
      os << ')';
      return;
    }
    case FormulaKind::Eq:
      print_term(os, f.terms()[0]);
      os << " =";
      print_lift_suffix(os, f.lift());
      os << ' ';
      print_term(os, f.terms()[1]);
      return;
    case FormulaKind::Mem:
    case FormulaKind::Sub:
    case FormulaKind::SubT:
      print_term(os, f.terms()[0]);
      os << (f.kind() == FormulaKind::Mem ? " in" : f.kind() == FormulaKind::Sub ? " sub" : " subT");
      if (f.kind() == FormulaKind::SubT) print_lift_suffix(os, f.lift());
      os << ' ';
      print_term(os, f.terms()[1]);
      return;
    case FormulaKind::Not:
      os << '~';
      print_formula(os, f.body(), kPrecAnd + 1, rightmost);
      return;
    case FormulaKind::And:
      binop(kPrecAnd, "&", false);
      return;
    case FormulaKind::Or:
      binop(kPrecOr, "|", false);
      return;
    case FormulaKind::Imp:
      binop(kPrecImp, "->", true);
      return;
    case FormulaKind::Forall:
    case FormulaKind::Exists:
    case FormulaKind::BForall:
    case FormulaKind::BExists: {
      if (!rightmost) os << '(';
      const bool universal = f.kind() == FormulaKind::Forall || f.kind() == FormulaKind::BForall;
      os << (universal ? "forall " : "exists ") << f.var();
      if (f.is_bounded_quantifier()) {
        os << (f.bound_kind() == BoundKind::Member ? " in " : " sub ");
        print_term(os, f.bound());
      }
      os << ". ";
      print_formula(os, f.body(), 0, true);
      if (!rightmost) os << ')';
      return;
    }
  }
}

}  // namespace

std::string print(const Formula& f) {
  std::ostringstream os;
  print_formula(os, f, 0, true);
  return os.str();
}

std::string print(const Term& t) {
  std::ostringstream os;
  print_term(os, t);
  return os.str();
}

// ---------------------------------------------------------------------------
// Well-formedness

namespace {

struct ArityTable {
  std::map<std::string, std::size_t> relations;
  std::map<std::string, std::size_t> functions;
};

void check_term(const Term& t, const Signature& sig, ArityTable& seen) {
  if (t.is_var()) return;
  for (const auto& a : t.args) check_term(a, sig, seen);
  if (t.name == kIota) {
    if (t.args.size() != 1) throw SignatureError("iota takes exactly one argument");
    return;
  }
  if (sig.is_permissive()) {
    auto [it, inserted] = seen.functions.emplace(t.name, t.args.size());
    if (!inserted && it->second != t.args.size())
      throw SignatureError("inconsistent arity for function symbol '" + t.name + "'");
    return;
  }
  const auto* fn = sig.find_function(t.name);
  if (fn == nullptr) throw SignatureError("unknown function symbol '" + t.name + "'");
  if (fn->arg_sorts.size() != t.args.size()) throw SignatureError("arity mismatch for '" + t.name + "'");
}

void check_formula(const Formula& f, const Signature& sig, ArityTable& seen) {
  for (const auto& t : f.terms()) check_term(t, sig, seen);
  switch (f.kind()) {
    case FormulaKind::Atom:
      if (sig.is_permissive()) {
        auto [it, inserted] = seen.relations.emplace(f.symbol(), f.terms().size());
        if (!inserted && it->second != f.terms().size())
          throw SignatureError("inconsistent arity for relation symbol '" + f.symbol() + "'");
      } else {
        const auto* r = sig.find_relation(f.symbol());
        if (r == nullptr) throw SignatureError("unknown relation symbol '" + f.symbol() + "'");
        if (r->arg_sorts.size() != f.terms().size()) throw SignatureError("arity mismatch for '" + f.symbol() + "'");
      }
      return;
    case FormulaKind::Mem:
      if (!sig.has_membership()) throw SignatureError("membership is not in the signature");
      return;
    case FormulaKind::BForall:
    case FormulaKind::BExists:
      check_term(f.bound(), sig, seen);
      if (free_vars(f.bound()).count(f.var()) != 0)
        throw SignatureError("bound term mentions the quantified variable '" + f.var() + "'");
      if (f.bound_kind() == BoundKind::Member && !sig.has_membership())
        throw SignatureError("membership is not in the signature");
      check_formula(f.body(), sig, seen);
      return;
    case FormulaKind::Not:
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      check_formula(f.body(), sig, seen);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Imp:
      check_formula(f.lhs(), sig, seen);
      check_formula(f.rhs(), sig, seen);
      return;
    default:
      return;
  }
}

}  // namespace

void check_well_formed(const Formula& f, const Signature& sig) {
  ArityTable seen;
  check_formula(f, sig, seen);
}

// ---------------------------------------------------------------------------
// Variables

namespace {

void collect_term_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name);
    return;
  }
  for (const auto& a : t.args) collect_term_vars(a, out);
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  auto add_term = [&](const Term& t) {
    std::set<std::string> vs;
    collect_term_vars(t, vs);
    for (const auto& v : vs)
      if (bound.count(v) == 0) out.insert(v);
  };
  for (const auto& t : f.terms()) add_term(t);
  if (f.is_quantifier()) {
    if (f.is_bounded_quantifier()) add_term(f.bound());
    const bool fresh = bound.insert(f.var()).second;
    collect_free(f.body(), bound, out);
    if (fresh) bound.erase(f.var());
    return;
  }
  if (f.kind() == FormulaKind::Not) collect_free(f.body(), bound, out);
  if (f.is_binary()) {
    collect_free(f.lhs(), bound, out);
    collect_free(f.rhs(), bound, out);
  }
}

void collect_all(const Formula& f, std::set<std::string>& out) {
  for (const auto& t : f.terms()) collect_term_vars(t, out);
  if (f.is_quantifier()) {
    out.insert(f.var());
    if (f.is_bounded_quantifier()) collect_term_vars(f.bound(), out);
    collect_all(f.body(), out);
  } else if (f.kind() == FormulaKind::Not) {
    collect_all(f.body(), out);
  } else if (f.is_binary()) {
    collect_all(f.lhs(), out);
    collect_all(f.rhs(), out);
  }
}

// Rebuilds a non-atomic node with new children (same kind, var, bound).
Formula rebuild(const Formula& f, const std::vector<Formula>& kids, const std::string& var, const Term* bound) {
  switch (f.kind()) {
    case FormulaKind::Not: return Formula::neg(kids[0]);
    case FormulaKind::And: return Formula::conj(kids[0], kids[1]);
    case FormulaKind::Or: return Formula::disj(kids[0], kids[1]);
    case FormulaKind::Imp: return Formula::imp(kids[0], kids[1]);
    case FormulaKind::Forall: return Formula::forall(var, kids[0]);
    case FormulaKind::Exists: return Formula::exists(var, kids[0]);
    case FormulaKind::BForall: return Formula::bforall(var, *bound, f.bound_kind(), kids[0]);
    case FormulaKind::BExists: return Formula::bexists(var, *bound, f.bound_kind(), kids[0]);
    default: return f;
  }
}

Formula with_terms(const Formula& f, std::vector<Term> terms) {
  switch (f.kind()) {
    case FormulaKind::Atom: return Formula::atom(f.symbol(), std::move(terms), f.lift());
    case FormulaKind::Eq: return Formula::eq(std::move(terms[0]), std::move(terms[1]), f.lift());
    case FormulaKind::Mem: return Formula::mem(std::move(terms[0]), std::move(terms[1]));
    case FormulaKind::Sub: return Formula::sub(std::move(terms[0]), std::move(terms[1]));
    case FormulaKind::SubT: return Formula::subt(std::move(terms[0]), std::move(terms[1]), f.lift());
    default: return f;
  }
}

using TermMap = std::map<std::string, Term>;

Term subst_term(const Term& t, const TermMap& m) {
  if (t.is_var()) {
    auto it = m.find(t.name);
    return it == m.end() ? t : it->second;
  }
  Term out = t;
  for (auto& a : out.args) a = subst_term(a, m);
  return out;
}

// Simultaneous capture-avoiding substitution.
Formula subst(const Formula& f, const TermMap& m) {
  if (m.empty()) return f;
  if (f.is_atomic()) {
    if (f.terms().empty()) return f;
    std::vector<Term> ts;
    ts.reserve(f.terms().size());
    for (const auto& t : f.terms()) ts.push_back(subst_term(t, m));
    return with_terms(f, std::move(ts));
  }
  if (f.kind() == FormulaKind::Not) return Formula::neg(subst(f.body(), m));
  if (f.is_binary()) return rebuild(f, {subst(f.lhs(), m), subst(f.rhs(), m)}, "", nullptr);

  // Quantifier.
  const std::string& v = f.var();
  std::optional<Term> bound;
  if (f.is_bounded_quantifier()) bound = subst_term(f.bound(), m);
  const auto body_free = free_vars(f.body());
  TermMap inner;
  std::set<std::string> repl_free;
  for (const auto& [x, t] : m) {
    if (x == v || body_free.count(x) == 0) continue;
    inner.emplace(x, t);
    auto fv = free_vars(t);
    repl_free.insert(fv.begin(), fv.end());
  }
  std::string nv = v;
  // the substituted bound may also capture the binder, as in forall w in y with y := w
  if (repl_free.count(v) != 0 || (bound && free_vars(*bound).count(v) != 0)) {
    std::set<std::string> avoid = repl_free;
    auto av = all_vars(f.body());
    avoid.insert(av.begin(), av.end());
    for (const auto& [x, _] : m) avoid.insert(x);
    if (bound) {
      auto bv = free_vars(*bound);
      avoid.insert(bv.begin(), bv.end());
    }
    nv = fresh_name(v, avoid);
    inner[v] = Term::var(nv);
  }
  Formula body = subst(f.body(), inner);
  return rebuild(f, {body}, nv, bound ? &*bound : nullptr);
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  collect_term_vars(t, out);
  return out;
}

std::set<std::string> all_vars(const Formula& f) {
  std::set<std::string> out;
  collect_all(f, out);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string stem = base;
  while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
  if (stem.empty()) stem = "v";
  for (unsigned n = 1;; ++n) {
    std::string cand = stem + std::to_string(n);
    if (avoid.count(cand) == 0) return cand;
  }
}

Term substitute(const Term& t, const std::string& x, const Term& s) { return subst_term(t, {{x, s}}); }

Formula substitute(const Formula& f, const std::string& x, const Term& t) { return subst(f, {{x, t}}); }

namespace {
std::string sort_of(const Term& t, const SortContext& sorts, const Signature& sig) {
  if (t.is_var()) {
    auto it = sorts.find(t.name);
    if (it == sorts.end()) throw SignatureError("variable '" + t.name + "' has no sort");
    return it->second;
  }
  const auto* fn = sig.find_function(t.name);
  if (fn == nullptr) throw SignatureError("unknown function symbol '" + t.name + "'");
  return fn->result_sort;
}
}  // namespace

Formula substitute(const Formula& f, const std::string& x, const Term& t, const SortContext& sorts,
                   const Signature& sig) {
  auto it = sorts.find(x);
  if (it == sorts.end()) throw SignatureError("variable '" + x + "' has no sort");
  const std::string ts = sort_of(t, sorts, sig);
  if (ts != it->second)
    throw SignatureError("sort mismatch substituting for '" + x + "': expected " + it->second + ", got " + ts);
  return substitute(f, x, t);
}

Formula rename_free(const Formula& f, const std::map<std::string, std::string>& renaming) {
  TermMap m;
  for (const auto& [from, to] : renaming)
    if (from != to) m.emplace(from, Term::var(to));
  return subst(f, m);
}

namespace {

Formula rectify_rec(const Formula& f, std::set<std::string>& used, std::set<std::string>& bound_once) {
  if (f.is_atomic()) return f;
  if (f.kind() == FormulaKind::Not) return Formula::neg(rectify_rec(f.body(), used, bound_once));
  if (f.is_binary()) {
    Formula a = rectify_rec(f.lhs(), used, bound_once);
    Formula b = rectify_rec(f.rhs(), used, bound_once);
    return rebuild(f, {a, b}, "", nullptr);
  }
  std::string v = f.var();
  Formula body = f.body();
  if (!bound_once.insert(v).second) {
    std::string nv = fresh_name(v, used);
    used.insert(nv);
    bound_once.insert(nv);
    body = subst(body, {{v, Term::var(nv)}});
    v = nv;
  }
  body = rectify_rec(body, used, bound_once);
  std::optional<Term> bound;
  if (f.is_bounded_quantifier()) bound = f.bound();
  return rebuild(f, {body}, v, bound ? &*bound : nullptr);
}

using Env = std::vector<std::pair<std::string, std::string>>;

bool alpha_term(const Term& a, const Term& b, const Env& env) {
  if (a.kind != b.kind) return false;
  if (a.is_var()) {
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      const bool ma = it->first == a.name;
      const bool mb = it->second == b.name;
      if (ma || mb) return ma && mb;
    }
    return a.name == b.name;
  }
  if (a.name != b.name || a.lift != b.lift || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!alpha_term(a.args[i], b.args[i], env)) return false;
  return true;
}

bool alpha_rec(const Formula& a, const Formula& b, Env& env) {
  if (a.kind() != b.kind() || a.lift() != b.lift()) return false;
  if (a.kind() == FormulaKind::Atom && a.symbol() != b.symbol()) return false;
  if (a.terms().size() != b.terms().size()) return false;
  for (std::size_t i = 0; i < a.terms().size(); ++i)
    if (!alpha_term(a.terms()[i], b.terms()[i], env)) return false;
  if (a.is_atomic()) return true;
  if (a.kind() == FormulaKind::Not) return alpha_rec(a.body(), b.body(), env);
  if (a.is_binary()) return alpha_rec(a.lhs(), b.lhs(), env) && alpha_rec(a.rhs(), b.rhs(), env);
  if (a.is_bounded_quantifier()) {
    if (a.bound_kind() != b.bound_kind() || !alpha_term(a.bound(), b.bound(), env)) return false;
  }
  env.emplace_back(a.var(), b.var());
  const bool ok = alpha_rec(a.body(), b.body(), env);
  env.pop_back();
  return ok;
}

}  // namespace

Formula rectify(const Formula& f) {
  std::set<std::string> used = all_vars(f);
  std::set<std::string> bound_once = free_vars(f);
  return rectify_rec(f, used, bound_once);
}

bool alpha_equivalent(const Formula& a, const Formula& b) {
  Env env;
  return alpha_rec(a, b, env);
}

// ---------------------------------------------------------------------------
// Normalisations

namespace {

Formula desugar(const Formula& f, const BoundedOptions& opts) {
  if (f.kind() == FormulaKind::Sub && opts.expand_subset) {
    const Term& u = f.terms()[0];
    const Term& y = f.terms()[1];
    std::set<std::string> avoid = free_vars(u);
    auto yv = free_vars(y);
    avoid.insert(yv.begin(), yv.end());
    const std::string r = avoid.count("r") ? fresh_name("r", avoid) : "r";
    return Formula::forall(r, Formula::imp(Formula::mem(Term::var(r), u), Formula::mem(Term::var(r), y)));
  }
  if (f.is_atomic()) return f;
  if (f.kind() == FormulaKind::Not) return Formula::neg(desugar(f.body(), opts));
  if (f.is_binary()) return rebuild(f, {desugar(f.lhs(), opts), desugar(f.rhs(), opts)}, "", nullptr);
  Formula body = desugar(f.body(), opts);
  if (f.is_unbounded_quantifier()) return rebuild(f, {body}, f.var(), nullptr);
  const Term v = Term::var(f.var());
  Formula guard = f.bound_kind() == BoundKind::Member ? Formula::mem(v, f.bound()) : Formula::sub(v, f.bound());
  guard = desugar(guard, opts);
  if (f.kind() == FormulaKind::BForall) return Formula::forall(f.var(), Formula::imp(guard, body));
  return Formula::exists(f.var(), Formula::conj(guard, body));
}

Formula resugar(const Formula& f) {
  if (f.is_atomic()) return f;
  if (f.kind() == FormulaKind::Not) return Formula::neg(resugar(f.body()));
  if (f.is_binary()) return rebuild(f, {resugar(f.lhs()), resugar(f.rhs())}, "", nullptr);
  Formula body = resugar(f.body());
  std::optional<Term> bound;
  if (f.is_bounded_quantifier()) bound = f.bound();
  if (f.is_unbounded_quantifier()) {
    const FormulaKind want = f.kind() == FormulaKind::Forall ? FormulaKind::Imp : FormulaKind::And;
    if (body.kind() == want) {
      const Formula& g = body.lhs();
      if ((g.kind() == FormulaKind::Mem || g.kind() == FormulaKind::Sub) && g.terms()[0].is_var() &&
          g.terms()[0].name == f.var() && free_vars(g.terms()[1]).count(f.var()) == 0) {
        const BoundKind bk = g.kind() == FormulaKind::Mem ? BoundKind::Member : BoundKind::Subset;
        return f.kind() == FormulaKind::Forall ? Formula::bforall(f.var(), g.terms()[1], bk, body.rhs())
                                               : Formula::bexists(f.var(), g.terms()[1], bk, body.rhs());
      }
    }
  }
  return rebuild(f, {body}, f.var(), bound ? &*bound : nullptr);
}

}  // namespace

Formula normalize_bounded(const Formula& f, BoundedDirection dir, BoundedOptions opts) {
  return dir == BoundedDirection::Desugar ? desugar(f, opts) : resugar(f);
}

Formula normalize_negation(const Formula& f, bool to_implication) {
  if (f.is_atomic()) return f;
  if (f.kind() == FormulaKind::Not) {
    Formula inner = normalize_negation(f.body(), to_implication);
    return to_implication ? Formula::imp(inner, Formula::bottom()) : Formula::neg(inner);
  }
  if (f.is_binary()) {
    Formula a = normalize_negation(f.lhs(), to_implication);
    Formula b = normalize_negation(f.rhs(), to_implication);
    if (!to_implication && f.kind() == FormulaKind::Imp && b.kind() == FormulaKind::Bottom) return Formula::neg(a);
    return rebuild(f, {a, b}, "", nullptr);
  }
  std::optional<Term> bound;
  if (f.is_bounded_quantifier()) bound = f.bound();
  return rebuild(f, {normalize_negation(f.body(), to_implication)}, f.var(), bound ? &*bound : nullptr);
}

std::size_t formula_size(const Formula& f) {
  if (f.is_atomic()) return 1;
  if (f.is_binary()) return 1 + formula_size(f.lhs()) + formula_size(f.rhs());
  return 1 + formula_size(f.body());
}

}  // namespace stratkit
