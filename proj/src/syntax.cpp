#include "uag/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace uag {

// --- Signature ----------------------------------------------------------

Signature::Signature(std::vector<Func> functions, std::vector<std::string> constants)
    : functions_(std::move(functions)), constants_(std::move(constants)) {
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < functions_.size(); ++i) {
    const auto& f = functions_[i];
    if (f.arity < 1) throw InvalidInput("function arity must be positive: " + f.name);
    if (!seen.insert(f.name).second) throw InvalidInput("duplicate symbol: " + f.name);
    func_index_[f.name] = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < constants_.size(); ++i) {
    if (!seen.insert(constants_[i]).second)
      throw InvalidInput("duplicate symbol: " + constants_[i]);
    const_index_[constants_[i]] = static_cast<int>(i);
  }
}

int Signature::function_index(const std::string& name) const {
  auto it = func_index_.find(name);
  return it == func_index_.end() ? -1 : it->second;
}

int Signature::constant_index(const std::string& name) const {
  auto it = const_index_.find(name);
  return it == const_index_.end() ? -1 : it->second;
}

bool Signature::has_symbol(const std::string& name) const {
  return function_index(name) >= 0 || constant_index(name) >= 0;
}

bool Reduct::subset_of(const Reduct& other) const {
  auto incl = [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::all_of(a.begin(), a.end(), [&](int x) {
      return std::find(b.begin(), b.end(), x) != b.end();
    });
  };
  return incl(functions, other.functions) && incl(constants, other.constants) &&
         incl(coefficients, other.coefficients);
}

Reduct Reduct::full(const Signature& sig, int coeff_count) {
  Reduct r;
  for (int i = 0; i < static_cast<int>(sig.functions().size()); ++i) r.functions.push_back(i);
  for (int i = 0; i < static_cast<int>(sig.constants().size()); ++i) r.constants.push_back(i);
  for (int a = 0; a < coeff_count; ++a) r.coefficients.push_back(a);
  return r;
}

// --- Term ----------------------------------------------------------------

Term Term::var(std::string name) {
  Term t;
  t.kind_ = Kind::Var;
  t.symbol_ = std::move(name);
  return t;
}

Term Term::constant(std::string name) {
  Term t;
  t.kind_ = Kind::Const;
  t.symbol_ = std::move(name);
  return t;
}

Term Term::coeff(int element) {
  Term t;
  t.kind_ = Kind::Coeff;
  t.coeff_ = element;
  return t;
}

Term Term::app(std::string func, std::vector<Term> args) {
  Term t;
  t.kind_ = Kind::App;
  t.symbol_ = std::move(func);
  t.args_ = std::move(args);
  return t;
}

int Term::depth() const {
  int d = 0;
  for (const auto& a : args_) d = std::max(d, a.depth());
  return d + 1;
}

void Term::collect_vars(std::vector<std::string>& out) const {
  if (kind_ == Kind::Var) {
    if (std::find(out.begin(), out.end(), symbol_) == out.end()) out.push_back(symbol_);
    return;
  }
  for (const auto& a : args_) a.collect_vars(out);
}

std::vector<std::string> Term::vars() const {
  std::vector<std::string> out;
  collect_vars(out);
  return out;
}

std::string Term::text() const {
  switch (kind_) {
    case Kind::Var:
    case Kind::Const:
      return symbol_;
    case Kind::Coeff:
      return "$" + std::to_string(coeff_);
    case Kind::App: {
      std::string out = symbol_;
      out += '(';
      for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) out += ',';
        out += args_[i].text();
      }
      out += ')';
      return out;
    }
  }
  return {};
}

bool Term::operator==(const Term& other) const {
  return kind_ == other.kind_ && symbol_ == other.symbol_ && coeff_ == other.coeff_ &&
         args_ == other.args_;
}

std::strong_ordering Term::operator<=>(const Term& other) const {
  if (auto c = kind_ <=> other.kind_; c != 0) return c;
  if (auto c = symbol_ <=> other.symbol_; c != 0) return c;
  if (auto c = coeff_ <=> other.coeff_; c != 0) return c;
  if (auto c = args_.size() <=> other.args_.size(); c != 0) return c;
  for (std::size_t i = 0; i < args_.size(); ++i)
    if (auto c = args_[i] <=> other.args_[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

std::size_t TermHash::operator()(const Term& t) const {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&h](std::size_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(static_cast<std::size_t>(t.kind()));
  mix(std::hash<std::string>{}(t.symbol()));
  mix(static_cast<std::size_t>(t.coeff_element() + 1));
  for (const auto& a : t.args()) mix((*this)(a));
  return h;
}

std::strong_ordering AtomicFormula::operator<=>(const AtomicFormula& other) const {
  if (auto c = negated <=> other.negated; c != 0) return c;
  if (auto c = lhs <=> other.lhs; c != 0) return c;
  return rhs <=> other.rhs;
}

std::string AtomicFormula::text() const {
  return lhs.text() + (negated ? " != " : " = ") + rhs.text();
}

std::size_t AtomicFormulaHash::operator()(const AtomicFormula& f) const {
  TermHash th;
  std::size_t h = th(f.lhs) * 31 + th(f.rhs);
  return h * 2 + (f.negated ? 1 : 0);
}

AtomicFormula normalize_atom(const AtomicFormula& f, const VarList& vars) {
  if (f.lhs.kind() == Term::Kind::Var && f.rhs.kind() == Term::Kind::Var) {
    auto pos = [&vars](const std::string& name) {
      auto it = std::find(vars.begin(), vars.end(), name);
      return it == vars.end() ? static_cast<std::ptrdiff_t>(vars.size())
                              : it - vars.begin();
    };
    if (pos(f.rhs.symbol()) < pos(f.lhs.symbol())) return {f.rhs, f.lhs, f.negated};
  }
  return f;
}

// --- Term parser ---------------------------------------------------------

namespace {

struct Parser {
  const std::string& text;
  const Signature& sig;
  const VarList& vars;
  int coeff_count;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    auto head = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto tail = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    if (pos >= text.size() || !head(text[pos])) throw ParseError("expected identifier", pos);
    ++pos;
    while (pos < text.size() && tail(text[pos])) ++pos;
    return text.substr(start, pos - start);
  }

  Term term() {
    skip_ws();
    if (pos < text.size() && text[pos] == '$') {
      std::size_t start = pos++;
      std::size_t digits = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (digits == pos) throw ParseError("expected coefficient element after '$'", start);
      int element = std::stoi(text.substr(digits, pos - digits));
      if (coeff_count <= 0)
        throw ParseError("coefficient constants not allowed here", start);
      if (element >= coeff_count)
        throw ParseError("coefficient element out of range: $" + std::to_string(element), start);
      return Term::coeff(element);
    }
    std::size_t start = pos;
    std::string name = ident();
    skip_ws();
    if (pos < text.size() && text[pos] == '(') {
      int fi = sig.function_index(name);
      if (fi < 0) {
        if (sig.constant_index(name) >= 0)
          throw ParseError("constant '" + name + "' applied to arguments", start);
        throw ParseError("unknown function symbol '" + name + "'", start);
      }
      ++pos;  // '('
      std::vector<Term> args;
      if (peek() == ')') throw ParseError("empty argument list for '" + name + "'", pos);
      args.push_back(term());
      while (peek() == ',') {
        ++pos;
        args.push_back(term());
      }
      if (peek() != ')') throw ParseError("expected ')' or ','", pos);
      ++pos;
      int expected = sig.arity(fi);
      if (static_cast<int>(args.size()) != expected)
        throw ParseError("arity mismatch for '" + name + "': expected " +
                             std::to_string(expected) + ", got " + std::to_string(args.size()),
                         start);
      return Term::app(name, std::move(args));
    }
    if (std::find(vars.begin(), vars.end(), name) != vars.end()) return Term::var(name);
    if (sig.constant_index(name) >= 0) return Term::constant(name);
    if (sig.function_index(name) >= 0)
      throw ParseError("function '" + name + "' used without arguments", start);
    throw ParseError("unknown symbol '" + name + "'", start);
  }
};

}  // namespace

Term parse_term(const std::string& text, const Signature& sig, const VarList& vars,
                int coeff_count) {
  Parser p{text, sig, vars, coeff_count};
  Term t = p.term();
  if (!p.at_end()) throw ParseError("trailing input after term", p.pos);
  return t;
}

AtomicFormula parse_equation(const std::string& text, const Signature& sig,
                             const VarList& vars, int coeff_count) {
  Parser p{text, sig, vars, coeff_count};
  Term lhs = p.term();
  p.skip_ws();
  bool negated = false;
  if (p.pos < text.size() && text[p.pos] == '!') {
    negated = true;
    ++p.pos;
  }
  if (p.pos >= text.size() || text[p.pos] != '=')
    throw ParseError("expected '=' or '!='", p.pos);
  ++p.pos;
  Term rhs = p.term();
  if (!p.at_end()) throw ParseError("trailing input after equation", p.pos);
  return {std::move(lhs), std::move(rhs), negated};
}

// --- BoolExpr / sentences -------------------------------------------------

BoolExpr BoolExpr::literal(AtomicFormula f) {
  BoolExpr e;
  e.kind = Kind::Lit;
  e.lit = std::move(f);
  return e;
}

BoolExpr BoolExpr::conj(std::vector<BoolExpr> parts) {
  if (parts.size() == 1) return parts.front();
  BoolExpr e;
  e.kind = Kind::And;
  e.parts = std::move(parts);
  return e;
}

BoolExpr BoolExpr::disj(std::vector<BoolExpr> parts) {
  if (parts.size() == 1) return parts.front();
  BoolExpr e;
  e.kind = Kind::Or;
  e.parts = std::move(parts);
  return e;
}

BoolExpr BoolExpr::negation() const {
  switch (kind) {
    case Kind::Lit:
      return literal(lit.negation());
    case Kind::And: {
      std::vector<BoolExpr> neg;
      neg.reserve(parts.size());
      for (const auto& p : parts) neg.push_back(p.negation());
      return disj(std::move(neg));
    }
    case Kind::Or: {
      std::vector<BoolExpr> neg;
      neg.reserve(parts.size());
      for (const auto& p : parts) neg.push_back(p.negation());
      return conj(std::move(neg));
    }
  }
  return *this;
}

std::string BoolExpr::text() const {
  switch (kind) {
    case Kind::Lit:
      return lit.text();
    case Kind::And:
    case Kind::Or: {
      std::string sep = kind == Kind::And ? " & " : " | ";
      std::string out = "(";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i].text();
      }
      out += ')';
      return out;
    }
  }
  return {};
}

std::string QuantifiedFormula::text() const {
  std::ostringstream out;
  switch (shape) {
    case Shape::Universal:
    case Shape::Existential: {
      out << (shape == Shape::Universal ? "forall" : "exists");
      for (const auto& v : vars) out << ' ' << v;
      out << " . " << matrix.text();
      break;
    }
    case Shape::QuasiIdentity: {
      out << "qi:";
      for (std::size_t i = 0; i < premises.size(); ++i)
        out << (i ? " & " : " ") << premises[i].text();
      out << " -> " << conclusion.text();
      break;
    }
    case Shape::Identity: {
      out << "identity";
      for (const auto& v : vars) out << ' ' << v;
      out << " . " << conclusion.text();
      break;
    }
  }
  return out.str();
}

namespace {

// expr := and_expr ('|' and_expr)* ; and_expr := primary ('&' primary)* ;
// primary := '(' expr ')' | term ('='|'!=') term
struct SentenceParser {
  Parser p;

  BoolExpr primary() {
    if (p.peek() == '(') {
      ++p.pos;
      BoolExpr e = expr();
      if (p.peek() != ')') throw ParseError("expected ')'", p.pos);
      ++p.pos;
      return e;
    }
    Term lhs = p.term();
    p.skip_ws();
    bool negated = false;
    if (p.pos < p.text.size() && p.text[p.pos] == '!') {
      negated = true;
      ++p.pos;
    }
    if (p.pos >= p.text.size() || p.text[p.pos] != '=')
      throw ParseError("expected '=' or '!='", p.pos);
    ++p.pos;
    Term rhs = p.term();
    return BoolExpr::literal({std::move(lhs), std::move(rhs), negated});
  }

  BoolExpr and_expr() {
    std::vector<BoolExpr> parts{primary()};
    while (p.peek() == '&') {
      ++p.pos;
      parts.push_back(primary());
    }
    return BoolExpr::conj(std::move(parts));
  }

  BoolExpr expr() {
    std::vector<BoolExpr> parts{and_expr()};
    while (p.peek() == '|') {
      ++p.pos;
      parts.push_back(and_expr());
    }
    return BoolExpr::disj(std::move(parts));
  }
};

std::vector<AtomicFormula> flatten_conjunction(const BoolExpr& e) {
  std::vector<AtomicFormula> out;
  if (e.kind == BoolExpr::Kind::Lit) {
    out.push_back(e.lit);
    return out;
  }
  if (e.kind != BoolExpr::Kind::And)
    throw InvalidInput("quasi-identity premises must be a conjunction of equations");
  for (const auto& part : e.parts) {
    auto sub = flatten_conjunction(part);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

}  // namespace

QuantifiedFormula parse_sentence(const std::string& text, const Signature& sig,
                                 int coeff_count) {
  // Leading keyword decides the shape.
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::size_t kw_start = i;
  while (i < text.size() &&
         (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
    ++i;
  std::string kw = text.substr(kw_start, i - kw_start);

  QuantifiedFormula out;
  if (kw == "qi") {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size() || text[i] != ':') throw ParseError("expected ':' after 'qi'", i);
    std::string body = text.substr(i + 1);
    auto arrow = body.find("->");
    if (arrow == std::string::npos) throw ParseError("quasi-identity needs '->'", i);
    std::string prem_text = body.substr(0, arrow);
    std::string concl_text = body.substr(arrow + 2);

    // Variables of a quasi-identity are implicit: every identifier that is
    // not a declared symbol is a variable.
    VarList vars;
    auto scan_vars = [&](const std::string& s) {
      std::size_t j = 0;
      while (j < s.size()) {
        char c = s[j];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
          std::size_t start = j;
          while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
            ++j;
          std::string name = s.substr(start, j - start);
          if (!sig.has_symbol(name) &&
              std::find(vars.begin(), vars.end(), name) == vars.end())
            vars.push_back(name);
        } else {
          ++j;
        }
      }
    };
    scan_vars(body);

    out.shape = QuantifiedFormula::Shape::QuasiIdentity;
    out.vars = vars;
    SentenceParser sp{{prem_text, sig, out.vars, coeff_count}};
    out.premises = flatten_conjunction(sp.expr());
    if (!sp.p.at_end()) throw ParseError("trailing input in premises", sp.p.pos);
    for (const auto& prem : out.premises)
      if (prem.negated) throw InvalidInput("quasi-identity premises must be equations");
    out.conclusion = parse_equation(concl_text, sig, out.vars, coeff_count);
    if (out.conclusion.negated) throw InvalidInput("quasi-identity conclusion must be an equation");
    return out;
  }

  if (kw != "forall" && kw != "exists" && kw != "identity")
    throw ParseError("expected 'forall', 'exists', 'qi' or 'identity'", kw_start);

  // variable list up to '.'
  VarList vars;
  while (true) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size() && text[i] == '.') {
      ++i;
      break;
    }
    std::size_t start = i;
    while (i < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
      ++i;
    if (start == i) throw ParseError("expected variable or '.'", i);
    vars.push_back(text.substr(start, i - start));
  }

  std::string body = text.substr(i);
  out.vars = vars;
  if (kw == "identity") {
    out.shape = QuantifiedFormula::Shape::Identity;
    out.conclusion = parse_equation(body, sig, vars, coeff_count);
    if (out.conclusion.negated) throw InvalidInput("identities must be equations");
    out.matrix = BoolExpr::literal(out.conclusion);
    return out;
  }
  out.shape = kw == "forall" ? QuantifiedFormula::Shape::Universal
                             : QuantifiedFormula::Shape::Existential;
  SentenceParser sp{{body, sig, out.vars, coeff_count}};
  out.matrix = sp.expr();
  if (!sp.p.at_end()) throw ParseError("trailing input after matrix", sp.p.pos);
  return out;
}

// --- Diagram formulas -----------------------------------------------------

void DiagramFormula::canonicalize() {
  for (auto& c : conjuncts) c = normalize_atom(c, vars);
  std::sort(conjuncts.begin(), conjuncts.end());
  conjuncts.erase(std::unique(conjuncts.begin(), conjuncts.end()), conjuncts.end());
}

bool DiagramFormula::contains(const AtomicFormula& f) const {
  AtomicFormula n = normalize_atom(f, vars);
  return std::binary_search(conjuncts.begin(), conjuncts.end(), n);
}

namespace {

int var_position(const VarList& vars, const std::string& name) {
  auto it = std::find(vars.begin(), vars.end(), name);
  return it == vars.end() ? -1 : static_cast<int>(it - vars.begin());
}

// Classifies a conjunct into the three admissible shapes.
struct ConjunctShape {
  enum Kind { VarVar, FuncSlot, ConstSlot, CoeffSlot, Other } kind = Other;
  int func = -1;             // FuncSlot
  std::vector<int> args;     // FuncSlot: variable positions
  int value = -1;            // FuncSlot: variable position of the value
  int var = -1;              // ConstSlot / CoeffSlot / VarVar (lhs)
  int var2 = -1;             // VarVar (rhs)
  int constant = -1;         // ConstSlot
  int coefficient = -1;      // CoeffSlot
};

ConjunctShape classify_conjunct(const DiagramFormula& phi, const AtomicFormula& f) {
  ConjunctShape s;
  const Term& l = f.lhs;
  const Term& r = f.rhs;
  if (l.kind() == Term::Kind::Var && r.kind() == Term::Kind::Var) {
    s.kind = ConjunctShape::VarVar;
    s.var = var_position(phi.vars, l.symbol());
    s.var2 = var_position(phi.vars, r.symbol());
    return s;
  }
  if (l.kind() == Term::Kind::App && r.kind() == Term::Kind::Var) {
    s.kind = ConjunctShape::FuncSlot;
    s.func = phi.sig.function_index(l.symbol());
    s.value = var_position(phi.vars, r.symbol());
    for (const auto& a : l.args()) {
      if (a.kind() != Term::Kind::Var) return ConjunctShape{};
      s.args.push_back(var_position(phi.vars, a.symbol()));
    }
    return s;
  }
  if (l.kind() == Term::Kind::Var && r.kind() == Term::Kind::Const) {
    s.kind = ConjunctShape::ConstSlot;
    s.var = var_position(phi.vars, l.symbol());
    s.constant = phi.sig.constant_index(r.symbol());
    return s;
  }
  if (l.kind() == Term::Kind::Var && r.kind() == Term::Kind::Coeff) {
    s.kind = ConjunctShape::CoeffSlot;
    s.var = var_position(phi.vars, l.symbol());
    s.coefficient = r.coeff_element();
    return s;
  }
  return s;
}

}  // namespace

DiagramValidity validate_diagram_formula(const DiagramFormula& candidate) {
  DiagramValidity report;
  auto violation = [&report](const std::string& msg) { report.violations.push_back(msg); };

  DiagramFormula phi = candidate;
  phi.canonicalize();
  const int n = static_cast<int>(phi.vars.size());

  // shape screening
  for (const auto& c : phi.conjuncts) {
    ConjunctShape s = classify_conjunct(phi, c);
    bool ok = false;
    switch (s.kind) {
      case ConjunctShape::VarVar:
        ok = s.var >= 0 && s.var2 >= 0;
        break;
      case ConjunctShape::FuncSlot:
        ok = s.func >= 0 && s.value >= 0 &&
             std::all_of(s.args.begin(), s.args.end(), [](int a) { return a >= 0; }) &&
             std::find(phi.reduct.functions.begin(), phi.reduct.functions.end(), s.func) !=
                 phi.reduct.functions.end();
        break;
      case ConjunctShape::ConstSlot:
        ok = s.var >= 0 && s.constant >= 0 &&
             std::find(phi.reduct.constants.begin(), phi.reduct.constants.end(), s.constant) !=
                 phi.reduct.constants.end();
        break;
      case ConjunctShape::CoeffSlot:
        ok = s.var >= 0 &&
             std::find(phi.reduct.coefficients.begin(), phi.reduct.coefficients.end(),
                       s.coefficient) != phi.reduct.coefficients.end();
        break;
      case ConjunctShape::Other:
        ok = false;
        break;
    }
    if (!ok) violation("conjunct outside the admissible shapes or reduct: " + c.text());
  }
  if (!report.violations.empty()) return report;

  auto has = [&phi](AtomicFormula f) { return phi.contains(f); };

  // condition 1: all pairwise inequations
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      AtomicFormula ineq{Term::var(phi.vars[i]), Term::var(phi.vars[j]), true};
      if (!has(ineq)) violation("missing inequation: " + ineq.text());
      AtomicFormula eq{Term::var(phi.vars[i]), Term::var(phi.vars[j]), false};
      if (has(eq)) violation("equation between distinct variables: " + eq.text());
    }

  // condition 2: every operation slot covered by exactly one polarity, and
  // the positive part functional.
  for (int fi : phi.reduct.functions) {
    int arity = phi.sig.arity(fi);
    std::vector<int> tuple(arity, 0);
    bool done = n == 0 && arity > 0;
    while (!done) {
      std::vector<Term> args;
      for (int a : tuple) args.push_back(Term::var(phi.vars[a]));
      Term lhs = Term::app(phi.sig.functions()[fi].name, args);
      int positives = 0;
      for (int v = 0; v < n; ++v) {
        AtomicFormula pos{lhs, Term::var(phi.vars[v]), false};
        AtomicFormula neg{lhs, Term::var(phi.vars[v]), true};
        bool p = has(pos), q = has(neg);
        if (!p && !q) violation("missing operation entry: " + pos.text() + " (either polarity)");
        if (p && q) violation("contradictory pair: " + pos.text());
        if (p) ++positives;
      }
      if (positives > 1) violation("operation clash: two positive values for " + lhs.text());
      // advance row-major
      int k = arity - 1;
      while (k >= 0 && ++tuple[k] == n) tuple[k--] = 0;
      if (k < 0) done = true;
    }
  }

  // condition 3: every constant slot covered; at most one variable positively
  // bound to each constant / coefficient constant.
  auto check_const_family = [&](const Term& cterm, const std::string& label) {
    int positives = 0;
    for (int v = 0; v < n; ++v) {
      AtomicFormula pos{Term::var(phi.vars[v]), cterm, false};
      AtomicFormula neg{Term::var(phi.vars[v]), cterm, true};
      bool p = has(pos), q = has(neg);
      if (!p && !q) violation("missing constant entry: " + pos.text() + " (either polarity)");
      if (p && q) violation("contradictory pair: " + pos.text());
      if (p) ++positives;
    }
    if (positives > 1) violation("constant clash: two variables equal to " + label);
  };
  for (int ci : phi.reduct.constants)
    check_const_family(Term::constant(phi.sig.constants()[ci]), phi.sig.constants()[ci]);
  for (int a : phi.reduct.coefficients)
    check_const_family(Term::coeff(a), "$" + std::to_string(a));

  report.valid = report.violations.empty();
  return report;
}

AtomicFormula substitute_atom(const AtomicFormula& f,
                              const std::unordered_map<std::string, std::string>& rename) {
  struct Rec {
    const std::unordered_map<std::string, std::string>& rename;
    Term operator()(const Term& t) const {
      switch (t.kind()) {
        case Term::Kind::Var: {
          auto it = rename.find(t.symbol());
          if (it == rename.end()) throw InvalidInput("variable map is partial: " + t.symbol());
          return Term::var(it->second);
        }
        case Term::Kind::Const:
        case Term::Kind::Coeff:
          return t;
        case Term::Kind::App: {
          std::vector<Term> args;
          args.reserve(t.args().size());
          for (const auto& a : t.args()) args.push_back((*this)(a));
          return Term::app(t.symbol(), std::move(args));
        }
      }
      return t;
    }
  } rec{rename};
  return {rec(f.lhs), rec(f.rhs), f.negated};
}

std::vector<AtomicFormula> substitute(const DiagramFormula& phi, const VariableMap& gamma,
                                      const VarList& target_vars) {
  if (gamma.image.size() != phi.vars.size())
    throw InvalidInput("variable map does not cover the source variable list");
  std::unordered_map<std::string, std::string> rename;
  for (std::size_t i = 0; i < phi.vars.size(); ++i) {
    int j = gamma.image[i];
    if (j < 0 || j >= static_cast<int>(target_vars.size()))
      throw InvalidInput("variable map image out of range");
    rename[phi.vars[i]] = target_vars[j];
  }
  std::vector<AtomicFormula> out;
  out.reserve(phi.conjuncts.size());
  for (const auto& c : phi.conjuncts)
    out.push_back(normalize_atom(substitute_atom(c, rename), target_vars));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace uag
