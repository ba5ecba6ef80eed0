#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "uag/errors.hpp"

namespace uag {

using VarList = std::vector<std::string>;

// A finite functional language: function symbols with arities plus constant
// symbols.  Declaration order is the canonical symbol order.
class Signature {
public:
  struct Func {
    std::string name;
    int arity = 0;
    bool operator==(const Func&) const = default;
  };

  Signature() = default;
  Signature(std::vector<Func> functions, std::vector<std::string> constants);

  const std::vector<Func>& functions() const { return functions_; }
  const std::vector<std::string>& constants() const { return constants_; }

  int function_index(const std::string& name) const;   // -1 if absent
  int constant_index(const std::string& name) const;   // -1 if absent
  int arity(int func_index) const { return functions_[func_index].arity; }
  bool has_symbol(const std::string& name) const;

  bool operator==(const Signature& other) const {
    return functions_ == other.functions_ && constants_ == other.constants_;
  }

private:
  std::vector<Func> functions_;
  std::vector<std::string> constants_;
  std::unordered_map<std::string, int> func_index_;
  std::unordered_map<std::string, int> const_index_;
};

// A sublanguage: subsets of the ambient signature's symbols, plus (for
// languages expanded with one constant per element of a coefficient algebra)
// the subset of coefficient elements whose constants are kept.
struct Reduct {
  std::vector<int> functions;     // indices into Signature::functions()
  std::vector<int> constants;     // indices into Signature::constants()
  std::vector<int> coefficients;  // coefficient elements, ascending

  bool operator==(const Reduct&) const = default;
  bool subset_of(const Reduct& other) const;
  static Reduct full(const Signature& sig, int coeff_count = 0);
};

// Immutable term tree.  Structural equality is the equality notion.
class Term {
public:
  enum class Kind { Var, Const, Coeff, App };

  static Term var(std::string name);
  static Term constant(std::string name);
  static Term coeff(int element);
  static Term app(std::string func, std::vector<Term> args);

  Kind kind() const { return kind_; }
  const std::string& symbol() const { return symbol_; }  // Var/Const/App
  int coeff_element() const { return coeff_; }           // Coeff only
  const std::vector<Term>& args() const { return args_; }

  int depth() const;                       // leaves have depth 1
  void collect_vars(std::vector<std::string>& out) const;
  std::vector<std::string> vars() const;   // in first-occurrence order
  std::string text() const;                // canonical concrete syntax

  bool operator==(const Term& other) const;
  std::strong_ordering operator<=>(const Term& other) const;

private:
  Term() = default;
  Kind kind_ = Kind::Var;
  std::string symbol_;
  int coeff_ = -1;
  std::vector<Term> args_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const;
};

// t = s, or its negation when `negated`.
struct AtomicFormula {
  Term lhs;
  Term rhs;
  bool negated = false;

  bool operator==(const AtomicFormula&) const = default;
  std::strong_ordering operator<=>(const AtomicFormula&) const;
  AtomicFormula negation() const { return {lhs, rhs, !negated}; }
  std::string text() const;
};

struct AtomicFormulaHash {
  std::size_t operator()(const AtomicFormula& f) const;
};

// Orientation-normalised copy: variable-variable equations are ordered by
// position in `vars`, so u=v and v=u denote the same conjunct.
AtomicFormula normalize_atom(const AtomicFormula& f, const VarList& vars);

// --- Parsing -----------------------------------------------------------

// Grammar: prefix application, comma-separated arguments, identifiers
// [a-zA-Z_][a-zA-Z0-9_]*.  Variables and symbols are told apart by
// declaration.  Coefficient constants are written `$k` with k an element
// of the coefficient algebra; they are rejected unless coeff_count > 0.
Term parse_term(const std::string& text, const Signature& sig, const VarList& vars,
                int coeff_count = 0);

// `lhs = rhs` or `lhs != rhs`.
AtomicFormula parse_equation(const std::string& text, const Signature& sig,
                             const VarList& vars, int coeff_count = 0);

// --- Quantified sentences ----------------------------------------------

// Positive boolean combination of possibly negated atomic formulas.
struct BoolExpr {
  enum class Kind { Lit, And, Or };
  Kind kind = Kind::Lit;
  AtomicFormula lit;             // Kind::Lit
  std::vector<BoolExpr> parts;   // Kind::And / Kind::Or

  static BoolExpr literal(AtomicFormula f);
  static BoolExpr conj(std::vector<BoolExpr> parts);
  static BoolExpr disj(std::vector<BoolExpr> parts);
  BoolExpr negation() const;     // pushes negation to the literals
  std::string text() const;
};

// Restricted to the shapes the tool evaluates: universal and existential
// sentences, quasi-identities, and identities.
struct QuantifiedFormula {
  enum class Shape { Universal, Existential, QuasiIdentity, Identity };
  Shape shape = Shape::Universal;
  VarList vars;
  BoolExpr matrix;                        // Universal / Existential
  std::vector<AtomicFormula> premises;    // QuasiIdentity
  AtomicFormula conclusion;               // QuasiIdentity / Identity

  std::string text() const;
};

// `forall x y . (expr)`, `exists x . (expr)`, `qi: eq & eq -> eq`,
// `identity x y . t = s`.
QuantifiedFormula parse_sentence(const std::string& text, const Signature& sig,
                                 int coeff_count = 0);

// --- Diagram formulas ---------------------------------------------------

// A total map between variable lists, stored positionally: image[i] is the
// position in the target list of the i-th source variable.
struct VariableMap {
  std::vector<int> image;
};

// Complete consistent description of a finite relational submodel over a
// finite reduct: all pairwise inequations, one polarity per operation slot
// F(x1..xn)=x0, one polarity per constant slot x=c.
struct DiagramFormula {
  Signature sig;   // ambient signature
  Reduct reduct;
  VarList vars;
  std::vector<AtomicFormula> conjuncts;  // normalised, sorted, deduplicated

  void canonicalize();
  bool contains(const AtomicFormula& f) const;  // after normalisation
};

struct DiagramValidity {
  bool valid = false;
  std::vector<std::string> violations;
};

// Checks the three completeness conditions and consistency of the positive
// part; reports every violation.
DiagramValidity validate_diagram_formula(const DiagramFormula& candidate);

// Conjuncts of the formula obtained by substituting x -> target_vars[map(x)].
// The result need not itself be a diagram formula (the map may be
// non-injective); conjuncts come back normalised against target_vars.
std::vector<AtomicFormula> substitute(const DiagramFormula& phi, const VariableMap& gamma,
                                      const VarList& target_vars);

// Rewrites a single atomic formula under a variable renaming.
AtomicFormula substitute_atom(const AtomicFormula& f,
                              const std::unordered_map<std::string, std::string>& rename);

}  // namespace uag
