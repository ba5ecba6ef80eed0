#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "uag/syntax.hpp"

namespace uag {

// Default cap on constructed universes (products, quotients, limits,
// solution-space enumerations).
inline constexpr int kDefaultMaxUniverse = 4096;

// Point / assignment: element per variable, positional against a VarList.
using Tuple = std::vector<int>;

// A finite algebra: universe {0..size-1} with one total table per function
// symbol (row-major, first argument most significant) and one element per
// constant symbol.
class FiniteAlgebra {
public:
  FiniteAlgebra() = default;
  FiniteAlgebra(Signature sig, int size, std::vector<std::vector<int>> tables,
                std::vector<int> constants, std::string name = "");

  const Signature& sig() const { return sig_; }
  int size() const { return size_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  const std::vector<int>& table(int func_index) const { return tables_[func_index]; }
  const std::vector<std::vector<int>>& tables() const { return tables_; }
  int constant_value(int const_index) const { return constants_[const_index]; }
  const std::vector<int>& constant_values() const { return constants_; }

  int apply(int func_index, const Tuple& args) const;
  bool is_trivial() const { return size_ == 1; }

  bool operator==(const FiniteAlgebra& other) const {
    return sig_ == other.sig_ && size_ == other.size_ && tables_ == other.tables_ &&
           constants_ == other.constants_;
  }

private:
  Signature sig_;
  int size_ = 0;
  std::vector<std::vector<int>> tables_;
  std::vector<int> constants_;
  std::string name_;
};

// Row-major tuple coding over mixed radices.
int encode_tuple(const Tuple& tuple, const std::vector<int>& radices);
Tuple decode_tuple(int code, const std::vector<int>& radices);

// --- Term evaluation ------------------------------------------------------

// Assignment maps variable names to elements.  `lambda` resolves coefficient
// leaves (element a of the coefficient algebra evaluates to lambda[a]).
int eval_term(const Term& t, const FiniteAlgebra& algebra,
              const std::map<std::string, int>& assignment,
              const std::vector<int>* lambda = nullptr);

// Positional variant against an ordered variable list.
int eval_term(const Term& t, const FiniteAlgebra& algebra, const VarList& vars,
              const Tuple& point, const std::vector<int>* lambda = nullptr);

bool holds(const AtomicFormula& f, const FiniteAlgebra& algebra, const VarList& vars,
           const Tuple& point, const std::vector<int>* lambda = nullptr);

// --- Congruences ----------------------------------------------------------

// Partition of the universe in canonical form: label[m] is the least member
// of m's class.
struct Congruence {
  std::vector<int> label;

  int classes() const;
  std::vector<std::vector<int>> class_lists() const;
  bool related(int a, int b) const { return label[a] == label[b]; }

  static Congruence identity(int size);
  static Congruence total(int size);
  static Congruence from_pairs(int size, const std::vector<std::pair<int, int>>& pairs);
  void canonicalize();
};

bool is_congruence(const FiniteAlgebra& algebra, const Congruence& theta);

// Least congruence containing the given pairs.
Congruence generated_congruence(const FiniteAlgebra& algebra,
                                const std::vector<std::pair<int, int>>& pairs);

enum class LatticeOp { Meet, Join };
Congruence congruence_lattice_op(LatticeOp op, const FiniteAlgebra& algebra,
                                 const Congruence& a, const Congruence& b);

// --- Homomorphisms ----------------------------------------------------------

using Mapping = std::vector<int>;  // image per source element

bool is_homomorphism(const FiniteAlgebra& source, const FiniteAlgebra& target,
                     const Mapping& map);
bool is_injective(const Mapping& map);

Congruence kernel(const FiniteAlgebra& source, const Mapping& map);

struct HomomorphismMode {
  bool injective = false;
  // Pre-assigned images (A-homomorphisms): pairs (source element, image).
  std::vector<std::pair<int, int>> fixed;
};

// Exhaustive, in lexicographic order of the full map; matches the brute-force
// filter of all |target|^|source| maps.
std::vector<Mapping> enumerate_homomorphisms(const FiniteAlgebra& source,
                                             const FiniteAlgebra& target,
                                             const HomomorphismMode& mode = {});

// First injective homomorphism in lexicographic order, if any.
std::optional<Mapping> find_embedding(const FiniteAlgebra& source,
                                      const FiniteAlgebra& target,
                                      const std::vector<std::pair<int, int>>& fixed = {});

// Bijective homomorphism, if any; deterministic first find.
std::optional<Mapping> find_isomorphism(const FiniteAlgebra& a, const FiniteAlgebra& b,
                                        const std::vector<std::pair<int, int>>& fixed = {});

// --- Subalgebras and constructions -----------------------------------------

struct GeneratedSubalgebra {
  std::vector<int> universe;          // ascending
  std::vector<Term> witnesses;        // per universe element, over seed vars
  VarList seed_vars;                  // one variable per seed element
  std::vector<int> seed;              // the seed elements, in input order
};

// Least subuniverse containing the seed and all constants, with witnessing
// terms found by breadth-first closure.
GeneratedSubalgebra generated_subalgebra(const FiniteAlgebra& algebra,
                                         const std::vector<int>& seed);

// Restriction of the algebra to a closed subuniverse, relabelled 0..m-1 in
// ascending element order.  Throws if the subset is not closed.
FiniteAlgebra subalgebra(const FiniteAlgebra& algebra, const std::vector<int>& universe);
bool is_closed_subuniverse(const FiniteAlgebra& algebra, const std::vector<int>& universe);

struct ProductResult {
  FiniteAlgebra algebra;
  std::vector<Mapping> projections;  // per factor
  std::vector<int> sizes;            // factor sizes (radices for decode)
};

ProductResult direct_product(const std::vector<FiniteAlgebra>& factors,
                             int max_universe = kDefaultMaxUniverse);

bool is_subdirect(const ProductResult& product, const std::vector<int>& subuniverse);

struct QuotientResult {
  FiniteAlgebra algebra;
  Mapping projection;  // element -> class index
};

QuotientResult quotient(const FiniteAlgebra& algebra, const Congruence& theta);

// --- Diagrams and coefficient structure ------------------------------------

// The core of the diagram of A: constant identifications, one positive
// sentence per table entry, one inequation per unordered pair of distinct
// elements.  Sentences are closed formulas over the language expanded with a
// coefficient constant per element of A.
std::vector<AtomicFormula> core_diagram(const FiniteAlgebra& coefficient_algebra);

// An algebra paired with a distinguished embedded copy of a coefficient
// algebra: lambda[a] is the image of element a.
struct AAlgebra {
  FiniteAlgebra algebra;
  Mapping lambda;
};

struct AAlgebraReport {
  bool valid = false;
  std::vector<std::string> violations;
};

// True iff every core-diagram sentence of A holds in B under the given
// interpretation of the coefficient constants.
AAlgebraReport is_A_algebra(const FiniteAlgebra& coefficient_algebra, const AAlgebra& candidate);

// --- Filterproducts ---------------------------------------------------------

// A filter over {0..index_count-1}, as the explicit list of member subsets.
struct Filter {
  int index_count = 0;
  std::vector<std::vector<int>> members;  // each ascending

  bool contains(const std::vector<int>& subset) const;
  static Filter principal(int index_count, const std::vector<int>& base);
  static Filter trivial(int index_count);
  bool is_ultra() const;
};

void validate_filter(const Filter& filter);

struct FilterProductResult {
  FiniteAlgebra algebra;
  Mapping projection;  // product element -> class index
  ProductResult product;
};

FilterProductResult filterproduct(const std::vector<FiniteAlgebra>& factors,
                                  const Filter& filter,
                                  int max_universe = kDefaultMaxUniverse);

// --- Direct limits of algebras ----------------------------------------------

struct AlgebraDirectSystem {
  std::vector<FiniteAlgebra> algebras;
  std::vector<std::vector<bool>> leq;                // index order, reflexive
  std::map<std::pair<int, int>, Mapping> homs;       // for each i <= j
};

void validate_algebra_system(const AlgebraDirectSystem& system);

struct DirectLimitResult {
  FiniteAlgebra algebra;
  // class_of[i][m] = limit element of (m, i)
  std::vector<std::vector<int>> class_of;
};

DirectLimitResult direct_limit_algebras(const AlgebraDirectSystem& system,
                                        int max_universe = kDefaultMaxUniverse);

}  // namespace uag
