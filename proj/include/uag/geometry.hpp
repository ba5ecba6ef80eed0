#pragma once

#include <optional>
#include <vector>

#include "uag/algebra.hpp"
#include "uag/syntax.hpp"

namespace uag {

// A finite system of equations over an ordered variable list.  Equations may
// carry coefficient leaves when a coefficient algebra is attached; the leaves
// resolve through the target's embedding at solve time.
struct EquationSystem {
  Signature sig;
  VarList vars;
  std::vector<AtomicFormula> equations;  // positive
  int coeff_count = 0;                   // 0 = coefficient-free
};

void validate_system_of_equations(const EquationSystem& s);

// The solution set of a system in target^n, with its defining system kept as
// provenance.  Points are lexicographically sorted.
struct AlgebraicSet {
  FiniteAlgebra algebra;
  EquationSystem system;
  std::vector<Tuple> points;
  std::vector<int> lambda;  // coefficient embedding into `algebra`, if any

  int arity() const { return static_cast<int>(system.vars.size()); }
  bool empty() const { return points.empty(); }
  const std::vector<int>* lambda_ptr() const {
    return system.coeff_count > 0 ? &lambda : nullptr;
  }
};

AlgebraicSet solve(const EquationSystem& s, const FiniteAlgebra& target,
                   int max_universe = kDefaultMaxUniverse,
                   const std::vector<int>* lambda = nullptr);

// Membership in the radical: the equation holds on every point of the set.
// For the empty set every equation is in the radical.
bool radical_member(const AlgebraicSet& y, const AtomicFormula& q);

// The subalgebra of target^Y generated by the coordinate projections and the
// constants, each element carried as (trace function, shortest-found witness
// term).  Decides radical membership: t = s is in the radical iff the traces
// of t and s coincide.
struct TraceSubalgebra {
  std::vector<std::vector<int>> elements;  // traces, insertion order
  std::vector<Term> witnesses;
  std::vector<int> projections;     // element index per coordinate
  std::vector<int> constant_elems;  // per constant symbol
  std::vector<int> coeff_elems;     // per coefficient constant, if attached

  int find(const std::vector<int>& trace) const;  // -1 if absent
};

TraceSubalgebra trace_subalgebra(const AlgebraicSet& y);

// Trace of an arbitrary term over the set's points.
std::vector<int> term_trace(const AlgebraicSet& y, const Term& t);

// The trace subalgebra as an abstract algebra, with the images of the
// projections designated as generators.
struct CoordinateAlgebra {
  FiniteAlgebra algebra;
  std::vector<int> generators;  // per coordinate
  std::vector<int> lambda;      // coefficient embedding, when attached
  TraceSubalgebra traces;
};

CoordinateAlgebra coordinate_algebra(const AlgebraicSet& y);

// Irreducibility via proper equalizer covers of trace pairs.  When the set is
// irreducible the witness is a generic point; when reducible it is a cover by
// proper algebraic subsets.
struct IrreducibilityResult {
  bool irreducible = false;
  Tuple generic_point;               // when irreducible
  std::vector<AlgebraicSet> cover;   // when reducible
};

enum class EqualizerOrder { Forward, Reverse };

IrreducibilityResult is_irreducible(const AlgebraicSet& y,
                                    EqualizerOrder order = EqualizerOrder::Forward);

// True iff the point lies in the set and avoids every proper equalizer.
bool verify_generic_point(const AlgebraicSet& y, const Tuple& point);

// Irreducible components: a cover by irreducible algebraic subsets with no
// containments, canonically ordered; each component carries an augmented
// defining system and so is independently re-solvable.
std::vector<AlgebraicSet> decompose(const AlgebraicSet& y,
                                    EqualizerOrder order = EqualizerOrder::Forward);

// Finite union of algebraic sets over one power, kept as an antichain.
struct ClosedSet {
  std::vector<AlgebraicSet> components;
};

ClosedSet make_closed(std::vector<AlgebraicSet> components);
ClosedSet closed_union(const ClosedSet& a, const ClosedSet& b);
ClosedSet closed_intersection(const ClosedSet& a, const ClosedSet& b);
std::vector<Tuple> closed_points(const ClosedSet& c);

// Least index (1-based) at which the solution sets of a growing chain of
// systems stabilise.
int noetherian_chain_probe(const FiniteAlgebra& target,
                           const std::vector<EquationSystem>& chain,
                           int max_universe = kDefaultMaxUniverse,
                           const std::vector<int>* lambda = nullptr);

}  // namespace uag
