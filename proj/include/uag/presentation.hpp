#pragma once

#include <unordered_map>
#include <vector>

#include "uag/algebra.hpp"
#include "uag/syntax.hpp"

namespace uag {

// Generators and defining relations <X | S>.
struct Presentation {
  Signature sig;
  VarList vars;
  std::vector<AtomicFormula> relations;  // positive atomic formulas over vars
};

void validate_presentation(const Presentation& p);

// Decides membership of an equation in the least congruent set containing the
// relations by ground congruence closure over a finite subterm-closed term
// universe; variables behave as free constants.  The closure rules carry no
// substitution, so this is complete and the answer is independent of any
// universe extension beyond the subterms of the relations and the query.
class CongruentClosure {
public:
  explicit CongruentClosure(const Presentation& p);

  // Interns the query terms (extending the universe and re-closing when they
  // are new) and answers whether lhs = rhs lies in the congruent closure.
  bool query(const AtomicFormula& q);

  // Adds every term over the presentation's variables up to the given depth.
  void extend_to_depth(int depth, int max_terms = 200000);

  int universe_size() const { return static_cast<int>(nodes_.size()); }

private:
  struct Node {
    Term term;
    int func = -1;          // signature function index, -1 for leaves
    std::vector<int> kids;  // node ids
  };

  int intern(const Term& t);
  int find(int x);
  void unite(int a, int b);
  void close();

  const Presentation& pres_;
  std::vector<Node> nodes_;
  std::unordered_map<Term, int, TermHash> index_;
  std::vector<int> parent_;
};

// Convenience wrapper for one-shot queries.
bool congruent_closure_query(const Presentation& p, const AtomicFormula& q, int depth_bound);

// The multiplication-table presentation of an algebra: one variable per
// element, one relation per table entry, one binding per constant symbol.
// `generators` must generate the algebra.
Presentation table_presentation(const FiniteAlgebra& algebra, const std::vector<int>& generators);

// Presentation of an A-algebra over the expanded language: the table
// relations plus one binding per coefficient constant.
Presentation table_presentation_with_coefficients(const FiniteAlgebra& coefficient_algebra,
                                                  const AAlgebra& c);

// All assignments of the presentation's variables under which every relation
// holds in the target; lexicographic point order.
std::vector<Tuple> realize_presentation_in(const Presentation& p, const FiniteAlgebra& target,
                                           int max_universe = kDefaultMaxUniverse,
                                           const std::vector<int>* lambda = nullptr);

}  // namespace uag
