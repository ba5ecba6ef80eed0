#include "uag/geometry.hpp"

#include <algorithm>
#include <set>

namespace uag {

void validate_system_of_equations(const EquationSystem& s) {
  for (const auto& eq : s.equations) {
    if (eq.negated) throw InvalidInput("systems contain equations, not inequations");
    for (const Term* side : {&eq.lhs, &eq.rhs})
      for (const auto& v : side->vars())
        if (std::find(s.vars.begin(), s.vars.end(), v) == s.vars.end())
          throw InvalidInput("equation mentions a foreign variable: " + v);
  }
}

AlgebraicSet solve(const EquationSystem& s, const FiniteAlgebra& target, int max_universe,
                   const std::vector<int>* lambda) {
  if (!(s.sig == target.sig()))
    throw InvalidInput("system and target have different signatures");
  validate_system_of_equations(s);
  if (s.coeff_count > 0 && !lambda)
    throw InvalidInput("system carries coefficients but no embedding was given");

  AlgebraicSet y;
  y.algebra = target;
  y.system = s;
  if (lambda) y.lambda = *lambda;

  const int n = static_cast<int>(s.vars.size());
  long long space = 1;
  for (int i = 0; i < n; ++i) {
    space *= target.size();
    if (space > max_universe)
      throw BoundExceeded("solution space exceeds the configured bound");
  }
  std::vector<int> radices(n, target.size());
  for (int code = 0; code < static_cast<int>(space); ++code) {
    Tuple point = decode_tuple(code, radices);
    bool ok = true;
    for (const auto& eq : s.equations)
      if (!holds(eq, target, s.vars, point, lambda)) {
        ok = false;
        break;
      }
    if (ok) y.points.push_back(point);
  }
  return y;
}

bool radical_member(const AlgebraicSet& y, const AtomicFormula& q) {
  if (q.negated) throw InvalidInput("radical membership is asked of equations");
  for (const auto& v : q.lhs.vars())
    if (std::find(y.system.vars.begin(), y.system.vars.end(), v) == y.system.vars.end())
      throw InvalidInput("query mentions a foreign variable: " + v);
  for (const auto& v : q.rhs.vars())
    if (std::find(y.system.vars.begin(), y.system.vars.end(), v) == y.system.vars.end())
      throw InvalidInput("query mentions a foreign variable: " + v);
  for (const auto& p : y.points)
    if (!holds(q, y.algebra, y.system.vars, p, y.lambda_ptr())) return false;
  return true;
}

int TraceSubalgebra::find(const std::vector<int>& trace) const {
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == trace) return static_cast<int>(i);
  return -1;
}

std::vector<int> term_trace(const AlgebraicSet& y, const Term& t) {
  std::vector<int> trace;
  trace.reserve(y.points.size());
  for (const auto& p : y.points)
    trace.push_back(eval_term(t, y.algebra, y.system.vars, p, y.lambda_ptr()));
  return trace;
}

TraceSubalgebra trace_subalgebra(const AlgebraicSet& y) {
  if (y.empty()) throw EmptyAlgebraicSet("trace subalgebra of an empty algebraic set");
  TraceSubalgebra out;

  auto add = [&out](std::vector<int> trace, Term witness) {
    int idx = out.find(trace);
    if (idx >= 0) return idx;
    out.elements.push_back(std::move(trace));
    out.witnesses.push_back(std::move(witness));
    return static_cast<int>(out.elements.size()) - 1;
  };

  const int n = y.arity();
  for (int i = 0; i < n; ++i) {
    std::vector<int> proj;
    for (const auto& p : y.points) proj.push_back(p[i]);
    out.projections.push_back(add(std::move(proj), Term::var(y.system.vars[i])));
  }
  for (std::size_t c = 0; c < y.algebra.sig().constants().size(); ++c) {
    std::vector<int> trace(y.points.size(), y.algebra.constant_value(static_cast<int>(c)));
    out.constant_elems.push_back(
        add(std::move(trace), Term::constant(y.algebra.sig().constants()[c])));
  }
  for (int a = 0; a < y.system.coeff_count; ++a) {
    std::vector<int> trace(y.points.size(), y.lambda[a]);
    out.coeff_elems.push_back(add(std::move(trace), Term::coeff(a)));
  }
  if (out.elements.empty())
    throw InvalidInput("no generators: empty variable list over a constant-free signature");

  // pointwise closure, breadth-first so witnesses stay shortest-found
  bool grew = true;
  while (grew) {
    grew = false;
    std::size_t count = out.elements.size();
    for (std::size_t f = 0; f < y.algebra.sig().functions().size(); ++f) {
      int arity = y.algebra.sig().functions()[f].arity;
      std::vector<int> radices(arity, static_cast<int>(count));
      long long total = 1;
      for (int i = 0; i < arity; ++i) total *= static_cast<long long>(count);
      for (long long code = 0; code < total; ++code) {
        Tuple idx = decode_tuple(static_cast<int>(code), radices);
        std::vector<int> trace(y.points.size());
        for (std::size_t p = 0; p < y.points.size(); ++p) {
          Tuple args(arity);
          for (int i = 0; i < arity; ++i) args[i] = out.elements[idx[i]][p];
          trace[p] = y.algebra.apply(static_cast<int>(f), args);
        }
        if (out.find(trace) < 0) {
          std::vector<Term> wargs;
          for (int i : idx) wargs.push_back(out.witnesses[i]);
          out.elements.push_back(std::move(trace));
          out.witnesses.push_back(
              Term::app(y.algebra.sig().functions()[f].name, std::move(wargs)));
          grew = true;
        }
      }
    }
  }
  return out;
}

CoordinateAlgebra coordinate_algebra(const AlgebraicSet& y) {
  if (y.empty()) throw EmptyAlgebraicSet("coordinate algebra of an empty algebraic set");
  CoordinateAlgebra out;
  out.traces = trace_subalgebra(y);
  const auto& tr = out.traces;
  int k = static_cast<int>(tr.elements.size());

  std::vector<std::vector<int>> tables;
  for (std::size_t f = 0; f < y.algebra.sig().functions().size(); ++f) {
    int arity = y.algebra.sig().functions()[f].arity;
    std::vector<int> radices(arity, k);
    int total = 1;
    for (int i = 0; i < arity; ++i) total *= k;
    std::vector<int> table(total);
    for (int code = 0; code < total; ++code) {
      Tuple idx = decode_tuple(code, radices);
      std::vector<int> trace(y.points.size());
      for (std::size_t p = 0; p < y.points.size(); ++p) {
        Tuple args(arity);
        for (int i = 0; i < arity; ++i) args[i] = tr.elements[idx[i]][p];
        trace[p] = y.algebra.apply(static_cast<int>(f), args);
      }
      int value = tr.find(trace);
      internal_check(value >= 0, "trace closure is not closed under an operation");
      table[code] = value;
    }
    tables.push_back(std::move(table));
  }
  std::vector<int> constants(tr.constant_elems.begin(), tr.constant_elems.end());
  out.algebra = FiniteAlgebra(y.algebra.sig(), k, std::move(tables), std::move(constants));
  out.generators = tr.projections;
  out.lambda = tr.coeff_elems;
  return out;
}

namespace {

// Proper equalizer subsets E(f,g) ∩ Y for distinct trace elements, in a
// deterministic pair order.
struct Equalizer {
  std::vector<bool> member;  // per point of Y
  int lhs = 0, rhs = 0;      // trace element indices
  bool proper = false;
};

std::vector<Equalizer> proper_equalizers(const AlgebraicSet& y, const TraceSubalgebra& tr,
                                         EqualizerOrder order) {
  std::vector<Equalizer> out;
  const int k = static_cast<int>(tr.elements.size());
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) pairs.emplace_back(a, b);
  if (order == EqualizerOrder::Reverse) std::reverse(pairs.begin(), pairs.end());
  for (auto [a, b] : pairs) {
    Equalizer e;
    e.lhs = a;
    e.rhs = b;
    e.member.resize(y.points.size());
    bool all = true;
    for (std::size_t p = 0; p < y.points.size(); ++p) {
      e.member[p] = tr.elements[a][p] == tr.elements[b][p];
      all = all && e.member[p];
    }
    e.proper = !all;
    if (e.proper) out.push_back(std::move(e));
  }
  return out;
}

AlgebraicSet restrict_to(const AlgebraicSet& y, const std::vector<bool>& member,
                         const AtomicFormula& cut) {
  AlgebraicSet out;
  out.algebra = y.algebra;
  out.lambda = y.lambda;
  out.system = y.system;
  out.system.equations.push_back(cut);
  for (std::size_t p = 0; p < y.points.size(); ++p)
    if (member[p]) out.points.push_back(y.points[p]);
  return out;
}

}  // namespace

IrreducibilityResult is_irreducible(const AlgebraicSet& y, EqualizerOrder order) {
  if (y.empty())
    throw EmptyAlgebraicSet("irreducibility is asked of non-empty algebraic sets");
  IrreducibilityResult out;
  TraceSubalgebra tr = trace_subalgebra(y);
  auto equalizers = proper_equalizers(y, tr, order);

  std::vector<bool> covered(y.points.size(), false);
  for (const auto& e : equalizers)
    for (std::size_t p = 0; p < y.points.size(); ++p)
      if (e.member[p]) covered[p] = true;

  for (std::size_t p = 0; p < y.points.size(); ++p) {
    if (!covered[p]) {
      out.irreducible = true;
      out.generic_point = y.points[p];
      return out;
    }
  }

  // reducible: greedy proper cover in enumeration order
  std::vector<bool> still(y.points.size(), false);
  std::size_t remaining = y.points.size();
  for (const auto& e : equalizers) {
    bool adds = false;
    for (std::size_t p = 0; p < y.points.size(); ++p)
      if (e.member[p] && !still[p]) adds = true;
    if (!adds) continue;
    for (std::size_t p = 0; p < y.points.size(); ++p)
      if (e.member[p] && !still[p]) {
        still[p] = true;
        --remaining;
      }
    AtomicFormula cut{tr.witnesses[e.lhs], tr.witnesses[e.rhs], false};
    out.cover.push_back(restrict_to(y, e.member, cut));
    if (remaining == 0) break;
  }
  internal_check(remaining == 0, "equalizer cover failed to cover a reducible set");
  return out;
}

bool verify_generic_point(const AlgebraicSet& y, const Tuple& point) {
  auto it = std::find(y.points.begin(), y.points.end(), point);
  if (it == y.points.end()) return false;
  std::size_t pos = static_cast<std::size_t>(it - y.points.begin());
  TraceSubalgebra tr = trace_subalgebra(y);
  for (const auto& e : proper_equalizers(y, tr, EqualizerOrder::Forward))
    if (e.member[pos]) return false;
  return true;
}

namespace {

bool subset_points(const std::vector<Tuple>& a, const std::vector<Tuple>& b) {
  // both sorted
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

void decompose_into(const AlgebraicSet& y, EqualizerOrder order,
                    std::vector<AlgebraicSet>& out) {
  if (y.empty()) return;
  IrreducibilityResult r = is_irreducible(y, order);
  if (r.irreducible) {
    out.push_back(y);
    return;
  }
  for (const auto& part : r.cover) decompose_into(part, order, out);
}

}  // namespace

std::vector<AlgebraicSet> decompose(const AlgebraicSet& y, EqualizerOrder order) {
  std::vector<AlgebraicSet> components;
  decompose_into(y, order, components);

  // drop contained components, dedupe, canonical order by point list
  std::sort(components.begin(), components.end(),
            [](const AlgebraicSet& a, const AlgebraicSet& b) { return a.points < b.points; });
  components.erase(std::unique(components.begin(), components.end(),
                               [](const AlgebraicSet& a, const AlgebraicSet& b) {
                                 return a.points == b.points;
                               }),
                   components.end());
  std::vector<AlgebraicSet> antichain;
  for (std::size_t i = 0; i < components.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < components.size() && maximal; ++j)
      if (i != j && components[i].points != components[j].points &&
          subset_points(components[i].points, components[j].points))
        maximal = false;
    if (maximal) antichain.push_back(components[i]);
  }
  return antichain;
}

// --- Closed sets -----------------------------------------------------------------

namespace {

void check_same_space(const AlgebraicSet& a, const AlgebraicSet& b) {
  if (!(a.algebra == b.algebra) || a.arity() != b.arity())
    throw InvalidInput("closed-set operation across different powers");
}

}  // namespace

ClosedSet make_closed(std::vector<AlgebraicSet> components) {
  ClosedSet out;
  for (std::size_t i = 1; i < components.size(); ++i)
    check_same_space(components[0], components[i]);
  std::sort(components.begin(), components.end(),
            [](const AlgebraicSet& a, const AlgebraicSet& b) { return a.points < b.points; });
  components.erase(std::unique(components.begin(), components.end(),
                               [](const AlgebraicSet& a, const AlgebraicSet& b) {
                                 return a.points == b.points;
                               }),
                   components.end());
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (components[i].empty()) continue;
    bool maximal = true;
    for (std::size_t j = 0; j < components.size() && maximal; ++j)
      if (i != j && components[i].points != components[j].points &&
          subset_points(components[i].points, components[j].points))
        maximal = false;
    if (maximal) out.components.push_back(components[i]);
  }
  return out;
}

ClosedSet closed_union(const ClosedSet& a, const ClosedSet& b) {
  std::vector<AlgebraicSet> all = a.components;
  all.insert(all.end(), b.components.begin(), b.components.end());
  return make_closed(std::move(all));
}

ClosedSet closed_intersection(const ClosedSet& a, const ClosedSet& b) {
  std::vector<AlgebraicSet> parts;
  for (const auto& ya : a.components)
    for (const auto& yb : b.components) {
      check_same_space(ya, yb);
      AlgebraicSet piece;
      piece.algebra = ya.algebra;
      piece.lambda = ya.lambda;
      piece.system = ya.system;
      for (const auto& eq : yb.system.equations) piece.system.equations.push_back(eq);
      std::set_intersection(ya.points.begin(), ya.points.end(), yb.points.begin(),
                            yb.points.end(), std::back_inserter(piece.points));
      parts.push_back(std::move(piece));
    }
  return make_closed(std::move(parts));
}

std::vector<Tuple> closed_points(const ClosedSet& c) {
  std::set<Tuple> all;
  for (const auto& y : c.components) all.insert(y.points.begin(), y.points.end());
  return {all.begin(), all.end()};
}

int noetherian_chain_probe(const FiniteAlgebra& target, const std::vector<EquationSystem>& chain,
                           int max_universe, const std::vector<int>* lambda) {
  if (chain.empty()) throw InvalidInput("empty chain");
  std::vector<std::vector<Tuple>> solutions;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i > 0) {
      for (const auto& eq : chain[i - 1].equations)
        if (std::find(chain[i].equations.begin(), chain[i].equations.end(), eq) ==
            chain[i].equations.end())
          throw InvalidInput("chain is not growing at index " + std::to_string(i + 1));
    }
    solutions.push_back(solve(chain[i], target, max_universe, lambda).points);
  }
  int stable = static_cast<int>(chain.size());
  for (int i = static_cast<int>(chain.size()) - 1; i >= 0; --i) {
    if (solutions[i] == solutions.back())
      stable = i + 1;
    else
      break;
  }
  return stable;
}

}  // namespace uag
