#include "uag/presentation.hpp"

#include <algorithm>

namespace uag {

void validate_presentation(const Presentation& p) {
  for (const auto& rel : p.relations) {
    if (rel.negated) throw InvalidInput("presentation relations must be equations");
    for (const Term* side : {&rel.lhs, &rel.rhs})
      for (const auto& v : side->vars())
        if (std::find(p.vars.begin(), p.vars.end(), v) == p.vars.end())
          throw InvalidInput("relation mentions a foreign variable: " + v);
  }
}

// --- CongruentClosure -------------------------------------------------------

CongruentClosure::CongruentClosure(const Presentation& p) : pres_(p) {
  validate_presentation(p);
  for (const auto& rel : p.relations) {
    int a = intern(rel.lhs);
    int b = intern(rel.rhs);
    unite(a, b);
  }
  close();
}

int CongruentClosure::intern(const Term& t) {
  auto it = index_.find(t);
  if (it != index_.end()) return it->second;
  Node node;
  node.term = t;
  if (t.kind() == Term::Kind::App) {
    node.func = pres_.sig.function_index(t.symbol());
    if (node.func < 0) throw InvalidInput("unknown function symbol: " + t.symbol());
    for (const auto& a : t.args()) node.kids.push_back(intern(a));
  } else if (t.kind() == Term::Kind::Var) {
    if (std::find(pres_.vars.begin(), pres_.vars.end(), t.symbol()) == pres_.vars.end())
      throw InvalidInput("query mentions a foreign variable: " + t.symbol());
  } else if (t.kind() == Term::Kind::Const) {
    if (pres_.sig.constant_index(t.symbol()) < 0)
      throw InvalidInput("unknown constant symbol: " + t.symbol());
  }
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(node));
  index_.emplace(t, id);
  parent_.push_back(id);
  return id;
}

int CongruentClosure::find(int x) {
  while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
  return x;
}

void CongruentClosure::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a != b) parent_[std::max(a, b)] = std::min(a, b);
}

void CongruentClosure::close() {
  // naive fixpoint: congruence rule over all application pairs
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].func < 0) continue;
      for (std::size_t j = i + 1; j < nodes_.size(); ++j) {
        if (nodes_[j].func != nodes_[i].func) continue;
        if (find(static_cast<int>(i)) == find(static_cast<int>(j))) continue;
        bool congruent = true;
        for (std::size_t k = 0; k < nodes_[i].kids.size() && congruent; ++k)
          congruent = find(nodes_[i].kids[k]) == find(nodes_[j].kids[k]);
        if (congruent) {
          unite(static_cast<int>(i), static_cast<int>(j));
          changed = true;
        }
      }
    }
  }
}

bool CongruentClosure::query(const AtomicFormula& q) {
  if (q.negated) throw InvalidInput("closure queries must be equations");
  std::size_t before = nodes_.size();
  int a = intern(q.lhs);
  int b = intern(q.rhs);
  if (nodes_.size() != before) close();
  return find(a) == find(b);
}

void CongruentClosure::extend_to_depth(int depth, int max_terms) {
  // breadth-first term generation over variables, constants, and functions
  std::vector<Term> current;
  for (const auto& v : pres_.vars) current.push_back(Term::var(v));
  for (const auto& c : pres_.sig.constants()) current.push_back(Term::constant(c));
  for (auto& t : current) intern(t);

  for (int d = 2; d <= depth; ++d) {
    std::vector<Term> next = current;
    for (const auto& f : pres_.sig.functions()) {
      std::vector<int> radices(f.arity, static_cast<int>(current.size()));
      long long total = 1;
      for (int i = 0; i < f.arity; ++i) total *= static_cast<long long>(current.size());
      for (long long code = 0; code < total; ++code) {
        Tuple idx = decode_tuple(static_cast<int>(code), radices);
        std::vector<Term> args;
        for (int i : idx) args.push_back(current[i]);
        next.push_back(Term::app(f.name, std::move(args)));
        if (static_cast<int>(next.size()) + universe_size() > max_terms)
          throw BoundExceeded("term universe exceeds the configured bound");
      }
    }
    for (auto& t : next) intern(t);
    current = std::move(next);
  }
  close();
}

bool congruent_closure_query(const Presentation& p, const AtomicFormula& q, int depth_bound) {
  int needed = std::max(q.lhs.depth(), q.rhs.depth());
  for (const auto& rel : p.relations)
    needed = std::max({needed, rel.lhs.depth(), rel.rhs.depth()});
  if (depth_bound < needed)
    throw InvalidInput("depth bound is below the terms of the relations and query");
  CongruentClosure cc(p);
  cc.extend_to_depth(depth_bound);
  return cc.query(q);
}

// --- Table presentations -------------------------------------------------------

namespace {

Presentation table_presentation_impl(const FiniteAlgebra& algebra, int coeff_count,
                                     const Mapping* lambda) {
  Presentation p;
  p.sig = algebra.sig();
  for (int m = 0; m < algebra.size(); ++m) p.vars.push_back("x" + std::to_string(m));

  auto var_of = [&p](int m) { return Term::var(p.vars[m]); };

  for (std::size_t f = 0; f < algebra.sig().functions().size(); ++f) {
    int arity = algebra.sig().functions()[f].arity;
    std::vector<int> radices(arity, algebra.size());
    int total = 1;
    for (int i = 0; i < arity; ++i) total *= algebra.size();
    for (int code = 0; code < total; ++code) {
      Tuple args = decode_tuple(code, radices);
      std::vector<Term> leaves;
      for (int m : args) leaves.push_back(var_of(m));
      p.relations.push_back({Term::app(algebra.sig().functions()[f].name, leaves),
                             var_of(algebra.apply(static_cast<int>(f), args)), false});
    }
  }
  for (std::size_t c = 0; c < algebra.sig().constants().size(); ++c)
    p.relations.push_back({Term::constant(algebra.sig().constants()[c]),
                           var_of(algebra.constant_value(static_cast<int>(c))), false});
  if (lambda)
    for (int a = 0; a < coeff_count; ++a)
      p.relations.push_back({Term::coeff(a), var_of((*lambda)[a]), false});
  return p;
}

}  // namespace

Presentation table_presentation(const FiniteAlgebra& algebra, const std::vector<int>& generators) {
  GeneratedSubalgebra gen = generated_subalgebra(algebra, generators);
  if (static_cast<int>(gen.universe.size()) != algebra.size())
    throw InvalidInput("the given elements do not generate the algebra");
  return table_presentation_impl(algebra, 0, nullptr);
}

Presentation table_presentation_with_coefficients(const FiniteAlgebra& coefficient_algebra,
                                                  const AAlgebra& c) {
  auto report = is_A_algebra(coefficient_algebra, c);
  if (!report.valid) throw InvalidInput("invalid coefficient structure");
  return table_presentation_impl(c.algebra, coefficient_algebra.size(), &c.lambda);
}

std::vector<Tuple> realize_presentation_in(const Presentation& p, const FiniteAlgebra& target,
                                           int max_universe, const std::vector<int>* lambda) {
  if (!(p.sig == target.sig()))
    throw InvalidInput("presentation and target have different signatures");
  validate_presentation(p);
  const int n = static_cast<int>(p.vars.size());
  long long space = 1;
  for (int i = 0; i < n; ++i) {
    space *= target.size();
    if (space > max_universe)
      throw BoundExceeded("assignment space exceeds the configured bound");
  }
  std::vector<Tuple> out;
  std::vector<int> radices(n, target.size());
  for (int code = 0; code < static_cast<int>(space); ++code) {
    Tuple point = decode_tuple(code, radices);
    bool ok = true;
    for (const auto& rel : p.relations)
      if (!holds(rel, target, p.vars, point, lambda)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(point);
  }
  return out;
}

}  // namespace uag
