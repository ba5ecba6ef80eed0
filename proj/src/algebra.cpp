#include "uag/algebra.hpp"

#include <algorithm>
#include <numeric>

namespace uag {

// --- FiniteAlgebra ----------------------------------------------------------

FiniteAlgebra::FiniteAlgebra(Signature sig, int size, std::vector<std::vector<int>> tables,
                             std::vector<int> constants, std::string name)
    : sig_(std::move(sig)),
      size_(size),
      tables_(std::move(tables)),
      constants_(std::move(constants)),
      name_(std::move(name)) {
  if (size_ < 1) throw InvalidInput("algebra universe must be non-empty");
  if (tables_.size() != sig_.functions().size())
    throw InvalidInput("table count does not match the signature");
  for (std::size_t f = 0; f < tables_.size(); ++f) {
    std::size_t expected = 1;
    for (int i = 0; i < sig_.functions()[f].arity; ++i) expected *= size_;
    if (tables_[f].size() != expected)
      throw InvalidInput("table for '" + sig_.functions()[f].name + "' is not total");
    for (int v : tables_[f])
      if (v < 0 || v >= size_)
        throw InvalidInput("table value out of range for '" + sig_.functions()[f].name + "'");
  }
  if (constants_.size() != sig_.constants().size())
    throw InvalidInput("constant count does not match the signature");
  for (int v : constants_)
    if (v < 0 || v >= size_) throw InvalidInput("constant value out of range");
}

int FiniteAlgebra::apply(int func_index, const Tuple& args) const {
  const auto& t = tables_[func_index];
  int idx = 0;
  for (int a : args) idx = idx * size_ + a;
  return t[idx];
}

int encode_tuple(const Tuple& tuple, const std::vector<int>& radices) {
  int code = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) code = code * radices[i] + tuple[i];
  return code;
}

Tuple decode_tuple(int code, const std::vector<int>& radices) {
  Tuple out(radices.size(), 0);
  for (std::size_t i = radices.size(); i-- > 0;) {
    out[i] = code % radices[i];
    code /= radices[i];
  }
  return out;
}

// --- Evaluation --------------------------------------------------------------

int eval_term(const Term& t, const FiniteAlgebra& algebra,
              const std::map<std::string, int>& assignment, const std::vector<int>* lambda) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = assignment.find(t.symbol());
      if (it == assignment.end())
        throw InvalidInput("missing variable assignment: " + t.symbol());
      return it->second;
    }
    case Term::Kind::Const: {
      int ci = algebra.sig().constant_index(t.symbol());
      if (ci < 0) throw InvalidInput("unknown constant: " + t.symbol());
      return algebra.constant_value(ci);
    }
    case Term::Kind::Coeff: {
      if (!lambda) throw InvalidInput("coefficient leaf without a coefficient embedding");
      if (t.coeff_element() < 0 || t.coeff_element() >= static_cast<int>(lambda->size()))
        throw InvalidInput("coefficient element out of range");
      return (*lambda)[t.coeff_element()];
    }
    case Term::Kind::App: {
      int fi = algebra.sig().function_index(t.symbol());
      if (fi < 0) throw InvalidInput("unknown function: " + t.symbol());
      Tuple args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(eval_term(a, algebra, assignment, lambda));
      return algebra.apply(fi, args);
    }
  }
  throw InternalDefect("unreachable term kind");
}

int eval_term(const Term& t, const FiniteAlgebra& algebra, const VarList& vars,
              const Tuple& point, const std::vector<int>* lambda) {
  std::map<std::string, int> assignment;
  for (std::size_t i = 0; i < vars.size() && i < point.size(); ++i)
    assignment[vars[i]] = point[i];
  return eval_term(t, algebra, assignment, lambda);
}

bool holds(const AtomicFormula& f, const FiniteAlgebra& algebra, const VarList& vars,
           const Tuple& point, const std::vector<int>* lambda) {
  bool eq = eval_term(f.lhs, algebra, vars, point, lambda) ==
            eval_term(f.rhs, algebra, vars, point, lambda);
  return f.negated ? !eq : eq;
}

// --- Congruences --------------------------------------------------------------

int Congruence::classes() const {
  int n = 0;
  for (std::size_t i = 0; i < label.size(); ++i)
    if (label[i] == static_cast<int>(i)) ++n;
  return n;
}

std::vector<std::vector<int>> Congruence::class_lists() const {
  std::vector<std::vector<int>> out;
  std::map<int, int> index;
  for (std::size_t i = 0; i < label.size(); ++i) {
    auto [it, inserted] = index.try_emplace(label[i], static_cast<int>(out.size()));
    if (inserted) out.emplace_back();
    out[it->second].push_back(static_cast<int>(i));
  }
  return out;
}

Congruence Congruence::identity(int size) {
  Congruence c;
  c.label.resize(size);
  std::iota(c.label.begin(), c.label.end(), 0);
  return c;
}

Congruence Congruence::total(int size) {
  Congruence c;
  c.label.assign(size, 0);
  return c;
}

void Congruence::canonicalize() {
  // union-find style: make every label point at the least member.
  std::vector<int> least(label.size());
  std::iota(least.begin(), least.end(), 0);
  for (std::size_t i = 0; i < label.size(); ++i)
    least[label[i]] = std::min(least[label[i]], static_cast<int>(i));
  for (auto& l : label) l = least[l];
}

Congruence Congruence::from_pairs(int size, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<int> parent(size);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : pairs) {
    int ra = find(a), rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  Congruence c;
  c.label.resize(size);
  for (int i = 0; i < size; ++i) c.label[i] = find(i);
  c.canonicalize();
  return c;
}

bool is_congruence(const FiniteAlgebra& algebra, const Congruence& theta) {
  if (static_cast<int>(theta.label.size()) != algebra.size()) return false;
  const int k = algebra.size();
  for (std::size_t f = 0; f < algebra.sig().functions().size(); ++f) {
    int arity = algebra.sig().functions()[f].arity;
    std::vector<int> radices(arity, k);
    int total = 1;
    for (int i = 0; i < arity; ++i) total *= k;
    for (int c1 = 0; c1 < total; ++c1) {
      Tuple t1 = decode_tuple(c1, radices);
      for (int c2 = c1 + 1; c2 < total; ++c2) {
        Tuple t2 = decode_tuple(c2, radices);
        bool related = true;
        for (int i = 0; i < arity && related; ++i)
          related = theta.related(t1[i], t2[i]);
        if (related &&
            !theta.related(algebra.apply(static_cast<int>(f), t1),
                           algebra.apply(static_cast<int>(f), t2)))
          return false;
      }
    }
  }
  return true;
}

Congruence generated_congruence(const FiniteAlgebra& algebra,
                                const std::vector<std::pair<int, int>>& pairs) {
  Congruence theta = Congruence::from_pairs(algebra.size(), pairs);
  const int k = algebra.size();
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::pair<int, int>> extra;
    for (std::size_t f = 0; f < algebra.sig().functions().size(); ++f) {
      int arity = algebra.sig().functions()[f].arity;
      std::vector<int> radices(arity, k);
      int total = 1;
      for (int i = 0; i < arity; ++i) total *= k;
      for (int c1 = 0; c1 < total; ++c1) {
        Tuple t1 = decode_tuple(c1, radices);
        for (int c2 = c1 + 1; c2 < total; ++c2) {
          Tuple t2 = decode_tuple(c2, radices);
          bool related = true;
          for (int i = 0; i < arity && related; ++i) related = theta.related(t1[i], t2[i]);
          if (related) {
            int v1 = algebra.apply(static_cast<int>(f), t1);
            int v2 = algebra.apply(static_cast<int>(f), t2);
            if (!theta.related(v1, v2)) extra.emplace_back(v1, v2);
          }
        }
      }
    }
    if (!extra.empty()) {
      for (int i = 0; i < k; ++i) extra.emplace_back(i, theta.label[i]);
      theta = Congruence::from_pairs(k, extra);
      changed = true;
    }
  }
  return theta;
}

Congruence congruence_lattice_op(LatticeOp op, const FiniteAlgebra& algebra,
                                 const Congruence& a, const Congruence& b) {
  if (a.label.size() != b.label.size() ||
      static_cast<int>(a.label.size()) != algebra.size())
    throw InvalidInput("congruence lattice operation across different algebras");
  if (op == LatticeOp::Meet) {
    // common refinement
    Congruence out;
    out.label.resize(a.label.size());
    std::map<std::pair<int, int>, int> first_seen;
    for (std::size_t i = 0; i < a.label.size(); ++i) {
      auto key = std::make_pair(a.label[i], b.label[i]);
      auto [it, inserted] = first_seen.try_emplace(key, static_cast<int>(i));
      out.label[i] = it->second;
    }
    return out;
  }
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < a.label.size(); ++i) {
    pairs.emplace_back(static_cast<int>(i), a.label[i]);
    pairs.emplace_back(static_cast<int>(i), b.label[i]);
  }
  return generated_congruence(algebra, pairs);
}

// --- Homomorphisms -------------------------------------------------------------

bool is_homomorphism(const FiniteAlgebra& source, const FiniteAlgebra& target,
                     const Mapping& map) {
  if (!(source.sig() == target.sig())) return false;
  if (static_cast<int>(map.size()) != source.size()) return false;
  for (int v : map)
    if (v < 0 || v >= target.size()) return false;
  const int k = source.size();
  for (std::size_t f = 0; f < source.sig().functions().size(); ++f) {
    int arity = source.sig().functions()[f].arity;
    std::vector<int> radices(arity, k);
    int total = 1;
    for (int i = 0; i < arity; ++i) total *= k;
    for (int code = 0; code < total; ++code) {
      Tuple args = decode_tuple(code, radices);
      Tuple imgs(arity);
      for (int i = 0; i < arity; ++i) imgs[i] = map[args[i]];
      if (map[source.apply(static_cast<int>(f), args)] !=
          target.apply(static_cast<int>(f), imgs))
        return false;
    }
  }
  for (std::size_t c = 0; c < source.sig().constants().size(); ++c)
    if (map[source.constant_value(static_cast<int>(c))] !=
        target.constant_value(static_cast<int>(c)))
      return false;
  return true;
}

bool is_injective(const Mapping& map) {
  std::set<int> seen(map.begin(), map.end());
  return seen.size() == map.size();
}

Congruence kernel(const FiniteAlgebra& source, const Mapping& map) {
  Congruence c;
  c.label.resize(source.size());
  std::map<int, int> first;
  for (int i = 0; i < source.size(); ++i) {
    auto [it, inserted] = first.try_emplace(map[i], i);
    c.label[i] = it->second;
  }
  return c;
}

namespace {

// Backtracking over elements in order with incremental constraint checks.
// Produces maps in lexicographic order, identical to filtering all maps.
struct HomSearch {
  const FiniteAlgebra& src;
  const FiniteAlgebra& tgt;
  const HomomorphismMode& mode;
  Mapping map;
  std::vector<bool> used;  // injective mode
  std::vector<Mapping>* out = nullptr;
  std::optional<Mapping> first;
  bool stop_at_first = false;

  // Consistency of every constraint whose participants are all assigned,
  // and at least one participant is `last`.
  bool consistent(int last) const {
    auto assigned = [this](int m) { return map[m] >= 0; };
    for (std::size_t f = 0; f < src.sig().functions().size(); ++f) {
      int arity = src.sig().functions()[f].arity;
      std::vector<int> radices(arity, src.size());
      int total = 1;
      for (int i = 0; i < arity; ++i) total *= src.size();
      for (int code = 0; code < total; ++code) {
        Tuple args = decode_tuple(code, radices);
        int value = src.apply(static_cast<int>(f), args);
        bool involves_last = value == last;
        bool all_assigned = assigned(value);
        for (int a : args) {
          involves_last = involves_last || a == last;
          all_assigned = all_assigned && assigned(a);
        }
        if (!involves_last || !all_assigned) continue;
        Tuple imgs(arity);
        for (int i = 0; i < arity; ++i) imgs[i] = map[args[i]];
        if (tgt.apply(static_cast<int>(f), imgs) != map[value]) return false;
      }
    }
    for (std::size_t c = 0; c < src.sig().constants().size(); ++c) {
      int m = src.constant_value(static_cast<int>(c));
      if (m == last && map[m] != tgt.constant_value(static_cast<int>(c))) return false;
    }
    return true;
  }

  bool run(int element) {
    if (element == src.size()) {
      if (stop_at_first) {
        first = map;
        return true;
      }
      out->push_back(map);
      return false;
    }
    if (map[element] >= 0) {  // pre-assigned
      if (mode.injective || stop_at_first) {
        if (used[map[element]]) return false;
        used[map[element]] = true;
        bool done = consistent(element) && run(element + 1);
        used[map[element]] = false;
        return done;
      }
      return consistent(element) && run(element + 1);
    }
    for (int b = 0; b < tgt.size(); ++b) {
      if ((mode.injective || stop_at_first) && used[b]) continue;
      map[element] = b;
      if ((mode.injective || stop_at_first)) used[b] = true;
      if (consistent(element) && run(element + 1)) return true;
      if ((mode.injective || stop_at_first)) used[b] = false;
      map[element] = -1;
    }
    return false;
  }
};

}  // namespace

std::vector<Mapping> enumerate_homomorphisms(const FiniteAlgebra& source,
                                             const FiniteAlgebra& target,
                                             const HomomorphismMode& mode) {
  if (!(source.sig() == target.sig()))
    throw InvalidInput("homomorphism enumeration requires a shared signature");
  std::vector<Mapping> out;
  HomSearch search{source, target, mode};
  search.map.assign(source.size(), -1);
  search.used.assign(target.size(), false);
  search.out = &out;
  for (auto [m, b] : mode.fixed) {
    if (m < 0 || m >= source.size() || b < 0 || b >= target.size())
      throw InvalidInput("fixed homomorphism constraint out of range");
    if (search.map[m] >= 0 && search.map[m] != b) return out;  // clash, empty
    search.map[m] = b;
  }
  search.run(0);
  return out;
}

std::optional<Mapping> find_embedding(const FiniteAlgebra& source, const FiniteAlgebra& target,
                                      const std::vector<std::pair<int, int>>& fixed) {
  if (!(source.sig() == target.sig()))
    throw InvalidInput("embedding search requires a shared signature");
  if (source.size() > target.size()) return std::nullopt;
  HomomorphismMode mode;
  mode.injective = true;
  mode.fixed = fixed;
  HomSearch search{source, target, mode};
  search.map.assign(source.size(), -1);
  search.used.assign(target.size(), false);
  search.stop_at_first = true;
  for (auto [m, b] : fixed) {
    if (search.map[m] >= 0 && search.map[m] != b) return std::nullopt;
    search.map[m] = b;
  }
  search.run(0);
  return search.first;
}

std::optional<Mapping> find_isomorphism(const FiniteAlgebra& a, const FiniteAlgebra& b,
                                        const std::vector<std::pair<int, int>>& fixed) {
  if (!(a.sig() == b.sig())) return std::nullopt;
  if (a.size() != b.size()) return std::nullopt;
  return find_embedding(a, b, fixed);  // injective + equal size = bijective
}

// --- Subalgebras -----------------------------------------------------------

GeneratedSubalgebra generated_subalgebra(const FiniteAlgebra& algebra,
                                         const std::vector<int>& seed) {
  if (seed.empty() && algebra.sig().constants().empty())
    throw InvalidInput("empty seed over a constant-free signature generates nothing");
  GeneratedSubalgebra out;
  out.seed = seed;
  std::vector<Term> witness_of(algebra.size());
  std::vector<bool> present(algebra.size(), false);
  std::vector<int> frontier;

  auto add = [&](int m, Term w) {
    if (present[m]) return;
    present[m] = true;
    witness_of[m] = std::move(w);
    frontier.push_back(m);
  };

  for (std::size_t i = 0; i < seed.size(); ++i) {
    if (seed[i] < 0 || seed[i] >= algebra.size())
      throw InvalidInput("seed element out of range");
    std::string v = "x" + std::to_string(i);
    out.seed_vars.push_back(v);
    add(seed[i], Term::var(v));
  }
  for (std::size_t c = 0; c < algebra.sig().constants().size(); ++c)
    add(algebra.constant_value(static_cast<int>(c)),
        Term::constant(algebra.sig().constants()[c]));

  // breadth-first closure so witnesses are shortest-found
  std::vector<int> members = frontier;
  std::size_t processed = 0;
  while (processed < members.size()) {
    // apply every operation to every tuple of current members
    bool grew = false;
    for (std::size_t f = 0; f < algebra.sig().functions().size(); ++f) {
      int arity = algebra.sig().functions()[f].arity;
      std::vector<int> radices(arity, static_cast<int>(members.size()));
      int total = 1;
      for (int i = 0; i < arity; ++i) total *= static_cast<int>(members.size());
      for (int code = 0; code < total; ++code) {
        Tuple idx = decode_tuple(code, radices);
        Tuple args(arity);
        std::vector<Term> wargs;
        for (int i = 0; i < arity; ++i) {
          args[i] = members[idx[i]];
          wargs.push_back(witness_of[args[i]]);
        }
        int value = algebra.apply(static_cast<int>(f), args);
        if (!present[value]) {
          present[value] = true;
          witness_of[value] = Term::app(algebra.sig().functions()[f].name, wargs);
          members.push_back(value);
          grew = true;
        }
      }
    }
    processed = grew ? processed : members.size();
  }

  for (int m = 0; m < algebra.size(); ++m)
    if (present[m]) {
      out.universe.push_back(m);
      out.witnesses.push_back(witness_of[m]);
    }
  return out;
}

bool is_closed_subuniverse(const FiniteAlgebra& algebra, const std::vector<int>& universe) {
  std::vector<bool> in(algebra.size(), false);
  for (int m : universe) {
    if (m < 0 || m >= algebra.size()) return false;
    in[m] = true;
  }
  for (std::size_t c = 0; c < algebra.sig().constants().size(); ++c)
    if (!in[algebra.constant_value(static_cast<int>(c))]) return false;
  for (std::size_t f = 0; f < algebra.sig().functions().size(); ++f) {
    int arity = algebra.sig().functions()[f].arity;
    std::vector<int> radices(arity, static_cast<int>(universe.size()));
    int total = 1;
    for (int i = 0; i < arity; ++i) total *= static_cast<int>(universe.size());
    for (int code = 0; code < total; ++code) {
      Tuple idx = decode_tuple(code, radices);
      Tuple args(arity);
      for (int i = 0; i < arity; ++i) args[i] = universe[idx[i]];
      if (!in[algebra.apply(static_cast<int>(f), args)]) return false;
    }
  }
  return true;
}

FiniteAlgebra subalgebra(const FiniteAlgebra& algebra, const std::vector<int>& universe) {
  std::vector<int> sorted = universe;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (!is_closed_subuniverse(algebra, sorted))
    throw InvalidInput("subset is not a closed subuniverse");
  std::vector<int> relabel(algebra.size(), -1);
  for (std::size_t i = 0; i < sorted.size(); ++i) relabel[sorted[i]] = static_cast<int>(i);
  int m = static_cast<int>(sorted.size());

  std::vector<std::vector<int>> tables;
  for (std::size_t f = 0; f < algebra.sig().functions().size(); ++f) {
    int arity = algebra.sig().functions()[f].arity;
    std::vector<int> radices(arity, m);
    int total = 1;
    for (int i = 0; i < arity; ++i) total *= m;
    std::vector<int> table(total);
    for (int code = 0; code < total; ++code) {
      Tuple idx = decode_tuple(code, radices);
      Tuple args(arity);
      for (int i = 0; i < arity; ++i) args[i] = sorted[idx[i]];
      table[code] = relabel[algebra.apply(static_cast<int>(f), args)];
    }
    tables.push_back(std::move(table));
  }
  std::vector<int> constants;
  for (std::size_t c = 0; c < algebra.sig().constants().size(); ++c)
    constants.push_back(relabel[algebra.constant_value(static_cast<int>(c))]);
  return FiniteAlgebra(algebra.sig(), m, std::move(tables), std::move(constants));
}

// --- Products -----------------------------------------------------------------

ProductResult direct_product(const std::vector<FiniteAlgebra>& factors, int max_universe) {
  if (factors.empty()) throw InvalidInput("direct product requires a non-empty factor list");
  const Signature& sig = factors.front().sig();
  long long size = 1;
  std::vector<int> sizes;
  for (const auto& f : factors) {
    if (!(f.sig() == sig)) throw InvalidInput("direct product requires a shared signature");
    sizes.push_back(f.size());
    size *= f.size();
    if (size > max_universe)
      throw BoundExceeded("product universe exceeds the configured bound of " +
                          std::to_string(max_universe));
  }
  int k = static_cast<int>(size);

  std::vector<std::vector<int>> tables;
  for (std::size_t f = 0; f < sig.functions().size(); ++f) {
    int arity = sig.functions()[f].arity;
    std::vector<int> radices(arity, k);
    long long total = 1;
    for (int i = 0; i < arity; ++i) total *= k;
    if (total > 64LL * 1024 * 1024)
      throw BoundExceeded("product operation table too large");
    std::vector<int> table(static_cast<std::size_t>(total));
    for (long long code = 0; code < total; ++code) {
      Tuple args = decode_tuple(static_cast<int>(code), radices);
      std::vector<Tuple> coords(factors.size());
      for (std::size_t j = 0; j < factors.size(); ++j) coords[j].resize(arity);
      for (int i = 0; i < arity; ++i) {
        Tuple components = decode_tuple(args[i], sizes);
        for (std::size_t j = 0; j < factors.size(); ++j) coords[j][i] = components[j];
      }
      Tuple value(factors.size());
      for (std::size_t j = 0; j < factors.size(); ++j)
        value[j] = factors[j].apply(static_cast<int>(f), coords[j]);
      table[static_cast<std::size_t>(code)] = encode_tuple(value, sizes);
    }
    tables.push_back(std::move(table));
  }
  std::vector<int> constants;
  for (std::size_t c = 0; c < sig.constants().size(); ++c) {
    Tuple value(factors.size());
    for (std::size_t j = 0; j < factors.size(); ++j)
      value[j] = factors[j].constant_value(static_cast<int>(c));
    constants.push_back(encode_tuple(value, sizes));
  }

  ProductResult out;
  out.algebra = FiniteAlgebra(sig, k, std::move(tables), std::move(constants));
  out.sizes = sizes;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    Mapping proj(k);
    for (int m = 0; m < k; ++m) proj[m] = decode_tuple(m, sizes)[j];
    out.projections.push_back(std::move(proj));
  }
  return out;
}

bool is_subdirect(const ProductResult& product, const std::vector<int>& subuniverse) {
  if (!is_closed_subuniverse(product.algebra, subuniverse))
    throw InvalidInput("subuniverse is not closed in the product");
  for (std::size_t j = 0; j < product.projections.size(); ++j) {
    std::set<int> image;
    for (int m : subuniverse) image.insert(product.projections[j][m]);
    if (static_cast<int>(image.size()) != product.sizes[j]) return false;
  }
  return true;
}

// --- Quotients ------------------------------------------------------------------

QuotientResult quotient(const FiniteAlgebra& algebra, const Congruence& theta) {
  if (!is_congruence(algebra, theta))
    throw InvalidInput("partition is not compatible with the operations");
  Congruence canon = theta;
  canon.canonicalize();

  // classes ordered by least member
  std::vector<int> labels;
  for (int m = 0; m < algebra.size(); ++m)
    if (canon.label[m] == m) labels.push_back(m);
  std::map<int, int> class_index;
  for (std::size_t i = 0; i < labels.size(); ++i) class_index[labels[i]] = static_cast<int>(i);
  int k = static_cast<int>(labels.size());

  Mapping projection(algebra.size());
  for (int m = 0; m < algebra.size(); ++m) projection[m] = class_index[canon.label[m]];

  std::vector<std::vector<int>> tables;
  for (std::size_t f = 0; f < algebra.sig().functions().size(); ++f) {
    int arity = algebra.sig().functions()[f].arity;
    std::vector<int> radices(arity, k);
    int total = 1;
    for (int i = 0; i < arity; ++i) total *= k;
    std::vector<int> table(total);
    for (int code = 0; code < total; ++code) {
      Tuple idx = decode_tuple(code, radices);
      Tuple reps(arity);
      for (int i = 0; i < arity; ++i) reps[i] = labels[idx[i]];
      table[code] = projection[algebra.apply(static_cast<int>(f), reps)];
    }
    tables.push_back(std::move(table));
  }
  std::vector<int> constants;
  for (std::size_t c = 0; c < algebra.sig().constants().size(); ++c)
    constants.push_back(projection[algebra.constant_value(static_cast<int>(c))]);

  QuotientResult out;
  out.algebra = FiniteAlgebra(algebra.sig(), k, std::move(tables), std::move(constants));
  out.projection = std::move(projection);
  internal_check(is_homomorphism(algebra, out.algebra, out.projection),
                 "quotient projection failed the homomorphism check");
  return out;
}

// --- Diagrams -------------------------------------------------------------------

std::vector<AtomicFormula> core_diagram(const FiniteAlgebra& a) {
  std::vector<AtomicFormula> out;
  for (std::size_t c = 0; c < a.sig().constants().size(); ++c)
    out.push_back({Term::constant(a.sig().constants()[c]),
                   Term::coeff(a.constant_value(static_cast<int>(c))), false});
  for (std::size_t f = 0; f < a.sig().functions().size(); ++f) {
    int arity = a.sig().functions()[f].arity;
    std::vector<int> radices(arity, a.size());
    int total = 1;
    for (int i = 0; i < arity; ++i) total *= a.size();
    for (int code = 0; code < total; ++code) {
      Tuple args = decode_tuple(code, radices);
      std::vector<Term> leaves;
      for (int x : args) leaves.push_back(Term::coeff(x));
      out.push_back({Term::app(a.sig().functions()[f].name, leaves),
                     Term::coeff(a.apply(static_cast<int>(f), args)), false});
    }
  }
  for (int x = 0; x < a.size(); ++x)
    for (int y = x + 1; y < a.size(); ++y)
      out.push_back({Term::coeff(x), Term::coeff(y), true});
  return out;
}

AAlgebraReport is_A_algebra(const FiniteAlgebra& coefficient_algebra, const AAlgebra& candidate) {
  AAlgebraReport report;
  if (!(candidate.algebra.sig() == coefficient_algebra.sig())) {
    report.violations.push_back("signature mismatch with the coefficient algebra");
    return report;
  }
  if (static_cast<int>(candidate.lambda.size()) != coefficient_algebra.size()) {
    report.violations.push_back("embedding map does not cover the coefficient algebra");
    return report;
  }
  for (int v : candidate.lambda)
    if (v < 0 || v >= candidate.algebra.size()) {
      report.violations.push_back("embedding image out of range");
      return report;
    }
  for (const auto& sentence : core_diagram(coefficient_algebra)) {
    if (!holds(sentence, candidate.algebra, {}, {}, &candidate.lambda))
      report.violations.push_back("fails: " + sentence.text());
  }
  report.valid = report.violations.empty();
  return report;
}

// --- Filterproducts ----------------------------------------------------------------

bool Filter::contains(const std::vector<int>& subset) const {
  return std::find(members.begin(), members.end(), subset) != members.end();
}

Filter Filter::principal(int index_count, const std::vector<int>& base) {
  Filter f;
  f.index_count = index_count;
  for (int mask = 0; mask < (1 << index_count); ++mask) {
    std::vector<int> subset;
    bool superset = true;
    for (int i = 0; i < index_count; ++i)
      if (mask & (1 << i)) subset.push_back(i);
    for (int b : base)
      superset = superset && (mask & (1 << b));
    if (superset) f.members.push_back(subset);
  }
  return f;
}

Filter Filter::trivial(int index_count) {
  Filter f;
  f.index_count = index_count;
  std::vector<int> all;
  for (int i = 0; i < index_count; ++i) all.push_back(i);
  f.members.push_back(all);
  return f;
}

bool Filter::is_ultra() const {
  for (int mask = 0; mask < (1 << index_count); ++mask) {
    std::vector<int> subset, complement;
    for (int i = 0; i < index_count; ++i)
      (mask & (1 << i) ? subset : complement).push_back(i);
    if (!contains(subset) && !contains(complement)) return false;
  }
  return true;
}

void validate_filter(const Filter& filter) {
  if (filter.index_count <= 0) throw InvalidInput("filter needs a non-empty index set");
  if (filter.members.empty()) throw InvalidInput("filter must be non-empty");
  auto as_mask = [&](const std::vector<int>& subset) {
    unsigned mask = 0;
    for (int i : subset) {
      if (i < 0 || i >= filter.index_count) throw InvalidInput("filter member out of range");
      mask |= 1u << i;
    }
    return mask;
  };
  std::set<unsigned> masks;
  for (const auto& s : filter.members) masks.insert(as_mask(s));
  if (masks.size() != filter.members.size()) throw InvalidInput("duplicate filter member");
  if (masks.count(0)) throw InvalidInput("filter contains the empty set");
  unsigned full = (1u << filter.index_count) - 1;
  for (unsigned a : masks) {
    for (unsigned b : masks)
      if (!masks.count(a & b)) throw InvalidInput("filter is not intersection-closed");
    for (unsigned sup = a; ; sup = (sup + 1) | a) {
      if ((sup & full) == sup && !masks.count(sup))
        throw InvalidInput("filter is not upward closed");
      if (sup == full) break;
    }
  }
}

FilterProductResult filterproduct(const std::vector<FiniteAlgebra>& factors,
                                  const Filter& filter, int max_universe) {
  if (static_cast<int>(factors.size()) != filter.index_count)
    throw InvalidInput("filter index set does not match the factor list");
  validate_filter(filter);
  FilterProductResult out;
  out.product = direct_product(factors, max_universe);
  const auto& prod = out.product.algebra;

  // a ~ b iff the agreement set of coordinates is in the filter
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < prod.size(); ++a) {
    Tuple ta = decode_tuple(a, out.product.sizes);
    for (int b = a + 1; b < prod.size(); ++b) {
      Tuple tb = decode_tuple(b, out.product.sizes);
      std::vector<int> agree;
      for (std::size_t i = 0; i < ta.size(); ++i)
        if (ta[i] == tb[i]) agree.push_back(static_cast<int>(i));
      if (filter.contains(agree)) pairs.emplace_back(a, b);
    }
  }
  Congruence theta = Congruence::from_pairs(prod.size(), pairs);
  internal_check(is_congruence(prod, theta),
                 "filter relation is not a congruence on the product");
  QuotientResult q = quotient(prod, theta);
  out.algebra = std::move(q.algebra);
  out.projection = std::move(q.projection);
  return out;
}

// --- Direct limits -------------------------------------------------------------------

void validate_algebra_system(const AlgebraDirectSystem& system) {
  const int n = static_cast<int>(system.algebras.size());
  if (n == 0) throw InvalidInput("direct system needs at least one algebra");
  const Signature& sig = system.algebras.front().sig();
  for (const auto& a : system.algebras)
    if (!(a.sig() == sig)) throw InvalidInput("direct system requires a shared signature");
  if (static_cast<int>(system.leq.size()) != n)
    throw InvalidInput("order relation has the wrong shape");
  for (const auto& row : system.leq)
    if (static_cast<int>(row.size()) != n)
      throw InvalidInput("order relation has the wrong shape");
  for (int i = 0; i < n; ++i)
    if (!system.leq[i][i]) throw InvalidInput("order must be reflexive");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (system.leq[i][j] && system.leq[j][k] && !system.leq[i][k])
          throw InvalidInput("order must be transitive");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!system.leq[i][j]) continue;
      auto it = system.homs.find({i, j});
      if (it == system.homs.end())
        throw InvalidInput("missing connecting homomorphism " + std::to_string(i) + " -> " +
                           std::to_string(j));
      if (!is_homomorphism(system.algebras[i], system.algebras[j], it->second))
        throw InvalidInput("connecting map " + std::to_string(i) + " -> " + std::to_string(j) +
                           " is not a homomorphism");
    }
  for (int i = 0; i < n; ++i) {
    const Mapping& id = system.homs.at({i, i});
    for (int m = 0; m < system.algebras[i].size(); ++m)
      if (id[m] != m) throw InvalidInput("h_ii must be the identity");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (!(system.leq[i][j] && system.leq[j][k])) continue;
        const Mapping& hij = system.homs.at({i, j});
        const Mapping& hjk = system.homs.at({j, k});
        const Mapping& hik = system.homs.at({i, k});
        for (int m = 0; m < system.algebras[i].size(); ++m)
          if (hjk[hij[m]] != hik[m])
            throw InvalidInput("connecting maps do not compose: " + std::to_string(i) + " -> " +
                               std::to_string(j) + " -> " + std::to_string(k));
      }
  // directedness
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      bool bounded = false;
      for (int k = 0; k < n && !bounded; ++k) bounded = system.leq[i][k] && system.leq[j][k];
      if (!bounded) throw InvalidInput("index order is not directed");
    }
}

DirectLimitResult direct_limit_algebras(const AlgebraDirectSystem& system, int max_universe) {
  validate_algebra_system(system);
  const int n = static_cast<int>(system.algebras.size());

  // disjoint union nodes
  std::vector<int> offset(n + 1, 0);
  for (int i = 0; i < n; ++i) offset[i + 1] = offset[i] + system.algebras[i].size();
  int total = offset[n];
  if (total > max_universe) throw BoundExceeded("direct limit node count exceeds the bound");

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!system.leq[i][j] || i == j) continue;
      const Mapping& h = system.homs.at({i, j});
      for (int m = 0; m < system.algebras[i].size(); ++m)
        pairs.emplace_back(offset[i] + m, offset[j] + h[m]);
    }
  Congruence classes = Congruence::from_pairs(total, pairs);

  std::vector<int> labels;
  for (int v = 0; v < total; ++v)
    if (classes.label[v] == v) labels.push_back(v);
  std::map<int, int> class_index;
  for (std::size_t i = 0; i < labels.size(); ++i) class_index[labels[i]] = static_cast<int>(i);
  int k = static_cast<int>(labels.size());

  DirectLimitResult out;
  out.class_of.resize(n);
  for (int i = 0; i < n; ++i) {
    out.class_of[i].resize(system.algebras[i].size());
    for (int m = 0; m < system.algebras[i].size(); ++m)
      out.class_of[i][m] = class_index[classes.label[offset[i] + m]];
  }

  auto upper_bound_of = [&](const std::vector<int>& indices) {
    for (int k2 = 0; k2 < n; ++k2) {
      bool ok = true;
      for (int i : indices) ok = ok && system.leq[i][k2];
      if (ok) return k2;
    }
    throw InternalDefect("directed order without an upper bound");
  };

  const Signature& sig = system.algebras.front().sig();
  std::vector<std::vector<int>> tables;
  for (std::size_t f = 0; f < sig.functions().size(); ++f) {
    int arity = sig.functions()[f].arity;
    std::vector<int> radices(arity, k);
    int count = 1;
    for (int i = 0; i < arity; ++i) count *= k;
    std::vector<int> table(count);
    for (int code = 0; code < count; ++code) {
      Tuple cls = decode_tuple(code, radices);
      // canonical representatives, pushed to a common upper index
      std::vector<int> idxs(arity), elems(arity);
      for (int t = 0; t < arity; ++t) {
        int node = labels[cls[t]];
        int i = 0;
        while (offset[i + 1] <= node) ++i;
        idxs[t] = i;
        elems[t] = node - offset[i];
      }
      int j = upper_bound_of(idxs);
      Tuple imgs(arity);
      for (int t = 0; t < arity; ++t) imgs[t] = system.homs.at({idxs[t], j})[elems[t]];
      int value = system.algebras[j].apply(static_cast<int>(f), imgs);
      table[code] = out.class_of[j][value];
    }
    tables.push_back(std::move(table));
  }
  std::vector<int> constants;
  for (std::size_t c = 0; c < sig.constants().size(); ++c)
    constants.push_back(out.class_of[0][system.algebras[0].constant_value(static_cast<int>(c))]);

  out.algebra = FiniteAlgebra(sig, k, std::move(tables), std::move(constants));
  for (int i = 0; i < n; ++i)
    internal_check(is_homomorphism(system.algebras[i], out.algebra,
                                   out.class_of[i]),
                   "limit class map failed the homomorphism check");
  return out;
}

}  // namespace uag
