#pragma once

// Brute-force reference implementations used only by the tests. Everything
// here is derived from the order relation alone (or, for the order itself,
// from the cover list), never from the library's join/meet tables.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mvl/lattice.hpp"
#include "mvl/mvset.hpp"
#include "mvl/term.hpp"

namespace oracle {

using mvl::Element;

// Reflexive-transitive closure of a cover list, by Warshall's algorithm.
inline std::vector<std::vector<bool>> closure(const mvl::LatticeSpec& spec) {
  const std::size_t n = spec.elements.size();
  auto idx = [&](const std::string& s) {
    return static_cast<std::size_t>(std::find(spec.elements.begin(), spec.elements.end(), s) - spec.elements.begin());
  };
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) le[i][i] = true;
  for (const auto& [lo, hi] : spec.covers) le[idx(lo)][idx(hi)] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (le[i][k] && le[k][j]) le[i][j] = true;
  return le;
}

/// Operations computed by search over the order of a built lattice.
class Ops {
 public:
  explicit Ops(const mvl::Lattice& l) : l_(l), n_(l.size()) {
    le_.assign(n_, std::vector<bool>(n_, false));
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b) le_[a][b] = l.leq(E(a), E(b));
  }

  std::size_t size() const { return n_; }
  static Element E(std::size_t i) { return Element{static_cast<std::uint16_t>(i)}; }
  bool leq(Element a, Element b) const { return le_[a.id][b.id]; }

  Element join(Element a, Element b) const {
    return least([&](Element u) { return leq(a, u) && leq(b, u); });
  }
  Element meet(Element a, Element b) const {
    return greatest([&](Element u) { return leq(u, a) && leq(u, b); });
  }
  Element top() const {
    return greatest([](Element) { return true; });
  }
  Element bottom() const {
    return least([](Element) { return true; });
  }
  /// max{c : a ∧ c ≤ b}; nothing when that set has no maximum.
  std::optional<Element> heyting(Element a, Element b) const {
    return maximum([&](Element c) { return leq(meet(a, c), b); });
  }
  /// max{y : a·y ≤ b}
  std::optional<Element> right_residual(Element a, Element b) const {
    return maximum([&](Element y) { return leq(l_.mult(a, y), b); });
  }
  /// max{x : x·a ≤ b}
  std::optional<Element> left_residual(Element b, Element a) const {
    return maximum([&](Element x) { return leq(l_.mult(x, a), b); });
  }
  std::vector<Element> atoms() const {
    std::vector<Element> out;
    Element bot = bottom();
    for (std::size_t i = 0; i < n_; ++i) {
      Element a = E(i);
      if (a == bot) continue;
      bool covers_bottom = true;
      for (std::size_t j = 0; j < n_; ++j) {
        Element c = E(j);
        if (c != bot && c != a && leq(c, a)) covers_bottom = false;
      }
      if (covers_bottom) out.push_back(a);
    }
    return out;
  }
  std::set<std::uint16_t> atoms_below(Element x) const {
    std::set<std::uint16_t> out;
    for (Element a : atoms())
      if (leq(a, x)) out.insert(a.id);
    return out;
  }
  /// Element whose atom set is the symmetric difference, if any.
  std::optional<Element> ring_sum(Element a, Element b) const {
    auto sa = atoms_below(a);
    auto sb = atoms_below(b);
    std::set<std::uint16_t> want;
    std::set_symmetric_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(want, want.end()));
    return by_atoms(want);
  }
  std::optional<Element> set_difference(Element a, Element b) const {
    auto sa = atoms_below(a);
    auto sb = atoms_below(b);
    std::set<std::uint16_t> want;
    std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(want, want.end()));
    return by_atoms(want);
  }
  bool distributive() const {
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        for (std::size_t c = 0; c < n_; ++c)
          if (meet(E(a), join(E(b), E(c))) != join(meet(E(a), E(b)), meet(E(a), E(c)))) return false;
    return true;
  }

 private:
  template <typename P>
  Element least(P pred) const {
    for (std::size_t i = 0; i < n_; ++i) {
      if (!pred(E(i))) continue;
      bool below_all = true;
      for (std::size_t j = 0; j < n_; ++j)
        if (pred(E(j)) && !le_[i][j]) below_all = false;
      if (below_all) return E(i);
    }
    throw std::logic_error("no least element");
  }
  template <typename P>
  Element greatest(P pred) const {
    auto m = maximum(pred);
    if (!m) throw std::logic_error("no greatest element");
    return *m;
  }
  template <typename P>
  std::optional<Element> maximum(P pred) const {
    for (std::size_t i = 0; i < n_; ++i) {
      if (!pred(E(i))) continue;
      bool above_all = true;
      for (std::size_t j = 0; j < n_; ++j)
        if (pred(E(j)) && !le_[j][i]) above_all = false;
      if (above_all) return E(i);
    }
    return std::nullopt;
  }
  std::optional<Element> by_atoms(const std::set<std::uint16_t>& want) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (atoms_below(E(i)) == want) return E(i);
    return std::nullopt;
  }

  const mvl::Lattice& l_;
  std::size_t n_;
  std::vector<std::vector<bool>> le_;
};

/// Term evaluation with the oracle's operations. `imp` is the Heyting
/// implication (the oracle is only used on Brouwer lattices for it).
inline Element eval(const Ops& ops, const mvl::Lattice& l, const mvl::TermNode& node,
                    const std::map<std::string, Element>& env) {
  using mvl::TermOp;
  switch (node.op) {
    case TermOp::Var: return env.at(node.name);
    case TermOp::Const: return *mvl::resolve_constant(l, node.name);
    default: break;
  }
  Element a = eval(ops, l, *node.lhs, env);
  Element b = eval(ops, l, *node.rhs, env);
  switch (node.op) {
    case TermOp::Join: return ops.join(a, b);
    case TermOp::Meet: return ops.meet(a, b);
    case TermOp::Mult: return l.mult(a, b);
    case TermOp::Implies: return *ops.heyting(a, b);
    case TermOp::RingSum: return *ops.ring_sum(a, b);
    default: break;
  }
  throw std::logic_error("bad term");
}

/// Extension principle by enumerating every tuple of L^n. Confidences of
/// unsupported elements are bottom(M); tuples with a bottom argument
/// confidence are skipped, as in the support-based definition.
inline std::map<std::uint16_t, std::uint16_t> extend(const mvl::LatticeTerm& term,
                                                     const std::vector<mvl::MVSet>& args) {
  const mvl::Lattice& L = args.front().carrier();
  const mvl::Lattice& M = args.front().scale();
  Ops lo(L), mo(M);
  const std::size_t n = args.size();
  std::map<std::uint16_t, std::uint16_t> out;
  std::vector<std::size_t> pos(n, 0);
  while (true) {
    std::map<std::string, Element> xs, ms;
    bool skip = false;
    for (std::size_t i = 0; i < n; ++i) {
      Element x = Ops::E(pos[i]);
      Element m = args[i].confidence(x);
      if (m == mo.bottom()) skip = true;
      xs[term.params()[i]] = x;
      ms[term.params()[i]] = m;
    }
    if (!skip) {
      Element y = eval(lo, L, term.body(), xs);
      Element m = eval(mo, M, term.body(), ms);
      if (m != mo.bottom()) {
        auto [it, fresh] = out.emplace(y.id, m.id);
        if (!fresh) it->second = mo.join(Element{it->second}, m).id;
      }
    }
    std::size_t i = 0;
    while (i < n && ++pos[i] == L.size()) pos[i++] = 0;
    if (i == n) break;
  }
  return out;
}

inline std::map<std::uint16_t, std::uint16_t> entries_of(const mvl::MVSet& s) {
  std::map<std::uint16_t, std::uint16_t> out;
  for (const auto& [x, m] : s.entries()) out[x.id] = m.id;
  return out;
}

// Pessimistic / optimistic mean of two element sets, straight from the definition.
inline std::set<std::uint16_t> mean2(const Ops& o, bool pessimistic, const std::vector<Element>& A,
                                     const std::vector<Element>& B) {
  std::set<std::uint16_t> out;
  auto one_side = [&](const std::vector<Element>& X, const std::vector<Element>& Y) {
    for (Element b : X) {
      std::optional<Element> acc;
      for (Element a : Y) {
        Element v = pessimistic ? o.meet(b, a) : o.join(b, a);
        acc = !acc ? v : pessimistic ? o.join(*acc, v) : o.meet(*acc, v);
      }
      out.insert(acc->id);
    }
  };
  one_side(B, A);
  one_side(A, B);
  return out;
}

inline std::set<std::uint16_t> mean_n(const Ops& o, bool pessimistic, const std::vector<std::vector<Element>>& sets) {
  std::set<std::uint16_t> out;
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      auto m = mean2(o, pessimistic, sets[i], sets[j]);
      out.insert(m.begin(), m.end());
    }
  return out;
}

/// Full-preimage mean confidence: every tuple of L^n, unsupported elements at
/// bottom(M). Returns target -> confidence for targets with a non-bottom value.
inline std::map<std::uint16_t, std::uint16_t> mean_confidences_full(bool pessimistic,
                                                                    const std::vector<mvl::MVSet>& inputs) {
  const mvl::Lattice& L = inputs.front().carrier();
  const mvl::Lattice& M = inputs.front().scale();
  Ops lo(L), mo(M);
  const std::size_t n = inputs.size();
  std::map<std::uint16_t, std::uint16_t> out;
  std::vector<std::size_t> pos(n, 0);
  while (true) {
    std::vector<std::vector<Element>> xs, ms;
    for (std::size_t i = 0; i < n; ++i) {
      Element x = Ops::E(pos[i]);
      xs.push_back({x});
      ms.push_back({inputs[i].confidence(x)});
    }
    Element m = mo.bottom();
    for (auto c : mean_n(mo, pessimistic, ms)) m = mo.join(m, Element{c});
    if (m != mo.bottom())
      for (auto t : mean_n(lo, pessimistic, xs)) {
        auto [it, fresh] = out.emplace(t, m.id);
        if (!fresh) it->second = mo.join(Element{it->second}, m).id;
      }
    std::size_t i = 0;
    while (i < n && ++pos[i] == L.size()) pos[i++] = 0;
    if (i == n) break;
  }
  return out;
}

/// Crisp cognitive map: values, weights and coefficients are plain elements,
/// combination is the join and multiplication the meet. Same coefficient and
/// loop policy as the engine: c = top until the first recurrence of a full
/// state, then c = f ⇒ r from then on.
struct CrispMap {
  const mvl::Lattice* L;
  std::vector<std::vector<std::optional<Element>>> w;  // w[j][i], nothing = no edge
  std::vector<Element> initial;
};

struct CrispState {
  std::vector<Element> a, f, r, c;
  bool looped = false;
  bool operator==(const CrispState&) const = default;
  std::vector<std::uint16_t> key() const {
    std::vector<std::uint16_t> k;
    for (const auto* v : {&a, &f, &r, &c})
      for (Element e : *v) k.push_back(e.id);
    k.push_back(looped ? 1 : 0);
    return k;
  }
};

struct CrispRun {
  std::vector<CrispState> states;  // k = 0, 1, ...
  bool converged = false;
};

inline CrispRun run_crisp(const CrispMap& map, int max_iter) {
  Ops o(*map.L);
  const std::size_t n = map.initial.size();
  auto influence = [&](const std::vector<Element>& a, std::size_t i) {
    Element acc = o.bottom();
    for (std::size_t j = 0; j < n; ++j)
      if (map.w[j][i]) acc = o.join(acc, o.meet(*map.w[j][i], a[j]));
    return acc;
  };
  CrispState s;
  s.a = map.initial;
  s.f.assign(n, o.top());
  s.r = s.f;
  s.c = s.f;
  CrispRun run;
  run.states.push_back(s);
  std::set<std::vector<std::uint16_t>> seen{s.key()};
  for (int k = 1; k <= max_iter; ++k) {
    const CrispState& prev = run.states.back();
    CrispState next;
    next.looped = prev.looped;
    for (std::size_t i = 0; i < n; ++i)
      next.a.push_back(o.meet(prev.c[i], o.meet(prev.f[i], influence(prev.a, i))));
    for (std::size_t i = 0; i < n; ++i) {
      Element infl = influence(next.a, i);
      next.f.push_back(*o.heyting(infl, o.join(next.a[i], prev.a[i])));
      next.r.push_back(*o.heyting(infl, o.meet(next.a[i], prev.a[i])));
      next.c.push_back(next.looped ? *o.heyting(next.f[i], next.r[i]) : o.top());
    }
    bool fixed = next.key() == prev.key();
    if (!fixed && seen.count(next.key()) && !next.looped) {
      next.looped = true;
      for (std::size_t i = 0; i < n; ++i) next.c[i] = *o.heyting(next.f[i], next.r[i]);
    }
    seen.insert(next.key());
    run.states.push_back(next);
    if (fixed) {
      run.converged = true;
      break;
    }
  }
  return run;
}

/// Random term over the given parameters, `ops` drawn from the allowed set.
inline mvl::TermPtr random_term(std::mt19937& rng, const std::vector<std::string>& params,
                                const std::vector<mvl::TermOp>& ops, int depth) {
  std::uniform_int_distribution<int> coin(0, 2);
  if (depth == 0 || coin(rng) == 0) {
    return mvl::var(params[std::uniform_int_distribution<std::size_t>(0, params.size() - 1)(rng)]);
  }
  mvl::TermOp op = ops[std::uniform_int_distribution<std::size_t>(0, ops.size() - 1)(rng)];
  return mvl::binary(op, random_term(rng, params, ops, depth - 1), random_term(rng, params, ops, depth - 1));
}

}  // namespace oracle
