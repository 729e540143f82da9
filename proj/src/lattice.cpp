#include "mvl/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "mvl/error.hpp"

namespace mvl {

namespace {

constexpr std::size_t kHardCap = 65535;

std::string pair_label(const std::string& a, const std::string& b, std::string_view sep = ", ") {
  return std::string(a) + std::string(sep) + b;
}

// Closure of `seed` (plus the bottom, the empty join) under binary join and meet.
ElementSet generated_by(const std::vector<std::uint16_t>& join, const std::vector<std::uint16_t>& meet,
                        std::size_t n, Element bottom, const std::vector<Element>& seed) {
  ElementSet in(n);
  std::vector<std::uint16_t> members;
  std::vector<std::uint16_t> work;
  auto add = [&](std::uint16_t x) {
    if (!in.test(x)) {
      in.set(x);
      work.push_back(x);
    }
  };
  add(bottom.id);
  for (Element e : seed) add(e.id);
  while (!work.empty()) {
    std::uint16_t x = work.back();
    work.pop_back();
    for (std::uint16_t m : members) {
      add(join[std::size_t{x} * n + m]);
      add(meet[std::size_t{x} * n + m]);
    }
    members.push_back(x);
  }
  return in;
}

}  // namespace

// ---------------------------------------------------------------------------
// ElementSet

std::size_t ElementSet::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool ElementSet::any() const {
  return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
}

bool ElementSet::is_subset_of(const ElementSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~other.words_[i]) return false;
  return true;
}

ElementSet& ElementSet::operator&=(const ElementSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

ElementSet& ElementSet::operator|=(const ElementSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

ElementSet& ElementSet::operator^=(const ElementSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

ElementSet ElementSet::minus(const ElementSet& other) const {
  ElementSet r = *this;
  for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= ~other.words_[i];
  return r;
}

std::vector<std::size_t> ElementSet::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size_; ++i)
    if (test(i)) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// BuildOptions

BuildOptions BuildOptions::from_environment() {
  BuildOptions options;
  if (const char* env = std::getenv("MVCM_MAX_LATTICE")) {
    char* end = nullptr;
    unsigned long value = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) options.max_elements = std::min<std::size_t>(value, kHardCap);
  }
  return options;
}

// ---------------------------------------------------------------------------
// Construction

Lattice Lattice::build(const LatticeSpec& spec, const BuildOptions& options) {
  Lattice l;
  const std::size_t n = spec.elements.size();
  if (n == 0) throw Error(ErrorCode::NotALattice, "a lattice needs at least one element");
  if (n > options.max_elements || n > kHardCap)
    throw Error(ErrorCode::LatticeTooLarge, std::to_string(n) + " elements exceed the cap of " +
                                                std::to_string(options.max_elements) +
                                                " (set MVCM_MAX_LATTICE to raise it)");

  l.labels_ = spec.elements;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, fresh] = l.by_label_.emplace(l.labels_[i], Element{static_cast<std::uint16_t>(i)});
    if (!fresh) throw Error(ErrorCode::DuplicateLabel, "'" + l.labels_[i] + "'");
  }

  // Order: reflexive-transitive closure of the cover pairs.
  std::vector<ElementSet> up(n, ElementSet(n));
  for (std::size_t i = 0; i < n; ++i) up[i].set(i);
  for (const auto& [lo, hi] : spec.covers) {
    Element a = l.at(lo);
    Element b = l.at(hi);
    if (a == b) throw Error(ErrorCode::CycleInOrder, "'" + lo + "' < '" + hi + "'");
    up[a.id].set(b.id);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (up[i].test(k)) up[i] |= up[k];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (up[i].test(j) && up[j].test(i))
        throw Error(ErrorCode::CycleInOrder, "'" + l.labels_[i] + "' and '" + l.labels_[j] + "' lie on a cycle");
  l.up_ = up;

  std::vector<ElementSet> down(n, ElementSet(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : up[i].indices()) down[j].set(i);

  // Least upper bounds: the unique element of U whose up-set contains U.
  auto least_of = [&](const ElementSet& bounds, const std::vector<ElementSet>& cone) -> std::optional<std::uint16_t> {
    for (std::size_t u : bounds.indices())
      if (bounds.is_subset_of(cone[u])) return static_cast<std::uint16_t>(u);
    return std::nullopt;
  };
  l.join_.assign(n * n, 0);
  l.meet_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      ElementSet ub = up[a];
      ub &= up[b];
      auto lub = least_of(ub, up);
      if (!lub)
        throw Error(ErrorCode::NotALattice, "no least upper bound for " + pair_label(l.labels_[a], l.labels_[b]));
      ElementSet lb = down[a];
      lb &= down[b];
      auto glb = least_of(lb, down);
      if (!glb)
        throw Error(ErrorCode::NotALattice, "no greatest lower bound for " + pair_label(l.labels_[a], l.labels_[b]));
      l.join_[a * n + b] = l.join_[b * n + a] = *lub;
      l.meet_[a * n + b] = l.meet_[b * n + a] = *glb;
    }
  }

  std::uint16_t top = 0;
  std::uint16_t bottom = 0;
  for (std::size_t i = 1; i < n; ++i) {
    top = l.join_[top * n + i];
    bottom = l.meet_[bottom * n + i];
  }
  l.top_ = Element{top};
  l.bottom_ = Element{bottom};

  // Heights in a linear extension (fewer elements below first).
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return down[a].count() < down[b].count(); });
  l.height_.assign(n, 0);
  for (std::size_t x : order)
    for (std::size_t y : down[x].indices())
      if (y != x) l.height_[x] = std::max(l.height_[x], l.height_[y] + 1);

  for (std::size_t i = 0; i < n; ++i)
    if (i != bottom && down[i].count() == 2) l.atoms_.push_back(Element{static_cast<std::uint16_t>(i)});

  l.compute_generators();
  l.atoms_generate_ = generated_by(l.join_, l.meet_, n, l.bottom_, l.atoms_).count() == n;

  if (!options.skip_exhaustive_checks) {
    bool distributive = true;
    for (std::size_t a = 0; a < n && distributive; ++a)
      for (std::size_t b = 0; b < n && distributive; ++b)
        for (std::size_t c = 0; c < n && distributive; ++c)
          if (l.meet_[a * n + l.join_[b * n + c]] != l.join_[l.meet_[a * n + b] * n + l.meet_[a * n + c]])
            distributive = false;
    l.distributive_ = distributive;
  }

  // Implication: for fixed a, group c by a ∧ c; each group needs a maximum,
  // which can only be the join of the group.
  {
    std::vector<std::uint16_t> implies(n * n, 0);
    bool brouwer = true;
    std::vector<std::uint16_t> group_join(n);
    std::vector<char> seen(n);
    for (std::size_t a = 0; a < n && brouwer; ++a) {
      std::fill(seen.begin(), seen.end(), 0);
      for (std::size_t c = 0; c < n; ++c) {
        std::uint16_t t = l.meet_[a * n + c];
        group_join[t] = seen[t] ? l.join_[group_join[t] * n + c] : static_cast<std::uint16_t>(c);
        seen[t] = 1;
      }
      for (std::size_t t = 0; t < n; ++t)
        if (seen[t] && l.meet_[a * n + group_join[t]] != t) brouwer = false;
      if (!brouwer) break;
      for (std::size_t b = 0; b < n; ++b) implies[a * n + b] = group_join[l.meet_[a * n + b]];
    }
    if (brouwer) l.implies_ = std::move(implies);
  }

  if (spec.mult) {
    const MultSpec& ms = *spec.mult;
    if (ms.kind == MultSpec::Kind::Meet) {
      l.mult_ = l.meet_;
      l.unit_ = l.top_;
      l.mult_is_meet_ = true;
    } else {
      if (ms.unit.empty()) throw Error(ErrorCode::BadMonoid, "multiplication table without a unit");
      l.unit_ = l.at(ms.unit);
      std::vector<std::uint16_t> table(n * n, 0);
      std::vector<char> defined(n * n, 0);
      for (const auto& p : ms.table) {
        Element a = l.at(p.lhs);
        Element b = l.at(p.rhs);
        Element c = l.at(p.result);
        std::size_t ix = l.index(a, b);
        if (defined[ix] && table[ix] != c.id)
          throw Error(ErrorCode::BadMonoid, "conflicting products for " + pair_label(p.lhs, p.rhs, "*"));
        table[ix] = c.id;
        defined[ix] = 1;
      }
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (!defined[a * n + b]) {
            // Products with the unit may be omitted.
            if (a == l.unit_.id) {
              table[a * n + b] = static_cast<std::uint16_t>(b);
            } else if (b == l.unit_.id) {
              table[a * n + b] = static_cast<std::uint16_t>(a);
            } else {
              throw Error(ErrorCode::BadMonoid,
                          "product " + pair_label(l.labels_[a], l.labels_[b], "*") + " is undefined");
            }
          }
      l.mult_ = std::move(table);
      l.mult_is_meet_ = l.mult_ == l.meet_;
      for (std::size_t x = 0; x < n; ++x) {
        if (l.mult_[l.unit_.id * n + x] != x || l.mult_[x * n + l.unit_.id] != x)
          throw Error(ErrorCode::BadMonoid, "unit '" + ms.unit + "' is not an identity for '" + l.labels_[x] + "'");
        if (l.mult_[x * n + bottom] != bottom || l.mult_[bottom * n + x] != bottom)
          throw Error(ErrorCode::BadMonoid, "'" + l.labels_[x] + "' times the bottom is not the bottom");
      }
      if (!options.skip_exhaustive_checks) {
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
              const auto& m = l.mult_;
              if (m[m[x * n + y] * n + z] != m[x * n + m[y * n + z]])
                throw Error(ErrorCode::BadMonoid, "not associative at (" + l.labels_[x] + ", " + l.labels_[y] +
                                                      ", " + l.labels_[z] + ")");
              std::uint16_t yz = l.join_[y * n + z];
              if (m[x * n + yz] != l.join_[m[x * n + y] * n + m[x * n + z]] ||
                  m[yz * n + x] != l.join_[m[y * n + x] * n + m[z * n + x]])
                throw Error(ErrorCode::BadMonoid, "'" + l.labels_[x] + "' does not distribute over the join of " +
                                                      pair_label(l.labels_[y], l.labels_[z]));
            }
      }
    }

    // Residuals: the residual set's maximum, when it exists, is its join.
    std::vector<std::uint16_t> right(n * n, 0);
    std::vector<std::uint16_t> left(n * n, 0);
    bool residuated = true;
    for (std::size_t a = 0; a < n && residuated; ++a) {
      for (std::size_t b = 0; b < n && residuated; ++b) {
        std::uint16_t rj = bottom;
        std::uint16_t lj = bottom;
        for (std::size_t y = 0; y < n; ++y) {
          if (up[l.mult_[a * n + y]].test(b)) rj = l.join_[rj * n + y];
          if (up[l.mult_[y * n + a]].test(b)) lj = l.join_[lj * n + y];
        }
        if (!up[l.mult_[a * n + rj]].test(b) || !up[l.mult_[lj * n + a]].test(b)) residuated = false;
        right[a * n + b] = rj;
        left[b * n + a] = lj;
      }
    }
    if (residuated && !options.skip_exhaustive_checks) {
      for (std::size_t x = 0; x < n && residuated; ++x)
        for (std::size_t y = 0; y < n && residuated; ++y)
          for (std::size_t z = 0; z < n && residuated; ++z) {
            bool prod = up[l.mult_[x * n + y]].test(z);
            bool via_right = up[y].test(right[x * n + z]);
            bool via_left = up[x].test(left[z * n + y]);
            if (prod != via_right || prod != via_left) residuated = false;
          }
    }
    if (residuated) {
      l.right_residual_ = std::move(right);
      l.left_residual_ = std::move(left);
    }
  }

  // Atom representation, present only when the lattice is atomistic.
  {
    const std::size_t k = l.atoms_.size();
    AtomSetRepr repr;
    repr.atoms = l.atoms_;
    repr.element_to_atoms.assign(n, ElementSet(k));
    bool atomistic = true;
    for (std::size_t e = 0; e < n; ++e) {
      std::uint16_t j = bottom;
      for (std::size_t ai = 0; ai < k; ++ai) {
        if (up[l.atoms_[ai].id].test(e)) {
          repr.element_to_atoms[e].set(ai);
          j = l.join_[j * n + l.atoms_[ai].id];
        }
      }
      if (j != e) atomistic = false;
    }
    if (atomistic) {
      for (std::size_t e = 0; e < n; ++e)
        l.by_atoms_.emplace(repr.element_to_atoms[e], Element{static_cast<std::uint16_t>(e)});
      l.atom_repr_ = std::move(repr);
      bool closed = true;
      for (std::size_t a = 0; a < n && closed; ++a)
        for (std::size_t b = 0; b < n && closed; ++b) {
          ElementSet sym = l.atom_repr_->element_to_atoms[a];
          sym ^= l.atom_repr_->element_to_atoms[b];
          ElementSet diff = l.atom_repr_->element_to_atoms[a].minus(l.atom_repr_->element_to_atoms[b]);
          if (!l.by_atoms_.count(sym) || !l.by_atoms_.count(diff)) closed = false;
        }
      l.boolean_ = closed;
    }
  }

  for (const auto& [alias, target] : spec.aliases) {
    Element e = l.at(target);
    if (!l.by_label_.emplace(alias, e).second && l.by_label_.at(alias) != e)
      throw Error(ErrorCode::DuplicateLabel, "alias '" + alias + "'");
  }
  return l;
}

void Lattice::compute_generators() {
  const std::size_t n = size();
  std::vector<Element> order = elements();
  std::stable_sort(order.begin(), order.end(),
                   [&](Element a, Element b) { return height_[a.id] > height_[b.id]; });
  ElementSet kept(n);
  for (std::size_t i = 0; i < n; ++i) kept.set(i);
  kept.reset(bottom_.id);
  for (Element candidate : order) {
    if (!kept.test(candidate.id)) continue;
    kept.reset(candidate.id);
    std::vector<Element> rest;
    for (std::size_t i : kept.indices()) rest.push_back(Element{static_cast<std::uint16_t>(i)});
    if (generated_by(join_, meet_, n, bottom_, rest).count() != n) kept.set(candidate.id);
  }
  generators_.clear();
  for (std::size_t i : kept.indices()) generators_.push_back(Element{static_cast<std::uint16_t>(i)});
}

Lattice Lattice::product(const Lattice& first, const Lattice& second, const BuildOptions& options) {
  const std::size_t n1 = first.size();
  const std::size_t n2 = second.size();
  if (n1 * n2 > options.max_elements)
    throw Error(ErrorCode::LatticeTooLarge, std::to_string(n1 * n2) + " elements exceed the cap of " +
                                                std::to_string(options.max_elements));
  auto pair_id = [n2](std::size_t i, std::size_t j) { return i * n2 + j; };

  LatticeSpec spec;
  std::vector<std::string> pretty;
  std::vector<std::string> full;
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const auto& l1 = first.labels_[i];
      const auto& l2 = second.labels_[j];
      pretty.push_back(i == first.bottom_.id ? l2 : l2 + l1);
      full.push_back(l1 + "." + l2);
    }
  }
  std::vector<std::string> sorted = pretty;
  std::sort(sorted.begin(), sorted.end());
  bool unique = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  for (const auto& f : full)
    if (std::binary_search(sorted.begin(), sorted.end(), f)) unique = false;
  spec.elements = unique ? pretty : full;
  if (unique)
    for (std::size_t k = 0; k < pretty.size(); ++k) spec.aliases.emplace_back(full[k], pretty[k]);

  auto covers_of = [](const Lattice& l) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < l.size(); ++a)
      for (std::size_t b = 0; b < l.size(); ++b)
        if (a != b && l.up_[a].test(b) && l.height_[b] > l.height_[a]) {
          bool cover = true;
          for (std::size_t c = 0; c < l.size() && cover; ++c)
            if (c != a && c != b && l.up_[a].test(c) && l.up_[c].test(b)) cover = false;
          if (cover) out.emplace_back(a, b);
        }
    return out;
  };
  for (auto [a, b] : covers_of(first))
    for (std::size_t j = 0; j < n2; ++j)
      spec.covers.emplace_back(spec.elements[pair_id(a, j)], spec.elements[pair_id(b, j)]);
  for (auto [a, b] : covers_of(second))
    for (std::size_t i = 0; i < n1; ++i)
      spec.covers.emplace_back(spec.elements[pair_id(i, a)], spec.elements[pair_id(i, b)]);

  if (first.has_mult() && second.has_mult()) {
    MultSpec ms;
    if (first.mult_is_meet_ && second.mult_is_meet_) {
      ms.kind = MultSpec::Kind::Meet;
    } else {
      ms.kind = MultSpec::Kind::Table;
      ms.unit = spec.elements[pair_id(first.unit_.id, second.unit_.id)];
      for (std::size_t a1 = 0; a1 < n1; ++a1)
        for (std::size_t a2 = 0; a2 < n2; ++a2)
          for (std::size_t b1 = 0; b1 < n1; ++b1)
            for (std::size_t b2 = 0; b2 < n2; ++b2)
              ms.table.push_back({spec.elements[pair_id(a1, a2)], spec.elements[pair_id(b1, b2)],
                                  spec.elements[pair_id(first.mult_[a1 * n1 + b1], second.mult_[a2 * n2 + b2])]});
    }
    spec.mult = std::move(ms);
  }
  return build(spec, options);
}

// ---------------------------------------------------------------------------
// Queries

std::vector<Element> Lattice::elements() const {
  std::vector<Element> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = Element{static_cast<std::uint16_t>(i)};
  return out;
}

const std::string& Lattice::label(Element e) const {
  check(e);
  return labels_[e.id];
}

std::optional<Element> Lattice::find(std::string_view label) const {
  auto it = by_label_.find(std::string(label));
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

Element Lattice::at(std::string_view label) const {
  if (auto e = find(label)) return *e;
  throw Error(ErrorCode::UnknownLabel, "'" + std::string(label) + "'");
}

void Lattice::check(Element e) const {
  if (e.id >= size())
    throw Error(ErrorCode::ForeignElement,
                "element #" + std::to_string(e.id) + " is outside a lattice of " + std::to_string(size()));
}

bool Lattice::leq(Element a, Element b) const {
  check(a);
  check(b);
  return up_[a.id].test(b.id);
}

Element Lattice::join(Element a, Element b) const {
  check(a);
  check(b);
  return Element{join_[index(a, b)]};
}

Element Lattice::meet(Element a, Element b) const {
  check(a);
  check(b);
  return Element{meet_[index(a, b)]};
}

int Lattice::height(Element e) const {
  check(e);
  return height_[e.id];
}

bool Lattice::is_atomic() const {
  for (std::size_t i = 0; i < generators_.size(); ++i)
    for (std::size_t j = i + 1; j < generators_.size(); ++j)
      if (meet_[index(generators_[i], generators_[j])] != bottom_.id) return false;
  return true;
}

bool Lattice::is_distributive() const {
  if (distributive_) return *distributive_;
  const std::size_t n = size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (meet_[a * n + join_[b * n + c]] != join_[meet_[a * n + b] * n + meet_[a * n + c]]) return false;
  return true;
}

Element Lattice::heyting_implies(Element a, Element b) const {
  check(a);
  check(b);
  if (!is_brouwer()) throw Error(ErrorCode::NotBrouwer, "implication is not defined in this lattice");
  return Element{implies_[index(a, b)]};
}

Element Lattice::mult(Element a, Element b) const {
  check(a);
  check(b);
  if (!has_mult()) throw Error(ErrorCode::UninterpretableTerm, "lattice has no multiplication");
  return Element{mult_[index(a, b)]};
}

Element Lattice::unit() const {
  if (!has_mult()) throw Error(ErrorCode::UninterpretableTerm, "lattice has no multiplication");
  return unit_;
}

std::pair<Element, Element> Lattice::residuals(Element a, Element b) const {
  check(a);
  check(b);
  if (!is_residuated())
    throw Error(ErrorCode::NotResiduated, has_mult() ? "some residual set has no greatest element"
                                                     : "lattice has no multiplication");
  return {Element{right_residual_[index(a, b)]}, Element{left_residual_[index(b, a)]}};
}

bool Lattice::is_integrally_closed() const {
  if (!is_residuated()) return false;
  for (Element x : elements()) {
    auto [r, l] = residuals(x, x);
    if (r != unit_ || l != unit_) return false;
  }
  return true;
}

bool Lattice::is_integral() const {
  if (!has_mult()) return false;
  return unit_ == top_;
}

const AtomSetRepr& Lattice::atom_repr() const {
  if (!atom_repr_)
    throw Error(ErrorCode::NotAtomRepresentable, "two elements share the same atoms (lattice is not atomistic)");
  return *atom_repr_;
}

std::optional<Element> Lattice::element_of_atoms(const ElementSet& atoms) const {
  auto it = by_atoms_.find(atoms);
  if (it == by_atoms_.end()) return std::nullopt;
  return it->second;
}

Element Lattice::from_atoms(const ElementSet& atoms, std::string_view op, Element a, Element b) const {
  if (auto e = element_of_atoms(atoms)) return *e;
  throw Error(ErrorCode::SumNotInLattice, std::string(op) + " of '" + labels_[a.id] + "' and '" + labels_[b.id] +
                                              "' has no element");
}

Element Lattice::ring_sum(Element a, Element b) const {
  check(a);
  check(b);
  const auto& repr = atom_repr();
  ElementSet sym = repr.element_to_atoms[a.id];
  sym ^= repr.element_to_atoms[b.id];
  return from_atoms(sym, "symmetric difference", a, b);
}

Element Lattice::set_difference(Element a, Element b) const {
  check(a);
  check(b);
  const auto& repr = atom_repr();
  return from_atoms(repr.element_to_atoms[a.id].minus(repr.element_to_atoms[b.id]), "difference", a, b);
}

bool operator==(const Lattice& a, const Lattice& b) {
  return a.labels_ == b.labels_ && a.up_ == b.up_ && a.mult_ == b.mult_ && a.unit_ == b.unit_;
}

}  // namespace mvl
