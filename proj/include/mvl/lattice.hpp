#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mvl {

/// Index of an element inside one lattice's element table.
struct Element {
  std::uint16_t id = 0;

  friend auto operator<=>(const Element&, const Element&) = default;
};

/// Monoid multiplication attached to a lattice. `Meet` uses the lattice meet
/// with the top as unit (the Heyting case); `Table` lists every product.
struct MultSpec {
  enum class Kind { Meet, Table };
  struct Product {
    std::string lhs;
    std::string rhs;
    std::string result;

    friend bool operator==(const Product&, const Product&) = default;
  };

  Kind kind = Kind::Meet;
  std::string unit;
  std::vector<Product> table;

  friend bool operator==(const MultSpec&, const MultSpec&) = default;
};

/// Unvalidated description of a finite lattice, as read from text.
struct LatticeSpec {
  std::vector<std::string> elements;
  std::vector<std::pair<std::string, std::string>> covers;  // (lower, upper)
  std::optional<MultSpec> mult;
  std::vector<std::pair<std::string, std::string>> aliases;  // (alias, label)

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

struct BuildOptions {
  /// Soft cap on the element count; validation is cubic in the size.
  std::size_t max_elements = 256;
  /// Skip the cubic axiom checks (monoid associativity, distributivity of the
  /// multiplication, the residuation law). Lattice existence is always checked.
  bool skip_exhaustive_checks = false;

  /// Defaults, with MVCM_MAX_LATTICE overriding the element cap when set.
  static BuildOptions from_environment();
};

/// Dense fixed-width bit row over the elements of one lattice.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t capacity() const { return size_; }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  std::size_t count() const;
  bool any() const;
  bool is_subset_of(const ElementSet& other) const;
  ElementSet& operator&=(const ElementSet& other);
  ElementSet& operator|=(const ElementSet& other);
  ElementSet& operator^=(const ElementSet& other);
  ElementSet minus(const ElementSet& other) const;
  std::vector<std::size_t> indices() const;

  friend bool operator==(const ElementSet&, const ElementSet&) = default;
  friend auto operator<=>(const ElementSet& a, const ElementSet& b) { return a.words_ <=> b.words_; }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Element-to-atoms map of an atomistic lattice. Injective: every element is
/// the join of the atoms below it.
struct AtomSetRepr {
  std::vector<Element> atoms;              // atom index -> element
  std::vector<ElementSet> element_to_atoms;  // element id -> bits over atom indices
};

/// Immutable finite bounded lattice with precomputed operation tables.
///
/// All validation happens in build(); afterwards the only runtime failure of
/// an element operation is ForeignElement, or a structural error (NotBrouwer,
/// NotResiduated, NotAtomRepresentable) when the lattice lacks the structure
/// the operation needs.
class Lattice {
 public:
  static Lattice build(const LatticeSpec& spec, const BuildOptions& options = {});

  /// Componentwise product. Labels are "<l2><l1>" with a bottom first
  /// component elided ("b", "0c"); "<l1>.<l2>" is accepted as an alias.
  static Lattice product(const Lattice& first, const Lattice& second,
                         const BuildOptions& options = {});

  std::size_t size() const { return labels_.size(); }
  std::vector<Element> elements() const;
  const std::string& label(Element e) const;
  std::optional<Element> find(std::string_view label) const;
  Element at(std::string_view label) const;  // throws UnknownLabel
  void check(Element e) const;               // throws ForeignElement

  Element top() const { return top_; }
  Element bottom() const { return bottom_; }

  bool leq(Element a, Element b) const;
  Element join(Element a, Element b) const;
  Element meet(Element a, Element b) const;
  /// Length of the longest chain from the bottom to `e`.
  int height(Element e) const;

  const std::vector<Element>& atoms() const { return atoms_; }
  /// Minimal generating set, found by dropping elements from the highest
  /// down while the rest still generate the lattice under join and meet.
  const std::vector<Element>& generators() const { return generators_; }
  /// Every two computed generators meet to the bottom.
  bool is_atomic() const;
  /// The "atoms are the generators" reading: the atoms generate the lattice
  /// (distinct atoms always meet to the bottom).
  bool is_atomic_by_atoms() const { return atoms_generate_; }
  /// Standard notion: each element is the join of the atoms below it.
  bool is_atomistic() const { return atom_repr_.has_value(); }
  bool is_distributive() const;

  bool is_brouwer() const { return !implies_.empty(); }
  /// Largest c with a ∧ c = a ∧ b.
  Element heyting_implies(Element a, Element b) const;

  bool has_mult() const { return !mult_.empty(); }
  bool mult_is_meet() const { return mult_is_meet_; }
  Element mult(Element a, Element b) const;
  Element unit() const;
  bool is_residuated() const { return !right_residual_.empty(); }
  /// (a→b, b←a): the largest y with a·y ≤ b and the largest x with x·a ≤ b.
  std::pair<Element, Element> residuals(Element a, Element b) const;
  bool is_integrally_closed() const;
  bool is_integral() const;

  const AtomSetRepr& atom_repr() const;  // throws NotAtomRepresentable
  /// Atom sets are closed under symmetric difference and difference.
  bool is_boolean() const { return boolean_; }
  std::optional<Element> element_of_atoms(const ElementSet& atoms) const;
  Element ring_sum(Element a, Element b) const;
  Element set_difference(Element a, Element b) const;

  /// Structural equality: same labels in the same order with the same order
  /// relation and multiplication.
  friend bool operator==(const Lattice& a, const Lattice& b);

 private:
  Lattice() = default;

  std::size_t index(Element a, Element b) const { return std::size_t{a.id} * size() + b.id; }
  Element from_atoms(const ElementSet& atoms, std::string_view op, Element a, Element b) const;
  void compute_generators();

  std::vector<std::string> labels_;
  std::unordered_map<std::string, Element> by_label_;
  std::vector<ElementSet> up_;  // up_[a] = {x : a <= x}
  std::vector<std::uint16_t> join_;
  std::vector<std::uint16_t> meet_;
  std::vector<int> height_;
  Element top_;
  Element bottom_;
  std::vector<Element> atoms_;
  std::vector<Element> generators_;
  bool atoms_generate_ = false;
  std::optional<bool> distributive_;
  std::vector<std::uint16_t> implies_;
  std::vector<std::uint16_t> mult_;
  bool mult_is_meet_ = false;
  Element unit_;
  std::vector<std::uint16_t> right_residual_;
  std::vector<std::uint16_t> left_residual_;
  std::optional<AtomSetRepr> atom_repr_;
  std::map<ElementSet, Element> by_atoms_;
  bool boolean_ = false;
};

}  // namespace mvl
