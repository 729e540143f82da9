#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "mvl/lattice.hpp"
#include "mvl/term.hpp"

namespace mvl {

using LatticePtr = std::shared_ptr<const Lattice>;

/// Same object, or structurally equal lattices.
bool same_lattice(const Lattice& a, const Lattice& b);

/// Multi-valued set: carrier elements of L paired with confidences in M.
///
/// Canonical form: entries never hold bottom(M); an absent element has
/// confidence bottom(M).
class MVSet {
 public:
  MVSet(LatticePtr carrier, LatticePtr scale);
  /// Repeated elements have their confidences joined; bottom confidences are dropped.
  MVSet(LatticePtr carrier, LatticePtr scale, const std::vector<std::pair<Element, Element>>& pairs);

  /// Singleton {(value, confidence)}.
  static MVSet single(LatticePtr carrier, LatticePtr scale, Element value, Element confidence);

  const Lattice& carrier() const { return *carrier_; }
  const Lattice& scale() const { return *scale_; }
  const LatticePtr& carrier_ptr() const { return carrier_; }
  const LatticePtr& scale_ptr() const { return scale_; }

  const std::map<Element, Element>& entries() const { return entries_; }
  std::vector<Element> support() const;
  Element confidence(Element x) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  /// Joins `confidence` into the entry for `x`.
  void add(Element x, Element confidence);

  friend bool operator==(const MVSet& a, const MVSet& b) {
    return same_lattice(*a.carrier_, *b.carrier_) && same_lattice(*a.scale_, *b.scale_) && a.entries_ == b.entries_;
  }

 private:
  LatticePtr carrier_;
  LatticePtr scale_;
  std::map<Element, Element> entries_;
};

/// Corrected extension principle: every tuple from the product of argument
/// supports maps to y = t(x1..xn) in L, contributing t(μ(x1)..μ(xn)) evaluated
/// in M; contributions to the same y are joined in M.
MVSet extend(const LatticeTerm& term, const std::vector<MVSet>& args);

/// Sup-min reference: same preimages, contribution is the meet of the
/// argument confidences. Only for comparison with extend().
MVSet classical_extend(const LatticeTerm& term, const std::vector<MVSet>& args);

/// "(x, m) (y, n)" with labels, in element order.
std::string to_string(const MVSet& s);

}  // namespace mvl
