#pragma once

#include <map>
#include <vector>

#include "mvl/mvset.hpp"

namespace mvl {

/// Non-empty set of carrier elements, kept sorted and deduplicated.
class AssessmentSet {
 public:
  /// Throws EmptyAssessment when `elems` is empty.
  AssessmentSet(LatticePtr carrier, std::vector<Element> elems);

  const Lattice& carrier() const { return *carrier_; }
  const LatticePtr& carrier_ptr() const { return carrier_; }
  const std::vector<Element>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool contains(Element e) const;

  friend bool operator==(const AssessmentSet& a, const AssessmentSet& b) {
    return same_lattice(*a.carrier_, *b.carrier_) && a.elems_ == b.elems_;
  }

 private:
  LatticePtr carrier_;
  std::vector<Element> elems_;
};

enum class MeanKind { Pessimistic, Optimistic };

/// { ∧_a (b ∖ a) : b ∈ B } ∪ { ∧_b (a ∖ b) : a ∈ A }.
AssessmentSet difference(const AssessmentSet& a, const AssessmentSet& b);
/// { ∨_a (b ∧ a) : b ∈ B } ∪ { ∨_b (a ∧ b) : a ∈ A }.
AssessmentSet pessimistic_mean(const AssessmentSet& a, const AssessmentSet& b);
/// { ∧_a (b ∨ a) : b ∈ B } ∪ { ∧_b (a ∨ b) : a ∈ A }.
AssessmentSet optimistic_mean(const AssessmentSet& a, const AssessmentSet& b);
AssessmentSet mean(MeanKind kind, const AssessmentSet& a, const AssessmentSet& b);
/// Union of the pairwise means over all unordered pairs of distinct inputs.
AssessmentSet nary_mean(MeanKind kind, const std::vector<AssessmentSet>& sets);

enum class PreimageMode {
  /// Tuples drawn from the argument supports.
  Support,
  /// Every tuple of L^n, unsupported elements at confidence bottom(M).
  Full,
};

/// Confidence of `target` as a mean of the inputs: the join in M, over tuples
/// whose element-level mean contains `target`, of the mean of the tuple's
/// confidences evaluated in M (joined into one element when n > 2).
/// bottom(M) when no tuple reaches the target.
Element mean_confidence(MeanKind kind, const std::vector<MVSet>& inputs, Element target,
                        PreimageMode mode = PreimageMode::Support);

/// Every reached target with its confidence, in one enumeration pass.
std::map<Element, Element> mean_confidences(MeanKind kind, const std::vector<MVSet>& inputs,
                                            PreimageMode mode = PreimageMode::Support);

std::string to_string(const AssessmentSet& s);

}  // namespace mvl
