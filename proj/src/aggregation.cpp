#include "mvl/aggregation.hpp"

#include <algorithm>

#include "mvl/error.hpp"

namespace mvl {

AssessmentSet::AssessmentSet(LatticePtr carrier, std::vector<Element> elems)
    : carrier_(std::move(carrier)), elems_(std::move(elems)) {
  if (!carrier_) throw Error(ErrorCode::InvalidArgument, "assessment set needs a carrier");
  if (elems_.empty()) throw Error(ErrorCode::EmptyAssessment, "assessment sets are non-empty");
  for (Element e : elems_) carrier_->check(e);
  std::sort(elems_.begin(), elems_.end());
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

bool AssessmentSet::contains(Element e) const { return std::binary_search(elems_.begin(), elems_.end(), e); }

namespace {

void require_shared(const AssessmentSet& a, const AssessmentSet& b) {
  if (!same_lattice(a.carrier(), b.carrier()))
    throw Error(ErrorCode::MismatchedCarriers, "assessment sets live in different lattices");
}

// { fold_{a∈A} inner(b, a) : b ∈ B } ∪ { fold_{b∈B} inner(a, b) : a ∈ A }
template <typename Inner, typename Fold>
AssessmentSet two_sided(const AssessmentSet& a, const AssessmentSet& b, Inner inner, Fold fold) {
  require_shared(a, b);
  std::vector<Element> out;
  auto side = [&](const AssessmentSet& outer, const AssessmentSet& over) {
    for (Element x : outer.elements()) {
      Element acc = inner(x, over.elements().front());
      for (std::size_t i = 1; i < over.size(); ++i) acc = fold(acc, inner(x, over.elements()[i]));
      out.push_back(acc);
    }
  };
  side(b, a);
  side(a, b);
  return AssessmentSet(a.carrier_ptr(), std::move(out));
}

}  // namespace

AssessmentSet difference(const AssessmentSet& a, const AssessmentSet& b) {
  const Lattice& l = a.carrier();
  require_shared(a, b);
  l.atom_repr();
  return two_sided(
      a, b, [&](Element x, Element y) { return l.set_difference(x, y); },
      [&](Element x, Element y) { return l.meet(x, y); });
}

AssessmentSet pessimistic_mean(const AssessmentSet& a, const AssessmentSet& b) {
  const Lattice& l = a.carrier();
  return two_sided(
      a, b, [&](Element x, Element y) { return l.meet(x, y); }, [&](Element x, Element y) { return l.join(x, y); });
}

AssessmentSet optimistic_mean(const AssessmentSet& a, const AssessmentSet& b) {
  const Lattice& l = a.carrier();
  return two_sided(
      a, b, [&](Element x, Element y) { return l.join(x, y); }, [&](Element x, Element y) { return l.meet(x, y); });
}

AssessmentSet mean(MeanKind kind, const AssessmentSet& a, const AssessmentSet& b) {
  return kind == MeanKind::Pessimistic ? pessimistic_mean(a, b) : optimistic_mean(a, b);
}

AssessmentSet nary_mean(MeanKind kind, const std::vector<AssessmentSet>& sets) {
  if (sets.size() < 2) throw Error(ErrorCode::FewerThanTwoSets, "a mean needs at least two assessment sets");
  std::vector<Element> out;
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      AssessmentSet m = mean(kind, sets[i], sets[j]);
      out.insert(out.end(), m.elements().begin(), m.elements().end());
    }
  return AssessmentSet(sets.front().carrier_ptr(), std::move(out));
}

std::map<Element, Element> mean_confidences(MeanKind kind, const std::vector<MVSet>& inputs, PreimageMode mode) {
  if (inputs.size() < 2) throw Error(ErrorCode::FewerThanTwoSets, "a mean needs at least two inputs");
  const LatticePtr& carrier = inputs.front().carrier_ptr();
  const LatticePtr& scale = inputs.front().scale_ptr();
  for (const auto& s : inputs)
    if (!same_lattice(s.carrier(), *carrier) || !same_lattice(s.scale(), *scale))
      throw Error(ErrorCode::MismatchedScales, "inputs live over different lattices");

  const std::size_t n = inputs.size();
  std::vector<std::vector<Element>> choices(n);
  for (std::size_t i = 0; i < n; ++i) {
    choices[i] = mode == PreimageMode::Support ? inputs[i].support() : carrier->elements();
    if (choices[i].empty()) return {};
  }

  std::map<Element, Element> out;
  std::vector<std::size_t> pos(n, 0);
  std::vector<AssessmentSet> elems;
  std::vector<AssessmentSet> confs;
  while (true) {
    elems.clear();
    confs.clear();
    for (std::size_t i = 0; i < n; ++i) {
      Element x = choices[i][pos[i]];
      elems.emplace_back(carrier, std::vector<Element>{x});
      confs.emplace_back(scale, std::vector<Element>{inputs[i].confidence(x)});
    }
    AssessmentSet reached = nary_mean(kind, elems);
    AssessmentSet conf_set = nary_mean(kind, confs);
    Element m = conf_set.elements().front();
    for (Element c : conf_set.elements()) m = scale->join(m, c);
    if (m != scale->bottom()) {
      for (Element t : reached.elements()) {
        auto [it, fresh] = out.emplace(t, m);
        if (!fresh) it->second = scale->join(it->second, m);
      }
    }

    std::size_t i = 0;
    while (i < n && ++pos[i] == choices[i].size()) pos[i++] = 0;
    if (i == n) break;
  }
  return out;
}

Element mean_confidence(MeanKind kind, const std::vector<MVSet>& inputs, Element target, PreimageMode mode) {
  if (inputs.empty()) throw Error(ErrorCode::FewerThanTwoSets, "a mean needs at least two inputs");
  inputs.front().carrier().check(target);
  auto all = mean_confidences(kind, inputs, mode);
  auto it = all.find(target);
  return it == all.end() ? inputs.front().scale().bottom() : it->second;
}

std::string to_string(const AssessmentSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + s.carrier().label(s.elements()[i]);
  return out + "}";
}

}  // namespace mvl
