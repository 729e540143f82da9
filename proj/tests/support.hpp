#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "mvl/error.hpp"
#include "mvl/lattice.hpp"
#include "mvl/mvset.hpp"

namespace support {

using Covers = std::vector<std::pair<std::string, std::string>>;

inline mvl::LatticePtr make(std::vector<std::string> elems, Covers covers, bool meet_mult = true) {
  mvl::LatticeSpec spec;
  spec.elements = std::move(elems);
  spec.covers = std::move(covers);
  if (meet_mult) spec.mult = mvl::MultSpec{};
  return std::make_shared<const mvl::Lattice>(mvl::Lattice::build(spec));
}

inline mvl::LatticePtr chain2() { return make({"0", "1"}, {{"0", "1"}}); }
inline mvl::LatticePtr chain3() { return make({"0", "a", "1"}, {{"0", "a"}, {"a", "1"}}); }
inline mvl::LatticePtr diamond() { return make({"0", "x", "y", "1"}, {{"0", "x"}, {"0", "y"}, {"x", "1"}, {"y", "1"}}); }
inline mvl::LatticePtr pentagon() {
  return make({"0", "a", "b", "c", "1"}, {{"0", "a"}, {"a", "b"}, {"b", "1"}, {"0", "c"}, {"c", "1"}}, false);
}
inline mvl::LatticePtr boolean3(const std::vector<std::string>& labels) {
  // labels: bottom, three atoms, three pair joins (01, 02, 12), top
  const auto& s = labels;
  return make(s, {{s[0], s[1]}, {s[0], s[2]}, {s[0], s[3]},
                  {s[1], s[4]}, {s[2], s[4]}, {s[1], s[5]}, {s[3], s[5]}, {s[2], s[6]}, {s[3], s[6]},
                  {s[4], s[7]}, {s[5], s[7]}, {s[6], s[7]}});
}
// 2^3 over ba0, b, bn0, with the element names of the energy fixture.
inline mvl::LatticePtr l2() { return boolean3({"0", "ba0", "b", "bn0", "bora", "aorn", "born", "any"}); }
inline mvl::LatticePtr m3() { return boolean3({"0", "l", "m", "h", "lm", "lh", "mh", "lmh"}); }

inline mvl::ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const mvl::Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return mvl::ErrorCode::InvalidArgument;
}

inline mvl::Element el(const mvl::LatticePtr& l, const char* label) { return l->at(label); }

}  // namespace support
