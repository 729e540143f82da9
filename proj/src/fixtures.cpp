#include <array>

#include "mvl/error.hpp"
#include "mvl/textio.hpp"

namespace mvl {

namespace {

// L1: diamond with two incomparable middle grades.
constexpr std::string_view kL1 = R"(lattice L1 {
  elems 0 c d h
  covers 0<c 0<d c<h d<h
  mult meet
}
)";

// L2: Boolean lattice over the atoms ba0, b, bn0.
constexpr std::string_view kL2 = R"(lattice L2 {
  elems 0 ba0 b bn0 bora born aorn any
  covers 0<ba0 0<b 0<bn0 ba0<bora b<bora b<born bn0<born ba0<aorn bn0<aorn bora<any born<any aorn<any
  mult meet
}
)";

// Synthesized confidence scale: Boolean lattice over three levels.
constexpr std::string_view kM = R"(lattice M {
  elems 0 l m h lm lh mh lmh
  covers 0<l 0<m 0<h l<lm m<lm l<lh h<lh m<mh h<mh lm<lmh lh<lmh mh<lmh
  mult meet
}
)";

constexpr std::string_view kL = R"(lattice L = product L1 L2
)";

// Synthesized five-concept map. Matrix `qualified` is a plausible expert
// opinion; `unqualified` contains physically doubtful links.
constexpr std::string_view kHybrid = R"(map hybrid-energy-map over L M {
  concepts C1 C2 C3 C4 C5
  initial C1 = { (anyh, lmh) }
  initial C2 = { (bornh, lh) }
  initial C3 = { (borac, lm) }
  initial C4 = { (aornd, mh) }
  initial C5 = { (bh, lmh) }
  matrix qualified {
    C1 -> C1 : { (anyh, lmh) }
    C1 -> C2 : { (bornh, lh) (bc, l) }
    C1 -> C3 : { (borac, lmh) }
    C2 -> C4 : { (bornd, mh) }
    C3 -> C4 : { (aornh, lh) }
    C3 -> C5 : { (borah, lm) }
    C4 -> C5 : { (bornh, lmh) }
    C5 -> C2 : { (bc, m) }
  }
  matrix unqualified {
    C1 -> C1 : { (anyh, lmh) }
    C1 -> C2 : { (aornd, lh) }
    C1 -> C5 : { (bd, lm) (ba0h, l) }
    C2 -> C3 : { (born, mh) }
    C3 -> C4 : { (aornc, lmh) }
    C4 -> C2 : { (bn0h, lh) }
    C5 -> C3 : { (bora, mh) }
    C5 -> C4 : { (anyc, lh) }
  }
}
)";

struct Fixture {
  std::string_view name;
  std::string text;
};

const std::array<Fixture, 5>& fixtures() {
  static const std::array<Fixture, 5> all = {{
      {"L1", std::string(kL1)},
      {"L2", std::string(kL2)},
      {"L", std::string(kL1) + "\n" + std::string(kL2) + "\n" + std::string(kL)},
      {"M", std::string(kM)},
      {"hybrid-energy-map",
       std::string(kL1) + "\n" + std::string(kL2) + "\n" + std::string(kL) + "\n" + std::string(kM) + "\n" +
           std::string(kHybrid)},
  }};
  return all;
}

}  // namespace

std::string_view fixture_text(std::string_view name) {
  for (const auto& f : fixtures())
    if (f.name == name) return f.text;
  throw Error(ErrorCode::UnknownFixture, "no fixture named '" + std::string(name) + "'");
}

Document load_fixture(std::string_view name) { return parse(fixture_text(name)); }

std::vector<std::string> fixture_names() {
  std::vector<std::string> names;
  for (const auto& f : fixtures()) names.emplace_back(f.name);
  return names;
}

}  // namespace mvl
