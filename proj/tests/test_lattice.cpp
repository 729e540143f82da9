#include <cstdlib>

#include "doctest.h"
#include "mvl/lattice.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace mvl;
using support::code_of;
using support::el;
using support::make;

namespace {

std::vector<std::string> labels(const Lattice& l, const std::vector<Element>& es) {
  std::vector<std::string> out;
  for (auto e : es) out.push_back(l.label(e));
  return out;
}

LatticeSpec spec_of(std::vector<std::string> elems, support::Covers covers) {
  LatticeSpec s;
  s.elements = std::move(elems);
  s.covers = std::move(covers);
  return s;
}

}  // namespace

TEST_CASE("two-element chain") {
  auto l = support::chain2();
  CHECK(l->size() == 2);
  CHECK(l->label(l->top()) == "1");
  CHECK(l->label(l->bottom()) == "0");
  CHECK(l->join(el(l, "0"), el(l, "1")) == el(l, "1"));
  CHECK(labels(*l, l->atoms()) == std::vector<std::string>{"1"});
  CHECK(l->is_integrally_closed());
  CHECK(l->is_integral());
}

TEST_CASE("diamond") {
  auto l = support::diamond();
  Element x = el(l, "x"), y = el(l, "y");
  CHECK(l->join(x, y) == l->top());
  CHECK(l->meet(x, y) == l->bottom());
  CHECK_FALSE(l->leq(x, y));
  CHECK(l->leq(l->bottom(), x));
  CHECK(l->leq(x, x));
  CHECK(labels(*l, l->generators()) == std::vector<std::string>{"x", "y"});
  CHECK(l->is_atomic());
  CHECK(l->is_distributive());
  CHECK(l->height(l->top()) == 2);
}

TEST_CASE("pentagon is a lattice but not distributive") {
  auto l = support::pentagon();
  CHECK(l->size() == 5);
  CHECK_FALSE(l->is_distributive());
  oracle::Ops ops(*l);
  CHECK_FALSE(ops.distributive());
  // With the equality form the implication still exists everywhere here,
  // while the pseudo-complement form has no maximum for (b, a).
  CHECK(l->is_brouwer());
  CHECK(l->heyting_implies(el(l, "b"), el(l, "a")) == el(l, "a"));
  CHECK_FALSE(ops.heyting(el(l, "b"), el(l, "a")).has_value());
}

TEST_CASE("implication fails without a largest witness") {
  // M3: for (x, 0) the witnesses {0, y, z} have no maximum.
  auto l = make({"0", "x", "y", "z", "1"}, {{"0", "x"}, {"0", "y"}, {"0", "z"}, {"x", "1"}, {"y", "1"}, {"z", "1"}},
                false);
  CHECK_FALSE(l->is_brouwer());
  CHECK(code_of([&] { l->heyting_implies(el(l, "x"), l->bottom()); }) == ErrorCode::NotBrouwer);
}

TEST_CASE("three-chain") {
  auto l = support::chain3();
  Element a = el(l, "a");
  CHECK(labels(*l, l->generators()) == std::vector<std::string>{"a", "1"});
  CHECK_FALSE(l->is_atomic());
  CHECK(l->is_atomic_by_atoms() == false);
  CHECK(l->heyting_implies(a, l->bottom()) == l->bottom());
  CHECK(l->heyting_implies(a, l->top()) == l->top());
  CHECK(l->heyting_implies(l->bottom(), a) == l->top());
  CHECK(l->is_distributive());
  CHECK_FALSE(l->is_atomistic());
  CHECK(code_of([&] { l->atom_repr(); }) == ErrorCode::NotAtomRepresentable);
  CHECK(code_of([&] { l->ring_sum(a, a); }) == ErrorCode::NotAtomRepresentable);
}

TEST_CASE("Boolean 2^3") {
  auto l = support::l2();
  CHECK(labels(*l, l->atoms()) == std::vector<std::string>{"ba0", "b", "bn0"});
  CHECK(labels(*l, l->generators()) == std::vector<std::string>{"ba0", "b", "bn0"});
  CHECK(l->is_atomic());
  CHECK(l->is_distributive());
  CHECK(l->is_boolean());

  const auto& repr = l->atom_repr();
  auto atoms_of = [&](const char* e) { return labels(*l, [&] {
    std::vector<Element> out;
    for (auto i : repr.element_to_atoms[el(l, e).id].indices()) out.push_back(repr.atoms[i]);
    return out;
  }()); };
  CHECK(atoms_of("bora") == std::vector<std::string>{"ba0", "b"});
  CHECK(atoms_of("0").empty());
  CHECK(atoms_of("any").size() == 3);

  CHECK(l->ring_sum(el(l, "bora"), el(l, "born")) == el(l, "aorn"));
  CHECK(l->ring_sum(el(l, "bora"), el(l, "bora")) == l->bottom());
  CHECK(l->ring_sum(el(l, "born"), l->bottom()) == el(l, "born"));
  CHECK(l->set_difference(el(l, "bora"), el(l, "b")) == el(l, "ba0"));
  CHECK(l->set_difference(el(l, "any"), el(l, "any")) == l->bottom());
  CHECK(l->set_difference(el(l, "b"), l->bottom()) == el(l, "b"));
}

TEST_CASE("residuals with meet as multiplication") {
  auto l = support::l2();
  for (auto a : l->elements())
    for (auto b : l->elements()) {
      auto [r, lf] = l->residuals(a, b);
      CHECK(r == l->heyting_implies(a, b));
      CHECK(lf == r);
    }
  Element b = el(l, "born");
  CHECK(l->residuals(l->top(), b) == std::pair{b, b});
  CHECK(l->residuals(b, l->top()) == std::pair{l->top(), l->top()});
  CHECK(l->is_integrally_closed());
  CHECK(l->is_integral());
}

TEST_CASE("multiplication table with the unit below the top") {
  // 0 absorbs, u is the unit and 1·1 = 1.
  LatticeSpec s = spec_of({"0", "u", "1"}, {{"0", "u"}, {"u", "1"}});
  s.mult = MultSpec{MultSpec::Kind::Table, "u", {{"0", "0", "0"}, {"0", "1", "0"}, {"1", "0", "0"}, {"1", "1", "1"}}};
  Lattice l = Lattice::build(s);
  CHECK_FALSE(l.mult_is_meet());
  CHECK(l.unit() == l.at("u"));
  CHECK(l.is_residuated());
  CHECK_FALSE(l.is_integral());
  CHECK_FALSE(l.is_integrally_closed());
  CHECK(l.residuals(l.at("1"), l.at("u")).first == l.at("0"));
}

TEST_CASE("build errors") {
  CHECK(code_of([] { Lattice::build(spec_of({"0", "a", "b"}, {{"0", "a"}, {"0", "b"}})); }) ==
        ErrorCode::NotALattice);
  CHECK(code_of([] { Lattice::build(spec_of({"a", "b"}, {{"a", "b"}, {"b", "a"}})); }) == ErrorCode::CycleInOrder);
  CHECK(code_of([] { Lattice::build(spec_of({"a", "a"}, {})); }) == ErrorCode::DuplicateLabel);
  CHECK(code_of([] { Lattice::build(spec_of({"0", "1"}, {{"0", "2"}})); }) == ErrorCode::UnknownLabel);
  CHECK(code_of([] { Lattice::build(spec_of({}, {})); }) == ErrorCode::NotALattice);

  LatticeSpec bad = spec_of({"0", "1"}, {{"0", "1"}});
  bad.mult = MultSpec{MultSpec::Kind::Table, "1", {{"0", "0", "1"}}};
  CHECK(code_of([&] { Lattice::build(bad); }) == ErrorCode::BadMonoid);
  bad.mult = MultSpec{MultSpec::Kind::Table, "", {}};
  CHECK(code_of([&] { Lattice::build(bad); }) == ErrorCode::BadMonoid);

  BuildOptions tiny;
  tiny.max_elements = 3;
  CHECK(code_of([&] { Lattice::build(spec_of({"0", "a", "b", "1"}, {{"0", "a"}, {"a", "b"}, {"b", "1"}}), tiny); }) ==
        ErrorCode::LatticeTooLarge);
}

TEST_CASE("element checks") {
  auto l = support::diamond();
  CHECK(code_of([&] { l->join(Element{9}, l->top()); }) == ErrorCode::ForeignElement);
  CHECK(code_of([&] { l->at("nope"); }) == ErrorCode::UnknownLabel);
  CHECK_FALSE(l->find("nope").has_value());
}

TEST_CASE("environment overrides the size cap") {
  setenv("MVCM_MAX_LATTICE", "12", 1);
  CHECK(BuildOptions::from_environment().max_elements == 12);
  setenv("MVCM_MAX_LATTICE", "junk", 1);
  CHECK(BuildOptions::from_environment().max_elements == BuildOptions{}.max_elements);
  unsetenv("MVCM_MAX_LATTICE");
}

TEST_CASE("product") {
  auto c = support::chain2();
  Lattice sq = Lattice::product(*c, *c);
  CHECK(sq.size() == 4);
  CHECK(sq.atoms().size() == 2);
  CHECK(sq.is_boolean());

  auto l1 = make({"0", "c", "d", "h"}, {{"0", "c"}, {"0", "d"}, {"c", "h"}, {"d", "h"}});
  auto l2 = support::l2();
  Lattice l = Lattice::product(*l1, *l2);
  CHECK(l.size() == 32);
  CHECK(l.label(l.top()) == "anyh");
  CHECK(labels(l, l.atoms()) == std::vector<std::string>{"ba0", "b", "bn0", "0c", "0d"});
  CHECK(l.at("c.b") == l.at("bc"));
  CHECK(l.join(l.at("b"), l.at("0c")) == l.at("bc"));
  CHECK(l.is_residuated());
  CHECK(l.is_integrally_closed());
  CHECK(l.is_atomic());

  // Componentwise order, exhaustively.
  for (auto a1 : l1->elements())
    for (auto a2 : l2->elements())
      for (auto b1 : l1->elements())
        for (auto b2 : l2->elements()) {
          Element a = l.at(l1->label(a1) + "." + l2->label(a2));
          Element b = l.at(l1->label(b1) + "." + l2->label(b2));
          CHECK(l.leq(a, b) == (l1->leq(a1, b1) && l2->leq(a2, b2)));
        }
}

TEST_CASE("operations agree with the order-only brute force") {
  for (const auto& l : {support::chain3(), support::diamond(), support::pentagon(), support::l2()}) {
    oracle::Ops ops(*l);
    for (auto a : l->elements())
      for (auto b : l->elements()) {
        CHECK(l->join(a, b) == ops.join(a, b));
        CHECK(l->meet(a, b) == ops.meet(a, b));
        if (!l->is_brouwer()) continue;
        // max{c : a ∧ c = a ∧ b}
        Element c = l->heyting_implies(a, b);
        CHECK(l->meet(a, c) == l->meet(a, b));
        for (auto d : l->elements())
          if (ops.meet(a, d) == ops.meet(a, b)) CHECK(ops.leq(d, c));
        if (ops.distributive()) CHECK(ops.heyting(a, b) == std::optional{c});
      }
    CHECK(l->is_distributive() == ops.distributive());
  }
}
