#include <random>

#include "doctest.h"
#include "mvl/mvset.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace mvl;
using support::code_of;
using support::el;

namespace {

MVSet random_mvset(std::mt19937& rng, const LatticePtr& L, const LatticePtr& M, std::size_t max_size) {
  MVSet s(L, M);
  const std::size_t size = 1 + rng() % max_size;
  for (std::size_t k = 0; k < size; ++k)
    s.add(Element{static_cast<std::uint16_t>(rng() % L->size())},
          Element{static_cast<std::uint16_t>(1 + rng() % (M->size() - 1))});
  return s;
}

}  // namespace

TEST_CASE("canonical form") {
  auto L = support::l2();
  auto M = support::m3();
  MVSet s(L, M, {{el(L, "b"), el(M, "l")}, {el(L, "b"), el(M, "m")}, {el(L, "ba0"), M->bottom()}});
  CHECK(s.size() == 1);
  CHECK(s.confidence(el(L, "b")) == el(M, "lm"));
  CHECK(s.confidence(el(L, "ba0")) == M->bottom());
  CHECK(s.support() == std::vector<Element>{el(L, "b")});
  CHECK(MVSet(L, M).support().empty());
  CHECK(to_string(s) == "(b, lm)");
  CHECK(code_of([&] { s.confidence(Element{40}); }) == ErrorCode::ForeignElement);
}

TEST_CASE("identity term with M = L") {
  auto L = support::l2();
  MVSet a(L, L);
  for (auto x : {"ba0", "born", "any"}) a.add(el(L, x), el(L, x));
  MVSet b = extend(LatticeTerm({"x"}, var("x")), {a});
  CHECK(b == a);
  for (auto y : b.support()) CHECK(b.confidence(y) == y);
}

TEST_CASE("empty argument gives an empty result") {
  auto L = support::l2();
  auto M = support::m3();
  MVSet a = MVSet::single(L, M, el(L, "b"), M->top());
  LatticeTerm t({"x", "y"}, join(var("x"), var("y")));
  CHECK(extend(t, {a, MVSet(L, M)}).empty());
  CHECK(extend(LatticeTerm({"x", "y"}, var("x")), {a, MVSet(L, M)}).empty());
  CHECK(classical_extend(t, {MVSet(L, M), a}).empty());
}

TEST_CASE("join of two atoms") {
  auto L = support::l2();
  auto M = support::m3();
  MVSet a = MVSet::single(L, M, el(L, "ba0"), el(M, "l"));
  MVSet b = MVSet::single(L, M, el(L, "b"), el(M, "m"));
  LatticeTerm t({"x", "y"}, join(var("x"), var("y")));
  MVSet out = extend(t, {a, b});
  CHECK(out == MVSet::single(L, M, el(L, "bora"), el(M, "lm")));
  // The output confidence lies strictly above both inputs.
  CHECK(M->leq(el(M, "l"), el(M, "lm")));
  CHECK(el(M, "l") != el(M, "lm"));
  CHECK(M->leq(el(M, "m"), el(M, "lm")));

  // Sup-min: the meet of incomparable confidences is bottom, so nothing survives.
  CHECK(classical_extend(t, {a, b}).empty());
}

TEST_CASE("classical rule on a single tuple") {
  auto L = support::l2();
  auto M = support::m3();
  MVSet a = MVSet::single(L, M, el(L, "b"), el(M, "lm"));
  MVSet b = MVSet::single(L, M, el(L, "bn0"), el(M, "mh"));
  MVSet out = classical_extend(LatticeTerm({"x", "y"}, join(var("x"), var("y"))), {a, b});
  CHECK(out == MVSet::single(L, M, el(L, "born"), el(M, "m")));
}

TEST_CASE("classical and corrected rules differ for implication") {
  auto L = support::l2();
  MVSet a(L, L), b(L, L);
  a.add(el(L, "bora"), el(L, "bora"));
  b.add(el(L, "b"), el(L, "b"));
  LatticeTerm t({"x", "y"}, implies(var("x"), var("y")));
  MVSet corrected = extend(t, {a, b});
  MVSet classical = classical_extend(t, {a, b});
  CHECK(corrected.confidence(el(L, "born")) == el(L, "born"));
  CHECK(classical.confidence(el(L, "born")) == el(L, "b"));
  CHECK_FALSE(corrected == classical);
}

TEST_CASE("crisp inputs make both rules agree") {
  std::mt19937 rng(5);
  auto L = support::l2();
  auto M = support::m3();
  LatticeTerm t({"x", "y"}, meet(join(var("x"), var("y")), var("x")));
  for (int i = 0; i < 50; ++i) {
    MVSet a(L, M), b(L, M);
    for (int k = 0; k < 3; ++k) {
      a.add(Element{static_cast<std::uint16_t>(rng() % 8)}, M->top());
      b.add(Element{static_cast<std::uint16_t>(rng() % 8)}, M->top());
    }
    MVSet e = extend(t, {a, b});
    CHECK(e == classical_extend(t, {a, b}));
    for (const auto& [y, m] : e.entries()) CHECK(m == M->top());
  }
}

TEST_CASE("support of a join extension lies in the pairwise joins") {
  std::mt19937 rng(9);
  auto L = support::l2();
  auto M = support::m3();
  LatticeTerm t({"x", "y"}, join(var("x"), var("y")));
  for (int i = 0; i < 100; ++i) {
    MVSet a = random_mvset(rng, L, M, 4);
    MVSet b = random_mvset(rng, L, M, 4);
    std::set<Element> joins;
    for (auto x : a.support())
      for (auto y : b.support()) joins.insert(L->join(x, y));
    for (auto y : extend(t, {a, b}).support()) CHECK(joins.count(y));
  }
}

TEST_CASE("unary monotone image") {
  auto L = support::l2();
  LatticeTerm t({"x"}, meet(var("x"), constant("born")));
  MVSet a(L, L);
  for (auto x : {"ba0", "bora", "any"}) a.add(el(L, x), L->top());
  std::vector<Element> image;
  for (auto x : a.support()) image.push_back(L->meet(x, el(L, "born")));
  std::sort(image.begin(), image.end());
  image.erase(std::unique(image.begin(), image.end()), image.end());
  CHECK(extend(t, {a}).support() == image);
}

TEST_CASE("extension errors") {
  auto L = support::l2();
  auto M = support::m3();
  MVSet a = MVSet::single(L, M, el(L, "b"), M->top());
  MVSet other = MVSet::single(L, L, el(L, "b"), L->top());
  LatticeTerm t({"x", "y"}, join(var("x"), var("y")));
  CHECK(code_of([&] { extend(t, {a, other}); }) == ErrorCode::MismatchedScales);
  CHECK(code_of([&] { extend(t, {a}); }) == ErrorCode::InvalidArgument);
  // "born" names an element of L but not of M.
  LatticeTerm c({"x"}, join(var("x"), constant("born")));
  CHECK(code_of([&] { extend(c, {a}); }) == ErrorCode::UninterpretableTerm);
  auto plain = support::pentagon();
  MVSet p = MVSet::single(plain, M, plain->top(), M->top());
  CHECK(code_of([&] { extend(LatticeTerm({"x"}, ring_sum(var("x"), var("x"))), {p}); }) ==
        ErrorCode::UninterpretableTerm);
}

TEST_CASE("extension agrees with the all-tuples brute force") {
  // Linear terms take the pair-set path, the others the tuple odometer; both
  // must match the enumeration over every tuple of L^n.
  std::mt19937 rng(21);
  auto L = support::l2();
  auto M = support::m3();
  const std::vector<std::string> params{"x", "y", "z"};
  const std::vector<TermOp> ops{TermOp::Join, TermOp::Meet, TermOp::Implies, TermOp::RingSum};
  int linear = 0, nonlinear = 0;
  for (int i = 0; i < 300; ++i) {
    LatticeTerm t(params, oracle::random_term(rng, params, ops, 3));
    (t.is_linear() ? linear : nonlinear)++;
    std::vector<MVSet> args;
    for (int k = 0; k < 3; ++k) args.push_back(random_mvset(rng, L, M, 3));
    CHECK(oracle::entries_of(extend(t, args)) == oracle::extend(t, args));
  }
  CHECK(linear > 20);
  CHECK(nonlinear > 20);
}

TEST_CASE("extension does not depend on entry order") {
  auto L = support::l2();
  auto M = support::m3();
  std::vector<std::pair<Element, Element>> pairs{
      {el(L, "b"), el(M, "l")}, {el(L, "bn0"), el(M, "mh")}, {el(L, "bora"), el(M, "h")}};
  LatticeTerm t({"x", "y"}, meet(var("x"), join(var("y"), var("x"))));
  MVSet b = MVSet::single(L, M, el(L, "aorn"), el(M, "lm"));
  MVSet first = extend(t, {MVSet(L, M, pairs), b});
  std::reverse(pairs.begin(), pairs.end());
  CHECK(extend(t, {MVSet(L, M, pairs), b}) == first);
}
