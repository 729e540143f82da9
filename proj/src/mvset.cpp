#include "mvl/mvset.hpp"

#include <algorithm>

#include "mvl/error.hpp"

namespace mvl {

bool same_lattice(const Lattice& a, const Lattice& b) { return &a == &b || a == b; }

MVSet::MVSet(LatticePtr carrier, LatticePtr scale) : carrier_(std::move(carrier)), scale_(std::move(scale)) {
  if (!carrier_ || !scale_) throw Error(ErrorCode::InvalidArgument, "multi-valued set needs a carrier and a scale");
}

MVSet::MVSet(LatticePtr carrier, LatticePtr scale, const std::vector<std::pair<Element, Element>>& pairs)
    : MVSet(std::move(carrier), std::move(scale)) {
  for (const auto& [x, m] : pairs) add(x, m);
}

MVSet MVSet::single(LatticePtr carrier, LatticePtr scale, Element value, Element confidence) {
  MVSet s(std::move(carrier), std::move(scale));
  s.add(value, confidence);
  return s;
}

std::vector<Element> MVSet::support() const {
  std::vector<Element> out;
  out.reserve(entries_.size());
  for (const auto& [x, m] : entries_) out.push_back(x);
  return out;
}

Element MVSet::confidence(Element x) const {
  carrier_->check(x);
  auto it = entries_.find(x);
  return it == entries_.end() ? scale_->bottom() : it->second;
}

void MVSet::add(Element x, Element confidence) {
  carrier_->check(x);
  scale_->check(confidence);
  if (confidence == scale_->bottom()) return;
  auto [it, fresh] = entries_.emplace(x, confidence);
  if (!fresh) it->second = scale_->join(it->second, confidence);
}

namespace {

enum class Rule { Corrected, Classical };

std::size_t occurring_vars(const TermNode& node) {
  if (node.op == TermOp::Var) return 1;
  if (node.op == TermOp::Const) return 0;
  return occurring_vars(*node.lhs) + occurring_vars(*node.rhs);
}

using Pairs = std::vector<std::pair<Element, Element>>;

// Every reachable (value, confidence) pair of a subterm. Exact for linear
// terms: disjoint subterms range over independent argument tuples.
Pairs reachable_pairs(const TermNode& node, const LatticeTerm& term, const std::vector<Pairs>& supports,
                      const Lattice& carrier, const Lattice& scale, Rule rule) {
  switch (node.op) {
    case TermOp::Var: {
      const auto& params = term.params();
      auto it = std::find(params.begin(), params.end(), node.name);
      return supports[static_cast<std::size_t>(it - params.begin())];
    }
    case TermOp::Const:
      return {{*resolve_constant(carrier, node.name),
               rule == Rule::Corrected ? *resolve_constant(scale, node.name) : scale.top()}};
    default:
      break;
  }
  Pairs lhs = reachable_pairs(*node.lhs, term, supports, carrier, scale, rule);
  Pairs rhs = reachable_pairs(*node.rhs, term, supports, carrier, scale, rule);
  const std::size_t width = scale.size();
  std::vector<bool> seen(carrier.size() * width, false);
  Pairs out;
  for (const auto& [x, mx] : lhs) {
    for (const auto& [y, my] : rhs) {
      Element v = apply_op(carrier, node.op, x, y);
      Element m = rule == Rule::Corrected ? apply_op(scale, node.op, mx, my) : scale.meet(mx, my);
      std::size_t slot = std::size_t{v.id} * width + m.id;
      if (!seen[slot]) {
        seen[slot] = true;
        out.emplace_back(v, m);
      }
    }
  }
  return out;
}

MVSet extend_impl(const LatticeTerm& term, const std::vector<MVSet>& args, Rule rule) {
  if (args.size() != term.arity())
    throw Error(ErrorCode::InvalidArgument, "term takes " + std::to_string(term.arity()) + " arguments, got " +
                                                std::to_string(args.size()));
  if (args.empty()) throw Error(ErrorCode::InvalidArgument, "extension needs at least one argument");
  const LatticePtr& carrier = args.front().carrier_ptr();
  const LatticePtr& scale = args.front().scale_ptr();
  for (const auto& a : args) {
    if (!same_lattice(a.carrier(), *carrier) || !same_lattice(a.scale(), *scale))
      throw Error(ErrorCode::MismatchedScales, "arguments live over different lattices");
  }
  term.require_interpretable(*carrier, "carrier");
  if (rule == Rule::Corrected) term.require_interpretable(*scale, "confidence scale");

  MVSet result(carrier, scale);
  const std::size_t n = args.size();
  std::vector<std::vector<std::pair<Element, Element>>> supports(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& entry : args[i].entries()) supports[i].push_back(entry);
    if (supports[i].empty()) return result;
  }

  // The classical rule meets every argument's confidence, so the shortcut
  // additionally needs every parameter to occur.
  if (term.is_linear() && (rule == Rule::Corrected || occurring_vars(term.body()) == n)) {
    for (const auto& [y, m] : reachable_pairs(term.body(), term, supports, *carrier, *scale, rule)) result.add(y, m);
    return result;
  }

  // Odometer over the product of supports.
  std::vector<std::size_t> pos(n, 0);
  std::vector<Element> values(n);
  std::vector<Element> confs(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = supports[i][pos[i]].first;
      confs[i] = supports[i][pos[i]].second;
    }
    Element y = term.eval(*carrier, values);
    Element m;
    if (rule == Rule::Corrected) {
      m = term.eval(*scale, confs);
    } else {
      m = confs.front();
      for (std::size_t i = 1; i < n; ++i) m = scale->meet(m, confs[i]);
    }
    result.add(y, m);

    std::size_t i = 0;
    while (i < n && ++pos[i] == supports[i].size()) pos[i++] = 0;
    if (i == n) break;
  }
  return result;
}

}  // namespace

MVSet extend(const LatticeTerm& term, const std::vector<MVSet>& args) {
  return extend_impl(term, args, Rule::Corrected);
}

MVSet classical_extend(const LatticeTerm& term, const std::vector<MVSet>& args) {
  return extend_impl(term, args, Rule::Classical);
}

std::string to_string(const MVSet& s) {
  std::string out;
  for (const auto& [x, m] : s.entries()) {
    if (!out.empty()) out += ' ';
    out += "(" + s.carrier().label(x) + ", " + s.scale().label(m) + ")";
  }
  return out;
}

}  // namespace mvl
