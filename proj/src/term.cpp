#include "mvl/term.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mvl/error.hpp"

namespace mvl {

TermPtr var(std::string name) { return std::make_shared<const TermNode>(TermNode{TermOp::Var, std::move(name), {}, {}}); }

TermPtr constant(std::string label) {
  return std::make_shared<const TermNode>(TermNode{TermOp::Const, std::move(label), {}, {}});
}

TermPtr binary(TermOp op, TermPtr lhs, TermPtr rhs) {
  if (op == TermOp::Var || op == TermOp::Const || !lhs || !rhs)
    throw Error(ErrorCode::InvalidArgument, "binary term needs an operation and two operands");
  return std::make_shared<const TermNode>(TermNode{op, {}, std::move(lhs), std::move(rhs)});
}

bool structurally_equal(const TermNode& a, const TermNode& b) {
  if (a.op != b.op || a.name != b.name) return false;
  if (a.op == TermOp::Var || a.op == TermOp::Const) return true;
  return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
}

std::optional<Element> resolve_constant(const Lattice& l, const std::string& label) {
  if (auto e = l.find(label)) return e;
  if (label == "top") return l.top();
  if (label == "bottom") return l.bottom();
  return std::nullopt;
}

namespace {

void collect_vars(const TermNode& node, std::set<std::string>& out) {
  if (node.op == TermOp::Var) {
    out.insert(node.name);
  } else if (node.op != TermOp::Const) {
    collect_vars(*node.lhs, out);
    collect_vars(*node.rhs, out);
  }
}

// First reason the node cannot be evaluated in `l`, or empty.
std::pair<ErrorCode, std::string> first_problem(const TermNode& node, const Lattice& l) {
  switch (node.op) {
    case TermOp::Var:
      return {};
    case TermOp::Const:
      if (!resolve_constant(l, node.name)) return {ErrorCode::UnknownConstant, "'" + node.name + "'"};
      return {};
    case TermOp::Mult:
      if (!l.has_mult()) return {ErrorCode::UninterpretableTerm, "'mul' needs a multiplication"};
      break;
    case TermOp::Implies:
      if (!l.is_brouwer() && !l.is_residuated())
        return {ErrorCode::UninterpretableTerm, "'imp' needs a Brouwer or residuated lattice"};
      break;
    case TermOp::RingSum:
      if (!l.is_atomistic() || !l.is_boolean())
        return {ErrorCode::UninterpretableTerm, "'xor' needs a Boolean atom representation"};
      break;
    case TermOp::Join:
    case TermOp::Meet:
      break;
  }
  auto left = first_problem(*node.lhs, l);
  if (!left.second.empty()) return left;
  return first_problem(*node.rhs, l);
}

template <typename Lookup>
Element eval_node(const TermNode& node, const Lattice& l, const Lookup& lookup) {
  switch (node.op) {
    case TermOp::Var:
      return lookup(node.name);
    case TermOp::Const: {
      auto e = resolve_constant(l, node.name);
      if (!e) throw Error(ErrorCode::UnknownConstant, "'" + node.name + "'");
      return *e;
    }
    default:
      break;
  }
  Element a = eval_node(*node.lhs, l, lookup);
  Element b = eval_node(*node.rhs, l, lookup);
  return apply_op(l, node.op, a, b);
}

void count_vars(const TermNode& node, std::map<std::string, int>& out) {
  if (node.op == TermOp::Var) {
    ++out[node.name];
  } else if (node.op != TermOp::Const) {
    count_vars(*node.lhs, out);
    count_vars(*node.rhs, out);
  }
}

}  // namespace

Element apply_op(const Lattice& l, TermOp op, Element a, Element b) {
  switch (op) {
    case TermOp::Join: return l.join(a, b);
    case TermOp::Meet: return l.meet(a, b);
    case TermOp::Mult: return l.mult(a, b);
    case TermOp::Implies: return l.is_brouwer() ? l.heyting_implies(a, b) : l.residuals(a, b).first;
    case TermOp::RingSum: return l.ring_sum(a, b);
    default: break;
  }
  throw Error(ErrorCode::InvalidArgument, "not a binary operation");
}

bool LatticeTerm::is_linear() const {
  std::map<std::string, int> counts;
  count_vars(*body_, counts);
  for (const auto& [name, n] : counts)
    if (n > 1) return false;
  return true;
}

LatticeTerm::LatticeTerm(std::vector<std::string> params, TermPtr body) : params_(std::move(params)), body_(std::move(body)) {
  if (!body_) throw Error(ErrorCode::InvalidArgument, "term has no body");
  if (params_.empty()) throw Error(ErrorCode::InvalidArgument, "term needs at least one parameter");
  std::set<std::string> declared(params_.begin(), params_.end());
  if (declared.size() != params_.size()) throw Error(ErrorCode::InvalidArgument, "duplicate term parameter");
  std::set<std::string> used;
  collect_vars(*body_, used);
  for (const auto& v : used)
    if (!declared.count(v)) throw Error(ErrorCode::InvalidArgument, "variable '" + v + "' is not a parameter");
}

bool LatticeTerm::interpretable_in(const Lattice& l) const { return first_problem(*body_, l).second.empty(); }

void LatticeTerm::require_interpretable(const Lattice& l, std::string_view role) const {
  auto [code, detail] = first_problem(*body_, l);
  if (detail.empty()) return;
  if (code == ErrorCode::UnknownConstant) {
    // A constant missing from the scale makes the term uninterpretable there.
    throw Error(role == "lattice" ? ErrorCode::UnknownConstant : ErrorCode::UninterpretableTerm,
                "constant " + detail + " in " + std::string(role));
  }
  throw Error(code, detail + " in " + std::string(role));
}

Element LatticeTerm::eval(const Lattice& l, const Valuation& v) const {
  require_interpretable(l);
  for (const auto& p : params_)
    if (!v.count(p)) throw Error(ErrorCode::MissingVariable, "'" + p + "'");
  for (const auto& [name, e] : v) l.check(e);
  return eval_node(*body_, l, [&](const std::string& name) { return v.at(name); });
}

Element LatticeTerm::eval(const Lattice& l, const std::vector<Element>& args) const {
  if (args.size() != params_.size())
    throw Error(ErrorCode::MissingVariable,
                "expected " + std::to_string(params_.size()) + " arguments, got " + std::to_string(args.size()));
  return eval_node(*body_, l, [&](const std::string& name) {
    auto it = std::find(params_.begin(), params_.end(), name);
    return args[static_cast<std::size_t>(it - params_.begin())];
  });
}

std::string op_keyword(TermOp op) {
  switch (op) {
    case TermOp::Join: return "or";
    case TermOp::Meet: return "and";
    case TermOp::Mult: return "mul";
    case TermOp::Implies: return "imp";
    case TermOp::RingSum: return "xor";
    default: return {};
  }
}

std::string to_string(const TermNode& node) {
  if (node.op == TermOp::Var || node.op == TermOp::Const) return node.name;
  auto operand = [](const TermNode& child) {
    std::string s = to_string(child);
    return (child.op == TermOp::Var || child.op == TermOp::Const) ? s : "(" + s + ")";
  };
  return op_keyword(node.op) + " " + operand(*node.lhs) + " " + operand(*node.rhs);
}

}  // namespace mvl
