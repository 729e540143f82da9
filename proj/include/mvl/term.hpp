#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mvl/lattice.hpp"

namespace mvl {

enum class TermOp { Var, Const, Join, Meet, Mult, Implies, RingSum };

/// Immutable expression node. Leaves carry a name (variable or constant label).
struct TermNode {
  TermOp op;
  std::string name;
  std::shared_ptr<const TermNode> lhs;
  std::shared_ptr<const TermNode> rhs;
};

using TermPtr = std::shared_ptr<const TermNode>;

TermPtr var(std::string name);
TermPtr constant(std::string label);
TermPtr binary(TermOp op, TermPtr lhs, TermPtr rhs);
inline TermPtr join(TermPtr a, TermPtr b) { return binary(TermOp::Join, std::move(a), std::move(b)); }
inline TermPtr meet(TermPtr a, TermPtr b) { return binary(TermOp::Meet, std::move(a), std::move(b)); }
inline TermPtr mult(TermPtr a, TermPtr b) { return binary(TermOp::Mult, std::move(a), std::move(b)); }
inline TermPtr implies(TermPtr a, TermPtr b) { return binary(TermOp::Implies, std::move(a), std::move(b)); }
inline TermPtr ring_sum(TermPtr a, TermPtr b) { return binary(TermOp::RingSum, std::move(a), std::move(b)); }

bool structurally_equal(const TermNode& a, const TermNode& b);

using Valuation = std::map<std::string, Element>;

/// A lattice term with its declared parameter list; the parameter order fixes
/// argument positions for extend().
///
/// Constants resolve by label in whichever lattice the term is evaluated in.
/// `top` and `bottom` name the bounds unless the lattice has an element with
/// that label.
class LatticeTerm {
 public:
  /// Throws InvalidArgument for duplicate or missing parameters and for
  /// variables not declared as parameters.
  LatticeTerm(std::vector<std::string> params, TermPtr body);

  const std::vector<std::string>& params() const { return params_; }
  std::size_t arity() const { return params_.size(); }
  const TermNode& body() const { return *body_; }
  const TermPtr& body_ptr() const { return body_; }

  /// Every operation node is defined in `l` (Mult needs a multiplication,
  /// RingSum a Boolean atom representation, Implies a Brouwer or residuated
  /// structure) and every constant resolves.
  bool interpretable_in(const Lattice& l) const;
  /// Throws UninterpretableTerm / UnknownConstant describing the first offender.
  void require_interpretable(const Lattice& l, std::string_view role = "lattice") const;

  /// Every parameter occurs at most once in the body.
  bool is_linear() const;

  Element eval(const Lattice& l, const Valuation& v) const;
  /// Positional evaluation; args[i] binds params()[i].
  Element eval(const Lattice& l, const std::vector<Element>& args) const;

  friend bool operator==(const LatticeTerm& a, const LatticeTerm& b) {
    return a.params_ == b.params_ && structurally_equal(*a.body_, *b.body_);
  }

 private:
  std::vector<std::string> params_;
  TermPtr body_;
};

/// One binary operation node evaluated in `l`.
Element apply_op(const Lattice& l, TermOp op, Element a, Element b);

/// Resolves a constant label, honouring the `top` / `bottom` keywords.
std::optional<Element> resolve_constant(const Lattice& l, const std::string& label);

/// Prefix rendering, e.g. "or x (and y c)".
std::string to_string(const TermNode& node);
std::string op_keyword(TermOp op);

}  // namespace mvl
