#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace deon {

/// Raised for malformed logical input: kind mismatches, empty domains,
/// modal operators where none are allowed.
class LogicError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class TermKind { AgentConstant, AgentVariable, ObjectConstant, ObjectVariable };

struct Term {
  TermKind kind = TermKind::AgentConstant;
  std::string name;

  static Term agent(std::string name) { return {TermKind::AgentConstant, std::move(name)}; }
  static Term agent_var(std::string name) { return {TermKind::AgentVariable, std::move(name)}; }
  static Term object(std::string name) { return {TermKind::ObjectConstant, std::move(name)}; }
  static Term object_var(std::string name) { return {TermKind::ObjectVariable, std::move(name)}; }

  bool is_variable() const {
    return kind == TermKind::AgentVariable || kind == TermKind::ObjectVariable;
  }
  bool is_agent_kind() const {
    return kind == TermKind::AgentConstant || kind == TermKind::AgentVariable;
  }

  auto operator<=>(const Term&) const = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  bool is_ground() const;
  std::string str() const;

  auto operator<=>(const Atom&) const = default;
};

/// Immutable logical formula. Nodes are shared, so copies are cheap and
/// values can be handed across threads freely.
///
/// `true` is the empty conjunction and `false` the empty disjunction.
class Formula {
public:
  enum class Kind {
    Atom,
    Not,
    And,
    Or,
    Implies,
    ForAll,
    Possible,       // physical possibility P(.)
    Believable,     // agent can rationally believe
    Required,       // rationality requires the agent to accept
    Universalized,  // everyone adopts the named plan
  };

  static Formula atom(Atom a);
  static Formula negation(Formula f);
  static Formula conjunction(std::vector<Formula> fs);
  static Formula disjunction(std::vector<Formula> fs);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula forall(Term variable, Formula body);
  static Formula possible(Formula f);
  static Formula believable(std::string agent, Formula f);
  static Formula required(std::string agent, Formula f);
  static Formula universalized(std::string plan_id);
  static Formula truth() { return conjunction({}); }
  static Formula falsity() { return disjunction({}); }

  Kind kind() const { return node_->kind; }
  const Atom& as_atom() const;
  const std::vector<Formula>& children() const { return node_->children; }
  const Formula& child(std::size_t i = 0) const { return node_->children.at(i); }
  /// Bound variable of a ForAll node.
  const Term& variable() const;
  /// Agent name of a modal node, plan id of a Universalized node.
  const std::string& label() const { return node_->label; }

  bool is_modal() const;
  bool is_true() const { return kind() == Kind::And && children().empty(); }
  bool is_false() const { return kind() == Kind::Or && children().empty(); }

  /// Source-syntax rendering; modal nodes use P(..), B[a](..), R[a](..).
  std::string str() const;

  friend bool operator==(const Formula& a, const Formula& b);

private:
  struct Node {
    Kind kind;
    Atom atom;
    Term variable;
    std::string label;
    std::vector<Formula> children;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Node n);

  std::shared_ptr<const Node> node_;
};

std::ostream& operator<<(std::ostream& os, const Formula& f);

using Binding = std::map<std::string, Term>;

/// Replace free occurrences of the bound variables. Throws LogicError when a
/// variable is bound to a constant of the other sort, or to a non-constant.
Formula substitute(const Formula& f, const Binding& binding);

std::set<Term> free_vars(const Formula& f);

/// True if any modal operator or universalized-plan node occurs in f.
bool contains_modal(const Formula& f);

/// Modal operators may only wrap modal-free formulas, with the single
/// exception that an agent modality may wrap P(.) or not P(.). Throws
/// LogicError otherwise.
void check_modal_shape(const Formula& f);

struct Domain {
  std::vector<std::string> agents;
  std::vector<std::string> objects;
  /// plan id -> quantified universal-adoption formula for that plan.
  std::map<std::string, Formula> adoptions;
};

/// Predicate of the trigger atom marking universal adoption of a plan.
std::string trigger_predicate(const std::string& plan_id);
Atom trigger_atom(const std::string& plan_id);

/// Expand every quantifier over the finite domain. Free variables are
/// closed universally (in order of first occurrence). Universalized(p)
/// becomes adoption(p) and the trigger atom of p. Nested conjunctions and
/// disjunctions are flattened. Modal nodes are kept, their bodies grounded.
Formula ground(const Formula& f, const Domain& domain);

}  // namespace deon
