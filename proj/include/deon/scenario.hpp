#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "deon/formula.hpp"

namespace deon {

using Rational = boost::rational<std::int64_t>;

std::string rational_str(const Rational& r);

/// A possibly negated atom, as used in plan reasons, plan actions, candidate
/// sets and utility keys.
struct SignedAtom {
  Atom atom;
  bool negated = false;

  Formula formula() const;
  std::string str() const;
  auto operator<=>(const SignedAtom&) const = default;
};

struct PredicateDecl {
  std::string name;
  std::size_t arity = 0;
  bool is_action = false;
  auto operator<=>(const PredicateDecl&) const = default;
};

/// C(a) =>_a A(a): the agent takes the action whenever all reasons hold.
/// Reasons name the agent by its constant; universal adoption abstracts it.
struct ActionPlan {
  std::string id;
  std::string agent;
  std::vector<SignedAtom> reasons;
  SignedAtom action;
  std::vector<std::string> free_object_vars;
  friend bool operator==(const ActionPlan&, const ActionPlan&) = default;
};

struct BeliefBlock {
  std::string agent;
  std::vector<Formula> formulas;
  friend bool operator==(const BeliefBlock&, const BeliefBlock&) = default;
};

struct ConstraintBase {
  std::vector<Formula> physical;
  std::vector<BeliefBlock> beliefs;
  friend bool operator==(const ConstraintBase&, const ConstraintBase&) = default;
};

/// Empirical consequence of everyone adopting `plan_id`.
struct UniversalizationEffect {
  std::string plan_id;
  Formula consequence;
  friend bool operator==(const UniversalizationEffect&, const UniversalizationEffect&) = default;
};

struct UtilityEntry {
  SignedAtom action;
  Rational value;
  friend bool operator==(const UtilityEntry&, const UtilityEntry&) = default;
};

struct UtilityBlock {
  std::string context;
  std::vector<UtilityEntry> entries;
  friend bool operator==(const UtilityBlock&, const UtilityBlock&) = default;
};

/// Actions available under a shared condition; inclusion asserts availability.
struct CandidateSet {
  std::string context;
  std::vector<SignedAtom> condition;
  std::vector<SignedAtom> actions;
  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;
};

struct Scenario {
  std::string name;
  std::vector<std::string> agents;
  std::vector<std::string> objects;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionPlan> plans;
  ConstraintBase constraints;
  std::vector<UniversalizationEffect> effects;
  std::vector<UtilityBlock> utilities;
  std::vector<CandidateSet> candidates;

  const ActionPlan* find_plan(const std::string& id) const;
  const PredicateDecl* find_predicate(const std::string& name) const;
  const CandidateSet* find_candidates(const std::string& context) const;
  bool has_agent(const std::string& name) const;
  std::optional<Rational> utility(const std::string& context, const SignedAtom& action) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// A validation finding. `element` names the offending scenario element in
/// the form used by the DSL's span table, e.g. "plan steal" or "physics#0".
struct Diagnostic {
  std::string code;
  std::string element;
  std::string message;
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

class ScenarioError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::vector<Diagnostic> validate(const Scenario& s);

/// Physical constraints followed by the agent's belief constraints.
std::vector<Formula> belief_theory(const Scenario& s, const std::string& agent);

/// Conjunction of (U_plan -> consequence) over the plan's effects; `true`
/// when there are none.
Formula effects_for(const Scenario& s, const std::string& plan_id);

/// Conjunction of the plan's reasons (C(a)), object variables left free.
Formula plan_condition(const ActionPlan& p);
/// The plan's action literal (A(a)), object variables left free.
Formula plan_action(const ActionPlan& p);
/// Closes a plan formula over the plan's free object variables.
Formula close_over_objects(const ActionPlan& p, const Formula& f);

/// forall x forall y... (C(x, y...) -> A(x, y...)): the plan's agent constant
/// replaced by an agent variable.
Formula universal_adoption(const ActionPlan& p);

/// Grounding domain for the scenario, with an adoption formula per plan.
Domain scenario_domain(const Scenario& s);

/// The candidate set whose condition equals the plan's reasons (as a set),
/// if any.
const CandidateSet* context_of(const Scenario& s, const ActionPlan& p);

}  // namespace deon
