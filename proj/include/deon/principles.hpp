#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "deon/clauses.hpp"
#include "deon/sat.hpp"
#include "deon/scenario.hpp"

namespace deon {

enum class Principle { Generalization, Utility, Autonomy };
enum class VerdictStatus { Pass, Fail, Indeterminate };
enum class Overall { Ethical, Unethical, Indeterminate };
enum class Truth { True, False, Unknown };

const char* to_string(Principle p);
const char* to_string(VerdictStatus s);
const char* to_string(Overall o);

/// Raised when a scenario lacks data a check needs (e.g. a utility entry).
class ConfigurationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Evidence {
  std::string summary;
  /// Witness atoms, conflicting source formulas, or compared utilities.
  std::vector<std::string> details;
  /// Dominating action / conflicting plan, when the verdict names one.
  std::optional<std::string> counterpart;
};

struct PrincipleVerdict {
  Principle principle;
  VerdictStatus status;
  Evidence evidence;
};

/// One modal decision evaluated along both sides of the diamond/box duality.
struct DualityRecord {
  std::string query;
  std::string agent;
  Truth primary;  // the operator the principle uses
  Truth dual;     // the same claim via the dual operator
};

struct EvaluationTrace {
  std::vector<DualityRecord> duality;
};

struct CheckOptions {
  SolverOptions solver;
  EvaluationTrace* trace = nullptr;
};

/// One SAT call made while deciding a modal formula.
struct SatCall {
  std::string query;
  GroundClauseSet clauses;
  SatResult result;
};

/// Decides formulas of the shapes P(S), B[a](P(S)), B[a](not P(S)),
/// R[a](P(S)), R[a](not P(S)) and Boolean combinations of them, against
/// the scenario's physics and the agents' belief theories.
///
/// Agent modalities over P collapse onto the agent's single theory:
/// both B[a](P(S)) and R[a](P(S)) hold iff S is consistent with it.
class ModalEvaluator {
public:
  ModalEvaluator(const Scenario& s, CheckOptions options);

  Truth decide(const Formula& f);

  /// SAT instance deciding whether `body` is consistent with physics and,
  /// if `agent` is set, that agent's beliefs.
  GroundClauseSet instance(const std::optional<std::string>& agent, const Formula& body) const;

  const std::vector<SatCall>& calls() const { return calls_; }
  const SatCall& last_call() const { return calls_.back(); }

private:
  Truth consistent(const std::optional<std::string>& agent, const Formula& body);

  const Scenario& s_;
  CheckOptions options_;
  Domain domain_;
  std::vector<SatCall> calls_;
};

PrincipleVerdict check_generalization(const ActionPlan& plan, const Scenario& s, const CheckOptions& options = {});

/// (context, action) pairs whose plans count as ethical alternatives.
using EligibleSet = std::set<std::pair<std::string, SignedAtom>>;

PrincipleVerdict check_utility(const ActionPlan& plan, const Scenario& s, const EligibleSet& eligible);

PrincipleVerdict check_autonomy_pair(const ActionPlan& plan, const ActionPlan& other, const Scenario& s,
                                     const CheckOptions& options = {});

PrincipleVerdict check_autonomy(const ActionPlan& plan, const Scenario& s, const std::set<std::string>& protected_plans,
                                const CheckOptions& options = {});

struct PlanVerdict {
  std::string plan;
  std::string agent;
  std::vector<PrincipleVerdict> verdicts;  // generalization, utility, autonomy
  Overall overall = Overall::Ethical;

  /// First failing verdict, else first indeterminate one, else null.
  const PrincipleVerdict* deciding() const;
};

using RoundStatus = std::map<std::string, std::array<VerdictStatus, 3>>;

struct VerdictSet {
  std::string scenario;
  std::vector<PlanVerdict> plans;  // declaration order
  std::size_t iterations = 0;
  bool stable = true;
  /// Per-round principle statuses; history[0] is the optimistic start.
  std::vector<RoundStatus> history;

  const PlanVerdict* find(const std::string& plan) const;
};

/// Optimistic fixpoint: every plan starts ethical; each round rechecks all
/// plans against the previous round's ethical plans. Stops when a round
/// repeats the previous one or after |plans|+1 rounds; plans still changing
/// then are indeterminate.
VerdictSet evaluate(const Scenario& s, const CheckOptions& options = {});

/// Identifiers of the SAT queries behind the checks:
/// generalization/<plan>, autonomy-actions/<plan>/<other>,
/// autonomy-reasons/<plan>/<other>.
std::vector<std::string> query_ids(const Scenario& s);
GroundClauseSet query_clauses(const Scenario& s, const std::string& id);

}  // namespace deon
