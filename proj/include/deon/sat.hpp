#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deon/clauses.hpp"

namespace deon {

struct Model {
  std::vector<bool> values;  // indexed by atom

  bool value(std::size_t atom) const { return values.at(atom); }
  bool satisfies(const Clause& c) const;
  bool satisfies(const GroundClauseSet& cs) const;
  friend bool operator==(const Model&, const Model&) = default;
};

/// Clauses (indices into the input set) that together admit no model.
/// Not necessarily minimal.
struct ConflictExplanation {
  std::vector<std::size_t> clauses;
  friend bool operator==(const ConflictExplanation&, const ConflictExplanation&) = default;
};

enum class SatStatus { Satisfiable, Unsatisfiable, BudgetExhausted };

struct SatResult {
  SatStatus status = SatStatus::BudgetExhausted;
  std::optional<Model> model;                 // Satisfiable
  std::optional<ConflictExplanation> conflict;  // Unsatisfiable
  std::uint64_t decisions = 0;

  bool satisfiable() const { return status == SatStatus::Satisfiable; }
  bool unsatisfiable() const { return status == SatStatus::Unsatisfiable; }
  friend bool operator==(const SatResult&, const SatResult&) = default;
};

struct SolverOptions {
  std::uint64_t decision_budget = 1'000'000;
};

class SatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// DPLL: unit propagation, chronological backtracking, branching on the
/// lowest unassigned atom with `true` first. Deterministic.
SatResult solve(const GroundClauseSet& cs, const SolverOptions& options = {});

inline constexpr std::size_t kBruteForceLimit = 24;

/// Enumerates assignments in binary-counter order (atom 0 is the lowest
/// bit, all-false first) and returns the first model found. Throws
/// SatError above kBruteForceLimit atoms.
SatResult brute_force(const GroundClauseSet& cs);

/// Named atoms of a model as "name" / "not name" text.
std::vector<std::string> render_model(const GroundClauseSet& cs, const Model& m);

/// Source formulas (labelled) behind the conflicting clauses, deduplicated,
/// in input order.
std::vector<std::string> render_conflict(const GroundClauseSet& cs, const ConflictExplanation& c);

/// Sub-clause-set consisting of the explanation's clauses only.
GroundClauseSet restrict_to(const GroundClauseSet& cs, const ConflictExplanation& c);

}  // namespace deon
