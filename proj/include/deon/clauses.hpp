#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "deon/formula.hpp"

namespace deon {

/// Signed, 1-based atom reference: +i means atom i-1 true, -i false.
using Literal = int;
using Clause = std::vector<Literal>;

inline std::size_t literal_atom(Literal l) { return static_cast<std::size_t>(l > 0 ? l : -l) - 1; }
inline bool literal_sign(Literal l) { return l > 0; }

struct AtomInfo {
  std::string name;
  bool auxiliary = false;  // definitional atom introduced by the CNF encoding
};

/// A labelled input formula the clauses were derived from.
struct ClauseOrigin {
  std::string label;
  Formula formula;
};

struct GroundClauseSet {
  std::vector<AtomInfo> atoms;
  std::vector<Clause> clauses;
  /// origin index per clause, into `origins`.
  std::vector<std::size_t> clause_origin;
  std::vector<ClauseOrigin> origins;

  std::size_t atom_count() const { return atoms.size(); }
  /// Index of a named (non-auxiliary) atom, or npos.
  std::size_t find_atom(const std::string& name) const;
  std::string literal_str(Literal l) const;

  /// DIMACS rendering: comment lines naming atoms, "p cnf" header, one
  /// zero-terminated clause per line.
  std::string dimacs() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Builds an equisatisfiable clause set from ground, modal-free formulas.
/// Top-level conjunctions are split so each conjunct is its own origin.
/// Complex subformulas get fresh definitional atoms.
class ClauseBuilder {
public:
  ClauseBuilder& add(const std::string& label, const Formula& f);
  /// Register an atom in the universe without constraining it.
  std::size_t intern(const Atom& a);
  GroundClauseSet build() &&;
  const GroundClauseSet& peek() const { return set_; }

private:
  Literal encode(const Formula& f);
  void add_clause(Clause c);
  Literal fresh();

  GroundClauseSet set_;
  std::map<std::string, std::size_t> index_;
  std::size_t current_origin_ = 0;
  std::size_t aux_counter_ = 0;
};

GroundClauseSet to_clauses(const Formula& f);

}  // namespace deon
