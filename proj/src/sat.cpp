#include "deon/sat.hpp"

#include <algorithm>
#include <set>

namespace deon {

bool Model::satisfies(const Clause& c) const {
  return std::any_of(c.begin(), c.end(), [&](Literal l) { return values.at(literal_atom(l)) == literal_sign(l); });
}

bool Model::satisfies(const GroundClauseSet& cs) const {
  if (values.size() != cs.atom_count()) return false;
  return std::all_of(cs.clauses.begin(), cs.clauses.end(), [&](const Clause& c) { return satisfies(c); });
}

namespace {

void check_well_formed(const GroundClauseSet& cs) {
  for (const auto& c : cs.clauses) {
    if (c.empty()) throw SatError("empty clause in clause set");
    for (Literal l : c) {
      if (l == 0 || literal_atom(l) >= cs.atom_count()) throw SatError("literal out of range: " + std::to_string(l));
    }
  }
}

class Dpll {
public:
  Dpll(const GroundClauseSet& cs, const SolverOptions& options)
      : cs_(cs), options_(options), value_(cs.atom_count(), kUnassigned), reason_(cs.atom_count(), kNoReason) {}

  SatResult run() {
    SatResult result;
    while (true) {
      if (auto conflict = propagate(); conflict != kNoReason) {
        record_conflict(conflict);
        if (!backtrack()) {
          result.status = SatStatus::Unsatisfiable;
          result.conflict = ConflictExplanation{{touched_.begin(), touched_.end()}};
          break;
        }
        continue;
      }
      auto next = std::find(value_.begin(), value_.end(), kUnassigned);
      if (next == value_.end() || all_satisfied()) {
        Model m;
        m.values.reserve(value_.size());
        // anything still open is decided true, which cannot falsify a satisfied set
        for (auto v : value_) m.values.push_back(v != kFalse);
        if (!m.satisfies(cs_)) throw SatError("internal error: witness does not satisfy clause set");
        result.status = SatStatus::Satisfiable;
        result.model = std::move(m);
        break;
      }
      if (decisions_ >= options_.decision_budget) {
        result.status = SatStatus::BudgetExhausted;
        break;
      }
      ++decisions_;
      const auto atom = static_cast<std::size_t>(next - value_.begin());
      decisions_stack_.push_back({atom, trail_.size(), false});
      assign(atom, true, kNoReason);
    }
    result.decisions = decisions_;
    return result;
  }

private:
  static constexpr signed char kUnassigned = -1;
  static constexpr signed char kFalse = 0;
  static constexpr signed char kTrue = 1;
  static constexpr std::size_t kNoReason = static_cast<std::size_t>(-1);

  struct Decision {
    std::size_t atom;
    std::size_t trail_size;
    bool flipped;
  };

  void assign(std::size_t atom, bool v, std::size_t reason) {
    value_[atom] = v ? kTrue : kFalse;
    reason_[atom] = reason;
    trail_.push_back(atom);
  }

  signed char lit_value(Literal l) const {
    auto v = value_[literal_atom(l)];
    if (v == kUnassigned) return kUnassigned;
    return (v == kTrue) == literal_sign(l) ? kTrue : kFalse;
  }

  bool all_satisfied() const {
    return std::all_of(cs_.clauses.begin(), cs_.clauses.end(), [&](const Clause& c) {
      return std::any_of(c.begin(), c.end(), [&](Literal l) { return lit_value(l) == kTrue; });
    });
  }

  // Returns the index of a falsified clause, or kNoReason at fixpoint.
  std::size_t propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t ci = 0; ci < cs_.clauses.size(); ++ci) {
        const auto& c = cs_.clauses[ci];
        Literal open = 0;
        int open_count = 0;
        bool sat = false;
        for (Literal l : c) {
          auto v = lit_value(l);
          if (v == kTrue) {
            sat = true;
            break;
          }
          if (v == kUnassigned && open != l) {
            if (open_count == 0) open = l;
            ++open_count;
          }
        }
        if (sat) continue;
        if (open_count == 0) return ci;
        if (open_count == 1) {
          assign(literal_atom(open), literal_sign(open), ci);
          changed = true;
        }
      }
    }
    return kNoReason;
  }

  // The falsified clause plus the reasons of every implied literal on the
  // trail close this branch of the refutation tree.
  void record_conflict(std::size_t clause) {
    touched_.insert(clause);
    for (auto atom : trail_) {
      if (reason_[atom] != kNoReason) touched_.insert(reason_[atom]);
    }
  }

  void undo_to(std::size_t trail_size) {
    while (trail_.size() > trail_size) {
      auto atom = trail_.back();
      trail_.pop_back();
      value_[atom] = kUnassigned;
      reason_[atom] = kNoReason;
    }
  }

  bool backtrack() {
    while (!decisions_stack_.empty() && decisions_stack_.back().flipped) {
      decisions_stack_.pop_back();
    }
    if (decisions_stack_.empty()) return false;
    auto& d = decisions_stack_.back();
    undo_to(d.trail_size);
    d.flipped = true;
    ++decisions_;
    assign(d.atom, false, kNoReason);
    return true;
  }

  const GroundClauseSet& cs_;
  const SolverOptions& options_;
  std::vector<signed char> value_;
  std::vector<std::size_t> reason_;
  std::vector<std::size_t> trail_;
  std::vector<Decision> decisions_stack_;
  std::set<std::size_t> touched_;
  std::uint64_t decisions_ = 0;
};

}  // namespace

SatResult solve(const GroundClauseSet& cs, const SolverOptions& options) {
  check_well_formed(cs);
  return Dpll(cs, options).run();
}

SatResult brute_force(const GroundClauseSet& cs) {
  check_well_formed(cs);
  const auto n = cs.atom_count();
  if (n > kBruteForceLimit) {
    throw SatError("brute force limited to " + std::to_string(kBruteForceLimit) + " atoms, got " + std::to_string(n));
  }
  SatResult result;
  Model m;
  m.values.assign(n, false);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    for (std::size_t i = 0; i < n; ++i) m.values[i] = (bits >> i) & 1U;
    if (m.satisfies(cs)) {
      result.status = SatStatus::Satisfiable;
      result.model = m;
      return result;
    }
  }
  result.status = SatStatus::Unsatisfiable;
  ConflictExplanation all;
  for (std::size_t i = 0; i < cs.clauses.size(); ++i) all.clauses.push_back(i);
  result.conflict = std::move(all);
  return result;
}

std::vector<std::string> render_model(const GroundClauseSet& cs, const Model& m) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < cs.atom_count(); ++i) {
    if (cs.atoms[i].auxiliary) continue;
    out.push_back(m.value(i) ? cs.atoms[i].name : "not " + cs.atoms[i].name);
  }
  return out;
}

std::vector<std::string> render_conflict(const GroundClauseSet& cs, const ConflictExplanation& c) {
  std::set<std::size_t> origins;
  for (auto ci : c.clauses) {
    if (ci < cs.clause_origin.size()) origins.insert(cs.clause_origin[ci]);
  }
  std::vector<std::string> out;
  for (auto oi : origins) {
    const auto& o = cs.origins.at(oi);
    out.push_back(o.label + ": " + o.formula.str());
  }
  return out;
}

GroundClauseSet restrict_to(const GroundClauseSet& cs, const ConflictExplanation& c) {
  GroundClauseSet out;
  out.atoms = cs.atoms;
  out.origins = cs.origins;
  for (auto ci : c.clauses) {
    out.clauses.push_back(cs.clauses.at(ci));
    if (ci < cs.clause_origin.size()) out.clause_origin.push_back(cs.clause_origin[ci]);
  }
  return out;
}

}  // namespace deon
