#include "deon/scenario.hpp"

#include <algorithm>
#include <set>

namespace deon {

std::string rational_str(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Formula SignedAtom::formula() const {
  auto f = Formula::atom(atom);
  return negated ? Formula::negation(std::move(f)) : f;
}

std::string SignedAtom::str() const { return (negated ? "not " : "") + atom.str(); }

const ActionPlan* Scenario::find_plan(const std::string& id) const {
  for (const auto& p : plans) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const PredicateDecl* Scenario::find_predicate(const std::string& n) const {
  for (const auto& p : predicates) {
    if (p.name == n) return &p;
  }
  return nullptr;
}

const CandidateSet* Scenario::find_candidates(const std::string& context) const {
  for (const auto& c : candidates) {
    if (c.context == context) return &c;
  }
  return nullptr;
}

bool Scenario::has_agent(const std::string& n) const {
  return std::find(agents.begin(), agents.end(), n) != agents.end();
}

std::optional<Rational> Scenario::utility(const std::string& context, const SignedAtom& action) const {
  for (const auto& block : utilities) {
    if (block.context != context) continue;
    for (const auto& e : block.entries) {
      if (e.action == action) return e.value;
    }
  }
  return std::nullopt;
}

namespace {

class Validator {
public:
  explicit Validator(const Scenario& s) : s_(s) {}

  std::vector<Diagnostic> run() {
    declarations();
    for (const auto& p : s_.plans) plan(p);
    for (std::size_t i = 0; i < s_.constraints.physical.size(); ++i) {
      constraint(s_.constraints.physical[i], "physics#" + std::to_string(i));
    }
    std::set<std::string> belief_agents;
    for (const auto& b : s_.constraints.beliefs) {
      const auto element = "belief " + b.agent;
      if (!s_.has_agent(b.agent)) report("unknown-agent", element, "belief block for unknown agent '" + b.agent + "'");
      if (!belief_agents.insert(b.agent).second) report("duplicate-belief", element, "second belief block for agent '" + b.agent + "'");
      for (std::size_t i = 0; i < b.formulas.size(); ++i) constraint(b.formulas[i], element + "#" + std::to_string(i));
    }
    std::map<std::string, std::size_t> effect_index;
    for (const auto& e : s_.effects) {
      const auto element = "effect " + e.plan_id + "#" + std::to_string(effect_index[e.plan_id]++);
      if (!s_.find_plan(e.plan_id)) report("unknown-plan", element, "universalization effect for unknown plan '" + e.plan_id + "'");
      constraint(e.consequence, element);
    }
    candidates();
    utilities();
    plan_contexts();
    return std::move(out_);
  }

private:
  void report(std::string code, std::string element, std::string message) {
    out_.push_back({std::move(code), std::move(element), std::move(message)});
  }

  void declarations() {
    if (s_.agents.empty()) report("no-agents", "agents", "scenario declares no agents");
    std::set<std::string> seen;
    for (const auto& a : s_.agents) {
      if (!seen.insert(a).second) report("duplicate-agent", "agents", "agent '" + a + "' declared twice");
    }
    std::set<std::string> objects;
    for (const auto& o : s_.objects) {
      if (!objects.insert(o).second) report("duplicate-object", "objects", "object '" + o + "' declared twice");
      if (seen.count(o)) report("name-clash", "objects", "'" + o + "' declared as both agent and object");
    }
    std::set<std::string> preds;
    for (const auto& p : s_.predicates) {
      const auto element = "predicate " + p.name;
      if (!preds.insert(p.name).second) report("duplicate-predicate", element, "predicate '" + p.name + "' declared twice");
      if (p.name.rfind("U_", 0) == 0) {
        report("reserved-predicate", element, "predicate '" + p.name + "' uses the reserved prefix 'U_'");
      }
    }
    std::set<std::string> plans;
    for (const auto& p : s_.plans) {
      if (!plans.insert(p.id).second) report("duplicate-plan", "plan " + p.id, "plan '" + p.id + "' declared twice");
    }
  }

  bool is_object(const std::string& n) const {
    return std::find(s_.objects.begin(), s_.objects.end(), n) != s_.objects.end();
  }

  // bound: variable name -> kind
  void atom(const Atom& a, const std::map<std::string, TermKind>& bound, const std::string& element) {
    const auto* decl = s_.find_predicate(a.predicate);
    if (!decl) {
      report("unknown-predicate", element, "unknown predicate '" + a.predicate + "' in " + a.str());
    } else if (decl->arity != a.args.size()) {
      report("arity-mismatch", element,
             "predicate '" + a.predicate + "' has arity " + std::to_string(decl->arity) + ", used with " +
                 std::to_string(a.args.size()) + " argument(s) in " + a.str());
    }
    for (const auto& t : a.args) {
      switch (t.kind) {
        case TermKind::AgentConstant:
          if (!s_.has_agent(t.name)) report("unknown-term", element, "unknown agent '" + t.name + "' in " + a.str());
          break;
        case TermKind::ObjectConstant:
          if (!is_object(t.name)) report("unknown-term", element, "unknown object '" + t.name + "' in " + a.str());
          break;
        default: {
          auto it = bound.find(t.name);
          if (it == bound.end()) {
            report("free-variable", element, "variable '" + t.name + "' is not bound in " + a.str());
          } else if (it->second != t.kind) {
            report("kind-mismatch", element, "variable '" + t.name + "' used with the wrong sort in " + a.str());
          }
        }
      }
    }
  }

  void formula(const Formula& f, std::map<std::string, TermKind> bound, const std::string& element) {
    if (f.kind() == Formula::Kind::Atom) {
      atom(f.as_atom(), bound, element);
      return;
    }
    if (f.is_modal()) {
      report("modal-in-constraint", element, "modal operator in authored formula: " + f.str());
      return;
    }
    if (f.kind() == Formula::Kind::ForAll) bound[f.variable().name] = f.variable().kind;
    for (const auto& c : f.children()) formula(c, bound, element);
  }

  void constraint(const Formula& f, const std::string& element) { formula(f, {}, element); }

  void ground_literal(const SignedAtom& l, const std::string& element) {
    atom(l.atom, {}, element);
  }

  void plan(const ActionPlan& p) {
    const auto element = "plan " + p.id;
    if (!s_.has_agent(p.agent)) report("unknown-agent", element, "plan '" + p.id + "' names unknown agent '" + p.agent + "'");
    if (p.reasons.empty()) report("empty-reasons", element, "plan '" + p.id + "' has no reasons");
    std::map<std::string, TermKind> bound;
    for (const auto& v : p.free_object_vars) {
      if (s_.has_agent(v) || is_object(v)) report("name-clash", element, "plan variable '" + v + "' shadows a constant");
      bound[v] = TermKind::ObjectVariable;
    }
    for (const auto& r : p.reasons) atom(r.atom, bound, element);
    atom(p.action.atom, bound, element);
    if (const auto* decl = s_.find_predicate(p.action.atom.predicate); decl && !decl->is_action) {
      report("not-action-predicate", element,
             "plan '" + p.id + "' acts with '" + decl->name + "', which is not declared as an action predicate");
    }
  }

  void candidates() {
    std::set<std::string> seen;
    for (const auto& c : s_.candidates) {
      const auto element = "candidates " + c.context;
      if (!seen.insert(c.context).second) report("duplicate-context", element, "candidate context '" + c.context + "' declared twice");
      if (c.actions.empty()) report("empty-candidates", element, "candidate set '" + c.context + "' lists no actions");
      for (const auto& l : c.condition) ground_literal(l, element);
      for (const auto& l : c.actions) {
        ground_literal(l, element);
        if (!s_.utility(c.context, l)) {
          report("missing-utility", element, "no utility for candidate " + l.str() + " in context '" + c.context + "'");
        }
      }
    }
  }

  void utilities() {
    std::set<std::string> seen;
    for (const auto& u : s_.utilities) {
      const auto element = "utility " + u.context;
      if (!seen.insert(u.context).second) report("duplicate-context", element, "utility block '" + u.context + "' declared twice");
      if (!s_.find_candidates(u.context)) {
        report("unknown-context", element, "utility block for undeclared candidate context '" + u.context + "'");
      }
      std::set<SignedAtom> keys;
      for (const auto& e : u.entries) {
        ground_literal(e.action, element);
        if (!keys.insert(e.action).second) report("duplicate-utility", element, "utility for " + e.action.str() + " given twice");
      }
    }
  }

  void plan_contexts() {
    for (const auto& p : s_.plans) {
      std::vector<const CandidateSet*> matches;
      std::set<SignedAtom> reasons(p.reasons.begin(), p.reasons.end());
      for (const auto& c : s_.candidates) {
        if (std::set<SignedAtom>(c.condition.begin(), c.condition.end()) == reasons) matches.push_back(&c);
      }
      if (matches.size() > 1) {
        report("ambiguous-context", "plan " + p.id, "plan '" + p.id + "' matches more than one candidate context");
      }
      if (!matches.empty() &&
          std::find(matches.front()->actions.begin(), matches.front()->actions.end(), p.action) == matches.front()->actions.end()) {
        report("plan-action-not-candidate", "candidates " + matches.front()->context,
               "candidate set '" + matches.front()->context + "' omits " + p.action.str() + ", the action of plan '" + p.id + "'");
      }
    }
  }

  const Scenario& s_;
  std::vector<Diagnostic> out_;
};

SignedAtom abstract_agent(SignedAtom l, const std::string& agent, const std::string& var) {
  for (auto& t : l.atom.args) {
    if (t.kind == TermKind::AgentConstant && t.name == agent) t = Term::agent_var(var);
  }
  return l;
}

Formula conjunction_of(const std::vector<SignedAtom>& ls) {
  std::vector<Formula> fs;
  for (const auto& l : ls) fs.push_back(l.formula());
  return Formula::conjunction(std::move(fs));
}

}  // namespace

std::vector<Diagnostic> validate(const Scenario& s) { return Validator(s).run(); }

std::vector<Formula> belief_theory(const Scenario& s, const std::string& agent) {
  if (!s.has_agent(agent)) throw ScenarioError("unknown agent '" + agent + "'");
  std::vector<Formula> out = s.constraints.physical;
  for (const auto& b : s.constraints.beliefs) {
    if (b.agent == agent) out.insert(out.end(), b.formulas.begin(), b.formulas.end());
  }
  return out;
}

Formula effects_for(const Scenario& s, const std::string& plan_id) {
  if (!s.find_plan(plan_id)) throw ScenarioError("unknown plan '" + plan_id + "'");
  std::vector<Formula> parts;
  for (const auto& e : s.effects) {
    if (e.plan_id == plan_id) parts.push_back(Formula::implies(Formula::atom(trigger_atom(plan_id)), e.consequence));
  }
  return Formula::conjunction(std::move(parts));
}

Formula plan_condition(const ActionPlan& p) { return conjunction_of(p.reasons); }

Formula plan_action(const ActionPlan& p) { return p.action.formula(); }

Formula close_over_objects(const ActionPlan& p, const Formula& f) {
  Formula out = f;
  for (auto it = p.free_object_vars.rbegin(); it != p.free_object_vars.rend(); ++it) {
    out = Formula::forall(Term::object_var(*it), out);
  }
  return out;
}

Formula universal_adoption(const ActionPlan& p) {
  std::string var = "_x";
  while (std::find(p.free_object_vars.begin(), p.free_object_vars.end(), var) != p.free_object_vars.end()) var += "_";
  std::vector<SignedAtom> reasons;
  for (const auto& r : p.reasons) reasons.push_back(abstract_agent(r, p.agent, var));
  auto body = Formula::implies(conjunction_of(reasons), abstract_agent(p.action, p.agent, var).formula());
  return Formula::forall(Term::agent_var(var), close_over_objects(p, body));
}

Domain scenario_domain(const Scenario& s) {
  Domain d{s.agents, s.objects, {}};
  for (const auto& p : s.plans) d.adoptions.emplace(p.id, universal_adoption(p));
  return d;
}

const CandidateSet* context_of(const Scenario& s, const ActionPlan& p) {
  std::set<SignedAtom> reasons(p.reasons.begin(), p.reasons.end());
  for (const auto& c : s.candidates) {
    if (std::set<SignedAtom>(c.condition.begin(), c.condition.end()) == reasons) return &c;
  }
  return nullptr;
}

}  // namespace deon
