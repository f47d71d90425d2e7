#include "deon/principles.hpp"

#include <algorithm>

namespace deon {

const char* to_string(Principle p) {
  switch (p) {
    case Principle::Generalization: return "generalization";
    case Principle::Utility: return "utility";
    case Principle::Autonomy: return "autonomy";
  }
  return "?";
}

const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Pass: return "pass";
    case VerdictStatus::Fail: return "fail";
    case VerdictStatus::Indeterminate: return "indeterminate";
  }
  return "?";
}

const char* to_string(Overall o) {
  switch (o) {
    case Overall::Ethical: return "ethical";
    case Overall::Unethical: return "unethical";
    case Overall::Indeterminate: return "indeterminate";
  }
  return "?";
}

namespace {

Truth negate(Truth t) {
  switch (t) {
    case Truth::True: return Truth::False;
    case Truth::False: return Truth::True;
    default: return Truth::Unknown;
  }
}

void collect_universalized(const Formula& f, std::set<std::string>& out) {
  if (f.kind() == Formula::Kind::Universalized) out.insert(f.label());
  for (const auto& c : f.children()) collect_universalized(c, out);
}

}  // namespace

ModalEvaluator::ModalEvaluator(const Scenario& s, CheckOptions options)
    : s_(s), options_(options), domain_(scenario_domain(s)) {}

GroundClauseSet ModalEvaluator::instance(const std::optional<std::string>& agent, const Formula& body) const {
  ClauseBuilder b;
  b.add("query", ground(body, domain_));
  std::set<std::string> plans;
  collect_universalized(body, plans);
  for (const auto& id : plans) {
    for (const auto& e : s_.effects) {
      if (e.plan_id != id) continue;
      b.add("effect of universalized " + id,
            ground(Formula::implies(Formula::atom(trigger_atom(id)), e.consequence), domain_));
    }
  }
  if (agent) {
    for (const auto& f : belief_theory(s_, *agent)) b.add("theory of " + *agent, ground(f, domain_));
  } else {
    for (const auto& f : s_.constraints.physical) b.add("physics", ground(f, domain_));
  }
  return std::move(b).build();
}

Truth ModalEvaluator::consistent(const std::optional<std::string>& agent, const Formula& body) {
  SatCall call{(agent ? "B[" + *agent + "]" : std::string()) + "P(" + body.str() + ")", instance(agent, body), {}};
  call.result = solve(call.clauses, options_.solver);
  const auto status = call.result.status;
  calls_.push_back(std::move(call));
  switch (status) {
    case SatStatus::Satisfiable: return Truth::True;
    case SatStatus::Unsatisfiable: return Truth::False;
    default: return Truth::Unknown;
  }
}

Truth ModalEvaluator::decide(const Formula& f) {
  using K = Formula::Kind;
  check_modal_shape(f);
  switch (f.kind()) {
    case K::Not:
      return negate(decide(f.child()));
    case K::And:
    case K::Or: {
      const bool is_and = f.kind() == K::And;
      bool unknown = false;
      for (const auto& c : f.children()) {
        const Truth t = decide(c);
        if (t == Truth::Unknown) unknown = true;
        if (is_and && t == Truth::False) return Truth::False;
        if (!is_and && t == Truth::True) return Truth::True;
      }
      if (unknown) return Truth::Unknown;
      return is_and ? Truth::True : Truth::False;
    }
    case K::Possible:
      return consistent(std::nullopt, f.child());
    case K::Believable:
    case K::Required: {
      const std::string& agent = f.label();
      const Formula& body = f.child();
      if (body.kind() == K::Possible) return consistent(agent, body.child());
      if (body.kind() == K::Not && body.child().kind() == K::Possible) {
        return negate(consistent(agent, body.child().child()));
      }
      // modal-free body: believable = consistent, required = entailed
      if (f.kind() == K::Believable) return consistent(agent, body);
      return negate(consistent(agent, Formula::negation(body)));
    }
    default:
      throw LogicError("formula has no truth value outside a model: " + f.str());
  }
}

namespace {

struct Decided {
  Truth truth;
  SatCall call;
};

// B[a](P(S)), cross-checked against not R[a](not P(S)).
Decided believable_possible(ModalEvaluator& ev, const std::string& agent, const Formula& body, const std::string& query,
                            const CheckOptions& options) {
  const Truth primary = ev.decide(Formula::believable(agent, Formula::possible(body)));
  SatCall call = ev.last_call();
  const Truth dual =
      ev.decide(Formula::negation(Formula::required(agent, Formula::negation(Formula::possible(body)))));
  if (options.trace) options.trace->duality.push_back({query, agent, primary, dual});
  return {primary, std::move(call)};
}

// not R[a](P(S)), cross-checked against B[a](not P(S)).
Decided not_required_possible(ModalEvaluator& ev, const std::string& agent, const Formula& body,
                              const std::string& query, const CheckOptions& options) {
  const Truth primary = ev.decide(Formula::negation(Formula::required(agent, Formula::possible(body))));
  SatCall call = ev.last_call();
  const Truth dual = ev.decide(Formula::believable(agent, Formula::negation(Formula::possible(body))));
  if (options.trace) options.trace->duality.push_back({query, agent, primary, dual});
  return {primary, std::move(call)};
}

std::vector<std::string> witness_lines(const SatCall& call) {
  std::vector<std::string> out;
  std::string line = "witness:";
  for (const auto& a : render_model(call.clauses, *call.result.model)) line += " " + a;
  out.push_back(line);
  return out;
}

std::vector<std::string> conflict_lines(const SatCall& call) {
  std::vector<std::string> out;
  for (auto& l : render_conflict(call.clauses, *call.result.conflict)) out.push_back("conflict: " + l);
  return out;
}

Evidence budget_evidence(const SatCall& call) {
  return {"solver budget exhausted after " + std::to_string(call.result.decisions) + " decisions on " + call.query,
          {},
          std::nullopt};
}

Formula generalization_body(const ActionPlan& p) {
  return Formula::conjunction(
      {Formula::universalized(p.id),
       close_over_objects(p, Formula::conjunction({plan_condition(p), plan_action(p)}))});
}

Formula joint_actions(const ActionPlan& p, const ActionPlan& q) {
  return Formula::conjunction({close_over_objects(p, plan_action(p)), close_over_objects(q, plan_action(q))});
}

Formula joint_reasons(const ActionPlan& p, const ActionPlan& q) {
  return Formula::conjunction({close_over_objects(p, plan_condition(p)), close_over_objects(q, plan_condition(q))});
}

std::string dominator_name(const Scenario& s, const ActionPlan& plan, const CandidateSet& ctx, const SignedAtom& action) {
  for (const auto& q : s.plans) {
    if (q.agent == plan.agent && q.action == action && context_of(s, q) == &ctx) return q.id;
  }
  return action.str();
}

}  // namespace

PrincipleVerdict check_generalization(const ActionPlan& plan, const Scenario& s, const CheckOptions& options) {
  ModalEvaluator ev(s, options);
  auto d = believable_possible(ev, plan.agent, generalization_body(plan), "generalization/" + plan.id, options);
  PrincipleVerdict v{Principle::Generalization, VerdictStatus::Indeterminate, {}};
  switch (d.truth) {
    case Truth::True:
      v.status = VerdictStatus::Pass;
      v.evidence = {plan.agent + " can rationally believe universal adoption of " + plan.id +
                        " is physically possible while its reasons hold and it acts",
                    witness_lines(d.call), std::nullopt};
      break;
    case Truth::False:
      v.status = VerdictStatus::Fail;
      v.evidence = {"universal adoption of " + plan.id + " is inconsistent with " + plan.agent +
                        "'s reasons holding and the action being taken",
                    conflict_lines(d.call), std::nullopt};
      break;
    case Truth::Unknown:
      v.evidence = budget_evidence(d.call);
      break;
  }
  return v;
}

PrincipleVerdict check_utility(const ActionPlan& plan, const Scenario& s, const EligibleSet& eligible) {
  PrincipleVerdict v{Principle::Utility, VerdictStatus::Pass, {}};
  const CandidateSet* ctx = context_of(s, plan);
  if (!ctx) {
    v.evidence.summary = "no alternative actions declared under the reasons of " + plan.id;
    return v;
  }
  const auto own = s.utility(ctx->context, plan.action);
  if (!own) throw ConfigurationError("no utility for " + plan.action.str() + " in context '" + ctx->context + "'");
  v.evidence.details.push_back("u(" + plan.action.str() + ") = " + rational_str(*own));
  std::optional<std::pair<SignedAtom, Rational>> best;
  for (const auto& alt : ctx->actions) {
    if (alt == plan.action || !eligible.count({ctx->context, alt})) continue;
    const auto u = s.utility(ctx->context, alt);
    if (!u) throw ConfigurationError("no utility for " + alt.str() + " in context '" + ctx->context + "'");
    v.evidence.details.push_back("u(" + alt.str() + ") = " + rational_str(*u));
    if (*u > *own && (!best || *u > best->second)) best = {alt, *u};
  }
  if (best) {
    v.status = VerdictStatus::Fail;
    const auto name = dominator_name(s, plan, *ctx, best->first);
    v.evidence.summary = name + " yields greater utility (" + rational_str(best->second) + " > " + rational_str(*own) +
                         ") under the same reasons";
    v.evidence.counterpart = name;
  } else {
    v.evidence.summary = plan.action.str() + " is not outdone on utility by any eligible alternative in " +
                         ctx->context;
  }
  return v;
}

PrincipleVerdict check_autonomy_pair(const ActionPlan& plan, const ActionPlan& other, const Scenario& s,
                                     const CheckOptions& options) {
  if (plan.agent == other.agent) {
    throw LogicError("autonomy is checked between plans of different agents, both " + plan.id + " and " + other.id +
                     " belong to " + plan.agent);
  }
  ModalEvaluator ev(s, options);
  const auto suffix = plan.id + "/" + other.id;
  auto actions = believable_possible(ev, plan.agent, joint_actions(plan, other), "autonomy-actions/" + suffix, options);
  auto reasons = not_required_possible(ev, plan.agent, joint_reasons(plan, other), "autonomy-reasons/" + suffix, options);

  PrincipleVerdict v{Principle::Autonomy, VerdictStatus::Indeterminate, {}};
  v.evidence.counterpart = other.id;
  if (actions.truth == Truth::True) {
    v.status = VerdictStatus::Pass;
    v.evidence.summary = plan.agent + " can rationally believe " + plan.id + " and " + other.id + " act consistently";
    v.evidence.details = witness_lines(actions.call);
  } else if (reasons.truth == Truth::True) {
    v.status = VerdictStatus::Pass;
    v.evidence.summary = "the reasons of " + plan.id + " and " + other.id + " cannot both apply";
    v.evidence.details = conflict_lines(reasons.call);
  } else if (actions.truth == Truth::False && reasons.truth == Truth::False) {
    v.status = VerdictStatus::Fail;
    v.evidence.summary = plan.id + " interferes with " + other.id + ": the actions are inconsistent while both reasons can apply";
    v.evidence.details = conflict_lines(actions.call);
    auto w = witness_lines(reasons.call);
    v.evidence.details.insert(v.evidence.details.end(), w.begin(), w.end());
  } else {
    v.evidence = budget_evidence(actions.truth == Truth::Unknown ? actions.call : reasons.call);
    v.evidence.counterpart = other.id;
  }
  return v;
}

PrincipleVerdict check_autonomy(const ActionPlan& plan, const Scenario& s, const std::set<std::string>& protected_plans,
                                const CheckOptions& options) {
  std::optional<PrincipleVerdict> unknown;
  std::size_t checked = 0;
  for (const auto& other : s.plans) {
    if (other.agent == plan.agent || !protected_plans.count(other.id)) continue;
    ++checked;
    auto v = check_autonomy_pair(plan, other, s, options);
    if (v.status == VerdictStatus::Fail) return v;
    if (v.status == VerdictStatus::Indeterminate && !unknown) unknown = std::move(v);
  }
  if (unknown) return *unknown;
  return {Principle::Autonomy,
          VerdictStatus::Pass,
          {checked ? plan.id + " is consistent with all " + std::to_string(checked) + " ethical plan(s) of other agents"
                   : "no ethical plans of other agents to interfere with",
           {},
           std::nullopt}};
}

const PrincipleVerdict* PlanVerdict::deciding() const {
  for (const auto& v : verdicts) {
    if (v.status == VerdictStatus::Fail) return &v;
  }
  for (const auto& v : verdicts) {
    if (v.status == VerdictStatus::Indeterminate) return &v;
  }
  return nullptr;
}

const PlanVerdict* VerdictSet::find(const std::string& plan) const {
  for (const auto& p : plans) {
    if (p.plan == plan) return &p;
  }
  return nullptr;
}

namespace {

Overall overall_of(const std::vector<PrincipleVerdict>& vs) {
  bool unknown = false;
  for (const auto& v : vs) {
    if (v.status == VerdictStatus::Fail) return Overall::Unethical;
    if (v.status == VerdictStatus::Indeterminate) unknown = true;
  }
  return unknown ? Overall::Indeterminate : Overall::Ethical;
}

Overall overall_of(const std::array<VerdictStatus, 3>& st) {
  if (std::find(st.begin(), st.end(), VerdictStatus::Fail) != st.end()) return Overall::Unethical;
  if (std::find(st.begin(), st.end(), VerdictStatus::Indeterminate) != st.end()) return Overall::Indeterminate;
  return Overall::Ethical;
}

class FixpointEngine {
public:
  FixpointEngine(const Scenario& s, const CheckOptions& options) : s_(s), options_(options) {}

  VerdictSet run() {
    VerdictSet out;
    out.scenario = s_.name;
    RoundStatus start;
    for (const auto& p : s_.plans) start[p.id] = {VerdictStatus::Pass, VerdictStatus::Pass, VerdictStatus::Pass};
    out.history.push_back(start);

    const std::size_t max_rounds = s_.plans.size() + 1;
    std::vector<PlanVerdict> current;
    bool converged = false;
    while (out.iterations < max_rounds) {
      const RoundStatus& prev = out.history.back();
      current = round(prev);
      ++out.iterations;
      RoundStatus now;
      for (const auto& pv : current) {
        now[pv.plan] = {pv.verdicts[0].status, pv.verdicts[1].status, pv.verdicts[2].status};
      }
      converged = now == prev;
      out.history.push_back(std::move(now));
      if (converged) break;
    }
    out.stable = converged;
    if (!converged) {
      const auto& last = out.history[out.history.size() - 1];
      const auto& before = out.history[out.history.size() - 2];
      for (auto& pv : current) {
        const auto& now = last.at(pv.plan);
        const auto& then = before.at(pv.plan);
        if (now == then) continue;
        for (std::size_t i = 0; i < now.size(); ++i) {
          if (now[i] == then[i]) continue;
          auto& v = pv.verdicts[i];
          v.evidence.details.insert(v.evidence.details.begin(), "last round: " + std::string(to_string(now[i])) + " - " +
                                                                    v.evidence.summary);
          v.evidence.summary = std::string("oscillates between ") + to_string(then[i]) + " and " + to_string(now[i]) +
                               " without settling";
          v.status = VerdictStatus::Indeterminate;
        }
        pv.overall = Overall::Indeterminate;
      }
    }
    out.plans = std::move(current);
    return out;
  }

private:
  std::vector<PlanVerdict> round(const RoundStatus& prev) {
    std::set<std::string> protected_plans;
    for (const auto& [id, st] : prev) {
      if (overall_of(st) != Overall::Unethical) protected_plans.insert(id);
    }
    std::vector<PlanVerdict> out;
    for (const auto& p : s_.plans) {
      PlanVerdict pv{p.id, p.agent, {}, Overall::Ethical};
      pv.verdicts.push_back(check_generalization(p, s_, options_));
      pv.verdicts.push_back(check_utility(p, s_, eligible_for(p, prev, protected_plans)));
      pv.verdicts.push_back(check_autonomy(p, s_, protected_plans, options_));
      pv.overall = overall_of(pv.verdicts);
      out.push_back(std::move(pv));
    }
    return out;
  }

  // E(C, A'): available (listed), generalizable and autonomy-respecting as of
  // the previous round. Undecided counts as eligible.
  EligibleSet eligible_for(const ActionPlan& p, const RoundStatus& prev, const std::set<std::string>& protected_plans) {
    EligibleSet out;
    const CandidateSet* ctx = context_of(s_, p);
    if (!ctx) return out;
    for (const auto& alt : ctx->actions) {
      const ActionPlan* declared = nullptr;
      for (const auto& q : s_.plans) {
        if (q.agent == p.agent && q.action == alt && context_of(s_, q) == ctx) {
          declared = &q;
          break;
        }
      }
      bool ok;
      if (declared) {
        const auto& st = prev.at(declared->id);
        ok = st[0] != VerdictStatus::Fail && st[2] != VerdictStatus::Fail;
      } else {
        ok = hypothetical_eligible(p.agent, *ctx, alt, protected_plans);
      }
      if (ok) out.insert({ctx->context, alt});
    }
    return out;
  }

  bool hypothetical_eligible(const std::string& agent, const CandidateSet& ctx, const SignedAtom& action,
                             const std::set<std::string>& protected_plans) {
    Scenario with = s_;
    ActionPlan h{ctx.context + "/" + action.str(), agent, ctx.condition, action, {}};
    with.plans.push_back(h);
    if (check_generalization(h, with, options_).status == VerdictStatus::Fail) return false;
    return check_autonomy(h, with, protected_plans, options_).status != VerdictStatus::Fail;
  }

  const Scenario& s_;
  const CheckOptions& options_;
};

}  // namespace

VerdictSet evaluate(const Scenario& s, const CheckOptions& options) { return FixpointEngine(s, options).run(); }

std::vector<std::string> query_ids(const Scenario& s) {
  std::vector<std::string> out;
  for (const auto& p : s.plans) out.push_back("generalization/" + p.id);
  for (const auto& p : s.plans) {
    for (const auto& q : s.plans) {
      if (p.agent == q.agent) continue;
      out.push_back("autonomy-actions/" + p.id + "/" + q.id);
      out.push_back("autonomy-reasons/" + p.id + "/" + q.id);
    }
  }
  return out;
}

GroundClauseSet query_clauses(const Scenario& s, const std::string& id) {
  auto plan = [&](const std::string& pid) -> const ActionPlan& {
    const auto* p = s.find_plan(pid);
    if (!p) throw ScenarioError("unknown plan '" + pid + "' in query id '" + id + "'");
    return *p;
  };
  const auto slash = id.find('/');
  if (slash == std::string::npos) throw ScenarioError("malformed query id '" + id + "'");
  const auto kind = id.substr(0, slash);
  const auto rest = id.substr(slash + 1);
  ModalEvaluator ev(s, {});
  if (kind == "generalization") {
    const auto& p = plan(rest);
    return ev.instance(p.agent, generalization_body(p));
  }
  if (kind == "autonomy-actions" || kind == "autonomy-reasons") {
    const auto second = rest.find('/');
    if (second == std::string::npos) throw ScenarioError("malformed query id '" + id + "'");
    const auto& p = plan(rest.substr(0, second));
    const auto& q = plan(rest.substr(second + 1));
    if (p.agent == q.agent) throw ScenarioError("plans in '" + id + "' belong to the same agent");
    return ev.instance(p.agent, kind == "autonomy-actions" ? joint_actions(p, q) : joint_reasons(p, q));
  }
  throw ScenarioError("unknown query kind '" + kind + "'");
}

}  // namespace deon
