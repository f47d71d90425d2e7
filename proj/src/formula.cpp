#include "deon/formula.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace deon {

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_variable(); });
}

std::string Atom::str() const {
  if (args.empty()) return predicate;
  std::string out = predicate + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += args[i].name;
  }
  return out + ")";
}

Formula Formula::make(Node n) {
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::atom(Atom a) {
  return make({Kind::Atom, std::move(a), {}, {}, {}});
}

Formula Formula::negation(Formula f) {
  return make({Kind::Not, {}, {}, {}, {std::move(f)}});
}

Formula Formula::conjunction(std::vector<Formula> fs) {
  if (fs.size() == 1) return std::move(fs.front());
  return make({Kind::And, {}, {}, {}, std::move(fs)});
}

Formula Formula::disjunction(std::vector<Formula> fs) {
  if (fs.size() == 1) return std::move(fs.front());
  return make({Kind::Or, {}, {}, {}, std::move(fs)});
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  return make({Kind::Implies, {}, {}, {}, {std::move(lhs), std::move(rhs)}});
}

Formula Formula::forall(Term variable, Formula body) {
  if (!variable.is_variable()) throw LogicError("forall must bind a variable, got constant '" + variable.name + "'");
  return make({Kind::ForAll, {}, std::move(variable), {}, {std::move(body)}});
}

Formula Formula::possible(Formula f) {
  return make({Kind::Possible, {}, {}, {}, {std::move(f)}});
}

Formula Formula::believable(std::string agent, Formula f) {
  return make({Kind::Believable, {}, {}, std::move(agent), {std::move(f)}});
}

Formula Formula::required(std::string agent, Formula f) {
  return make({Kind::Required, {}, {}, std::move(agent), {std::move(f)}});
}

Formula Formula::universalized(std::string plan_id) {
  return make({Kind::Universalized, {}, {}, std::move(plan_id), {}});
}

const Atom& Formula::as_atom() const {
  if (kind() != Kind::Atom) throw LogicError("formula is not an atom");
  return node_->atom;
}

const Term& Formula::variable() const {
  if (kind() != Kind::ForAll) throw LogicError("formula is not a quantifier");
  return node_->variable;
}

bool Formula::is_modal() const {
  switch (kind()) {
    case Kind::Possible:
    case Kind::Believable:
    case Kind::Required:
    case Kind::Universalized:
      return true;
    default:
      return false;
  }
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.atom == y.atom && x.variable == y.variable && x.label == y.label &&
         x.children == y.children;
}

namespace {

int precedence(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::ForAll: return 0;
    case K::Implies: return 1;
    case K::Or: return f.children().empty() ? 5 : 2;
    case K::And: return f.children().empty() ? 5 : 3;
    case K::Not: return 4;
    default: return 5;
  }
}

void print(std::ostream& os, const Formula& f, int min_prec) {
  using K = Formula::Kind;
  const bool parens = precedence(f) < min_prec;
  if (parens) os << '(';
  switch (f.kind()) {
    case K::Atom:
      os << f.as_atom().str();
      break;
    case K::Not:
      os << "not ";
      print(os, f.child(), 4);
      break;
    case K::And:
    case K::Or: {
      if (f.children().empty()) {
        os << (f.kind() == K::And ? "true" : "false");
        break;
      }
      const char* op = f.kind() == K::And ? " and " : " or ";
      const int child_prec = f.kind() == K::And ? 4 : 3;
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) os << op;
        print(os, f.children()[i], child_prec);
      }
      break;
    }
    case K::Implies:
      print(os, f.child(0), 2);
      os << " -> ";
      print(os, f.child(1), 1);
      break;
    case K::ForAll:
      os << "forall " << (f.variable().kind == TermKind::ObjectVariable ? "object " : "")
         << f.variable().name << ". ";
      print(os, f.child(), 0);
      break;
    case K::Possible:
      os << "P(";
      print(os, f.child(), 0);
      os << ')';
      break;
    case K::Believable:
    case K::Required:
      os << (f.kind() == K::Believable ? "B[" : "R[") << f.label() << "](";
      print(os, f.child(), 0);
      os << ')';
      break;
    case K::Universalized:
      os << "universalized(" << f.label() << ')';
      break;
  }
  if (parens) os << ')';
}

Term bind_term(const Term& t, const Binding& binding) {
  if (!t.is_variable()) return t;
  auto it = binding.find(t.name);
  if (it == binding.end()) return t;
  const Term& value = it->second;
  if (value.is_variable()) throw LogicError("variable '" + t.name + "' bound to non-constant '" + value.name + "'");
  if (t.is_agent_kind() != value.is_agent_kind()) {
    throw LogicError("variable '" + t.name + "' of " + (t.is_agent_kind() ? "agent" : "object") +
                     " sort bound to " + (value.is_agent_kind() ? "agent" : "object") + " constant '" +
                     value.name + "'");
  }
  return value;
}

Formula rebuild(const Formula& f, std::vector<Formula> kids) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Not: return Formula::negation(std::move(kids.at(0)));
    case K::And: return Formula::conjunction(std::move(kids));
    case K::Or: return Formula::disjunction(std::move(kids));
    case K::Implies: return Formula::implies(std::move(kids.at(0)), std::move(kids.at(1)));
    case K::ForAll: return Formula::forall(f.variable(), std::move(kids.at(0)));
    case K::Possible: return Formula::possible(std::move(kids.at(0)));
    case K::Believable: return Formula::believable(f.label(), std::move(kids.at(0)));
    case K::Required: return Formula::required(f.label(), std::move(kids.at(0)));
    default: return f;
  }
}

Formula substitute_impl(const Formula& f, const Binding& binding) {
  if (binding.empty()) return f;
  if (f.kind() == Formula::Kind::Atom) {
    Atom a = f.as_atom();
    for (auto& t : a.args) t = bind_term(t, binding);
    return Formula::atom(std::move(a));
  }
  if (f.kind() == Formula::Kind::ForAll && binding.count(f.variable().name)) {
    Binding inner = binding;
    inner.erase(f.variable().name);
    return Formula::forall(f.variable(), substitute_impl(f.child(), inner));
  }
  std::vector<Formula> kids;
  kids.reserve(f.children().size());
  for (const auto& c : f.children()) kids.push_back(substitute_impl(c, binding));
  return rebuild(f, std::move(kids));
}

void collect_free(const Formula& f, std::vector<std::string>& bound, std::vector<Term>& out) {
  if (f.kind() == Formula::Kind::Atom) {
    for (const auto& t : f.as_atom().args) {
      if (!t.is_variable()) continue;
      if (std::find(bound.begin(), bound.end(), t.name) != bound.end()) continue;
      if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    }
    return;
  }
  if (f.kind() == Formula::Kind::ForAll) {
    bound.push_back(f.variable().name);
    collect_free(f.child(), bound, out);
    bound.pop_back();
    return;
  }
  for (const auto& c : f.children()) collect_free(c, bound, out);
}

std::vector<Term> ordered_free_vars(const Formula& f) {
  std::vector<std::string> bound;
  std::vector<Term> out;
  collect_free(f, bound, out);
  return out;
}

enum class ModalContext { Top, AgentBody, InsidePossible, ModalFree };

void check_shape(const Formula& f, ModalContext ctx) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Possible:
      if (ctx == ModalContext::InsidePossible || ctx == ModalContext::ModalFree)
        throw LogicError("nested modal operator: " + f.str());
      check_shape(f.child(), ModalContext::InsidePossible);
      return;
    case K::Believable:
    case K::Required:
      if (ctx != ModalContext::Top) throw LogicError("nested modal operator: " + f.str());
      check_shape(f.child(), ModalContext::AgentBody);
      return;
    case K::Universalized:
      if (ctx != ModalContext::InsidePossible)
        throw LogicError("universalized plan outside P(.): " + f.str());
      return;
    case K::Not:
      if (ctx == ModalContext::AgentBody && f.child().kind() == K::Possible) {
        check_shape(f.child(), ModalContext::AgentBody);
        return;
      }
      break;
    default:
      break;
  }
  const ModalContext inner = ctx == ModalContext::AgentBody ? ModalContext::ModalFree : ctx;
  for (const auto& c : f.children()) check_shape(c, inner);
}

struct Grounder {
  const Domain& domain;

  static void append_flat(std::vector<Formula>& out, Formula f, Formula::Kind kind) {
    if (f.kind() == kind) {
      for (const auto& c : f.children()) out.push_back(c);
    } else {
      out.push_back(std::move(f));
    }
  }

  Formula expand(const Formula& f, const Binding& env) const {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Atom: {
        Atom a = f.as_atom();
        for (auto& t : a.args) {
          t = bind_term(t, env);
          if (t.is_variable()) throw LogicError("unbound variable '" + t.name + "' in " + f.str());
        }
        return Formula::atom(std::move(a));
      }
      case K::And:
      case K::Or: {
        std::vector<Formula> kids;
        for (const auto& c : f.children()) append_flat(kids, expand(c, env), f.kind());
        return f.kind() == K::And ? Formula::conjunction(std::move(kids)) : Formula::disjunction(std::move(kids));
      }
      case K::ForAll: {
        const Term& v = f.variable();
        const auto& values = v.kind == TermKind::AgentVariable ? domain.agents : domain.objects;
        if (values.empty()) {
          throw LogicError(std::string("empty ") + (v.kind == TermKind::AgentVariable ? "agent" : "object") +
                           " domain for variable '" + v.name + "'");
        }
        std::vector<Formula> kids;
        for (const auto& value : values) {
          Binding inner = env;
          inner[v.name] = v.kind == TermKind::AgentVariable ? Term::agent(value) : Term::object(value);
          append_flat(kids, expand(f.child(), inner), K::And);
        }
        return Formula::conjunction(std::move(kids));
      }
      case K::Universalized: {
        auto it = domain.adoptions.find(f.label());
        if (it == domain.adoptions.end()) throw LogicError("no adoption formula for plan '" + f.label() + "'");
        std::vector<Formula> kids;
        append_flat(kids, expand(it->second, env), K::And);
        kids.push_back(Formula::atom(trigger_atom(f.label())));
        return Formula::conjunction(std::move(kids));
      }
      default: {
        std::vector<Formula> kids;
        for (const auto& c : f.children()) kids.push_back(expand(c, env));
        return rebuild(f, std::move(kids));
      }
    }
  }
};

}  // namespace

std::string Formula::str() const {
  std::ostringstream os;
  print(os, *this, 0);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << f.str(); }

Formula substitute(const Formula& f, const Binding& binding) {
  for (const auto& [name, value] : binding) {
    if (value.is_variable()) throw LogicError("variable '" + name + "' bound to non-constant '" + value.name + "'");
  }
  return substitute_impl(f, binding);
}

std::set<Term> free_vars(const Formula& f) {
  auto ordered = ordered_free_vars(f);
  return {ordered.begin(), ordered.end()};
}

bool contains_modal(const Formula& f) {
  if (f.is_modal()) return true;
  return std::any_of(f.children().begin(), f.children().end(), [](const Formula& c) { return contains_modal(c); });
}

void check_modal_shape(const Formula& f) { check_shape(f, ModalContext::Top); }

std::string trigger_predicate(const std::string& plan_id) { return "U_" + plan_id; }

Atom trigger_atom(const std::string& plan_id) { return Atom{trigger_predicate(plan_id), {}}; }

Formula ground(const Formula& f, const Domain& domain) {
  Formula closed = f;
  auto fv = ordered_free_vars(f);
  for (auto it = fv.rbegin(); it != fv.rend(); ++it) closed = Formula::forall(*it, closed);
  return Grounder{domain}.expand(closed, {});
}

}  // namespace deon
