#include "deon/clauses.hpp"

#include <sstream>

namespace deon {

namespace {

void flatten_conjuncts(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == Formula::Kind::And) {
    for (const auto& c : f.children()) flatten_conjuncts(c, out);
  } else {
    out.push_back(f);
  }
}

}  // namespace

std::size_t GroundClauseSet::find_atom(const std::string& name) const {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!atoms[i].auxiliary && atoms[i].name == name) return i;
  }
  return npos;
}

std::string GroundClauseSet::literal_str(Literal l) const {
  const auto& name = atoms.at(literal_atom(l)).name;
  return literal_sign(l) ? name : "not " + name;
}

std::string GroundClauseSet::dimacs() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    os << "c " << (i + 1) << ' ' << atoms[i].name << '\n';
  }
  os << "p cnf " << atoms.size() << ' ' << clauses.size() << '\n';
  for (const auto& c : clauses) {
    for (Literal l : c) os << l << ' ';
    os << "0\n";
  }
  return os.str();
}

ClauseBuilder& ClauseBuilder::add(const std::string& label, const Formula& f) {
  if (contains_modal(f)) throw LogicError("modal node in clause conversion: " + f.str());
  std::vector<Formula> conjuncts;
  flatten_conjuncts(f, conjuncts);
  for (const auto& c : conjuncts) {
    current_origin_ = set_.origins.size();
    set_.origins.push_back({label, c});
    switch (c.kind()) {
      case Formula::Kind::Or: {
        Clause clause;
        for (const auto& d : c.children()) clause.push_back(encode(d));
        if (clause.empty()) {
          // false: a contradictory pair on a fresh atom keeps every clause nonempty
          Literal t = fresh();
          add_clause({t});
          add_clause({-t});
        } else {
          add_clause(std::move(clause));
        }
        break;
      }
      case Formula::Kind::Implies:
        add_clause({-encode(c.child(0)), encode(c.child(1))});
        break;
      default:
        add_clause({encode(c)});
        break;
    }
  }
  return *this;
}

std::size_t ClauseBuilder::intern(const Atom& a) {
  if (!a.is_ground()) throw LogicError("non-ground atom in clause conversion: " + a.str());
  auto name = a.str();
  auto [it, inserted] = index_.emplace(name, set_.atoms.size());
  if (inserted) set_.atoms.push_back({name, false});
  return it->second;
}

Literal ClauseBuilder::fresh() {
  set_.atoms.push_back({"$t" + std::to_string(aux_counter_++), true});
  return static_cast<Literal>(set_.atoms.size());
}

void ClauseBuilder::add_clause(Clause c) {
  set_.clauses.push_back(std::move(c));
  set_.clause_origin.push_back(current_origin_);
}

Literal ClauseBuilder::encode(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
      return static_cast<Literal>(intern(f.as_atom()) + 1);
    case K::Not:
      return -encode(f.child());
    case K::And: {
      std::vector<Literal> kids;
      for (const auto& c : f.children()) kids.push_back(encode(c));
      Literal t = fresh();
      // t <-> (k1 and ... and kn)
      Clause back{t};
      for (Literal k : kids) {
        add_clause({-t, k});
        back.push_back(-k);
      }
      add_clause(std::move(back));
      return t;
    }
    case K::Or: {
      std::vector<Literal> kids;
      for (const auto& c : f.children()) kids.push_back(encode(c));
      Literal t = fresh();
      Clause forward{-t};
      for (Literal k : kids) {
        add_clause({t, -k});
        forward.push_back(k);
      }
      add_clause(std::move(forward));
      return t;
    }
    case K::Implies: {
      Literal a = encode(f.child(0));
      Literal b = encode(f.child(1));
      Literal t = fresh();
      add_clause({-t, -a, b});
      add_clause({t, a});
      add_clause({t, -b});
      return t;
    }
    case K::ForAll:
      throw LogicError("quantifier in clause conversion (ground first): " + f.str());
    default:
      throw LogicError("modal node in clause conversion: " + f.str());
  }
}

GroundClauseSet ClauseBuilder::build() && { return std::move(set_); }

GroundClauseSet to_clauses(const Formula& f) {
  ClauseBuilder b;
  b.add("formula", f);
  return std::move(b).build();
}

}  // namespace deon
