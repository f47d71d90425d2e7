// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "deon/cli.hpp"
#include "deon/dsl.hpp"
#include "deon/principles.hpp"
#include "deon/sat.hpp"
#include "support/oracle.hpp"
#include "support/scenarios.hpp"

using namespace deon;
using deon::testing::load;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances.
constexpr double kTheftSeconds = 1.0;
constexpr int kSatCases = 10'000;
constexpr int kSatMaxAtoms = 12;
constexpr double kSatSeconds = 60.0;
constexpr int kFuzzCases = 100'000;
constexpr double kFuzzCaseSeconds = 1.0;  // any single input slower than this counts as a hang
constexpr std::size_t kPedestrianMaxRounds = 2;
constexpr int kShuffles = 20;

struct Outcome {
  bool pass;
  std::string detail;
};

// Every modal query of criteria 1-5 lands here.
EvaluationTrace g_trace;

CheckOptions traced() {
  CheckOptions o;
  o.trace = &g_trace;
  return o;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const PrincipleVerdict& verdict(const VerdictSet& v, const std::string& plan, Principle p) {
  return v.find(plan)->verdicts[static_cast<std::size_t>(p)];
}

Outcome theft() {
  const auto t0 = Clock::now();
  auto s = load("theft");
  auto v = evaluate(s, traced());
  const double dt = seconds_since(t0);
  const auto& g = verdict(v, "steal", Principle::Generalization);
  const bool ok = g.status == VerdictStatus::Fail && v.find("steal")->overall == Overall::Unethical &&
                  v.find("steal")->deciding()->principle == Principle::Generalization;
  std::ostringstream os;
  os << "steal generalization=" << to_string(g.status) << ", " << dt << " s (limit " << kTheftSeconds << " s)";
  return {ok && dt < kTheftSeconds, os.str()};
}

Outcome ambulance() {
  auto s = load("ambulance");
  auto v = evaluate(s, traced());
  const auto with = verdict(v, "siren", Principle::Generalization).status;
  s.effects.clear();
  auto counter = evaluate(s, traced());
  const auto without = verdict(counter, "siren", Principle::Generalization).status;
  return {with == VerdictStatus::Fail && without == VerdictStatus::Pass,
          std::string("siren generalization=") + to_string(with) + ", without effect=" + to_string(without)};
}

Outcome merge() {
  auto s = load("merge");
  auto v = evaluate(s, traced());
  const auto& u = verdict(v, "merge", Principle::Utility);
  auto& e = s.utilities.front().entries;
  std::swap(e[0].value, e[1].value);
  auto swapped = evaluate(s, traced());
  const auto after = verdict(swapped, "merge", Principle::Utility).status;
  const bool ok = u.status == VerdictStatus::Fail && u.evidence.counterpart == std::optional<std::string>("wait_for_gap") &&
                  after == VerdictStatus::Pass &&
                  verdict(swapped, "wait_for_gap", Principle::Utility).status == VerdictStatus::Fail;
  return {ok, std::string("merge utility=") + to_string(u.status) + " dominated by " + u.evidence.counterpart.value_or("-") +
                  ", swapped=" + to_string(after)};
}

Outcome bus() {
  auto s = load("bus");
  auto v = evaluate(s, traced());
  auto pair = check_autonomy_pair(*s.find_plan("pull"), *s.find_plan("cross"), s, traced());
  const bool second_disjunct = pair.evidence.summary.find("cannot both apply") != std::string::npos;
  const auto& a = verdict(v, "pull", Principle::Autonomy);
  return {a.status == VerdictStatus::Pass && pair.status == VerdictStatus::Pass && second_disjunct,
          std::string("pull autonomy=") + to_string(a.status) + " (" + pair.evidence.summary + ")"};
}

Outcome pedestrian() {
  auto v = evaluate(load("pedestrian"), traced());
  const auto* brake = v.find("brake");
  const auto* no_brake = v.find("no_brake");
  const auto& aut = verdict(v, "no_brake", Principle::Autonomy);
  const bool ok = brake->overall == Overall::Ethical && no_brake->overall == Overall::Unethical &&
                  aut.status == VerdictStatus::Fail && aut.evidence.counterpart == std::optional<std::string>("cross") &&
                  v.stable && v.iterations <= kPedestrianMaxRounds;
  std::ostringstream os;
  os << "brake=" << to_string(brake->overall) << ", no_brake=" << to_string(no_brake->overall) << " (autonomy vs "
     << aut.evidence.counterpart.value_or("-") << "), " << v.iterations << " rounds, " << (v.stable ? "stable" : "unstable");
  return {ok, os.str()};
}

Outcome sat_oracle() {
  std::mt19937 rng(20240601);
  const auto t0 = Clock::now();
  int disagreements = 0, bad_witness = 0, bad_conflict = 0, unsat = 0;
  for (int i = 0; i < kSatCases; ++i) {
    auto cs = testing::random_clause_set(rng, kSatMaxAtoms, 48, 3);
    const auto r = solve(cs);
    const auto oracle = brute_force(cs);
    if (r.status != oracle.status) ++disagreements;
    if (r.satisfiable() && !r.model->satisfies(cs)) ++bad_witness;
    if (r.unsatisfiable()) {
      ++unsat;
      if (!brute_force(restrict_to(cs, *r.conflict)).unsatisfiable()) ++bad_conflict;
    }
  }
  const double dt = seconds_since(t0);
  std::ostringstream os;
  os << kSatCases << " sets (" << unsat << " unsat), " << disagreements << " disagreements, " << bad_witness
     << " bad witnesses, " << bad_conflict << " bad conflicts, " << dt << " s (limit " << kSatSeconds << " s)";
  return {disagreements == 0 && bad_witness == 0 && bad_conflict == 0 && dt < kSatSeconds, os.str()};
}

Outcome duality() {
  std::size_t mismatches = 0, undecided = 0;
  for (const auto& d : g_trace.duality) {
    if (d.primary != d.dual) ++mismatches;
    if (d.primary == Truth::Unknown) ++undecided;
  }
  std::ostringstream os;
  os << g_trace.duality.size() << " modal queries, " << mismatches << " mismatches, " << undecided << " undecided";
  return {!g_trace.duality.empty() && mismatches == 0 && undecided == 0, os.str()};
}

std::string mutate(std::mt19937& rng, std::string text) {
  static const std::vector<std::string> tokens{"scenario", "agents", "objects", "predicates", "plan", "agent", "forall",
                                               "object", "reasons", "action", "physics", "belief", "on_universalized",
                                               "utility", "candidates", "given", "not", "and", "or", "->", "{", "}",
                                               "(", ")", ",", ";", ":", "=", "/", ".", "1/0", "-7.5", "x", "a"};
  auto pos = [&] { return std::uniform_int_distribution<std::size_t>(0, text.empty() ? 0 : text.size() - 1)(rng); };
  const int edits = std::uniform_int_distribution<int>(1, 6)(rng);
  for (int k = 0; k < edits; ++k) {
    switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
      case 0:
        if (!text.empty()) text[pos()] = static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng));
        break;
      case 1:
        if (!text.empty()) text.erase(pos(), std::uniform_int_distribution<std::size_t>(1, 20)(rng));
        break;
      case 2:
        text.insert(pos(), " " + tokens[std::uniform_int_distribution<std::size_t>(0, tokens.size() - 1)(rng)] + " ");
        break;
      case 3: {
        const auto a = pos();
        const auto len = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
        text.insert(pos(), text.substr(a, len));
        break;
      }
      default:
        text.resize(pos());
        break;
    }
  }
  return text;
}

Outcome parser_robustness() {
  std::mt19937 rng(77);
  std::vector<std::string> seeds;
  for (const auto& n : testing::golden_names()) seeds.push_back(testing::scenario_text(n));
  int crashes = 0, hangs = 0, accepted = 0, reprint = 0;
  double slowest = 0;
  for (int i = 0; i < kFuzzCases; ++i) {
    std::string input;
    if (i % 4 == 0) {
      const auto len = std::uniform_int_distribution<int>(0, 512)(rng);
      for (int k = 0; k < len; ++k) input += static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng));
    } else {
      input = mutate(rng, seeds[static_cast<std::size_t>(i) % seeds.size()]);
    }
    const auto t0 = Clock::now();
    try {
      auto r = parse_scenario(input);
      if (r.ok()) {
        ++accepted;
        // anything accepted must also print and re-parse
        auto again = parse_scenario(print_scenario(*r.scenario));
        if (!again.ok() || !(*again.scenario == *r.scenario)) ++reprint;
      }
    } catch (...) {
      ++crashes;
    }
    const double dt = seconds_since(t0);
    slowest = std::max(slowest, dt);
    if (dt > kFuzzCaseSeconds) ++hangs;
  }
  // oversized input is cut off by the size limit rather than parsed
  std::string huge(std::size_t{4} << 20, '(');
  const auto t0 = Clock::now();
  auto big = parse_scenario(huge);
  const bool limited = !big.ok() && big.diagnostics.front().code == diag::kLimit && seconds_since(t0) < kFuzzCaseSeconds;

  int round_trip_failures = 0;
  for (const auto& n : testing::golden_names()) {
    auto s = load(n);
    auto again = parse_scenario(print_scenario(s));
    if (!again.ok() || !(*again.scenario == s) || print_scenario(*again.scenario) != print_scenario(s)) ++round_trip_failures;
  }
  std::ostringstream os;
  os << kFuzzCases << " inputs (" << accepted << " accepted), " << crashes << " crashes, " << hangs
     << " hangs, " << reprint << " accepted inputs not reprintable, slowest " << slowest << " s, size limit " << (limited ? "enforced" : "NOT enforced") << ", "
     << round_trip_failures << "/5 round-trip failures";
  return {crashes == 0 && hangs == 0 && reprint == 0 && limited && round_trip_failures == 0, os.str()};
}

std::string golden_suite_output() {
  cli::RunConfig config;
  config.mode = cli::OutputMode::Structured;
  config.command = cli::Command::Explain;
  for (const auto& n : testing::golden_names()) config.inputs.push_back(testing::scenario_path(n));
  std::ostringstream out, err;
  cli::run_all(config, out, err);
  return out.str() + err.str();
}

Outcome determinism() {
  const auto first = golden_suite_output();
  const auto second = golden_suite_output();
  std::mt19937 rng(9);
  int changed = 0;
  for (const auto& n : testing::golden_names()) {
    auto s = load(n);
    const auto base = evaluate(s);
    for (int k = 0; k < kShuffles; ++k) {
      std::shuffle(s.plans.begin(), s.plans.end(), rng);
      const auto v = evaluate(s);
      for (const auto& p : base.plans) {
        const auto* q = v.find(p.plan);
        bool same = q && q->overall == p.overall;
        for (std::size_t i = 0; same && i < 3; ++i) same = q->verdicts[i].status == p.verdicts[i].status;
        if (!same) ++changed;
      }
    }
  }
  std::ostringstream os;
  os << "structured output " << first.size() << " bytes, " << (first == second ? "identical" : "DIFFERENT")
     << " across runs; " << changed << " status changes over " << kShuffles << " shuffles per scenario";
  return {!first.empty() && first == second && changed == 0, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"theft plan fails generalization", theft},
      {"ambulance plan fails generalization, passes without effect", ambulance},
      {"merge fails utility against wait_for_gap, flips on swap", merge},
      {"bus pull passes autonomy via contradictory reasons", bus},
      {"pedestrian brake ethical, no_brake fails autonomy", pedestrian},
      {"solver agrees with brute force", sat_oracle},
      {"modal duality on every query of criteria 1-5", duality},
      {"parser fuzzing and round-trip", parser_robustness},
      {"deterministic output and plan-order independence", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << (i + 1) << ": " << criteria[i].first << " | " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
