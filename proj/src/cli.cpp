#include "deon/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace deon::cli {

namespace {

using json = nlohmann::json;

json evidence_json(const Evidence& e) {
  json j;
  j["summary"] = e.summary;
  j["details"] = e.details;
  j["counterpart"] = e.counterpart ? json(*e.counterpart) : json(nullptr);
  return j;
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string diagnostics_text(const std::vector<ParseDiagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) out += d.str() + "\n";
  return out;
}

json diagnostics_json(const std::string& name, const std::vector<ParseDiagnostic>& ds) {
  json list = json::array();
  for (const auto& d : ds) {
    list.push_back({{"code", d.code},
                    {"column", d.span.column},
                    {"expected", d.expected},
                    {"length", d.span.length},
                    {"line", d.span.line},
                    {"message", d.message},
                    {"severity", d.severity == Severity::Error ? "error" : "warning"}});
  }
  return {{"file", name}, {"diagnostics", list}};
}

int combine(int a, int b) {
  auto rank = [](int code) {
    switch (code) {
      case exit_code::kUsage: return 5;
      case exit_code::kInvalid: return 4;
      case exit_code::kUnethical: return 3;
      case exit_code::kIndeterminate: return 2;
      default: return 1;
    }
  };
  return rank(a) >= rank(b) ? a : b;
}

}  // namespace

std::string render_structured(const VerdictSet& v) {
  json plans = json::array();
  for (const auto& p : v.plans) {
    json verdicts = json::array();
    for (const auto& pv : p.verdicts) {
      verdicts.push_back({{"principle", to_string(pv.principle)},
                          {"status", to_string(pv.status)},
                          {"evidence", evidence_json(pv.evidence)}});
    }
    const auto* d = p.deciding();
    plans.push_back({{"plan", p.plan},
                     {"agent", p.agent},
                     {"overall", to_string(p.overall)},
                     {"principle", d ? json(to_string(d->principle)) : json(nullptr)},
                     {"status", d ? to_string(d->status) : to_string(VerdictStatus::Pass)},
                     {"evidence", d ? evidence_json(d->evidence) : json(nullptr)},
                     {"verdicts", verdicts}});
  }
  json doc{{"scenario", v.scenario}, {"plans", plans}, {"iterations", v.iterations}, {"stable", v.stable}};
  return doc.dump(2) + "\n";
}

std::string render_human(const VerdictSet& v, bool explain) {
  std::ostringstream os;
  os << "scenario " << v.scenario << ": " << v.iterations << " round" << (v.iterations == 1 ? "" : "s") << ", "
     << (v.stable ? "stable" : "not stable") << '\n';
  for (const auto& p : v.plans) {
    os << "  " << p.plan << ": " << upper(to_string(p.overall));
    std::vector<std::string> named;
    for (const auto& pv : p.verdicts) {
      const bool relevant = p.overall == Overall::Unethical ? pv.status == VerdictStatus::Fail
                                                             : pv.status == VerdictStatus::Indeterminate;
      if (relevant) named.emplace_back(to_string(pv.principle));
    }
    if (!named.empty()) {
      os << " (";
      for (std::size_t i = 0; i < named.size(); ++i) os << (i ? ", " : "") << named[i];
      os << ')';
    }
    os << '\n';
    if (!explain) continue;
    for (const auto& pv : p.verdicts) {
      os << "    " << to_string(pv.principle) << ": " << to_string(pv.status) << " - " << pv.evidence.summary << '\n';
      for (const auto& line : pv.evidence.details) os << "      " << line << '\n';
    }
  }
  return os.str();
}

int verdict_exit_code(const VerdictSet& v) {
  int code = exit_code::kEthical;
  for (const auto& p : v.plans) {
    if (p.overall == Overall::Unethical) return exit_code::kUnethical;
    if (p.overall == Overall::Indeterminate) code = exit_code::kIndeterminate;
  }
  return code;
}

RunOutput run_text(const RunConfig& config, const std::string& name, const std::string& text) {
  RunOutput r;
  ParseOptions popts;
  popts.file = name;
  auto parsed = parse_scenario(text, popts);
  const bool structured = config.mode == OutputMode::Structured;
  if (!parsed.ok()) {
    r.exit = exit_code::kInvalid;
    r.err = diagnostics_text(parsed.diagnostics);
    if (structured && config.command == Command::Validate) {
      auto j = diagnostics_json(name, parsed.diagnostics);
      j["valid"] = false;
      r.out = j.dump(2) + "\n";
    }
    return r;
  }
  const Scenario& s = *parsed.scenario;
  r.err = diagnostics_text(parsed.diagnostics);  // warnings only at this point

  try {
    if (config.command == Command::Validate) {
      if (structured) {
        auto j = diagnostics_json(name, parsed.diagnostics);
        j["valid"] = true;
        r.out = j.dump(2) + "\n";
      } else {
        r.out = name + ": valid (" + std::to_string(s.plans.size()) + " plan" + (s.plans.size() == 1 ? "" : "s") + ")\n";
      }
      return r;
    }
    if (config.command == Command::SatDebug) {
      if (!config.clauses) {
        r.exit = exit_code::kUsage;
        r.err += "sat-debug needs --clauses <check-id>; available:\n";
        for (const auto& id : query_ids(s)) r.err += "  " + id + "\n";
        return r;
      }
      r.out = "c query " + *config.clauses + "\n" + query_clauses(s, *config.clauses).dimacs();
      return r;
    }
    CheckOptions options;
    options.solver.decision_budget = config.budget;
    const VerdictSet v = evaluate(s, options);
    const bool explain = config.explain || config.command == Command::Explain;
    r.out = structured ? render_structured(v) : render_human(v, explain);
    if (config.clauses) r.out += "c query " + *config.clauses + "\n" + query_clauses(s, *config.clauses).dimacs();
    r.exit = verdict_exit_code(v);
  } catch (const std::exception& e) {
    r.exit = exit_code::kInvalid;
    r.out.clear();
    r.err += name + ": error: " + e.what() + "\n";
  }
  return r;
}

RunOutput run(const RunConfig& config, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {exit_code::kInvalid, "", path + ": error: cannot read file\n"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return run_text(config, path, buf.str());
}

int run_all(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<std::future<RunOutput>> jobs;
  for (const auto& path : config.inputs) {
    jobs.push_back(std::async(std::launch::async, [&config, path] { return run(config, path); }));
  }
  int code = exit_code::kEthical;
  for (auto& job : jobs) {
    auto r = job.get();
    out << r.out;
    err << r.err;
    code = combine(code, r.exit);
  }
  return code;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Check agents' action plans against generalization, utility and autonomy principles"};
  app.set_version_flag("--version", "deon 0.1.0");
  std::string command;
  RunConfig config;
  std::string format = "human";
  std::optional<std::uint64_t> budget;
  std::string clauses;

  app.add_option("command", command, "check | explain | validate | sat-debug")
      ->required()
      ->check(CLI::IsMember({"check", "explain", "validate", "sat-debug"}));
  app.add_option("files", config.inputs, ".deon scenario files")->required();
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"human", "json"}));
  app.add_option("--budget", budget, "solver decision budget per query (default: $DEON_BUDGET or 1000000)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--explain", config.explain, "print witnesses and conflict explanations");
  app.add_option("--clauses", clauses, "dump the clause set of a check, e.g. generalization/<plan>");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : exit_code::kUsage;
  }

  if (command == "check") config.command = Command::Check;
  if (command == "explain") config.command = Command::Explain;
  if (command == "validate") config.command = Command::Validate;
  if (command == "sat-debug") config.command = Command::SatDebug;
  config.mode = format == "json" ? OutputMode::Structured : OutputMode::Human;
  if (!clauses.empty()) config.clauses = clauses;

  if (budget) {
    config.budget = *budget;
  } else if (const char* env = std::getenv("DEON_BUDGET"); env && *env) {
    char* end = nullptr;
    const auto value = std::strtoull(env, &end, 10);
    if (*end != '\0' || value == 0) {
      err << "DEON_BUDGET must be a positive integer, got '" << env << "'\n";
      return exit_code::kUsage;
    }
    config.budget = value;
  }
  return run_all(config, out, err);
}

}  // namespace deon::cli
