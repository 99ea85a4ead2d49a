#include "report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace cise {

namespace {

const char* pair_verdict_str(PairVerdict v) {
  switch (v) {
    case PairVerdict::CommutesAndStable:
      return "commutes-and-stable";
    case PairVerdict::StabilityConflict:
      return "stability-conflict";
    case PairVerdict::CommutativityConflict:
      return "commutativity-conflict";
    case PairVerdict::Skipped:
      return "skipped-by-token-system";
  }
  return "?";
}

const char* self_verdict_str(SelfVerdict v) {
  switch (v) {
    case SelfVerdict::Stable:
      return "stable";
    case SelfVerdict::SelfConflict:
      return "self-conflict";
    case SelfVerdict::Skipped:
      return "skipped-by-token-system";
  }
  return "?";
}

std::string state_text(const Spec& spec, const StateValue& sv) {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < spec.state.fields.size(); ++i) {
    if (i) os << ", ";
    os << spec.state.fields[i].name << "=" << sv[i].str();
  }
  os << "}";
  return os.str();
}

}  // namespace

std::string counterexample_text(const Spec& spec, const Counterexample& ce,
                                const std::string& indent) {
  std::ostringstream os;
  os << indent << "failed goal: " << ce.goal_label << "\n";
  if (!ce.args.empty()) {
    os << indent << "arguments:  ";
    for (size_t i = 0; i < ce.args.size(); ++i) {
      if (i) os << ", ";
      os << ce.args[i].first << "=" << ce.args[i].second.str();
    }
    os << "\n";
  }
  for (size_t c = 0; c < ce.initial_states.size(); ++c)
    os << indent << "initial state" << (ce.initial_states.size() > 1 ? std::to_string(c + 1) : "")
       << ": " << state_text(spec, ce.initial_states[c]) << "\n";
  for (const auto& [label, sv] : ce.trace)
    os << indent << "after " << label << ": " << state_text(spec, sv) << "\n";
  return os.str();
}

ConflictReport run_analysis(const Spec& spec, const TokenSystem* tokens,
                            const AnalysisOptions& opts) {
  ConflictReport report;
  report.bounds = opts.bounds;
  report.tokens_present = tokens != nullptr;

  GeneratedTasks gen = generate_all_tasks(spec, tokens);

  // Seed per-op safety entries (name order) so conformance failures found in
  // pair tasks have somewhere to land.
  std::vector<std::string> op_names;
  for (const auto& op : spec.ops) op_names.push_back(op.name);
  std::sort(op_names.begin(), op_names.end());
  for (const auto& name : op_names) {
    SafetyReport sr;
    sr.op = name;
    report.safety.push_back(std::move(sr));
  }
  auto safety_of = [&](const std::string& op) -> SafetyReport& {
    for (auto& sr : report.safety)
      if (sr.op == op) return sr;
    throw std::logic_error("unknown op in report: " + op);
  };

  bool all_discharged = true;
  const bool timing = std::getenv("CISE_TIMING") != nullptr;

  for (const AnalysisTask& task : gen.tasks) {
    auto t0 = std::chrono::steady_clock::now();
    TaskResult result = check_task(spec, task, opts.bounds, opts.check);
    if (timing) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
      std::fprintf(stderr, "[timing] %-45s %6lld ms\n", task.name.c_str(),
                   static_cast<long long>(ms));
    }
    if (!result.passed) all_discharged = false;
    if (result.vacuous)
      report.warnings.push_back("assumption of " + task.name +
                                " admits no models within bounds (vacuous pass)");

    switch (task.kind) {
      case TaskKind::Safety: {
        SafetyReport& sr = safety_of(task.op_f);
        sr.vacuous = result.vacuous;
        for (const GoalResult& g : result.goals) {
          if (g.passed || sr.ce) continue;
          sr.safe = false;
          sr.ce = g.ce;
          sr.source = task.name;
        }
        break;
      }

      case TaskKind::PairCommutativity: {
        PairReport pr;
        pr.f = std::min(task.op_f, task.op_g);
        pr.g = std::max(task.op_f, task.op_g);
        pr.vacuous = result.vacuous;
        pr.goals = result.goals;
        bool stability_failed = false;
        for (const GoalResult& g : result.goals) {
          if (g.passed) continue;
          switch (g.role) {
            case GoalRole::PairPre: {
              stability_failed = true;
              std::string other = g.subject_op == task.op_f ? task.op_g : task.op_f;
              std::string dir = g.subject_op + " after " + other;
              if (std::find(pr.failed_directions.begin(), pr.failed_directions.end(),
                            dir) == pr.failed_directions.end())
                pr.failed_directions.push_back(dir);
              break;
            }
            case GoalRole::FinalEquality:
              pr.equality_failed = true;
              break;
            case GoalRole::Conformance: {
              // Contract violations mid-sequence blame the operation's
              // safety, not the pair.
              SafetyReport& sr = safety_of(g.subject_op);
              if (sr.safe) {
                sr.safe = false;
                sr.ce = g.ce;
                sr.source = task.name;
              }
              break;
            }
            default:
              break;
          }
        }
        if (stability_failed)
          pr.verdict = PairVerdict::StabilityConflict;
        else if (pr.equality_failed)
          pr.verdict = PairVerdict::CommutativityConflict;
        else
          pr.verdict = PairVerdict::CommutesAndStable;
        report.pairs.push_back(std::move(pr));
        break;
      }

      case TaskKind::SelfStability: {
        SelfReport sr;
        sr.op = task.op_f;
        sr.vacuous = result.vacuous;
        for (const GoalResult& g : result.goals) {
          if (g.passed) continue;
          sr.verdict = SelfVerdict::SelfConflict;
          if (!sr.ce) sr.ce = g.ce;
        }
        report.self.push_back(std::move(sr));
        break;
      }
    }
  }

  for (const auto& [f, g] : gen.skipped_pairs) {
    PairReport pr;
    pr.f = std::min(f, g);
    pr.g = std::max(f, g);
    pr.verdict = PairVerdict::Skipped;
    report.pairs.push_back(std::move(pr));
  }
  for (const auto& op : gen.skipped_self) {
    SelfReport sr;
    sr.op = op;
    sr.verdict = SelfVerdict::Skipped;
    report.self.push_back(std::move(sr));
  }

  std::sort(report.pairs.begin(), report.pairs.end(),
            [](const PairReport& a, const PairReport& b) {
              return std::tie(a.f, a.g) < std::tie(b.f, b.g);
            });
  std::sort(report.self.begin(), report.self.end(),
            [](const SelfReport& a, const SelfReport& b) { return a.op < b.op; });

  report.sound = all_discharged;
  for (const auto& p : report.pairs)
    if (p.verdict == PairVerdict::StabilityConflict ||
        p.verdict == PairVerdict::CommutativityConflict)
      report.has_conflicts = true;
  for (const auto& s : report.self)
    if (s.verdict == SelfVerdict::SelfConflict) report.has_conflicts = true;
  for (const auto& s : report.safety)
    if (!s.safe) report.has_conflicts = true;

  return report;
}

std::string report_text(const Spec& spec, const ConflictReport& report) {
  std::ostringstream os;
  os << "CISE analysis (bounds " << report.bounds.lo << ".." << report.bounds.hi
     << ")\n\n";

  os << "Safety:\n";
  for (const auto& s : report.safety) {
    os << "  " << s.op << ": " << (s.safe ? "safe" : "UNSAFE") << "\n";
    if (!s.safe && s.ce) {
      if (!s.source.empty()) os << "    via " << s.source << "\n";
      os << counterexample_text(spec, *s.ce);
    }
  }

  os << "\nPairs:\n";
  for (const auto& p : report.pairs) {
    os << "  {" << p.f << ", " << p.g << "}: " << pair_verdict_str(p.verdict) << "\n";
    for (const auto& d : p.failed_directions)
      os << "    precondition of " << d << " is not stable\n";
    if (p.verdict == PairVerdict::StabilityConflict && p.equality_failed)
      os << "    (final state equality also fails)\n";
    for (const auto& g : p.goals) {
      if (g.passed || !g.ce) continue;
      os << counterexample_text(spec, *g.ce);
      break;  // the first counterexample tells the story
    }
  }

  os << "\nSelf-stability:\n";
  for (const auto& s : report.self) {
    os << "  " << s.op << ": " << self_verdict_str(s.verdict) << "\n";
    if (s.ce) os << counterexample_text(spec, *s.ce);
  }

  if (report.tokens_present)
    os << "\nToken system: " << (report.sound ? "sound" : "NOT sound") << "\n";

  for (const auto& w : report.warnings) os << "\nwarning: " << w << "\n";
  return os.str();
}

namespace {

nlohmann::ordered_json ce_json(const Spec& spec, const Counterexample& ce) {
  nlohmann::ordered_json j;
  j["goal"] = ce.goal_label;
  nlohmann::ordered_json args = nlohmann::ordered_json::object();
  for (const auto& [name, v] : ce.args) args[name] = v.str();
  j["args"] = std::move(args);
  nlohmann::ordered_json states = nlohmann::ordered_json::array();
  for (const auto& sv : ce.initial_states) {
    nlohmann::ordered_json s = nlohmann::ordered_json::object();
    for (size_t i = 0; i < spec.state.fields.size(); ++i)
      s[spec.state.fields[i].name] = sv[i].str();
    states.push_back(std::move(s));
  }
  j["initial_states"] = std::move(states);
  nlohmann::ordered_json trace = nlohmann::ordered_json::array();
  for (const auto& [label, sv] : ce.trace) {
    nlohmann::ordered_json s = nlohmann::ordered_json::object();
    s["call"] = label;
    nlohmann::ordered_json fields = nlohmann::ordered_json::object();
    for (size_t i = 0; i < spec.state.fields.size(); ++i)
      fields[spec.state.fields[i].name] = sv[i].str();
    s["state"] = std::move(fields);
    trace.push_back(std::move(s));
  }
  j["trace"] = std::move(trace);
  return j;
}

}  // namespace

std::string report_json(const Spec& spec, const ConflictReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["bounds"] = {{"min", report.bounds.lo}, {"max", report.bounds.hi}};

  nlohmann::ordered_json safety = nlohmann::ordered_json::array();
  for (const auto& s : report.safety) {
    nlohmann::ordered_json e;
    e["op"] = s.op;
    e["verdict"] = s.safe ? "safe" : "unsafe";
    if (!s.source.empty() && !s.safe) e["source"] = s.source;
    e["counterexample"] = s.ce ? ce_json(spec, *s.ce) : nlohmann::ordered_json(nullptr);
    if (s.vacuous) e["vacuous"] = true;
    safety.push_back(std::move(e));
  }
  j["safety"] = std::move(safety);

  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& p : report.pairs) {
    nlohmann::ordered_json e;
    e["ops"] = {p.f, p.g};
    e["verdict"] = pair_verdict_str(p.verdict);
    if (p.verdict == PairVerdict::StabilityConflict) {
      e["directions"] = p.failed_directions;
      e["equality_also_failed"] = p.equality_failed;
    }
    nlohmann::ordered_json ces = nlohmann::ordered_json::array();
    for (const auto& g : p.goals)
      if (!g.passed && g.ce) ces.push_back(ce_json(spec, *g.ce));
    e["counterexamples"] = std::move(ces);
    if (p.vacuous) e["vacuous"] = true;
    pairs.push_back(std::move(e));
  }
  j["pairs"] = std::move(pairs);

  nlohmann::ordered_json self = nlohmann::ordered_json::array();
  for (const auto& s : report.self) {
    nlohmann::ordered_json e;
    e["op"] = s.op;
    e["verdict"] = self_verdict_str(s.verdict);
    e["counterexample"] = s.ce ? ce_json(spec, *s.ce) : nlohmann::ordered_json(nullptr);
    if (s.vacuous) e["vacuous"] = true;
    self.push_back(std::move(e));
  }
  j["self"] = std::move(self);

  nlohmann::ordered_json ts;
  ts["present"] = report.tokens_present;
  if (report.tokens_present) {
    ts["sound"] = report.sound;
    nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
    for (const auto& p : report.pairs)
      if (p.verdict == PairVerdict::Skipped)
        skipped.push_back(nlohmann::ordered_json::array({p.f, p.g}));
    for (const auto& s : report.self)
      if (s.verdict == SelfVerdict::Skipped)
        skipped.push_back(nlohmann::ordered_json::array({s.op, s.op}));
    ts["skipped"] = std::move(skipped);
  } else {
    ts["sound"] = nullptr;
  }
  j["token_system"] = std::move(ts);

  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

}  // namespace cise
