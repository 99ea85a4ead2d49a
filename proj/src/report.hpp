#pragma once

#include "checker.hpp"
#include "tokens.hpp"

namespace cise {

enum class PairVerdict {
  CommutesAndStable,
  StabilityConflict,
  CommutativityConflict,
  Skipped,
};

enum class SelfVerdict { Stable, SelfConflict, Skipped };

struct PairReport {
  std::string f, g;  // f < g
  PairVerdict verdict = PairVerdict::CommutesAndStable;
  // Failed stability directions, e.g. "enroll after remCourse" means enroll's
  // precondition does not survive a preceding remCourse.
  std::vector<std::string> failed_directions;
  bool equality_failed = false;
  std::vector<GoalResult> goals;
  bool vacuous = false;
};

struct SelfReport {
  std::string op;
  SelfVerdict verdict = SelfVerdict::Stable;
  std::optional<Counterexample> ce;
  bool vacuous = false;
};

struct SafetyReport {
  std::string op;
  bool safe = true;
  std::optional<Counterexample> ce;
  std::string source;  // which task surfaced the violation
  bool vacuous = false;
};

struct ConflictReport {
  DomainBounds bounds;
  std::vector<SafetyReport> safety;
  std::vector<PairReport> pairs;
  std::vector<SelfReport> self;
  bool tokens_present = false;
  bool sound = true;  // with tokens: every non-skipped task discharged
  bool has_conflicts = false;
  std::vector<std::string> warnings;
};

struct AnalysisOptions {
  DomainBounds bounds;
  CheckConfig check;
};

// Runs the whole battery and assembles the report. Deterministic: operations
// and pairs are keyed by name, counterexamples are lexicographically first.
ConflictReport run_analysis(const Spec& spec, const TokenSystem* tokens,
                            const AnalysisOptions& opts);

std::string report_text(const Spec& spec, const ConflictReport& report);
std::string report_json(const Spec& spec, const ConflictReport& report);

std::string counterexample_text(const Spec& spec, const Counterexample& ce,
                                const std::string& indent = "    ");

}  // namespace cise
