#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cise {

// Remove-wins set: two grow-only component sets. An element is a member iff
// it was added and never removed; once removed it can never reappear.
// Values are immutable; mutators return new values.
template <typename T>
class RemoveWinsSet {
 public:
  RemoveWinsSet() = default;

  static RemoveWinsSet empty() { return RemoveWinsSet(); }

  RemoveWinsSet with_add(const T& e) const {
    RemoveWinsSet out = *this;
    out.adds_.insert(e);
    return out;
  }

  RemoveWinsSet with_remove(const T& e) const {
    RemoveWinsSet out = *this;
    out.removes_.insert(e);
    return out;
  }

  bool member(const T& e) const { return adds_.count(e) > 0 && removes_.count(e) == 0; }

  // Component-wise equality, matching the CRDT's own equality predicate.
  bool equal(const RemoveWinsSet& o) const {
    return adds_ == o.adds_ && removes_ == o.removes_;
  }

  // Join: both components are grow-only, so union is their least upper bound.
  static RemoveWinsSet merge(const RemoveWinsSet& a, const RemoveWinsSet& b) {
    RemoveWinsSet out = a;
    out.adds_.insert(b.adds_.begin(), b.adds_.end());
    out.removes_.insert(b.removes_.begin(), b.removes_.end());
    return out;
  }

  const std::set<T>& adds() const { return adds_; }
  const std::set<T>& removes() const { return removes_; }

 private:
  std::set<T> adds_, removes_;
};

// ---------------------------------------------------------------------------
// Multi-replica convergence simulator. Concurrency is modeled, not executed:
// a deterministic scheduler applies update events at replicas in script
// order; delivery may duplicate and reorder but must eventually reach every
// replica.
// ---------------------------------------------------------------------------

struct UpdateEvent {
  enum Kind { Add, Remove } kind = Add;
  long long element = 0;
  int origin = 0;
};

struct Replica {
  int id = 0;
  RemoveWinsSet<long long> state;
  std::vector<UpdateEvent> log;  // locally originated updates, in issue order

  void apply(const UpdateEvent& e) {
    state = e.kind == UpdateEvent::Add ? state.with_add(e.element)
                                       : state.with_remove(e.element);
  }
};

struct ScenarioAction {
  enum Kind { OpAdd, OpRemove, Deliver, Flush } kind = OpAdd;
  int replica = 0;
  long long element = 0;  // OpAdd / OpRemove
  int event_index = 0;    // Deliver
};

struct Scenario {
  unsigned seed = 0;  // recorded for reproducibility
  int replicas = 0;
  std::vector<ScenarioAction> actions;
};

struct SimResult {
  bool converged = false;
  std::vector<RemoveWinsSet<long long>> finals;
  std::vector<std::string> history;
  std::string error;  // non-empty when the scenario was rejected

  bool ok() const { return error.empty(); }
};

// Rejects schedules that do not eventually deliver every event to every
// replica; otherwise runs the schedule and reports whether all replicas
// converged under the remove-wins equality.
SimResult simulate(const Scenario& scenario);

// Deterministic random scenario: up to `max_events` add/remove updates over
// [elem_lo, elem_hi], interleaved with duplicated and reordered deliveries,
// terminated by a flush so eventual delivery holds.
Scenario random_scenario(unsigned seed, int replicas, int max_events, long long elem_lo,
                         long long elem_hi);

struct ScenarioParseResult {
  std::optional<Scenario> scenario;
  std::string error;
  int line = 0;
};
ScenarioParseResult parse_scenario(const std::string& text);
std::string scenario_to_text(const Scenario& s);

}  // namespace cise
