#include "crdt.hpp"

#include <random>
#include <sstream>

namespace cise {

namespace {

std::string set_text(const RemoveWinsSet<long long>& s) {
  std::ostringstream os;
  os << "adds={";
  bool first = true;
  for (long long e : s.adds()) {
    if (!first) os << ",";
    os << e;
    first = false;
  }
  os << "} removes={";
  first = true;
  for (long long e : s.removes()) {
    if (!first) os << ",";
    os << e;
    first = false;
  }
  os << "}";
  return os.str();
}

}  // namespace

SimResult simulate(const Scenario& scenario) {
  SimResult result;
  if (scenario.replicas < 1) {
    result.error = "scenario needs at least one replica";
    return result;
  }

  // Validation pass: count events and make sure the schedule eventually
  // delivers everything (explicitly or via flush).
  int issued = 0;
  std::vector<std::vector<bool>> delivered;  // [event][replica]
  bool valid = true;
  std::string why;
  for (const ScenarioAction& a : scenario.actions) {
    switch (a.kind) {
      case ScenarioAction::OpAdd:
      case ScenarioAction::OpRemove: {
        if (a.replica < 0 || a.replica >= scenario.replicas) {
          valid = false;
          why = "update on unknown replica " + std::to_string(a.replica);
          break;
        }
        delivered.emplace_back(scenario.replicas, false);
        delivered[static_cast<size_t>(issued)][static_cast<size_t>(a.replica)] = true;
        ++issued;
        break;
      }
      case ScenarioAction::Deliver: {
        if (a.event_index < 0 || a.event_index >= issued) {
          valid = false;
          why = "delivery of unknown event " + std::to_string(a.event_index);
          break;
        }
        if (a.replica < 0 || a.replica >= scenario.replicas) {
          valid = false;
          why = "delivery to unknown replica " + std::to_string(a.replica);
          break;
        }
        delivered[static_cast<size_t>(a.event_index)][static_cast<size_t>(a.replica)] =
            true;
        break;
      }
      case ScenarioAction::Flush:
        for (auto& row : delivered)
          for (size_t r = 0; r < row.size(); ++r) row[r] = true;
        break;
    }
    if (!valid) break;
  }
  if (valid) {
    for (int e = 0; e < issued && valid; ++e)
      for (int r = 0; r < scenario.replicas && valid; ++r)
        if (!delivered[static_cast<size_t>(e)][static_cast<size_t>(r)]) {
          valid = false;
          why = "event " + std::to_string(e) + " is never delivered to replica " +
                std::to_string(r);
        }
  }
  if (!valid) {
    result.error = "schedule violates eventual delivery: " + why;
    return result;
  }

  // Execution pass.
  std::vector<Replica> replicas;
  for (int r = 0; r < scenario.replicas; ++r) replicas.push_back({r, {}, {}});
  std::vector<UpdateEvent> events;
  std::vector<std::vector<bool>> seen(0);

  auto deliver = [&](int event_idx, int replica) {
    replicas[static_cast<size_t>(replica)].apply(
        events[static_cast<size_t>(event_idx)]);
    seen[static_cast<size_t>(event_idx)][static_cast<size_t>(replica)] = true;
  };

  for (const ScenarioAction& a : scenario.actions) {
    switch (a.kind) {
      case ScenarioAction::OpAdd:
      case ScenarioAction::OpRemove: {
        UpdateEvent e;
        e.kind = a.kind == ScenarioAction::OpAdd ? UpdateEvent::Add : UpdateEvent::Remove;
        e.element = a.element;
        e.origin = a.replica;
        events.push_back(e);
        seen.emplace_back(scenario.replicas, false);
        int idx = static_cast<int>(events.size()) - 1;
        replicas[static_cast<size_t>(a.replica)].log.push_back(e);
        deliver(idx, a.replica);
        std::ostringstream os;
        os << "e" << idx << ": " << (e.kind == UpdateEvent::Add ? "add" : "remove")
           << "(" << e.element << ") at r" << a.replica;
        result.history.push_back(os.str());
        break;
      }
      case ScenarioAction::Deliver: {
        deliver(a.event_index, a.replica);
        std::ostringstream os;
        os << "deliver e" << a.event_index << " -> r" << a.replica;
        result.history.push_back(os.str());
        break;
      }
      case ScenarioAction::Flush: {
        for (size_t e = 0; e < events.size(); ++e)
          for (int r = 0; r < scenario.replicas; ++r)
            if (!seen[e][static_cast<size_t>(r)]) deliver(static_cast<int>(e), r);
        result.history.push_back("flush");
        break;
      }
    }
  }

  for (const Replica& r : replicas) {
    result.finals.push_back(r.state);
    result.history.push_back("final r" + std::to_string(r.id) + ": " +
                             set_text(r.state));
  }

  result.converged = true;
  for (size_t r = 1; r < replicas.size(); ++r)
    if (!replicas[0].state.equal(replicas[r].state)) result.converged = false;
  return result;
}

Scenario random_scenario(unsigned seed, int replicas, int max_events, long long elem_lo,
                         long long elem_hi) {
  Scenario s;
  s.seed = seed;
  s.replicas = replicas;

  std::mt19937 gen(seed);
  auto pick = [&](long long n) { return static_cast<long long>(gen() % n); };

  int n_events = 1 + static_cast<int>(pick(max_events));
  long long span = elem_hi - elem_lo + 1;
  int issued = 0;
  for (int i = 0; i < n_events; ++i) {
    ScenarioAction op;
    op.kind = pick(2) == 0 ? ScenarioAction::OpAdd : ScenarioAction::OpRemove;
    op.replica = static_cast<int>(pick(replicas));
    op.element = elem_lo + pick(span);
    s.actions.push_back(op);
    ++issued;

    // Interleave a few deliveries; duplicates and reordering are fine.
    int deliveries = static_cast<int>(pick(3));
    for (int d = 0; d < deliveries; ++d) {
      ScenarioAction del;
      del.kind = ScenarioAction::Deliver;
      del.event_index = static_cast<int>(pick(issued));
      del.replica = static_cast<int>(pick(replicas));
      s.actions.push_back(del);
    }
  }
  s.actions.push_back({ScenarioAction::Flush, 0, 0, 0});
  return s;
}

ScenarioParseResult parse_scenario(const std::string& text) {
  ScenarioParseResult out;
  Scenario s;
  bool have_replicas = false;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    out.error = msg;
    out.line = line_no;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ws(line);
    std::string word;
    if (!(ws >> word)) continue;

    if (word == "seed") {
      unsigned long long v;
      if (!(ws >> v)) return fail("expected: seed <number>"), out;
      s.seed = static_cast<unsigned>(v);
    } else if (word == "replicas") {
      if (!(ws >> s.replicas) || s.replicas < 1)
        return fail("expected: replicas <count>"), out;
      have_replicas = true;
    } else if (word == "add" || word == "remove") {
      if (!have_replicas) return fail("'replicas' must come before updates"), out;
      ScenarioAction a;
      a.kind = word == "add" ? ScenarioAction::OpAdd : ScenarioAction::OpRemove;
      if (!(ws >> a.replica >> a.element))
        return fail("expected: " + word + " <replica> <element>"), out;
      s.actions.push_back(a);
    } else if (word == "deliver") {
      ScenarioAction a;
      a.kind = ScenarioAction::Deliver;
      if (!(ws >> a.replica >> a.event_index))
        return fail("expected: deliver <replica> <event-index>"), out;
      s.actions.push_back(a);
    } else if (word == "flush") {
      s.actions.push_back({ScenarioAction::Flush, 0, 0, 0});
    } else {
      return fail("unknown directive: " + word), out;
    }
  }

  if (!have_replicas) {
    out.error = "scenario is missing a 'replicas' line";
    out.line = line_no;
    return out;
  }
  out.scenario = std::move(s);
  return out;
}

std::string scenario_to_text(const Scenario& s) {
  std::ostringstream os;
  os << "seed " << s.seed << "\n";
  os << "replicas " << s.replicas << "\n";
  for (const auto& a : s.actions) {
    switch (a.kind) {
      case ScenarioAction::OpAdd:
        os << "add " << a.replica << " " << a.element << "\n";
        break;
      case ScenarioAction::OpRemove:
        os << "remove " << a.replica << " " << a.element << "\n";
        break;
      case ScenarioAction::Deliver:
        os << "deliver " << a.replica << " " << a.event_index << "\n";
        break;
      case ScenarioAction::Flush:
        os << "flush\n";
        break;
    }
  }
  return os.str();
}

}  // namespace cise
