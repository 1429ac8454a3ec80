// ops.hpp — product, observer, completion and reachability analyses
#pragma once

#include <map>
#include <string>
#include <vector>

#include "opasyn/automaton.hpp"

namespace opasyn {

/// A belief is a canonically sorted set of source-automaton state ids.
using Belief = std::vector<StateId>;

/// Synchronous product of the factors, accessible part only. Shared events
/// synchronize, private events interleave. State labels are the factor state
/// names, flattened left-associatively (a factor that is itself a product
/// contributes its own label tuple). Marked iff every factor is marked.
Automaton sync_product(const std::vector<const Automaton*>& factors);
Automaton sync_product(const Automaton& a, const Automaton& b);

/// Result of observer() with the belief membership retained, so callers can
/// evaluate predicates over members (used by the intruder construction).
struct ObserverResult {
    Automaton automaton;
    std::vector<Belief> beliefs;     // per observer state; empty for the sink
    StateId empty_state = kNoState;  // materialized only under totalization
};

enum class EmptyBelief { Omit, Totalize };

/// Subset construction per the partial-observation estimator definition:
/// observable events step through the unobservable reach, every event of
/// alphabet - observable self-loops at every belief. `empty_policy` controls
/// whether observable events undefined at a belief are totalized into the
/// empty-estimate sink state.
ObserverResult observer_full(const Automaton& a, const EventSet& observable,
                             EmptyBelief empty_policy = EmptyBelief::Omit);
Automaton observer(const Automaton& a, const EventSet& observable,
                   EmptyBelief empty_policy = EmptyBelief::Omit);

/// Name used for the empty-estimate sink when it is materialized.
extern const std::string kEmptyBeliefName;

/// Totalization with a fresh non-marked dump state that absorbs everything.
Automaton completion(const Automaton& a, const std::string& dump_name = "__dump");

/// Accessible part, preserving state name order of the original.
Automaton accessible(const Automaton& a);

/// States that can reach a marked state.
std::vector<StateId> coaccessible_states(const Automaton& a);
bool is_nonblocking(const Automaton& a);
bool is_marker_reachable(const Automaton& a);

/// Rewrites events through `map` (identity outside it); the image must keep
/// distinct alphabet letters distinct.
Automaton relabel(const Automaton& a, const std::map<Event, Event>& map);

Automaton mark_all(const Automaton& a);

/// Drops every state outside `keep` with its incident transitions, then takes
/// the accessible part.
Automaton restrict_states(const Automaton& a, const std::vector<StateId>& keep);

/// Shortest event string from the initial state to `target` (BFS, ties broken
/// by canonical event order). Empty optional if unreachable.
std::optional<std::vector<Event>> shortest_path_to(const Automaton& a, StateId target);

/// Canonical name for a belief over `src` states: "{q1,q2}" in state-id order.
std::string belief_name(const Automaton& src, const Belief& b);

}  // namespace opasyn
