// automaton.hpp — deterministic finite state automaton with partial transitions
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "opasyn/event.hpp"

namespace opasyn {

using StateId = std::uint32_t;
using EventId = std::uint32_t;

constexpr StateId kNoState = static_cast<StateId>(-1);

/// Deterministic FSA over a fixed alphabet of events. States are named;
/// insertion order is the canonical state order. Product states additionally
/// carry the tuple of factor state names so coordinate predicates stay
/// evaluable after composition.
class Automaton {
  public:
    Automaton() = default;
    explicit Automaton(EventSet alphabet);

    // --- construction -------------------------------------------------
    StateId add_state(const std::string& name, bool marked = false);
    /// Returns the id of `name`, creating the state if needed.
    StateId ensure_state(const std::string& name, bool marked = false);
    void set_initial(StateId s);
    void set_marked(StateId s, bool marked);
    void set_labels(StateId s, std::vector<std::string> labels);
    /// Adds src --event--> dst. Throws if the event is outside the alphabet,
    /// a state id is invalid, or a different successor already exists.
    void add_transition(StateId src, const Event& event, StateId dst);
    void add_transition(const std::string& src, const Event& event, const std::string& dst);

    // --- queries -------------------------------------------------------
    std::size_t num_states() const { return names_.size(); }
    std::size_t num_transitions() const;
    const EventSet& alphabet() const { return alphabet_set_; }
    const std::vector<Event>& events() const { return events_; }
    std::optional<EventId> event_id(const Event& e) const;
    const Event& event(EventId id) const { return events_[id]; }

    StateId initial() const { return initial_; }
    bool has_initial() const { return initial_ != kNoState; }
    const std::string& state_name(StateId s) const { return names_[s]; }
    std::optional<StateId> state_id(const std::string& name) const;
    bool is_marked(StateId s) const { return marked_[s]; }
    const std::vector<std::string>& labels(StateId s) const { return labels_[s]; }

    /// Successor of (s, event) if defined.
    std::optional<StateId> successor(StateId s, EventId e) const;
    std::optional<StateId> successor(StateId s, const Event& e) const;
    /// Transitions leaving s, sorted by event id.
    const std::vector<std::pair<EventId, StateId>>& transitions_from(StateId s) const {
        return trans_[s];
    }

    std::vector<StateId> marked_states() const;

    /// Runs the automaton on a string from the initial state.
    std::optional<StateId> run(const std::vector<Event>& word) const;

    /// Structural equality: same alphabet, same state names in the same
    /// order, same marking, initial and transition relation.
    bool structurally_equal(const Automaton& other) const;

  private:
    EventSet alphabet_set_;
    std::vector<Event> events_;  // sorted by canonical order; index = EventId
    std::unordered_map<std::string, EventId> event_index_;

    std::vector<std::string> names_;
    std::unordered_map<std::string, StateId> state_index_;
    std::vector<bool> marked_;
    std::vector<std::vector<std::string>> labels_;
    std::vector<std::vector<std::pair<EventId, StateId>>> trans_;
    StateId initial_ = kNoState;
};

}  // namespace opasyn
