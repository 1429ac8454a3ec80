#include "opasyn/automaton.hpp"

#include <algorithm>
#include <stdexcept>

namespace opasyn {

Automaton::Automaton(EventSet alphabet) : alphabet_set_(std::move(alphabet)) {
    events_.assign(alphabet_set_.begin(), alphabet_set_.end());
    for (EventId i = 0; i < events_.size(); ++i) event_index_[events_[i].canonical()] = i;
}

StateId Automaton::add_state(const std::string& name, bool marked) {
    if (state_index_.count(name))
        throw std::invalid_argument("duplicate state name: " + name);
    StateId id = static_cast<StateId>(names_.size());
    names_.push_back(name);
    state_index_[name] = id;
    marked_.push_back(marked);
    labels_.emplace_back();
    trans_.emplace_back();
    return id;
}

StateId Automaton::ensure_state(const std::string& name, bool marked) {
    auto it = state_index_.find(name);
    if (it != state_index_.end()) return it->second;
    return add_state(name, marked);
}

void Automaton::set_initial(StateId s) {
    if (s >= names_.size()) throw std::out_of_range("initial state id out of range");
    initial_ = s;
}

void Automaton::set_marked(StateId s, bool marked) {
    if (s >= names_.size()) throw std::out_of_range("state id out of range");
    marked_[s] = marked;
}

void Automaton::set_labels(StateId s, std::vector<std::string> labels) {
    if (s >= names_.size()) throw std::out_of_range("state id out of range");
    labels_[s] = std::move(labels);
}

void Automaton::add_transition(StateId src, const Event& event, StateId dst) {
    if (src >= names_.size() || dst >= names_.size())
        throw std::out_of_range("transition endpoint out of range");
    auto eid = event_id(event);
    if (!eid)
        throw std::invalid_argument("event not in alphabet: " + event.canonical());
    auto& row = trans_[src];
    auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(*eid, StateId{0}),
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    if (it != row.end() && it->first == *eid) {
        if (it->second == dst) return;  // idempotent
        throw std::invalid_argument("nondeterministic transition on " + event.canonical() +
                                    " at state " + names_[src]);
    }
    row.insert(it, {*eid, dst});
}

void Automaton::add_transition(const std::string& src, const Event& event,
                               const std::string& dst) {
    auto s = state_id(src);
    auto d = state_id(dst);
    if (!s || !d) throw std::invalid_argument("unknown state in transition " + src + " -> " + dst);
    add_transition(*s, event, *d);
}

std::size_t Automaton::num_transitions() const {
    std::size_t n = 0;
    for (const auto& row : trans_) n += row.size();
    return n;
}

std::optional<EventId> Automaton::event_id(const Event& e) const {
    auto it = event_index_.find(e.canonical());
    if (it == event_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<StateId> Automaton::state_id(const std::string& name) const {
    auto it = state_index_.find(name);
    if (it == state_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<StateId> Automaton::successor(StateId s, EventId e) const {
    const auto& row = trans_[s];
    auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(e, StateId{0}),
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    if (it != row.end() && it->first == e) return it->second;
    return std::nullopt;
}

std::optional<StateId> Automaton::successor(StateId s, const Event& e) const {
    auto eid = event_id(e);
    if (!eid) return std::nullopt;
    return successor(s, *eid);
}

std::vector<StateId> Automaton::marked_states() const {
    std::vector<StateId> out;
    for (StateId s = 0; s < names_.size(); ++s)
        if (marked_[s]) out.push_back(s);
    return out;
}

std::optional<StateId> Automaton::run(const std::vector<Event>& word) const {
    if (!has_initial()) return std::nullopt;
    StateId cur = initial_;
    for (const auto& e : word) {
        auto next = successor(cur, e);
        if (!next) return std::nullopt;
        cur = *next;
    }
    return cur;
}

bool Automaton::structurally_equal(const Automaton& other) const {
    return alphabet_set_ == other.alphabet_set_ && names_ == other.names_ &&
           marked_ == other.marked_ && initial_ == other.initial_ && trans_ == other.trans_;
}

}  // namespace opasyn
