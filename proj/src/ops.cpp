#include "opasyn/ops.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace opasyn {

const std::string kEmptyBeliefName = "{}";

namespace {

std::string tuple_name(const std::vector<std::string>& parts) {
    std::ostringstream oss;
    oss << "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) oss << ",";
        oss << parts[i];
    }
    oss << ")";
    return oss.str();
}

}  // namespace

Automaton sync_product(const std::vector<const Automaton*>& factors) {
    if (factors.empty()) throw std::invalid_argument("product of zero factors");
    for (const auto* f : factors)
        if (!f->has_initial()) throw std::invalid_argument("product factor lacks initial state");

    EventSet alphabet;
    for (const auto* f : factors) alphabet = set_union(alphabet, f->alphabet());
    Automaton out(alphabet);

    // Per factor, the ids of the shared events, or kNoState if private.
    const std::size_t n = factors.size();
    std::vector<std::vector<std::optional<EventId>>> local_eid(n);
    std::vector<Event> events(alphabet.begin(), alphabet.end());
    for (std::size_t i = 0; i < n; ++i) {
        local_eid[i].reserve(events.size());
        for (const auto& e : events) local_eid[i].push_back(factors[i]->event_id(e));
    }

    auto labels_of = [&](std::size_t i, StateId s) -> std::vector<std::string> {
        const auto& nested = factors[i]->labels(s);
        if (!nested.empty()) return nested;  // flatten products of products
        return {factors[i]->state_name(s)};
    };

    std::map<std::vector<StateId>, StateId> index;
    std::deque<std::vector<StateId>> queue;

    auto intern = [&](const std::vector<StateId>& tuple) -> StateId {
        auto it = index.find(tuple);
        if (it != index.end()) return it->second;
        std::vector<std::string> labels;
        bool marked = true;
        for (std::size_t i = 0; i < n; ++i) {
            auto part = labels_of(i, tuple[i]);
            labels.insert(labels.end(), part.begin(), part.end());
            marked = marked && factors[i]->is_marked(tuple[i]);
        }
        StateId id = out.add_state(tuple_name(labels), marked);
        out.set_labels(id, std::move(labels));
        index.emplace(tuple, id);
        queue.push_back(tuple);
        return id;
    };

    std::vector<StateId> init(n);
    for (std::size_t i = 0; i < n; ++i) init[i] = factors[i]->initial();
    out.set_initial(intern(init));

    while (!queue.empty()) {
        auto tuple = queue.front();
        queue.pop_front();
        StateId src = index.at(tuple);
        for (EventId e = 0; e < events.size(); ++e) {
            std::vector<StateId> next = tuple;
            bool enabled = true;
            for (std::size_t i = 0; i < n && enabled; ++i) {
                if (!local_eid[i][e]) continue;  // private to other factors
                auto succ = factors[i]->successor(tuple[i], *local_eid[i][e]);
                if (!succ)
                    enabled = false;
                else
                    next[i] = *succ;
            }
            if (!enabled) continue;
            out.add_transition(src, events[e], intern(next));
        }
    }
    return out;
}

Automaton sync_product(const Automaton& a, const Automaton& b) {
    return sync_product(std::vector<const Automaton*>{&a, &b});
}

namespace {

/// Unobservable reach: closure of `seed` under events outside `observable`.
Belief unobservable_reach(const Automaton& a, const std::vector<bool>& is_observable,
                          Belief seed) {
    std::vector<bool> in(a.num_states(), false);
    std::deque<StateId> work;
    for (StateId s : seed) {
        if (!in[s]) {
            in[s] = true;
            work.push_back(s);
        }
    }
    while (!work.empty()) {
        StateId s = work.front();
        work.pop_front();
        for (const auto& [eid, dst] : a.transitions_from(s)) {
            if (is_observable[eid]) continue;
            if (!in[dst]) {
                in[dst] = true;
                work.push_back(dst);
            }
        }
    }
    Belief out;
    for (StateId s = 0; s < a.num_states(); ++s)
        if (in[s]) out.push_back(s);
    return out;
}

}  // namespace

std::string belief_name(const Automaton& src, const Belief& b) {
    if (b.empty()) return kEmptyBeliefName;
    std::ostringstream oss;
    oss << "{";
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i) oss << ",";
        oss << src.state_name(b[i]);
    }
    oss << "}";
    return oss.str();
}

ObserverResult observer_full(const Automaton& a, const EventSet& observable,
                             EmptyBelief empty_policy) {
    for (const auto& e : observable)
        if (!a.alphabet().count(e))
            throw std::invalid_argument("observable event outside alphabet: " + e.canonical());
    if (!a.has_initial()) throw std::invalid_argument("observer of automaton without initial");

    const auto& events = a.events();
    std::vector<bool> is_obs(events.size(), false);
    for (EventId e = 0; e < events.size(); ++e) is_obs[e] = observable.count(events[e]) > 0;

    ObserverResult res;
    res.automaton = Automaton(a.alphabet());
    Automaton& obs = res.automaton;

    std::map<Belief, StateId> index;
    std::deque<Belief> queue;

    auto intern = [&](const Belief& b) -> StateId {
        auto it = index.find(b);
        if (it != index.end()) return it->second;
        // Marked iff it contains a marked member; the empty belief is unmarked.
        bool marked = std::any_of(b.begin(), b.end(), [&](StateId s) { return a.is_marked(s); });
        StateId id = obs.add_state(belief_name(a, b), marked);
        res.beliefs.push_back(b);
        index.emplace(b, id);
        queue.push_back(b);
        return id;
    };

    Belief init = unobservable_reach(a, is_obs, {a.initial()});
    obs.set_initial(intern(init));

    while (!queue.empty()) {
        Belief cur = queue.front();
        queue.pop_front();
        StateId src = index.at(cur);
        bool is_empty = cur.empty();
        for (EventId e = 0; e < events.size(); ++e) {
            if (!is_obs[e]) {
                // Case 2: unobservable events self-loop at every belief.
                if (!is_empty) obs.add_transition(src, events[e], src);
                continue;
            }
            if (is_empty) continue;  // sink handled below
            Belief stepped;
            for (StateId s : cur) {
                auto succ = a.successor(s, e);
                if (succ) stepped.push_back(*succ);
            }
            std::sort(stepped.begin(), stepped.end());
            stepped.erase(std::unique(stepped.begin(), stepped.end()), stepped.end());
            if (stepped.empty()) {
                if (empty_policy == EmptyBelief::Totalize)
                    obs.add_transition(src, events[e], intern({}));
                continue;
            }
            Belief next = unobservable_reach(a, is_obs, std::move(stepped));
            obs.add_transition(src, events[e], intern(next));
        }
    }

    auto empty_id = obs.state_id(kEmptyBeliefName);
    if (empty_id) res.empty_state = *empty_id;
    return res;
}

Automaton observer(const Automaton& a, const EventSet& observable, EmptyBelief empty_policy) {
    return observer_full(a, observable, empty_policy).automaton;
}

Automaton completion(const Automaton& a, const std::string& dump_name) {
    std::string dump = dump_name;
    while (a.state_id(dump)) dump += "_";
    Automaton out(a.alphabet());
    for (StateId s = 0; s < a.num_states(); ++s) {
        out.add_state(a.state_name(s), a.is_marked(s));
        out.set_labels(s, a.labels(s));
    }
    StateId d = out.add_state(dump, false);
    if (a.has_initial()) out.set_initial(a.initial());
    const auto& events = a.events();
    for (StateId s = 0; s < a.num_states(); ++s) {
        for (EventId e = 0; e < events.size(); ++e) {
            auto succ = a.successor(s, e);
            out.add_transition(s, events[e], succ ? *succ : d);
        }
    }
    for (EventId e = 0; e < events.size(); ++e) out.add_transition(d, events[e], d);
    return out;
}

Automaton accessible(const Automaton& a) {
    std::vector<bool> seen(a.num_states(), false);
    if (a.has_initial()) {
        std::deque<StateId> work{a.initial()};
        seen[a.initial()] = true;
        while (!work.empty()) {
            StateId s = work.front();
            work.pop_front();
            for (const auto& [eid, dst] : a.transitions_from(s)) {
                if (!seen[dst]) {
                    seen[dst] = true;
                    work.push_back(dst);
                }
            }
        }
    }
    Automaton out(a.alphabet());
    std::vector<StateId> remap(a.num_states(), kNoState);
    for (StateId s = 0; s < a.num_states(); ++s) {
        if (!seen[s]) continue;
        remap[s] = out.add_state(a.state_name(s), a.is_marked(s));
        out.set_labels(remap[s], a.labels(s));
    }
    for (StateId s = 0; s < a.num_states(); ++s) {
        if (!seen[s]) continue;
        for (const auto& [eid, dst] : a.transitions_from(s))
            if (seen[dst]) out.add_transition(remap[s], a.event(eid), remap[dst]);
    }
    if (a.has_initial()) out.set_initial(remap[a.initial()]);
    return out;
}

std::vector<StateId> coaccessible_states(const Automaton& a) {
    // Backward closure from marked states over reversed transitions.
    std::vector<std::vector<StateId>> rev(a.num_states());
    for (StateId s = 0; s < a.num_states(); ++s)
        for (const auto& [eid, dst] : a.transitions_from(s)) rev[dst].push_back(s);
    std::vector<bool> co(a.num_states(), false);
    std::deque<StateId> work;
    for (StateId s = 0; s < a.num_states(); ++s) {
        if (a.is_marked(s)) {
            co[s] = true;
            work.push_back(s);
        }
    }
    while (!work.empty()) {
        StateId s = work.front();
        work.pop_front();
        for (StateId p : rev[s]) {
            if (!co[p]) {
                co[p] = true;
                work.push_back(p);
            }
        }
    }
    std::vector<StateId> out;
    for (StateId s = 0; s < a.num_states(); ++s)
        if (co[s]) out.push_back(s);
    return out;
}

bool is_nonblocking(const Automaton& a) {
    if (!a.has_initial()) return true;
    auto co = coaccessible_states(a);
    std::vector<bool> is_co(a.num_states(), false);
    for (StateId s : co) is_co[s] = true;
    // Every accessible state must be coaccessible.
    std::vector<bool> seen(a.num_states(), false);
    std::deque<StateId> work{a.initial()};
    seen[a.initial()] = true;
    while (!work.empty()) {
        StateId s = work.front();
        work.pop_front();
        if (!is_co[s]) return false;
        for (const auto& [eid, dst] : a.transitions_from(s)) {
            if (!seen[dst]) {
                seen[dst] = true;
                work.push_back(dst);
            }
        }
    }
    return true;
}

bool is_marker_reachable(const Automaton& a) {
    if (!a.has_initial()) return false;
    std::vector<bool> seen(a.num_states(), false);
    std::deque<StateId> work{a.initial()};
    seen[a.initial()] = true;
    while (!work.empty()) {
        StateId s = work.front();
        work.pop_front();
        if (a.is_marked(s)) return true;
        for (const auto& [eid, dst] : a.transitions_from(s)) {
            if (!seen[dst]) {
                seen[dst] = true;
                work.push_back(dst);
            }
        }
    }
    return false;
}

Automaton relabel(const Automaton& a, const std::map<Event, Event>& map) {
    EventSet alphabet;
    for (const auto& e : a.alphabet()) {
        auto it = map.find(e);
        const Event& img = it == map.end() ? e : it->second;
        if (alphabet.count(img))
            throw std::invalid_argument("relabel map not injective on alphabet at " +
                                        img.canonical());
        alphabet.insert(img);
    }
    Automaton out(alphabet);
    for (StateId s = 0; s < a.num_states(); ++s) {
        out.add_state(a.state_name(s), a.is_marked(s));
        out.set_labels(s, a.labels(s));
    }
    if (a.has_initial()) out.set_initial(a.initial());
    for (StateId s = 0; s < a.num_states(); ++s) {
        for (const auto& [eid, dst] : a.transitions_from(s)) {
            const Event& e = a.event(eid);
            auto it = map.find(e);
            out.add_transition(s, it == map.end() ? e : it->second, dst);
        }
    }
    return out;
}

Automaton mark_all(const Automaton& a) {
    Automaton out = a;
    for (StateId s = 0; s < a.num_states(); ++s) out.set_marked(s, true);
    return out;
}

Automaton restrict_states(const Automaton& a, const std::vector<StateId>& keep) {
    std::vector<bool> kept(a.num_states(), false);
    for (StateId s : keep) {
        if (s >= a.num_states()) throw std::out_of_range("restrict: state id out of range");
        kept[s] = true;
    }
    Automaton pruned(a.alphabet());
    std::vector<StateId> remap(a.num_states(), kNoState);
    for (StateId s = 0; s < a.num_states(); ++s) {
        if (!kept[s]) continue;
        remap[s] = pruned.add_state(a.state_name(s), a.is_marked(s));
        pruned.set_labels(remap[s], a.labels(s));
    }
    if (a.has_initial() && kept[a.initial()]) pruned.set_initial(remap[a.initial()]);
    for (StateId s = 0; s < a.num_states(); ++s) {
        if (!kept[s]) continue;
        for (const auto& [eid, dst] : a.transitions_from(s))
            if (kept[dst]) pruned.add_transition(remap[s], a.event(eid), remap[dst]);
    }
    if (!pruned.has_initial()) {
        // Initial removed: the result is the empty automaton over the alphabet.
        return Automaton(a.alphabet());
    }
    return accessible(pruned);
}

std::optional<std::vector<Event>> shortest_path_to(const Automaton& a, StateId target) {
    if (!a.has_initial()) return std::nullopt;
    std::vector<StateId> pred(a.num_states(), kNoState);
    std::vector<EventId> pred_event(a.num_states(), 0);
    std::vector<bool> seen(a.num_states(), false);
    std::deque<StateId> work{a.initial()};
    seen[a.initial()] = true;
    while (!work.empty()) {
        StateId s = work.front();
        work.pop_front();
        if (s == target) break;
        for (const auto& [eid, dst] : a.transitions_from(s)) {
            if (!seen[dst]) {
                seen[dst] = true;
                pred[dst] = s;
                pred_event[dst] = eid;
                work.push_back(dst);
            }
        }
    }
    if (!seen[target]) return std::nullopt;
    std::vector<Event> path;
    for (StateId s = target; s != a.initial(); s = pred[s]) path.push_back(a.event(pred_event[s]));
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace opasyn
