#include "opasyn/synthesis.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "opasyn/ops.hpp"

namespace opasyn {

namespace {

struct BeliefGraph {
    std::vector<Belief> beliefs;                      // member ids of the pruned plant
    std::vector<std::map<EventId, StateId>> moves;    // observable transitions
    std::vector<bool> alive;
    StateId initial = kNoState;
};

std::string belief_key(const Belief& b) {
    std::ostringstream oss;
    for (StateId s : b) oss << s << ",";
    return oss.str();
}

/// Subset construction over the pruned plant w.r.t. the observable events.
BeliefGraph build_belief_graph(const Automaton& plant, const std::vector<bool>& observable,
                               std::size_t budget) {
    BeliefGraph g;
    std::map<std::string, StateId> index;
    std::deque<StateId> queue;

    auto ur = [&](Belief seed) {
        std::vector<bool> in(plant.num_states(), false);
        std::deque<StateId> work;
        for (StateId s : seed)
            if (!in[s]) {
                in[s] = true;
                work.push_back(s);
            }
        while (!work.empty()) {
            StateId s = work.front();
            work.pop_front();
            for (const auto& [eid, dst] : plant.transitions_from(s)) {
                if (observable[eid]) continue;
                if (!in[dst]) {
                    in[dst] = true;
                    work.push_back(dst);
                }
            }
        }
        Belief out;
        for (StateId s = 0; s < plant.num_states(); ++s)
            if (in[s]) out.push_back(s);
        return out;
    };

    auto intern = [&](Belief b) -> StateId {
        auto key = belief_key(b);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        if (g.beliefs.size() >= budget)
            throw BudgetExceeded("belief state budget exceeded during synthesis");
        StateId id = static_cast<StateId>(g.beliefs.size());
        g.beliefs.push_back(std::move(b));
        g.moves.emplace_back();
        g.alive.push_back(true);
        index.emplace(std::move(key), id);
        queue.push_back(id);
        return id;
    };

    g.initial = intern(ur({plant.initial()}));
    while (!queue.empty()) {
        StateId b = queue.front();
        queue.pop_front();
        std::map<EventId, Belief> stepped;
        for (StateId member : g.beliefs[b])
            for (const auto& [eid, dst] : plant.transitions_from(member))
                if (observable[eid]) stepped[eid].push_back(dst);
        for (auto& [eid, targets] : stepped) {
            std::sort(targets.begin(), targets.end());
            targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
            g.moves[b][eid] = intern(ur(std::move(targets)));
        }
    }
    return g;
}

struct PairProduct {
    Automaton automaton;
    std::vector<std::pair<StateId, StateId>> pairs;  // (plant, agent-belief)
};

/// Product of the plant with the candidate belief graph: observable events
/// synchronize through the graph, unobservable plant moves leave the belief
/// unchanged.
PairProduct candidate_product(const Automaton& plant, const std::vector<bool>& observable,
                              const BeliefGraph& g) {
    PairProduct out;
    out.automaton = Automaton(plant.alphabet());
    std::map<std::pair<StateId, StateId>, StateId> index;
    std::deque<std::pair<StateId, StateId>> queue;

    auto intern = [&](std::pair<StateId, StateId> p) -> StateId {
        auto it = index.find(p);
        if (it != index.end()) return it->second;
        std::string name =
            "(" + plant.state_name(p.first) + "|" + std::to_string(p.second) + ")";
        StateId id = out.automaton.add_state(name, plant.is_marked(p.first));
        out.pairs.push_back(p);
        index.emplace(p, id);
        queue.push_back(p);
        return id;
    };

    StateId init = intern({plant.initial(), g.initial});
    out.automaton.set_initial(init);
    while (!queue.empty()) {
        auto [ps, bs] = queue.front();
        queue.pop_front();
        StateId src = index.at({ps, bs});
        for (const auto& [eid, dst] : plant.transitions_from(ps)) {
            if (!observable[eid]) {
                out.automaton.add_transition(src, plant.event(eid), intern({dst, bs}));
                continue;
            }
            auto it = g.moves[bs].find(eid);
            if (it == g.moves[bs].end() || !g.alive[it->second]) continue;
            out.automaton.add_transition(src, plant.event(eid), intern({dst, it->second}));
        }
    }
    return out;
}

}  // namespace

bool agent_contract_holds(const Automaton& automaton, const ControlConstraint& constraint,
                          std::string* detail) {
    for (StateId s = 0; s < automaton.num_states(); ++s) {
        for (const auto& e : automaton.events()) {
            bool controllable = constraint.controllable.count(e) > 0;
            bool observable = constraint.observable.count(e) > 0;
            auto succ = automaton.successor(s, e);
            if (!controllable && !succ) {
                if (detail)
                    *detail = "uncontrollable event " + e.canonical() +
                              " undefined at state " + automaton.state_name(s);
                return false;
            }
            if (!observable && succ && *succ != s) {
                if (detail)
                    *detail = "unobservable event " + e.canonical() +
                              " changes state at " + automaton.state_name(s);
                return false;
            }
        }
    }
    return true;
}

ValidationReport validate_agent(const Automaton& plant, const Automaton& requirement,
                                const AgentAutomaton& agent, SynthesisGoal goal) {
    ValidationReport report;
    std::string detail;
    report.contract_ok = agent_contract_holds(agent.automaton, agent.constraint, &detail);
    if (!report.contract_ok) report.detail = detail;

    // Removed states are exactly the plant states missing from the requirement.
    std::set<std::string> removed;
    for (StateId s = 0; s < plant.num_states(); ++s)
        if (!requirement.state_id(plant.state_name(s))) removed.insert(plant.state_name(s));

    Automaton closed = sync_product(plant, agent.automaton);
    report.safety_ok = true;
    for (StateId s = 0; s < closed.num_states(); ++s) {
        // The plant coordinate is the label prefix; for a non-product plant it
        // is the single leading label.
        const auto& labels = closed.labels(s);
        std::size_t plant_width = labels.size() - 1;
        std::string plant_name;
        if (plant_width == 1) {
            plant_name = labels[0];
        } else {
            std::ostringstream oss;
            oss << "(";
            for (std::size_t i = 0; i < plant_width; ++i) {
                if (i) oss << ",";
                oss << labels[i];
            }
            oss << ")";
            plant_name = oss.str();
        }
        if (removed.count(plant_name)) {
            report.safety_ok = false;
            report.detail = "reachable removed state " + plant_name;
            break;
        }
    }

    report.goal_ok = goal == SynthesisGoal::MarkerReachable ? is_marker_reachable(closed)
                                                            : is_nonblocking(closed);
    if (!report.goal_ok && report.detail.empty()) report.detail = "goal violated";
    return report;
}

SynthesisOutcome synthesize(const Automaton& plant, const Automaton& requirement,
                            const ControlConstraint& constraint, SynthesisGoal goal,
                            const SynthesisOptions& options) {
    SynthesisOutcome outcome;
    auto say = [&](const std::string& line) {
        if (options.explain) outcome.explain_trace.push_back(line);
    };

    for (const auto& e : constraint.controllable)
        if (!constraint.observable.count(e))
            throw std::invalid_argument("constraint has controllable event outside observable: " +
                                        e.canonical());
    if (!plant.has_initial()) throw std::invalid_argument("plant lacks initial state");

    // The requirement must be a state-restriction of the plant.
    std::vector<bool> bad(plant.num_states(), false);
    for (StateId s = 0; s < plant.num_states(); ++s) {
        auto rs = requirement.state_id(plant.state_name(s));
        if (!rs) {
            bad[s] = true;
            continue;
        }
        for (const auto& [eid, dst] : requirement.transitions_from(*rs)) {
            auto pe = plant.successor(s, requirement.event(eid));
            if (!pe || plant.state_name(*pe) != requirement.state_name(dst))
                throw std::invalid_argument("requirement is not a restriction of the plant");
        }
    }

    // Uncontrollable backward closure of the removed set.
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId s = 0; s < plant.num_states(); ++s) {
            if (bad[s]) continue;
            for (const auto& [eid, dst] : plant.transitions_from(s)) {
                if (!bad[dst]) continue;
                if (!constraint.controllable.count(plant.event(eid))) {
                    bad[s] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    if (bad[plant.initial()]) {
        outcome.no_solution_reason = "initial state uncontrollably reaches the removed set";
        say("initial state lost during uncontrollable closure");
        return outcome;
    }
    say("uncontrollable closure removed " +
        std::to_string(std::count(bad.begin(), bad.end(), true)) + " plant states");

    std::vector<StateId> keep;
    for (StateId s = 0; s < plant.num_states(); ++s)
        if (!bad[s]) keep.push_back(s);
    Automaton pruned = restrict_states(plant, keep);

    const auto& events = pruned.events();
    std::vector<bool> observable(events.size(), false);
    std::vector<bool> controllable(events.size(), false);
    for (EventId e = 0; e < events.size(); ++e) {
        observable[e] = constraint.observable.count(events[e]) > 0;
        controllable[e] = constraint.controllable.count(events[e]) > 0;
    }

    BeliefGraph graph = build_belief_graph(pruned, observable, options.state_budget);
    say("belief graph has " + std::to_string(graph.beliefs.size()) + " states");

    // Safety is settled by the pre-pruning; iterate the goal-driven deletion.
    auto close_deletions = [&]() -> bool {
        // Uncontrollable moves into dead beliefs kill the source; controllable
        // moves are simply disabled. Returns false if the initial belief dies.
        bool again = true;
        while (again) {
            again = false;
            for (StateId b = 0; b < graph.beliefs.size(); ++b) {
                if (!graph.alive[b]) continue;
                for (auto it = graph.moves[b].begin(); it != graph.moves[b].end();) {
                    if (graph.alive[it->second]) {
                        ++it;
                        continue;
                    }
                    if (controllable[it->first]) {
                        it = graph.moves[b].erase(it);
                    } else {
                        graph.alive[b] = false;
                        again = true;
                        break;
                    }
                }
            }
        }
        return graph.alive[graph.initial];
    };

    if (goal == SynthesisGoal::Nonblocking) {
        for (int round = 1;; ++round) {
            PairProduct product = candidate_product(pruned, observable, graph);
            auto co = coaccessible_states(product.automaton);
            std::vector<bool> is_co(product.automaton.num_states(), false);
            for (StateId s : co) is_co[s] = true;

            std::vector<bool> has_blocking(graph.beliefs.size(), false);
            std::vector<bool> occurs(graph.beliefs.size(), false);
            bool any_blocking = false;
            for (StateId s = 0; s < product.automaton.num_states(); ++s) {
                StateId b = product.pairs[s].second;
                occurs[b] = true;
                if (!is_co[s]) {
                    has_blocking[b] = true;
                    any_blocking = true;
                }
            }
            if (!any_blocking) break;

            // Prefer beliefs all of whose product occurrences block; fall back
            // to any-blocking so the loop always progresses.
            std::vector<StateId> victims;
            for (StateId b = 0; b < graph.beliefs.size(); ++b)
                if (graph.alive[b] && occurs[b] && has_blocking[b]) victims.push_back(b);
            std::vector<StateId> strict;
            for (StateId b : victims) {
                bool all_blocking = true;
                for (StateId s = 0; s < product.automaton.num_states(); ++s)
                    if (product.pairs[s].second == b && is_co[s]) {
                        all_blocking = false;
                        break;
                    }
                if (all_blocking) strict.push_back(b);
            }
            const auto& chosen = strict.empty() ? victims : strict;
            for (StateId b : chosen) graph.alive[b] = false;
            say("round " + std::to_string(round) + ": removed " +
                std::to_string(chosen.size()) + " blocking beliefs");
            if (!close_deletions()) {
                outcome.no_solution_reason = "nonblocking fixpoint emptied the initial belief";
                return outcome;
            }
        }
    } else {
        PairProduct product = candidate_product(pruned, observable, graph);
        if (!is_marker_reachable(product.automaton)) {
            outcome.no_solution_reason = "no marked state reachable under the safe candidate";
            return outcome;
        }
    }

    // Emit the agent: surviving beliefs, totalized to the agent contract.
    // Agents are supervisors and carry no marking of their own: every state
    // is marked, so marking in any composition comes from the plant side.
    Automaton agent(plant.alphabet());
    std::vector<StateId> remap(graph.beliefs.size(), kNoState);
    // Names follow the member sets of the pruned plant.
    for (StateId b = 0; b < graph.beliefs.size(); ++b) {
        if (!graph.alive[b]) continue;
        remap[b] = agent.add_state(belief_name(pruned, graph.beliefs[b]), true);
    }
    agent.set_initial(remap[graph.initial]);
    for (StateId b = 0; b < graph.beliefs.size(); ++b) {
        if (!graph.alive[b]) continue;
        for (const auto& [eid, dst] : graph.moves[b])
            if (graph.alive[dst]) agent.add_transition(remap[b], pruned.event(eid), remap[dst]);
    }
    // Contract totalization: unobservable events self-loop everywhere, and an
    // uncontrollable observable event with no consistent estimate update gets
    // a self-loop (the plant cannot fire it there).
    for (StateId b = 0; b < graph.beliefs.size(); ++b) {
        if (!graph.alive[b]) continue;
        StateId s = remap[b];
        for (const auto& e : plant.alphabet()) {
            if (constraint.controllable.count(e)) continue;
            if (!agent.successor(s, e)) agent.add_transition(s, e, s);
        }
    }
    Automaton trimmed = accessible(agent);

    AgentAutomaton result{std::move(trimmed), constraint};
    auto report = validate_agent(plant, requirement, result, goal);
    if (!report.all_ok())
        throw std::logic_error("synthesis post-validation failed: " + report.detail);
    outcome.agent = std::move(result);
    return outcome;
}

}  // namespace opasyn
