#include "opasyn/decompose.hpp"

#include <chrono>
#include <deque>
#include <map>
#include <tuple>

#include "opasyn/ops.hpp"
#include "opasyn/sat_solver.hpp"
#include "opasyn/serialize.hpp"

namespace opasyn {

namespace {

class SolverSink : public ClauseSink {
  public:
    explicit SolverSink(SatSolver& solver) : solver_(solver) {}
    void add(const std::vector<int>& clause) override { solver_.add_clause(clause); }

  private:
    SatSolver& solver_;
};

class DimacsSink : public ClauseSink {
  public:
    void add(const std::vector<int>& clause) override { clauses.push_back(clause); }
    std::vector<std::vector<int>> clauses;
};

Automaton build_agent(const std::vector<bool>& model, const CnfInstance& cnf, bool is_mask,
                      bool external) {
    const int bound = is_mask ? cnf.k : cnf.l;
    const char prefix = is_mask ? 'm' : 'e';
    EventSet alphabet(cnf.alphabet.begin(), cnf.alphabet.end());
    Automaton a(alphabet);
    for (int i = 0; i < bound; ++i) {
        int mvar = is_mask ? cnf.x_marked(i) : cnf.y_marked(i);
        a.add_state(std::string(1, prefix) + std::to_string(i), model[mvar]);
    }
    a.set_initial(0);
    for (int i = 0; i < bound; ++i) {
        for (std::size_t e = 0; e < cnf.alphabet.size(); ++e) {
            int target = -1;
            for (int j = 0; j <= bound; ++j) {
                int var = is_mask ? cnf.x_trans(i, e, j) : cnf.y_trans(i, e, j);
                if (!model[var]) continue;
                if (target >= 0) {
                    std::string msg = "model assigns two successors to (" +
                                      std::to_string(i) + ", " + cnf.alphabet[e].canonical() +
                                      ")";
                    if (external) throw std::runtime_error("external model invalid: " + msg);
                    throw std::logic_error("encoder bug: " + msg);
                }
                target = j;
            }
            if (target >= 0 && target < bound)  // dump targets recover partiality
                a.add_transition(static_cast<StateId>(i), cnf.alphabet[e],
                                 static_cast<StateId>(target));
        }
    }
    return a;
}

}  // namespace

std::pair<AgentAutomaton, AgentAutomaton> extract(const std::vector<bool>& model,
                                                  const CnfInstance& cnf, bool external) {
    AgentAutomaton mask{build_agent(model, cnf, true, external), cnf.c_m};
    AgentAutomaton editor{build_agent(model, cnf, false, external), cnf.c_e};
    for (const auto* agent : {&mask, &editor}) {
        std::string detail;
        if (!agent_contract_holds(agent->automaton, agent->constraint, &detail)) {
            if (external)
                throw std::runtime_error("external model breaks the agent contract: " + detail);
            throw std::logic_error("encoder bug: extracted agent breaks contract: " + detail);
        }
    }
    return {std::move(mask), std::move(editor)};
}

bool decomposition_valid(const AgentAutomaton& mask, const AgentAutomaton& editor,
                         const Automaton& me, const Automaton& product_plant, std::string* why) {
    // Deliberately avoids sync_product: an explicit breadth-first walk keeps
    // this check independent of the composition code it guards.
    auto fail = [&](const std::string& message) {
        if (why) *why = message;
        return false;
    };
    const Automaton& m = mask.automaton;
    const Automaton& e = editor.automaton;
    if (m.alphabet() != e.alphabet() || m.alphabet() != me.alphabet() ||
        m.alphabet() != product_plant.alphabet())
        return fail("agents, ensemble and plant must share one alphabet");

    const std::size_t n_events = m.events().size();
    const StateId me_dump = static_cast<StateId>(me.num_states());
    Automaton me_bar = completion(me);

    {
        // Joint walk of M, E against the completed ensemble: hitting the dump
        // while both agents are alive breaks L(M‖E) ⊆ L(ME); a jointly marked
        // pair at an unmarked ensemble state breaks the marked inclusion.
        std::map<std::tuple<StateId, StateId, StateId>, bool> seen;
        std::deque<std::tuple<StateId, StateId, StateId>> work;
        auto push = [&](StateId a, StateId b, StateId c) {
            auto key = std::make_tuple(a, b, c);
            if (seen.emplace(key, true).second) work.push_back(key);
        };
        push(m.initial(), e.initial(), me_bar.initial());
        while (!work.empty()) {
            auto [ms, es, bs] = work.front();
            work.pop_front();
            if (bs == me_dump)
                return fail("language inclusion fails: joint run leaves the ensemble");
            if (m.is_marked(ms) && e.is_marked(es) && !me_bar.is_marked(bs))
                return fail("marked-language inclusion fails at ensemble state " +
                            me_bar.state_name(bs));
            for (EventId ev = 0; ev < n_events; ++ev) {
                auto mn = m.successor(ms, ev);
                if (!mn) continue;
                auto en = e.successor(es, ev);
                if (!en) continue;
                push(*mn, *en, *me_bar.successor(bs, ev));
            }
        }
    }

    {
        // Marker-reachability of plant ‖ M ‖ E.
        std::map<std::tuple<StateId, StateId, StateId>, bool> seen;
        std::deque<std::tuple<StateId, StateId, StateId>> work;
        auto push = [&](StateId a, StateId b, StateId c) {
            auto key = std::make_tuple(a, b, c);
            if (seen.emplace(key, true).second) work.push_back(key);
        };
        push(product_plant.initial(), m.initial(), e.initial());
        while (!work.empty()) {
            auto [ps, ms, es] = work.front();
            work.pop_front();
            if (product_plant.is_marked(ps) && m.is_marked(ms) && e.is_marked(es)) return true;
            for (EventId ev = 0; ev < n_events; ++ev) {
                auto pn = product_plant.successor(ps, ev);
                if (!pn) continue;
                auto mn = m.successor(ms, ev);
                if (!mn) continue;
                auto en = e.successor(es, ev);
                if (!en) continue;
                push(*pn, *mn, *en);
            }
        }
        return fail("composed plant with both agents is not marker-reachable");
    }
}

Automaton trim(const Automaton& a) {
    Automaton acc = accessible(a);
    auto co = coaccessible_states(acc);
    return restrict_states(acc, co);
}

DecomposeResult decompose(const Automaton& me, const ControlConstraint& c_m,
                          const ControlConstraint& c_e, const Automaton& product_plant,
                          const SatBounds& bounds, const DecomposeOptions& options) {
    DecomposeResult result;
    Automaton plant_trim = trim(product_plant);
    if (!plant_trim.has_initial() || plant_trim.num_states() == 0) {
        result.reason = "composed plant has no marker-reachable part";
        return result;
    }

    // Depth of the nearest marked state seeds the horizon schedule.
    int marked_depth = -1;
    {
        std::deque<std::pair<StateId, int>> work{{plant_trim.initial(), 0}};
        std::vector<bool> seen(plant_trim.num_states(), false);
        seen[plant_trim.initial()] = true;
        while (!work.empty()) {
            auto [s, d] = work.front();
            work.pop_front();
            if (plant_trim.is_marked(s)) {
                marked_depth = d;
                break;
            }
            for (const auto& [eid, dst] : plant_trim.transitions_from(s))
                if (!seen[dst]) {
                    seen[dst] = true;
                    work.push_back({dst, d + 1});
                }
        }
    }
    if (marked_depth < 0) {
        result.reason = "composed plant has no reachable marked state";
        return result;
    }

    for (int k = bounds.k0, l = bounds.l0; k <= bounds.k_max && l <= bounds.l_max; ++k, ++l) {
        long t_full = static_cast<long>(k) * l * static_cast<long>(plant_trim.num_states());
        long t_limit = std::min<long>(t_full, bounds.horizon_cap);
        long horizon = std::min<long>(t_limit, std::max<long>(8, marked_depth + 2));
        while (true) {
            auto started = std::chrono::steady_clock::now();
            DecomposeAttempt attempt;
            attempt.k = k;
            attempt.l = l;
            attempt.horizon = static_cast<int>(horizon);

            std::optional<std::vector<bool>> model;
            CnfInstance cnf;
            if (options.mode == SolverMode::Internal) {
                SatSolver solver;
                SolverSink sink(solver);
                cnf = encode(me, c_m, c_e, plant_trim, k, l, static_cast<int>(horizon), sink);
                solver.ensure_vars(static_cast<int>(cnf.num_vars()));
                for (const auto& blocked : options.blocked)
                    if (blocked.k == k && blocked.l == l) solver.add_clause(blocked.clause);
                model = solver.solve();
            } else {
                DimacsSink sink;
                cnf = encode(me, c_m, c_e, plant_trim, k, l, static_cast<int>(horizon), sink);
                for (const auto& blocked : options.blocked)
                    if (blocked.k == k && blocked.l == l) sink.clauses.push_back(blocked.clause);
                write_dimacs(options.dimacs_path, static_cast<int>(cnf.num_vars()), sink.clauses);
                write_text_file(options.dimacs_path + ".map.json", cnf.variable_map().dump());
                if (options.model_path.empty()) {
                    attempt.vars = cnf.num_vars();
                    attempt.clauses = cnf.clause_count;
                    attempt.outcome = "emitted";
                    result.attempts.push_back(attempt);
                    result.reason = "DIMACS emitted; supply a model file to finish";
                    result.k_used = k;
                    result.l_used = l;
                    result.horizon_used = static_cast<int>(horizon);
                    return result;
                }
                model = read_model_file(options.model_path, static_cast<int>(cnf.num_vars()));
            }

            attempt.vars = cnf.num_vars();
            attempt.clauses = cnf.clause_count;
            attempt.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                    .count();

            if (model) {
                attempt.outcome = "sat";
                result.attempts.push_back(attempt);
                auto agents = extract(*model, cnf, options.mode == SolverMode::Dimacs);
                std::string why;
                if (!decomposition_valid(agents.first, agents.second, me, plant_trim, &why)) {
                    if (options.mode == SolverMode::Dimacs)
                        throw std::runtime_error("external model fails validation: " + why);
                    throw std::logic_error("decomposition oracle rejected a model: " + why);
                }
                result.k_used = k;
                result.l_used = l;
                result.horizon_used = static_cast<int>(horizon);
                // Record the blocking clause before moving the agents out.
                result.model_block.k = k;
                result.model_block.l = l;
                for (int i = 0; i < k; ++i)
                    for (std::size_t e = 0; e < cnf.alphabet.size(); ++e)
                        for (int j = 0; j <= k; ++j) {
                            int v = cnf.x_trans(i, e, j);
                            result.model_block.clause.push_back((*model)[v] ? -v : v);
                        }
                for (int i = 0; i < l; ++i)
                    for (std::size_t e = 0; e < cnf.alphabet.size(); ++e)
                        for (int j = 0; j <= l; ++j) {
                            int v = cnf.y_trans(i, e, j);
                            result.model_block.clause.push_back((*model)[v] ? -v : v);
                        }
                result.agents = std::move(agents);
                return result;
            }

            attempt.outcome = "unsat";
            result.attempts.push_back(attempt);
            if (horizon < t_limit) {
                horizon = std::min(t_limit, horizon * 2);
                continue;  // a longer unrolling may still find the witness
            }
            break;  // exhausted the horizon at these bounds
        }
    }
    result.reason = "bounds exhausted without a satisfiable decomposition";
    return result;
}

}  // namespace opasyn
