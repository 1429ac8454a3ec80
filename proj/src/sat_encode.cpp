#include "opasyn/sat_encode.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "opasyn/ops.hpp"

namespace opasyn {

namespace {

enum class Cls { Ctrl, UncObs, UncUnobs };

std::vector<Cls> classify(const std::vector<Event>& events, const ControlConstraint& c) {
    std::vector<Cls> out(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) {
        bool ctrl = c.controllable.count(events[e]) > 0;
        bool obs = c.observable.count(events[e]) > 0;
        if (ctrl && !obs)
            throw std::invalid_argument("constraint has controllable event outside observable: " +
                                        events[e].canonical());
        out[e] = ctrl ? Cls::Ctrl : (obs ? Cls::UncObs : Cls::UncUnobs);
    }
    return out;
}

// Value of a transition variable after constant folding: +1 true, -1 false,
// 0 free. `bound` is k (or l); the dump state has index bound.
int folded(Cls cls, int i, int j, int bound) {
    if (i == bound) return j == bound ? +1 : -1;  // dump row self-loops
    switch (cls) {
        case Cls::UncUnobs:
            return j == i ? +1 : -1;  // forced self-loop
        case Cls::UncObs:
            return j == bound ? -1 : 0;  // never dumps
        case Cls::Ctrl:
            return 0;
    }
    return 0;
}

}  // namespace

int CnfInstance::x_trans(int i, std::size_t event, int j) const {
    return 1 + (i * static_cast<int>(alphabet.size()) + static_cast<int>(event)) * (k + 1) + j;
}
int CnfInstance::x_marked(int i) const {
    return (k + 1) * (k + 1) * static_cast<int>(alphabet.size()) + 1 + i;
}
int CnfInstance::y_trans(int i, std::size_t event, int j) const {
    return static_cast<int>(x_count) + 1 +
           (i * static_cast<int>(alphabet.size()) + static_cast<int>(event)) * (l + 1) + j;
}
int CnfInstance::y_marked(int i) const {
    return static_cast<int>(x_count) + (l + 1) * (l + 1) * static_cast<int>(alphabet.size()) + 1 +
           i;
}
int CnfInstance::z_var(int i, int j, std::size_t me_state) const {
    return static_cast<int>(x_count + y_count) + 1 +
           (i * (l + 1) + j) * static_cast<int>(me_states + 1) + static_cast<int>(me_state);
}
int CnfInstance::r_var(int t, int i, int j, std::size_t plant_state) const {
    return static_cast<int>(x_count + y_count + z_count) + 1 +
           ((t * k + i) * l + j) * static_cast<int>(plant_states) +
           static_cast<int>(plant_state);
}

nlohmann::json CnfInstance::variable_map() const {
    nlohmann::json m = nlohmann::json::object();
    const int n = static_cast<int>(alphabet.size());
    for (int i = 0; i <= k; ++i)
        for (int e = 0; e < n; ++e)
            for (int j = 0; j <= k; ++j)
                m["tM:" + std::to_string(i) + ":" + alphabet[e].canonical() + ":" +
                  std::to_string(j)] = x_trans(i, e, j);
    for (int i = 0; i < k; ++i) m["mM:" + std::to_string(i)] = x_marked(i);
    for (int i = 0; i <= l; ++i)
        for (int e = 0; e < n; ++e)
            for (int j = 0; j <= l; ++j)
                m["tE:" + std::to_string(i) + ":" + alphabet[e].canonical() + ":" +
                  std::to_string(j)] = y_trans(i, e, j);
    for (int i = 0; i < l; ++i) m["mE:" + std::to_string(i)] = y_marked(i);
    for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= l; ++j)
            for (std::size_t q = 0; q <= me_states; ++q)
                m["z:" + std::to_string(i) + ":" + std::to_string(j) + ":" + std::to_string(q)] =
                    z_var(i, j, q);
    for (int t = 0; t < horizon; ++t)
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < l; ++j)
                for (std::size_t q = 0; q < plant_states; ++q)
                    m["r:" + std::to_string(t) + ":" + std::to_string(i) + ":" +
                      std::to_string(j) + ":" + std::to_string(q)] = r_var(t, i, j, q);
    for (long a = 0; a < aux_count; ++a)
        m["aux:" + std::to_string(a)] = num_named() + 1 + a;
    return m;
}

CnfInstance encode(const Automaton& me, const ControlConstraint& c_m,
                   const ControlConstraint& c_e, const Automaton& product_plant, int k, int l,
                   int horizon, ClauseSink& sink) {
    if (k < 1 || l < 1) throw std::invalid_argument("state bounds must be at least 1");
    if (me.alphabet() != product_plant.alphabet())
        throw std::invalid_argument("ensemble and composed plant disagree on the alphabet");
    if (!me.has_initial() || !product_plant.has_initial())
        throw std::invalid_argument("encode needs initial states");
    long t_full = static_cast<long>(k) * l * static_cast<long>(product_plant.num_states());
    if (horizon < 1 || horizon > t_full)
        throw std::invalid_argument("horizon out of range [1, k*l*|plant|]");

    CnfInstance cnf;
    cnf.k = k;
    cnf.l = l;
    cnf.horizon = horizon;
    cnf.me_states = me.num_states();
    cnf.plant_states = product_plant.num_states();
    cnf.alphabet = me.events();
    cnf.c_m = c_m;
    cnf.c_e = c_e;

    const int n_events = static_cast<int>(cnf.alphabet.size());
    cnf.x_count = static_cast<long>(k + 1) * (k + 1) * n_events + k;
    cnf.y_count = static_cast<long>(l + 1) * (l + 1) * n_events + l;
    cnf.z_count = static_cast<long>(k + 1) * (l + 1) * (cnf.me_states + 1);
    cnf.r_count = static_cast<long>(k) * l * cnf.plant_states * horizon;

    auto cm_cls = classify(cnf.alphabet, c_m);
    auto ce_cls = classify(cnf.alphabet, c_e);

    long clause_count = 0;
    auto emit = [&](const std::vector<int>& clause) {
        sink.add(clause);
        clause_count++;
    };

    // --- Constraints 1-10: the transition structure of both agents -------
    auto emit_agent = [&](int bound, const std::vector<Cls>& cls, auto var) {
        for (int e = 0; e < n_events; ++e) {
            // Dump-row folds (Constraints 1/2 plus the forced off-dump values).
            for (int j = 0; j <= bound; ++j)
                emit({j == bound ? var(bound, e, bound) : -var(bound, e, j)});
            for (int i = 0; i < bound; ++i) {
                switch (cls[e]) {
                    case Cls::UncUnobs:
                        // Folded: self-loop, everything else false (7+8+3).
                        for (int j = 0; j <= bound; ++j)
                            emit({j == i ? var(i, e, j) : -var(i, e, j)});
                        break;
                    case Cls::UncObs: {
                        emit({-var(i, e, bound)});  // never into the dump (3+7)
                        std::vector<int> total;
                        for (int j = 0; j < bound; ++j) total.push_back(var(i, e, j));
                        emit(total);  // Constraint 7/9
                        for (int j = 0; j < bound; ++j)
                            for (int h = j + 1; h < bound; ++h)
                                emit({-var(i, e, j), -var(i, e, h)});  // Constraint 3/4
                        break;
                    }
                    case Cls::Ctrl: {
                        std::vector<int> total;
                        for (int j = 0; j <= bound; ++j) total.push_back(var(i, e, j));
                        emit(total);  // Constraint 5/6
                        for (int j = 0; j <= bound; ++j)
                            for (int h = j + 1; h <= bound; ++h)
                                emit({-var(i, e, j), -var(i, e, h)});  // Constraint 3/4
                        break;
                    }
                }
            }
        }
    };
    emit_agent(k, cm_cls, [&](int i, int e, int j) { return cnf.x_trans(i, e, j); });
    emit_agent(l, ce_cls, [&](int i, int e, int j) { return cnf.y_trans(i, e, j); });

    auto xval = [&](int i, int e, int j) { return folded(cm_cls[e], i, j, k); };
    auto yval = [&](int i, int e, int j) { return folded(ce_cls[e], i, j, l); };

    // --- Constraints 11-14: inductive invariant over M‖E‖ME-completion ---
    const std::size_t me_dump = cnf.me_states;
    emit({cnf.z_var(0, 0, me.initial())});  // Constraint 11

    for (std::size_t q = 0; q <= cnf.me_states; ++q) {
        for (int e = 0; e < n_events; ++e) {
            std::size_t q_next;
            if (q == me_dump) {
                q_next = me_dump;
            } else {
                auto succ = me.successor(static_cast<StateId>(q), static_cast<EventId>(e));
                q_next = succ ? *succ : me_dump;
            }
            for (int i = 0; i <= k; ++i)
                for (int i2 = 0; i2 <= k; ++i2) {
                    int xv = xval(i, e, i2);
                    if (xv < 0) continue;
                    for (int j = 0; j <= l; ++j)
                        for (int j2 = 0; j2 <= l; ++j2) {
                            int yv = yval(j, e, j2);
                            if (yv < 0) continue;
                            std::vector<int> clause;
                            clause.push_back(-cnf.z_var(i, j, q));
                            if (xv == 0) clause.push_back(-cnf.x_trans(i, e, i2));
                            if (yv == 0) clause.push_back(-cnf.y_trans(j, e, j2));
                            clause.push_back(cnf.z_var(i2, j2, q_next));
                            emit(clause);  // Constraint 12
                        }
                }
        }
    }
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < l; ++j) emit({-cnf.z_var(i, j, me_dump)});  // Constraint 13
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < l; ++j)
            for (std::size_t q = 0; q < cnf.me_states; ++q) {
                if (me.is_marked(static_cast<StateId>(q))) continue;
                emit({-cnf.x_marked(i), -cnf.y_marked(j), -cnf.z_var(i, j, q)});  // Constraint 14
            }

    // --- Constraints 15-18: bounded reachability of a marked state -------
    const Automaton& plant = product_plant;
    const std::size_t nq = cnf.plant_states;

    // BFS depths bound which r variables can hold at each step.
    std::vector<int> depth(nq, -1);
    {
        std::deque<StateId> work{plant.initial()};
        depth[plant.initial()] = 0;
        while (!work.empty()) {
            StateId s = work.front();
            work.pop_front();
            for (const auto& [eid, dst] : plant.transitions_from(s))
                if (depth[dst] < 0) {
                    depth[dst] = depth[s] + 1;
                    work.push_back(dst);
                }
        }
    }
    std::vector<std::vector<std::pair<StateId, EventId>>> in_edges(nq);
    for (StateId s = 0; s < nq; ++s)
        for (const auto& [eid, dst] : plant.transitions_from(s)) in_edges[dst].push_back({s, eid});

    auto r_holds = [&](int t, StateId q) { return depth[q] >= 0 && depth[q] <= t; };

    // Constraints 15/16: the base case is exactly the initial product state.
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < l; ++j)
            for (std::size_t q = 0; q < nq; ++q) {
                bool is_init = i == 0 && j == 0 && q == plant.initial();
                emit({is_init ? cnf.r_var(0, i, j, q) : -cnf.r_var(0, i, j, q)});
            }
    // Depth folds: states provably out of reach within t steps.
    for (int t = 1; t < horizon; ++t)
        for (std::size_t q = 0; q < nq; ++q) {
            if (r_holds(t, q)) continue;
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < l; ++j) emit({-cnf.r_var(t, i, j, q)});
        }

    long aux = 0;
    auto new_aux = [&]() {
        return static_cast<int>(cnf.num_named() + 1 + aux++);
    };

    // Constraint 17: one-step unrolling, both directions.
    for (int t = 0; t + 1 < horizon; ++t) {
        for (std::size_t q2 = 0; q2 < nq; ++q2) {
            if (!r_holds(t + 1, q2)) continue;
            for (int i2 = 0; i2 < k; ++i2)
                for (int j2 = 0; j2 < l; ++j2) {
                    int target = cnf.r_var(t + 1, i2, j2, q2);
                    std::vector<int> big{-target};
                    if (r_holds(t, q2)) {
                        int same = cnf.r_var(t, i2, j2, q2);
                        emit({-same, target});  // stuttering direction
                        big.push_back(same);
                    }
                    for (const auto& [q, e] : in_edges[q2]) {
                        if (!r_holds(t, q)) continue;
                        for (int i = 0; i < k; ++i) {
                            int xv = xval(i, e, i2);
                            if (xv < 0) continue;
                            for (int j = 0; j < l; ++j) {
                                int yv = yval(j, e, j2);
                                if (yv < 0) continue;
                                int r_pre = cnf.r_var(t, i, j, q);
                                std::vector<int> step{-r_pre};
                                if (xv == 0) step.push_back(-cnf.x_trans(i, e, i2));
                                if (yv == 0) step.push_back(-cnf.y_trans(j, e, j2));
                                step.push_back(target);
                                emit(step);  // forward direction
                                if (step.size() == 2) {
                                    big.push_back(r_pre);
                                } else {
                                    int a = new_aux();
                                    emit({-a, r_pre});
                                    if (xv == 0) emit({-a, cnf.x_trans(i, e, i2)});
                                    if (yv == 0) emit({-a, cnf.y_trans(j, e, j2)});
                                    big.push_back(a);
                                }
                            }
                        }
                    }
                    emit(big);
                }
        }
    }

    // Constraint 18: some jointly marked state is reached.
    std::vector<int> final_clause;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < l; ++j) {
            std::vector<int> reach;
            for (int t = 0; t < horizon; ++t)
                for (StateId q = 0; q < nq; ++q)
                    if (plant.is_marked(q) && r_holds(t, q))
                        reach.push_back(cnf.r_var(t, i, j, q));
            if (reach.empty()) continue;
            int g = new_aux();
            emit({-g, cnf.x_marked(i)});
            emit({-g, cnf.y_marked(j)});
            reach.insert(reach.begin(), -g);
            emit(reach);
            final_clause.push_back(g);
        }
    emit(final_clause);  // empty when no marked state is in range: unsatisfiable

    cnf.aux_count = aux;
    cnf.clause_count = clause_count;
    return cnf;
}

CnfInstance encode(const Automaton& me, const ControlConstraint& c_m,
                   const ControlConstraint& c_e, const Automaton& product_plant, int k, int l,
                   int horizon, std::vector<std::vector<int>>& clauses_out) {
    VectorSink sink;
    CnfInstance cnf = encode(me, c_m, c_e, product_plant, k, l, horizon, sink);
    clauses_out = std::move(sink.clauses);
    return cnf;
}

}  // namespace opasyn
