#include "opasyn/components.hpp"

#include <algorithm>
#include <stdexcept>

#include "opasyn/ops.hpp"

namespace opasyn {

const std::string kUnsafeStateName = "unsafe";

namespace {

EventSet plain_minus(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::set<std::string> out;
    for (const auto& e : a)
        if (!b.count(e)) out.insert(e);
    return plains(out);
}

}  // namespace

Automaton build_mask_constraint(const ProblemInstance& inst, int sensor_index) {
    if (!inst.maskable.count(sensor_index))
        throw std::invalid_argument("sensor " + std::to_string(sensor_index) +
                                    " is not maskable");
    const Sensor* sensor = nullptr;
    for (const auto& s : inst.sensors)
        if (s.id == sensor_index) sensor = &s;
    if (!sensor) throw std::invalid_argument("unknown sensor index");

    auto om = inst.sigma_om();
    std::set<std::string> om_minus_i;  // Σ_o,M − Σ_s^i
    for (const auto& e : om)
        if (!sensor->events.count(e)) om_minus_i.insert(e);

    EventSet sigma_sharp = sharps(inst.editable);
    EventSet gamma = inst.gamma_set();

    // Σ_mc,i = (Σ − Σ_o,M) ∪ Σ_o,M^on ∪ Σ_o,M^off ∪ {s_i^on, s_i^off}
    //          ∪ Σ_s,E^# ∪ Γ ∪ {stop, decode}
    EventSet alphabet = plain_minus(inst.sigma, om);
    alphabet = set_union(alphabet, ons(om));
    alphabet = set_union(alphabet, offs(om));
    Event si_on = Event::sensor_on(sensor_index);
    Event si_off = Event::sensor_off(sensor_index);
    alphabet.insert(si_on);
    alphabet.insert(si_off);
    alphabet = set_union(alphabet, sigma_sharp);
    alphabet = set_union(alphabet, gamma);
    alphabet.insert(Event::stop());
    alphabet.insert(Event::decode());

    Automaton mc(alphabet);
    // The paper leaves the marker set of the template open; all states are
    // marked so the constraint imposes no liveness of its own.
    StateId init = mc.add_state("init", true);
    StateId on = mc.add_state("on", true);
    StateId off = mc.add_state("off", true);
    mc.set_initial(init);

    // Rule 1: toggles from the ready state.
    mc.add_transition(init, si_on, on);
    mc.add_transition(init, si_off, off);

    // Σ_1 = Σ_o,M^on ∪ (Σ_o − Σ_o,M): observation while the sensor is on.
    EventSet sigma1 = set_union(ons(om), plain_minus(inst.sigma_o, om));
    for (const auto& e : sigma1) mc.add_transition(on, e, init);

    // Σ_3 = (Σ_o,M − Σ_s^i)^off ∪ Σ_uo ∪ Σ_s,E^# ∪ Γ ∪ {stop, decode}.
    EventSet sigma3 = set_union(offs(om_minus_i), plains(inst.sigma_uo()));
    sigma3 = set_union(sigma3, sigma_sharp);
    sigma3 = set_union(sigma3, gamma);
    sigma3.insert(Event::stop());
    sigma3.insert(Event::decode());
    for (const auto& e : sigma3) mc.add_transition(on, e, on);

    // Σ_2 = (Σ_o,M − Σ_s^i)^on ∪ (Σ_o − Σ_o,M): observation while off.
    EventSet sigma2 = set_union(ons(om_minus_i), plain_minus(inst.sigma_o, om));
    for (const auto& e : sigma2) mc.add_transition(off, e, init);

    // Σ_4 = Σ_o,M^off ∪ Σ_uo ∪ Σ_s,E^# ∪ Γ ∪ {stop, decode}.
    EventSet sigma4 = set_union(offs(om), plains(inst.sigma_uo()));
    sigma4 = set_union(sigma4, sigma_sharp);
    sigma4 = set_union(sigma4, gamma);
    sigma4.insert(Event::stop());
    sigma4.insert(Event::decode());
    for (const auto& e : sigma4) mc.add_transition(off, e, off);

    // Rule 6: edit operations may preempt the toggles of the current round.
    for (const auto& e : sigma_sharp) mc.add_transition(init, e, init);
    mc.add_transition(init, Event::stop(), init);

    return mc;
}

Automaton build_mask_constraints(const ProblemInstance& inst) {
    if (inst.maskable.empty()) {
        // Nothing to mask: a single universal state over the undecorated loop
        // alphabet, self-looping everything.
        EventSet alphabet = plains(inst.sigma);
        alphabet = set_union(alphabet, sharps(inst.editable));
        alphabet = set_union(alphabet, inst.gamma_set());
        alphabet.insert(Event::stop());
        alphabet.insert(Event::decode());
        Automaton mc(alphabet);
        StateId q = mc.add_state("init", true);
        mc.set_initial(q);
        for (const auto& e : alphabet) mc.add_transition(q, e, q);
        return mc;
    }
    std::vector<Automaton> parts;
    for (int i : inst.maskable_indices()) parts.push_back(build_mask_constraint(inst, i));
    std::vector<const Automaton*> ptrs;
    for (const auto& p : parts) ptrs.push_back(&p);
    return sync_product(ptrs);
}

Automaton build_edit_constraints(const ProblemInstance& inst) {
    const int bound = inst.edit_bound;
    if (bound < 1) throw std::invalid_argument("edit bound must be at least 1");

    auto om = inst.sigma_om();
    EventSet alphabet = inst.sigma_b();
    Automaton ec(alphabet);

    StateId init = ec.add_state("init", true);
    StateId hat1 = ec.add_state("hat1", false);
    std::vector<StateId> qn;
    for (int n = 0; n <= bound; ++n) qn.push_back(ec.add_state("q" + std::to_string(n), false));
    ec.set_initial(init);

    // Σ_7 ∪ Γ ∪ {decode}: invisible to the editor, self-loop at init.
    std::set<std::string> plain7;  // Σ − Σ_o,M − Σ_o,E
    for (const auto& e : inst.sigma)
        if (!om.count(e) && !inst.editor_observable.count(e)) plain7.insert(e);
    std::set<std::string> on7;  // Σ_o,M − Σ_o,E
    for (const auto& e : om)
        if (!inst.editor_observable.count(e)) on7.insert(e);
    EventSet rule1 = set_union(plains(plain7), ons(on7));
    rule1 = set_union(rule1, offs(om));
    rule1 = set_union(rule1, inst.delta_m_on());
    rule1 = set_union(rule1, inst.delta_m_off());
    rule1 = set_union(rule1, inst.gamma_set());
    rule1.insert(Event::decode());
    for (const auto& e : rule1) ec.add_transition(init, e, init);

    // Σ_6 = (Σ_s,E − Σ_o,M) ∪ (Σ_o,M ∩ Σ_s,E)^on: editable observation.
    std::set<std::string> editable_plain, editable_on;
    for (const auto& e : inst.editable)
        (om.count(e) ? editable_on : editable_plain).insert(e);
    EventSet sigma6 = set_union(plains(editable_plain), ons(editable_on));
    for (const auto& e : sigma6) ec.add_transition(init, e, qn[0]);

    // Σ_5 = (Σ_o,E − Σ_o,M − Σ_s,E) ∪ (Σ_o,M ∩ (Σ_o,E − Σ_s,E))^on.
    std::set<std::string> hard_plain, hard_on;
    for (const auto& e : inst.editor_observable) {
        if (inst.editable.count(e)) continue;
        (om.count(e) ? hard_on : hard_plain).insert(e);
    }
    EventSet sigma5 = set_union(plains(hard_plain), ons(hard_on));
    for (const auto& e : sigma5) ec.add_transition(init, e, hat1);

    // Rule 4: insertions while the output budget lasts. The hat1 branch needs
    // q2 and therefore only exists for bounds of at least 2.
    EventSet sharp = sharps(inst.editable);
    for (int n = 0; n < bound; ++n)
        for (const auto& e : sharp) ec.add_transition(qn[n], e, qn[n + 1]);
    if (bound >= 2)
        for (const auto& e : sharp) ec.add_transition(hat1, e, qn[2]);

    // Rule 5: stop closes the round.
    for (int n = 0; n <= bound; ++n) ec.add_transition(qn[n], Event::stop(), init);
    ec.add_transition(hat1, Event::stop(), init);

    // Rule 6: mask toggles may interleave right after the observation.
    EventSet toggles = set_union(inst.delta_m_on(), inst.delta_m_off());
    for (const auto& e : toggles) {
        ec.add_transition(qn[0], e, qn[0]);
        ec.add_transition(hat1, e, hat1);
    }
    return ec;
}

Automaton build_supervisor_constraints(const ProblemInstance& inst) {
    EventSet alphabet = inst.sigma_b();
    Automaton sc(alphabet);
    // Written without a marker set: every state marked.
    StateId init = sc.add_state("init", true);
    StateId issue = sc.add_state("issue", true);
    sc.set_initial(init);

    EventSet gamma = inst.gamma_set();
    EventSet sigma8 = inst.sigma8();

    for (const auto& e : alphabet) {
        if (gamma.count(e)) continue;
        sc.add_transition(init, e, init);  // rule 1
    }
    for (const auto& g : gamma) sc.add_transition(init, g, issue);  // rule 2
    for (const auto& e : alphabet) {
        if (gamma.count(e)) continue;  // no second command without observation
        if (sigma8.count(e))
            sc.add_transition(issue, e, init);  // rule 3
        else
            sc.add_transition(issue, e, issue);  // rule 4
    }
    return sc;
}

Automaton build_command_execution(const ProblemInstance& inst) {
    auto om = inst.sigma_om();
    auto uc = inst.sigma_uc();
    auto uo = inst.sigma_uo();

    // Σ_ce = Γ ∪ (Σ − Σ_o,M) ∪ Σ_o,M^on ∪ Σ_o,M^off
    EventSet alphabet = plain_minus(inst.sigma, om);
    alphabet = set_union(alphabet, ons(om));
    alphabet = set_union(alphabet, offs(om));
    alphabet = set_union(alphabet, inst.gamma_set());

    Automaton ce(alphabet);
    StateId init = ce.add_state("idle", true);
    ce.set_initial(init);

    auto gamma = inst.gamma();
    std::vector<StateId> cmd_state;
    for (const auto& g : gamma) cmd_state.push_back(ce.add_state(g.canonical(), false));

    for (std::size_t gi = 0; gi < gamma.size(); ++gi) {
        const auto& members = gamma[gi].command_events();
        StateId qg = cmd_state[gi];
        ce.add_transition(init, gamma[gi], qg);  // rule 1

        std::set<std::string> fireable = members;  // γ ∪ Σ_uc
        fireable.insert(uc.begin(), uc.end());
        for (const auto& s : fireable) {
            bool masked = om.count(s) > 0;
            bool unobservable = uo.count(s) > 0;
            if (masked) {
                // rule 2 (off copy reuses the command), rule 4 (on copy ends it)
                ce.add_transition(qg, Event::off(s), qg);
                ce.add_transition(qg, Event::on(s), init);
            } else if (unobservable) {
                ce.add_transition(qg, Event::plain(s), qg);  // rule 2
            } else {
                ce.add_transition(qg, Event::plain(s), init);  // rule 3
            }
        }
    }

    // Rules 5-6: uncontrollable events fire without a command in use.
    for (const auto& s : uc) {
        if (om.count(s)) {
            ce.add_transition(init, Event::on(s), init);
            ce.add_transition(init, Event::off(s), init);
        } else {
            ce.add_transition(init, Event::plain(s), init);
        }
    }
    return ce;
}

Automaton relabel_plant(const ProblemInstance& inst) {
    auto om = inst.sigma_om();
    Automaton out(inst.relabeled_plant_alphabet());
    const Automaton& g = inst.plant;
    for (StateId s = 0; s < g.num_states(); ++s) out.add_state(g.state_name(s), g.is_marked(s));
    if (g.has_initial()) out.set_initial(g.initial());
    for (StateId s = 0; s < g.num_states(); ++s) {
        for (const auto& [eid, dst] : g.transitions_from(s)) {
            const Event& e = g.event(eid);
            if (om.count(e.base())) {
                out.add_transition(s, Event::on(e.base()), dst);
                out.add_transition(s, Event::off(e.base()), dst);
            } else {
                out.add_transition(s, e, dst);
            }
        }
    }
    return out;
}

namespace {

/// Removes every Σ_o,M^off transition, keeping the remaining structure.
Automaton drop_off_transitions(const Automaton& a) {
    EventSet alphabet;
    for (const auto& e : a.alphabet())
        if (e.kind() != EventKind::Off) alphabet.insert(e);
    Automaton out(alphabet);
    for (StateId s = 0; s < a.num_states(); ++s) out.add_state(a.state_name(s), a.is_marked(s));
    if (a.has_initial()) out.set_initial(a.initial());
    for (StateId s = 0; s < a.num_states(); ++s)
        for (const auto& [eid, dst] : a.transitions_from(s)) {
            const Event& e = a.event(eid);
            if (e.kind() != EventKind::Off) out.add_transition(s, e, dst);
        }
    return out;
}

/// Shared tail of the intruder constructions: estimator relabelling,
/// decode attachment and the absorbing states.
Automaton finish_intruder(const ProblemInstance& inst, const ObserverResult& obs,
                          const std::vector<bool>& member_is_secret, bool with_commands) {
    auto om = inst.sigma_om();

    // Relabel editable observations to their # copies.
    std::map<Event, Event> sharp_map;
    for (const auto& e : inst.editable) {
        if (om.count(e))
            sharp_map.emplace(Event::on(e), Event::sharp(e));
        else
            sharp_map.emplace(Event::plain(e), Event::sharp(e));
    }
    Automaton relabeled = relabel(obs.automaton, sharp_map);

    EventSet alphabet = relabeled.alphabet();
    alphabet.insert(Event::decode());
    if (with_commands) alphabet = set_union(alphabet, inst.gamma_set());

    Automaton out(alphabet);
    for (StateId s = 0; s < relabeled.num_states(); ++s)
        out.add_state(relabeled.state_name(s), relabeled.is_marked(s));
    StateId unsafe = out.add_state(kUnsafeStateName, false);
    out.set_initial(relabeled.initial());
    for (StateId s = 0; s < relabeled.num_states(); ++s)
        for (const auto& [eid, dst] : relabeled.transitions_from(s))
            out.add_transition(s, relabeled.event(eid), dst);

    // decode leaves exactly the nonempty estimates made solely of secrets.
    for (StateId s = 0; s < relabeled.num_states(); ++s) {
        const Belief& members = obs.beliefs[s];
        if (members.empty()) continue;
        bool all_secret = std::all_of(members.begin(), members.end(),
                                      [&](StateId m) { return member_is_secret[m]; });
        if (all_secret) out.add_transition(s, Event::decode(), unsafe);
    }

    // Absorbing self-loops at the empty estimate and the unsafe state.
    std::vector<StateId> absorbing{unsafe};
    if (auto empty_id = out.state_id(kEmptyBeliefName)) absorbing.push_back(*empty_id);
    for (StateId s : absorbing)
        for (const auto& e : alphabet)
            if (e.kind() != EventKind::Decode) out.add_transition(s, e, s);

    return out;
}

}  // namespace

Automaton build_intruder(const ProblemInstance& inst, const Automaton& ce) {
    auto om = inst.sigma_om();

    Automaton g1 = drop_off_transitions(relabel_plant(inst));
    Automaton ce1 = drop_off_transitions(ce);
    Automaton joint = mark_all(sync_product(g1, ce1));

    // Observable: Σ̃_o,I = (Σ_o,I − Σ_o,M) ∪ (Σ_o,I ∩ Σ_o,M)^on ∪ Γ_o.
    EventSet observable;
    for (const auto& e : inst.intruder_observable)
        observable.insert(om.count(e) ? Event::on(e) : Event::plain(e));
    observable = set_union(observable, inst.gamma_o_set());

    ObserverResult obs = observer_full(joint, observable, EmptyBelief::Totalize);

    // Secret membership of (q, q_ce) pairs depends on the plant coordinate.
    std::vector<bool> secret(joint.num_states(), false);
    for (StateId s = 0; s < joint.num_states(); ++s)
        secret[s] = inst.secret_states.count(joint.labels(s)[0]) > 0;

    return finish_intruder(inst, obs, secret, /*with_commands=*/true);
}

Automaton build_weak_intruder(const ProblemInstance& inst) {
    auto om = inst.sigma_om();

    Automaton g1 = mark_all(drop_off_transitions(relabel_plant(inst)));

    EventSet observable;  // Σ̃_o,I − Γ
    for (const auto& e : inst.intruder_observable)
        observable.insert(om.count(e) ? Event::on(e) : Event::plain(e));

    ObserverResult obs = observer_full(g1, observable, EmptyBelief::Totalize);

    std::vector<bool> secret(g1.num_states(), false);
    for (StateId s = 0; s < g1.num_states(); ++s)
        secret[s] = inst.secret_states.count(g1.state_name(s)) > 0;

    return finish_intruder(inst, obs, secret, /*with_commands=*/false);
}

ComponentSet build_components(const ProblemInstance& inst) {
    ComponentSet c;
    c.plant = relabel_plant(inst);
    c.ce = build_command_execution(inst);
    for (int i : inst.maskable_indices())
        c.mask_constraints.push_back(build_mask_constraint(inst, i));
    c.mc = build_mask_constraints(inst);
    c.ec = build_edit_constraints(inst);
    c.sc = build_supervisor_constraints(inst);
    c.intruder = build_intruder(inst, c.ce);
    c.weak_intruder = build_weak_intruder(inst);
    return c;
}

}  // namespace opasyn
