#include "opasyn/pipeline.hpp"

#include <chrono>
#include <deque>
#include <sstream>

#include "opasyn/ops.hpp"

namespace opasyn {

using nlohmann::json;

namespace {

double elapsed(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

json events_to_json(const std::vector<Event>& events) {
    json arr = json::array();
    for (const auto& e : events) arr.push_back(e.canonical());
    return arr;
}

/// Coordinate widths of a factor list (a factor that is itself a product
/// contributes one column per flattened label).
std::vector<std::size_t> factor_widths(const std::vector<const Automaton*>& factors) {
    std::vector<std::size_t> widths;
    for (const auto* f : factors) {
        const auto& labels = f->labels(f->initial());
        widths.push_back(labels.empty() ? 1 : labels.size());
    }
    return widths;
}

std::size_t offset_of(const std::vector<std::size_t>& widths, std::size_t factor) {
    std::size_t off = 0;
    for (std::size_t i = 0; i < factor; ++i) off += widths[i];
    return off;
}

}  // namespace

json VerificationReport::to_json() const {
    json j;
    j["opacity"] = opacity;
    j["covertness"] = covertness;
    j["avoid_safety"] = avoid_safety;
    j["nonblocking"] = nonblocking;
    j["all_pass"] = all_pass();
    json witnesses = json::object();
    if (!opacity) witnesses["opacity"] = events_to_json(opacity_witness);
    if (!covertness) witnesses["covertness"] = events_to_json(covertness_witness);
    if (!avoid_safety) witnesses["avoid"] = events_to_json(avoid_witness);
    if (!nonblocking) witnesses["blocking"] = events_to_json(blocking_witness);
    j["witnesses"] = witnesses;
    return j;
}

json SynthesisResult::manifest() const {
    json j;
    j["ok"] = ok();
    if (!ok()) {
        j["failure"] = failure;
        j["failure_step"] = failure_step;
    }
    j["steps"] = json::array();
    for (const auto& s : steps)
        j["steps"].push_back({{"name", s.name},
                              {"states", s.states},
                              {"transitions", s.transitions},
                              {"seconds", s.seconds}});
    j["sat"] = json::array();
    for (const auto& a : sat_attempts)
        j["sat"].push_back({{"k", a.k},
                            {"l", a.l},
                            {"horizon", a.horizon},
                            {"vars", a.vars},
                            {"clauses", a.clauses},
                            {"seconds", a.seconds},
                            {"outcome", a.outcome}});
    if (k_used) {
        j["k"] = k_used;
        j["l"] = l_used;
        j["horizon"] = horizon_used;
    }
    if (report) j["report"] = report->to_json();
    if (!explain_trace.empty()) j["explain"] = explain_trace;
    return j;
}

VerificationReport verify_closed_loop(const ProblemInstance& inst, const AgentAutomaton& mask,
                                      const AgentAutomaton& editor,
                                      const AgentAutomaton& supervisor) {
    ComponentSet c = build_components(inst);
    std::vector<const Automaton*> factors{&c.plant,          &c.ce, &c.mc,
                                          &c.ec,             &c.sc, &c.intruder,
                                          &mask.automaton,   &editor.automaton,
                                          &supervisor.automaton};
    auto widths = factor_widths(factors);
    Automaton loop = sync_product(factors);

    const std::size_t plant_col = offset_of(widths, 0);
    const std::size_t intruder_col = offset_of(widths, 5);

    VerificationReport report;
    report.opacity = true;
    report.covertness = true;
    report.avoid_safety = true;

    auto witness = [&](StateId s) { return shortest_path_to(loop, s).value_or(std::vector<Event>{}); };

    for (StateId s = 0; s < loop.num_states(); ++s) {
        const auto& labels = loop.labels(s);
        if (report.opacity && labels[intruder_col] == kUnsafeStateName) {
            report.opacity = false;
            report.opacity_witness = witness(s);
        }
        if (report.covertness && labels[intruder_col] == kEmptyBeliefName) {
            report.covertness = false;
            report.covertness_witness = witness(s);
        }
        if (report.avoid_safety && inst.avoid_states.count(labels[plant_col])) {
            report.avoid_safety = false;
            report.avoid_witness = witness(s);
        }
    }

    report.nonblocking = is_nonblocking(loop);
    if (!report.nonblocking) {
        auto co = coaccessible_states(loop);
        std::vector<bool> is_co(loop.num_states(), false);
        for (StateId s : co) is_co[s] = true;
        for (StateId s = 0; s < loop.num_states(); ++s) {
            if (!is_co[s]) {
                report.blocking_witness = witness(s);
                break;
            }
        }
    }
    return report;
}

SynthesisResult run_procedure1(const ProblemInstance& inst, const PipelineOptions& options) {
    SynthesisResult result;
    auto note_step = [&](const std::string& name, const Automaton& a, double seconds) {
        result.steps.push_back({name, a.num_states(), a.num_transitions(), seconds});
    };

    auto t0 = std::chrono::steady_clock::now();
    ComponentSet c = build_components(inst);
    note_step("components", c.intruder, elapsed(t0));

    // Steps 1-2 build the sensor-only intruder; Step 3 the ensemble plant.
    t0 = std::chrono::steady_clock::now();
    std::vector<const Automaton*> me_factors{&c.plant, &c.ce, &c.mc, &c.ec, &c.sc,
                                             &c.weak_intruder};
    auto me_widths = factor_widths(me_factors);
    Automaton p_me = sync_product(me_factors);
    note_step("P_ME", p_me, elapsed(t0));

    // Step 4: remove the states where the weak intruder wins.
    const std::size_t iw_col = offset_of(me_widths, 5);
    std::vector<StateId> keep_me;
    for (StateId s = 0; s < p_me.num_states(); ++s) {
        const auto& labels = p_me.labels(s);
        if (labels[iw_col] == kUnsafeStateName || labels[iw_col] == kEmptyBeliefName) continue;
        keep_me.push_back(s);
    }
    Automaton p_me_req = restrict_states(p_me, keep_me);
    note_step("P_ME_requirement", p_me_req, 0.0);

    // Step 5: ensemble synthesis, marker-reachable and safe.
    SynthesisOptions synth_options;
    synth_options.explain = options.explain;
    synth_options.state_budget = options.state_budget;
    t0 = std::chrono::steady_clock::now();
    SynthesisOutcome me_outcome = synthesize(p_me, p_me_req, inst.ensemble_constraint_pair(),
                                             SynthesisGoal::MarkerReachable, synth_options);
    for (auto& line : me_outcome.explain_trace)
        result.explain_trace.push_back("[ME] " + line);
    if (!me_outcome.agent) {
        result.failure = "no ensemble exists: " + me_outcome.no_solution_reason;
        result.failure_step = 5;
        return result;
    }
    result.ensemble = me_outcome.agent;
    note_step("ME", result.ensemble->automaton, elapsed(t0));

    // Step 6: SAT decomposition into a mask and an editor, with the full
    // intruder in the composed plant.
    t0 = std::chrono::steady_clock::now();
    std::vector<const Automaton*> full_factors{&c.plant, &c.ce, &c.mc, &c.ec, &c.sc, &c.intruder};
    Automaton q_tilde = sync_product(full_factors);
    note_step("Q_tilde", q_tilde, elapsed(t0));

    SatBounds bounds = inst.sat;
    if (options.k0) bounds.k0 = *options.k0;
    if (options.l0) bounds.l0 = *options.l0;
    if (options.k_max) bounds.k_max = *options.k_max;
    if (options.l_max) bounds.l_max = *options.l_max;
    if (options.horizon_cap) bounds.horizon_cap = *options.horizon_cap;

    DecomposeOptions dec_options;
    dec_options.mode = options.solver;
    dec_options.dimacs_path = options.dimacs_path;
    dec_options.model_path = options.model_path;

    int retries_left = options.retry_decompose;
    while (true) {
        t0 = std::chrono::steady_clock::now();
        DecomposeResult dec = decompose(result.ensemble->automaton, inst.mask_constraint_pair(),
                                        inst.edit_constraint_pair(), q_tilde, bounds, dec_options);
        result.sat_attempts.insert(result.sat_attempts.end(), dec.attempts.begin(),
                                   dec.attempts.end());
        if (!dec.agents) {
            result.failure = "decomposition failed: " + dec.reason;
            result.failure_step = 6;
            return result;
        }
        result.mask = dec.agents->first;
        result.editor = dec.agents->second;
        result.k_used = dec.k_used;
        result.l_used = dec.l_used;
        result.horizon_used = dec.horizon_used;
        note_step("decompose", result.mask->automaton, elapsed(t0));

        // Step 7: closed loop with the decomposed agents attached.
        t0 = std::chrono::steady_clock::now();
        std::vector<const Automaton*> s_factors{&c.plant, &c.ce,          &c.mc,
                                                &c.ec,    &c.sc,          &c.intruder,
                                                &result.mask->automaton,  &result.editor->automaton};
        auto s_widths = factor_widths(s_factors);
        Automaton p_s = sync_product(s_factors);
        note_step("P_S", p_s, elapsed(t0));

        // Step 8: remove avoid states and the states where the intruder wins.
        const std::size_t plant_col = offset_of(s_widths, 0);
        const std::size_t intr_col = offset_of(s_widths, 5);
        std::vector<StateId> keep_s;
        for (StateId s = 0; s < p_s.num_states(); ++s) {
            const auto& labels = p_s.labels(s);
            if (inst.avoid_states.count(labels[plant_col])) continue;
            if (labels[intr_col] == kUnsafeStateName || labels[intr_col] == kEmptyBeliefName)
                continue;
            keep_s.push_back(s);
        }
        Automaton p_s_req = restrict_states(p_s, keep_s);
        note_step("P_S_requirement", p_s_req, 0.0);

        // Step 9: supervisor synthesis, nonblocking and safe.
        t0 = std::chrono::steady_clock::now();
        SynthesisOutcome s_outcome = synthesize(p_s, p_s_req, inst.supervisor_constraint_pair(),
                                                SynthesisGoal::Nonblocking, synth_options);
        for (auto& line : s_outcome.explain_trace)
            result.explain_trace.push_back("[S] " + line);
        if (s_outcome.agent) {
            result.supervisor = s_outcome.agent;
            note_step("S", result.supervisor->automaton, elapsed(t0));
            break;
        }
        if (retries_left-- > 0) {
            // Ask the solver for a different mask/editor pair and try again.
            dec_options.blocked.push_back(dec.model_block);
            result.mask.reset();
            result.editor.reset();
            continue;
        }
        result.failure = "no supervisor exists: " + s_outcome.no_solution_reason;
        result.failure_step = 9;
        return result;
    }

    t0 = std::chrono::steady_clock::now();
    VerificationReport report =
        verify_closed_loop(inst, *result.mask, *result.editor, *result.supervisor);
    result.report = report;
    result.steps.push_back({"verify", 0, 0, elapsed(t0)});
    if (!report.all_pass())
        throw std::logic_error(
            "procedure succeeded but the closed-loop verification failed; this is a bug");
    return result;
}

json SimulationResult::to_json() const {
    json j;
    j["accepted"] = accepted;
    j["factors"] = factor_names;
    j["initial"] = initial_states;
    j["steps"] = json::array();
    for (const auto& s : steps)
        j["steps"].push_back({{"event", s.event.canonical()},
                              {"states", s.factor_states},
                              {"intruder_estimate", s.intruder_estimate}});
    if (!accepted) {
        j["failed_index"] = failed_index;
        j["failed_factor"] = failed_factor;
    }
    return j;
}

SimulationResult simulate_trace(const ProblemInstance& inst, const AgentAutomaton& mask,
                                const AgentAutomaton& editor, const AgentAutomaton& supervisor,
                                const std::vector<Event>& trace) {
    ComponentSet c = build_components(inst);
    std::vector<const Automaton*> factors{&c.plant,        &c.ce,
                                          &c.mc,           &c.ec,
                                          &c.sc,           &c.intruder,
                                          &mask.automaton, &editor.automaton,
                                          &supervisor.automaton};
    std::vector<std::string> names{"plant", "command_execution", "mask_constraints",
                                   "edit_constraints", "supervisor_constraints", "intruder",
                                   "mask", "editor", "supervisor"};

    SimulationResult sim;
    sim.factor_names = names;
    std::vector<StateId> current;
    for (const auto* f : factors) current.push_back(f->initial());
    for (std::size_t i = 0; i < factors.size(); ++i)
        sim.initial_states.push_back(factors[i]->state_name(current[i]));

    for (std::size_t idx = 0; idx < trace.size(); ++idx) {
        const Event& event = trace[idx];
        std::vector<StateId> next = current;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (!factors[i]->event_id(event)) continue;  // private to others
            auto succ = factors[i]->successor(current[i], event);
            if (!succ) {
                sim.accepted = false;
                sim.failed_index = idx;
                sim.failed_factor = names[i];
                return sim;
            }
            next[i] = *succ;
        }
        current = next;
        TraceStep step;
        step.event = event;
        for (std::size_t i = 0; i < factors.size(); ++i)
            step.factor_states.push_back(factors[i]->state_name(current[i]));
        step.intruder_estimate = c.intruder.state_name(current[5]);
        sim.steps.push_back(std::move(step));
    }
    sim.accepted = true;
    return sim;
}

}  // namespace opasyn
