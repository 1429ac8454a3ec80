// pipeline.hpp — end-to-end synthesis procedure and closed-loop verification
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opasyn/components.hpp"
#include "opasyn/decompose.hpp"
#include "opasyn/synthesis.hpp"

namespace opasyn {

struct StepDiagnostics {
    std::string name;
    std::size_t states = 0;
    std::size_t transitions = 0;
    double seconds = 0.0;
};

struct PipelineOptions {
    std::optional<int> k0, l0, k_max, l_max, horizon_cap;
    SolverMode solver = SolverMode::Internal;
    std::string dimacs_path;
    std::string model_path;
    int retry_decompose = 0;  // extra SAT models to try when the last step fails
    bool explain = false;
    std::size_t state_budget = 1000000;
};

struct VerificationReport {
    bool opacity = false;
    bool covertness = false;
    bool avoid_safety = false;
    bool nonblocking = false;
    std::vector<Event> opacity_witness;
    std::vector<Event> covertness_witness;
    std::vector<Event> avoid_witness;
    std::vector<Event> blocking_witness;
    bool all_pass() const { return opacity && covertness && avoid_safety && nonblocking; }
    nlohmann::json to_json() const;
};

struct SynthesisResult {
    std::optional<AgentAutomaton> ensemble;  // ME
    std::optional<AgentAutomaton> mask;      // M
    std::optional<AgentAutomaton> editor;    // E
    std::optional<AgentAutomaton> supervisor;  // S
    std::optional<VerificationReport> report;
    std::vector<StepDiagnostics> steps;
    std::vector<DecomposeAttempt> sat_attempts;
    int k_used = 0, l_used = 0, horizon_used = 0;
    std::string failure;       // empty on success
    int failure_step = 0;      // Procedure step index of the failure
    std::vector<std::string> explain_trace;
    bool ok() const { return failure.empty(); }
    nlohmann::json manifest() const;
};

/// Runs the incremental synthesis procedure: ensemble synthesis against the
/// sensor-only intruder, SAT decomposition into mask and editor, then
/// supervisor synthesis against the full intruder, with the final closed loop
/// re-verified from scratch.
SynthesisResult run_procedure1(const ProblemInstance& inst, const PipelineOptions& options = {});

/// Independent check of the four closed-loop goals over the full nine-factor
/// composition; failures carry shortest witness traces.
VerificationReport verify_closed_loop(const ProblemInstance& inst, const AgentAutomaton& mask,
                                      const AgentAutomaton& editor,
                                      const AgentAutomaton& supervisor);

struct TraceStep {
    Event event;
    std::vector<std::string> factor_states;  // per factor, after the event
    std::string intruder_estimate;
};

struct SimulationResult {
    bool accepted = false;
    std::vector<std::string> factor_names;
    std::vector<std::string> initial_states;
    std::vector<TraceStep> steps;
    // On rejection: position and offending factor of the first undefined step.
    std::size_t failed_index = 0;
    std::string failed_factor;
    nlohmann::json to_json() const;
};

SimulationResult simulate_trace(const ProblemInstance& inst, const AgentAutomaton& mask,
                                const AgentAutomaton& editor, const AgentAutomaton& supervisor,
                                const std::vector<Event>& trace);

}  // namespace opasyn
