// decompose.hpp — ensemble decomposition into mask and editor via SAT
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opasyn/sat_encode.hpp"
#include "opasyn/synthesis.hpp"

namespace opasyn {

enum class SolverMode { Internal, Dimacs };

/// A previously extracted model to rule out, as a blocking clause over the
/// mask/editor variable blocks of the (k, l) layout it was produced at.
struct BlockedModel {
    int k = 0;
    int l = 0;
    std::vector<int> clause;
};

struct DecomposeOptions {
    SolverMode mode = SolverMode::Internal;
    std::string dimacs_path;  // CNF output (Dimacs mode)
    std::string model_path;   // model to ingest (Dimacs mode; empty = emit only)
    std::vector<BlockedModel> blocked;
};

struct DecomposeAttempt {
    int k = 0;
    int l = 0;
    int horizon = 0;
    long vars = 0;
    long clauses = 0;
    double seconds = 0.0;
    std::string outcome;  // "sat", "unsat", "emitted"
};

struct DecomposeResult {
    std::optional<std::pair<AgentAutomaton, AgentAutomaton>> agents;  // (M, E)
    std::vector<DecomposeAttempt> attempts;
    std::string reason;  // set when agents is empty
    int k_used = 0;
    int l_used = 0;
    int horizon_used = 0;
    /// Blocking clause for the returned model (for retry requests).
    BlockedModel model_block;
};

/// Builds the mask and editor automata encoded by a satisfying assignment.
/// Throws std::logic_error when the model violates the determinism clauses
/// (an encoder bug), and std::runtime_error for externally supplied models
/// that fail the same checks.
std::pair<AgentAutomaton, AgentAutomaton> extract(const std::vector<bool>& model,
                                                  const CnfInstance& cnf,
                                                  bool external = false);

/// Independent checks behind the decomposition theorem: language and marked
/// language inclusion in the ensemble, and marker-reachability of the
/// composed plant with both agents attached.
bool decomposition_valid(const AgentAutomaton& mask, const AgentAutomaton& editor,
                         const Automaton& me, const Automaton& product_plant,
                         std::string* why = nullptr);

/// Iterates (k, l) from the configured start, escalating the reachability
/// horizon before the bounds, until a validated pair is extracted or the
/// bounds are exhausted.
DecomposeResult decompose(const Automaton& me, const ControlConstraint& c_m,
                          const ControlConstraint& c_e, const Automaton& product_plant,
                          const SatBounds& bounds, const DecomposeOptions& options = {});

/// Accessible and coaccessible part (the encoding is invariant under it).
Automaton trim(const Automaton& a);

}  // namespace opasyn
