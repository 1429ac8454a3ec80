// synthesis.hpp — partial-observation agent synthesis over belief space
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opasyn/automaton.hpp"
#include "opasyn/instance.hpp"

namespace opasyn {

enum class SynthesisGoal { MarkerReachable, Nonblocking };

/// A synthesized agent together with its authority. Satisfies the agent
/// contract: every uncontrollable event defined at every state, every defined
/// unobservable event a self-loop.
struct AgentAutomaton {
    Automaton automaton;
    ControlConstraint constraint;
};

struct SynthesisOptions {
    bool explain = false;
    std::size_t state_budget = 1000000;  // belief-state cap
};

struct SynthesisOutcome {
    std::optional<AgentAutomaton> agent;
    std::string no_solution_reason;  // set when agent is empty
    std::vector<std::string> explain_trace;
};

/// Raised when exploration exceeds the configured state budget; distinct from
/// a NoSolution outcome.
class BudgetExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Synthesizes an agent over `constraint` such that plant‖agent stays inside
/// the requirement (a state-restriction of the plant) and satisfies the goal.
/// The returned agent is re-validated against the contract, safety and the
/// goal by direct automaton checks; a validation failure is a logic error.
SynthesisOutcome synthesize(const Automaton& plant, const Automaton& requirement,
                            const ControlConstraint& constraint, SynthesisGoal goal,
                            const SynthesisOptions& options = {});

struct ValidationReport {
    bool contract_ok = false;
    bool safety_ok = false;
    bool goal_ok = false;
    std::string detail;
    bool all_ok() const { return contract_ok && safety_ok && goal_ok; }
};

/// Independent check of the agent contract, requirement safety and goal,
/// sharing no state with the synthesis fixpoint.
ValidationReport validate_agent(const Automaton& plant, const Automaton& requirement,
                                const AgentAutomaton& agent, SynthesisGoal goal);

/// Contract part only (used for SAT-extracted agents as well).
bool agent_contract_holds(const Automaton& automaton, const ControlConstraint& constraint,
                          std::string* detail = nullptr);

}  // namespace opasyn
