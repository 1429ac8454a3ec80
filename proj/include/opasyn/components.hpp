// components.hpp — construction of the closed-loop component automata
#pragma once

#include "opasyn/automaton.hpp"
#include "opasyn/instance.hpp"

namespace opasyn {

/// Per-sensor masking template: init state plus on/off states, transitions
/// gating which relabelled copies may fire while the sensor is toggled.
Automaton build_mask_constraint(const ProblemInstance& inst, int sensor_index);

/// Product of the per-sensor templates; a single universal state when no
/// sensor is maskable.
Automaton build_mask_constraints(const ProblemInstance& inst);

/// Edit template: bounded number of # outputs per observation, closed by stop.
Automaton build_edit_constraints(const ProblemInstance& inst);

/// Supervisor template: one command per observation round.
Automaton build_supervisor_constraints(const ProblemInstance& inst);

/// Command lifecycle: from receipt of a command to the execution of an event.
Automaton build_command_execution(const ProblemInstance& inst);

/// Plant with every maskable-sensor event split into on/off copies.
Automaton relabel_plant(const ProblemInstance& inst);

/// Sensor-actuator eavesdropping intruder: estimator over the relabelled
/// plant composed with the command lifecycle, with edit-relabelling, the
/// decode transition, and the absorbing empty-estimate/unsafe states.
Automaton build_intruder(const ProblemInstance& inst, const Automaton& ce);

/// Sensor-only eavesdropping intruder used for the ensemble synthesis step.
Automaton build_weak_intruder(const ProblemInstance& inst);

/// Names of the distinguished intruder states.
extern const std::string kUnsafeStateName;  // secret certified
// The empty estimate reuses kEmptyBeliefName from ops.hpp.

struct ComponentSet {
    Automaton plant;  // relabelled
    Automaton ce;
    std::vector<Automaton> mask_constraints;  // per maskable sensor
    Automaton mc;
    Automaton ec;
    Automaton sc;
    Automaton intruder;
    Automaton weak_intruder;
};

ComponentSet build_components(const ProblemInstance& inst);

}  // namespace opasyn
