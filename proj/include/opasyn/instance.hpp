// instance.hpp — synthesis problem declaration and derived alphabets
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "opasyn/automaton.hpp"

namespace opasyn {

/// Authority and perception of one agent: what it may disable and what it
/// observes. Every agent built here satisfies controllable ⊆ observable.
struct ControlConstraint {
    EventSet controllable;
    EventSet observable;
};

struct Sensor {
    int id = 0;
    std::set<std::string> events;
};

struct SatBounds {
    int k0 = 1;
    int l0 = 1;
    int k_max = 8;
    int l_max = 8;
    int horizon_cap = 10000;
};

class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

  private:
    std::vector<std::string> violations_;
};

/// Everything a synthesis run is parameterized by. Immutable after load.
struct ProblemInstance {
    // Base alphabet and its partitions.
    std::set<std::string> sigma;
    std::set<std::string> sigma_c;
    std::set<std::string> sigma_o;

    // Plant over plain events, with distinguished state sets.
    Automaton plant;
    std::set<std::string> secret_states;
    std::set<std::string> avoid_states;

    std::vector<Sensor> sensors;
    std::set<int> maskable;

    std::set<std::string> editor_observable;  // Σ_o,E
    std::set<std::string> editable;           // Σ_s,E
    int edit_bound = 1;                       // U

    std::set<std::string> intruder_observable;        // Σ_o,I
    std::set<std::set<std::string>> intruder_commands;  // Γ_o as member sets

    SatBounds sat;

    // --- derived sets -------------------------------------------------
    std::set<std::string> sigma_uc() const;
    std::set<std::string> sigma_uo() const;
    /// Σ_o,M: events covered by maskable sensors.
    std::set<std::string> sigma_om() const;
    std::vector<int> maskable_indices() const;

    /// Γ = 2^{Σ_c} − {∅} in canonical command order.
    std::vector<Event> gamma() const;
    EventSet gamma_set() const;
    EventSet gamma_o_set() const;

    /// Toggle events of the maskable sensors.
    EventSet delta_m_on() const;
    EventSet delta_m_off() const;

    /// Plant alphabet after the on/off relabelling.
    EventSet relabeled_plant_alphabet() const;
    /// Σ_b: the full closed-loop alphabet (also Σ_m = Σ_e = Σ_s = Σ_sc = Σ_ec).
    EventSet sigma_b() const;

    /// Σ_8: what the supervisor can observe of the altered information flow.
    EventSet sigma8() const;

    ControlConstraint mask_constraint_pair() const;        // C_m
    ControlConstraint edit_constraint_pair() const;        // C_e
    ControlConstraint supervisor_constraint_pair() const;  // C_s
    ControlConstraint ensemble_constraint_pair() const;    // C_me
};

std::vector<std::string> validate_instance_json(const nlohmann::json& j);
/// Parses and validates; throws ValidationError listing every violation.
ProblemInstance load_instance(const nlohmann::json& j);
ProblemInstance load_instance_file(const std::string& path);
nlohmann::json instance_to_json(const ProblemInstance& inst);

}  // namespace opasyn
