// sat_encode.hpp — propositional encoding of the mask/editor decomposition
#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "opasyn/automaton.hpp"
#include "opasyn/instance.hpp"

namespace opasyn {

/// Receives clauses as they are generated, so large instances stream straight
/// into the solver or a DIMACS file without a second copy.
class ClauseSink {
  public:
    virtual ~ClauseSink() = default;
    virtual void add(const std::vector<int>& clause) = 0;
};

class VectorSink : public ClauseSink {
  public:
    void add(const std::vector<int>& clause) override { clauses.push_back(clause); }
    std::vector<std::vector<int>> clauses;
};

/// CNF encoding of the decomposition query: named variable blocks X (mask
/// transitions/marking), Y (editor), Z (inductive-invariant membership) and
/// R (bounded reachability), followed by Tseitin auxiliaries.
struct CnfInstance {
    int k = 0;
    int l = 0;
    int horizon = 0;
    std::size_t me_states = 0;     // without the dump state
    std::size_t plant_states = 0;  // |Q~|
    std::vector<Event> alphabet;
    ControlConstraint c_m;
    ControlConstraint c_e;

    // Dense id layout: [1..|X|][|Y|][|Z|][|R|][aux...]
    long x_count = 0;
    long y_count = 0;
    long z_count = 0;
    long r_count = 0;
    long aux_count = 0;
    long clause_count = 0;
    long num_vars() const { return x_count + y_count + z_count + r_count + aux_count; }
    long num_named() const { return x_count + y_count + z_count + r_count; }

    // --- named variable ids --------------------------------------------
    int x_trans(int i, std::size_t event, int j) const;   // i,j in [0,k], dump = k
    int x_marked(int i) const;                            // i in [0,k-1]
    int y_trans(int i, std::size_t event, int j) const;   // i,j in [0,l]
    int y_marked(int i) const;
    int z_var(int i, int j, std::size_t me_state) const;  // me dump = me_states
    int r_var(int t, int i, int j, std::size_t plant_state) const;

    /// name → id for every named variable and auxiliary.
    nlohmann::json variable_map() const;
};

/// Emits the decomposition formula for a k-state mask and an l-state editor
/// against the completed ensemble `me` and the composed plant, with the
/// reachability unrolled to `horizon` steps (a sound under-approximation of
/// the full unrolling). Clauses go to `sink`; the returned instance carries
/// the layout and counts.
CnfInstance encode(const Automaton& me, const ControlConstraint& c_m,
                   const ControlConstraint& c_e, const Automaton& product_plant, int k, int l,
                   int horizon, ClauseSink& sink);

/// Convenience wrapper keeping the clauses in memory.
CnfInstance encode(const Automaton& me, const ControlConstraint& c_m,
                   const ControlConstraint& c_e, const Automaton& product_plant, int k, int l,
                   int horizon, std::vector<std::vector<int>>& clauses_out);

}  // namespace opasyn
