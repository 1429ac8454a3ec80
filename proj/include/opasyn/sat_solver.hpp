// sat_solver.hpp — CDCL satisfiability solver and DIMACS plumbing
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace opasyn {

/// Conflict-driven clause-learning SAT solver over DIMACS-style literals
/// (positive/negative 1-based variable indices). Clauses live in a flat
/// arena; two-literal watching, first-UIP learning, activity-ordered
/// decisions with phase saving and Luby restarts. Deterministic.
class SatSolver {
  public:
    SatSolver() = default;

    int num_vars() const { return static_cast<int>(n_vars_); }
    int new_var();
    void ensure_vars(int n);

    /// Adds a clause of DIMACS literals. Returns false if the database is
    /// already unsatisfiable (empty clause derived).
    bool add_clause(const std::vector<int>& lits);
    bool add_clause(std::initializer_list<int> lits);

    std::size_t num_clauses() const { return n_clauses_; }

    /// Complete decision procedure: a total assignment (index 1..num_vars)
    /// or std::nullopt for unsatisfiable.
    std::optional<std::vector<bool>> solve();

  private:
    using ClauseRef = std::uint32_t;
    static constexpr ClauseRef kNoClause = static_cast<ClauseRef>(-1);

    struct Watch {
        ClauseRef cref;
        int blocker;  // internal literal
    };

    // Clause arena: [size, learnt-flag|activity slot, lits...]
    std::vector<int> arena_;
    std::vector<ClauseRef> learnts_;
    std::size_t n_clauses_ = 0;

    std::size_t n_vars_ = 0;
    std::vector<std::vector<Watch>> watches_;  // per internal literal
    std::vector<std::int8_t> assign_;          // per var: 0 undef, 1 true, -1 false
    std::vector<std::int8_t> phase_;
    std::vector<ClauseRef> reason_;
    std::vector<int> level_;
    std::vector<int> trail_;
    std::vector<int> trail_lim_;
    std::size_t qhead_ = 0;

    std::vector<double> activity_;
    double var_inc_ = 1.0;
    std::vector<int> heap_;      // max-heap of vars by activity
    std::vector<int> heap_pos_;  // -1 if absent

    std::vector<char> seen_;
    bool ok_ = true;

    std::uint64_t conflicts_ = 0;
    double cla_inc_ = 1.0;
    std::vector<double> cla_activity_;  // parallel to learnts_

    // --- helpers -------------------------------------------------------
    static int to_internal(int dimacs) {
        int v = dimacs > 0 ? dimacs : -dimacs;
        return 2 * (v - 1) + (dimacs > 0 ? 0 : 1);
    }
    static int neg(int lit) { return lit ^ 1; }
    static int var_of(int lit) { return lit >> 1; }
    int value(int lit) const {
        int v = assign_[var_of(lit)];
        return (lit & 1) ? -v : v;
    }

    int clause_size(ClauseRef c) const { return arena_[c]; }
    const int* clause_lits(ClauseRef c) const { return arena_.data() + c + 2; }
    int* clause_lits(ClauseRef c) { return arena_.data() + c + 2; }
    bool clause_learnt(ClauseRef c) const { return arena_[c + 1] >= 0; }

    void enqueue(int lit, ClauseRef reason);
    ClauseRef propagate();
    void analyze(ClauseRef conflict, std::vector<int>& learnt, int& backjump);
    void cancel_until(int level);
    int pick_branch();
    void bump_var(int v);
    void decay_var_activity();
    void bump_clause(ClauseRef c);
    void reduce_db();
    ClauseRef attach_clause(const std::vector<int>& internal, bool learnt);

    void heap_insert(int v);
    int heap_pop();
    void heap_sift_up(std::size_t i);
    void heap_sift_down(std::size_t i);
    bool heap_less(int a, int b) const {
        return activity_[a] != activity_[b] ? activity_[a] < activity_[b] : a > b;
    }
};

/// Writes `p cnf` followed by zero-terminated clauses.
void write_dimacs(const std::string& path, int num_vars,
                  const std::vector<std::vector<int>>& clauses);

/// Reads a model as whitespace-separated signed integers (a DIMACS v-line
/// body). Throws on malformed input or out-of-range variables.
std::vector<bool> read_model_file(const std::string& path, int num_vars);

}  // namespace opasyn
