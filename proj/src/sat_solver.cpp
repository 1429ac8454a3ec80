#include "opasyn/sat_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace opasyn {

int SatSolver::new_var() {
    n_vars_++;
    watches_.emplace_back();
    watches_.emplace_back();
    assign_.push_back(0);
    phase_.push_back(-1);  // default polarity: false
    reason_.push_back(kNoClause);
    level_.push_back(0);
    activity_.push_back(0.0);
    heap_pos_.push_back(-1);
    seen_.push_back(0);
    int v = static_cast<int>(n_vars_) - 1;
    heap_insert(v);
    return static_cast<int>(n_vars_);
}

void SatSolver::ensure_vars(int n) {
    while (static_cast<int>(n_vars_) < n) new_var();
}

bool SatSolver::add_clause(std::initializer_list<int> lits) {
    return add_clause(std::vector<int>(lits));
}

bool SatSolver::add_clause(const std::vector<int>& lits) {
    if (!ok_) return false;
    std::vector<int> internal;
    internal.reserve(lits.size());
    for (int d : lits) {
        if (d == 0) throw std::invalid_argument("zero literal in clause");
        int v = d > 0 ? d : -d;
        ensure_vars(v);
        internal.push_back(to_internal(d));
    }
    std::sort(internal.begin(), internal.end());
    internal.erase(std::unique(internal.begin(), internal.end()), internal.end());
    // Tautology or satisfied/falsified under root-level assignments.
    std::vector<int> reduced;
    for (std::size_t i = 0; i < internal.size(); ++i) {
        if (i + 1 < internal.size() && internal[i + 1] == neg(internal[i])) return true;
        int val = value(internal[i]);
        if (val > 0 && level_[var_of(internal[i])] == 0) return true;
        if (val < 0 && level_[var_of(internal[i])] == 0) continue;
        reduced.push_back(internal[i]);
    }
    if (reduced.empty()) {
        ok_ = false;
        return false;
    }
    if (reduced.size() == 1) {
        if (value(reduced[0]) > 0) return true;
        if (value(reduced[0]) < 0) {
            ok_ = false;
            return false;
        }
        enqueue(reduced[0], kNoClause);
        if (propagate() != kNoClause) {
            ok_ = false;
            return false;
        }
        return true;
    }
    attach_clause(reduced, false);
    return true;
}

SatSolver::ClauseRef SatSolver::attach_clause(const std::vector<int>& internal, bool learnt) {
    ClauseRef cref = static_cast<ClauseRef>(arena_.size());
    arena_.push_back(static_cast<int>(internal.size()));
    arena_.push_back(learnt ? static_cast<int>(learnts_.size()) : -1);
    for (int l : internal) arena_.push_back(l);
    watches_[neg(internal[0])].push_back({cref, internal[1]});
    watches_[neg(internal[1])].push_back({cref, internal[0]});
    n_clauses_++;
    if (learnt) {
        learnts_.push_back(cref);
        cla_activity_.push_back(cla_inc_);
    }
    return cref;
}

void SatSolver::enqueue(int lit, ClauseRef reason) {
    int v = var_of(lit);
    assign_[v] = (lit & 1) ? -1 : 1;
    phase_[v] = assign_[v];
    reason_[v] = reason;
    level_[v] = static_cast<int>(trail_lim_.size());
    trail_.push_back(lit);
}

SatSolver::ClauseRef SatSolver::propagate() {
    while (qhead_ < trail_.size()) {
        int lit = trail_[qhead_++];
        auto& ws = watches_[lit];
        std::size_t keep = 0;
        for (std::size_t wi = 0; wi < ws.size(); ++wi) {
            Watch w = ws[wi];
            if (value(w.blocker) > 0) {
                ws[keep++] = w;
                continue;
            }
            ClauseRef c = w.cref;
            int size = clause_size(c);
            int* lits = clause_lits(c);
            int falsified = neg(lit);
            if (lits[0] == falsified) std::swap(lits[0], lits[1]);
            // lits[1] == falsified now
            if (value(lits[0]) > 0) {
                ws[keep++] = {c, lits[0]};
                continue;
            }
            bool moved = false;
            for (int i = 2; i < size; ++i) {
                if (value(lits[i]) >= 0) {
                    std::swap(lits[1], lits[i]);
                    watches_[neg(lits[1])].push_back({c, lits[0]});
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            // Unit or conflict.
            ws[keep++] = w;
            if (value(lits[0]) < 0) {
                // Conflict: restore remaining watches and report.
                for (std::size_t wj = wi + 1; wj < ws.size(); ++wj) ws[keep++] = ws[wj];
                ws.resize(keep);
                qhead_ = trail_.size();
                return c;
            }
            enqueue(lits[0], c);
        }
        ws.resize(keep);
    }
    return kNoClause;
}

void SatSolver::analyze(ClauseRef conflict, std::vector<int>& learnt, int& backjump) {
    learnt.clear();
    learnt.push_back(0);  // slot for the asserting literal
    int counter = 0;
    int lit = -1;
    std::size_t index = trail_.size();
    ClauseRef reason = conflict;
    int current_level = static_cast<int>(trail_lim_.size());

    do {
        int size = clause_size(reason);
        const int* lits = clause_lits(reason);
        if (clause_learnt(reason)) bump_clause(reason);
        int start = (lit == -1) ? 0 : 1;
        // When expanding a reason clause, lits[0] is the implied literal.
        for (int i = start; i < size; ++i) {
            int q = lits[i];
            if (lit != -1 && i == 0) continue;
            int v = var_of(q);
            if (seen_[v] || level_[v] == 0) continue;
            seen_[v] = 1;
            bump_var(v);
            if (level_[v] >= current_level)
                counter++;
            else
                learnt.push_back(q);
        }
        // Find the next literal on the trail to expand.
        while (!seen_[var_of(trail_[index - 1])]) index--;
        lit = trail_[--index];
        seen_[var_of(lit)] = 0;
        counter--;
        reason = reason_[var_of(lit)];
    } while (counter > 0);
    learnt[0] = neg(lit);

    // Backjump level = max level among the other literals.
    backjump = 0;
    for (std::size_t i = 1; i < learnt.size(); ++i)
        backjump = std::max(backjump, level_[var_of(learnt[i])]);
    // Move one literal of the backjump level to position 1 for watching.
    for (std::size_t i = 1; i < learnt.size(); ++i)
        if (level_[var_of(learnt[i])] == backjump) {
            std::swap(learnt[1], learnt[i]);
            break;
        }
    for (std::size_t i = 1; i < learnt.size(); ++i) seen_[var_of(learnt[i])] = 0;
}

void SatSolver::cancel_until(int target) {
    if (static_cast<int>(trail_lim_.size()) <= target) return;
    std::size_t bound = trail_lim_[target];
    for (std::size_t i = trail_.size(); i > bound; --i) {
        int v = var_of(trail_[i - 1]);
        assign_[v] = 0;
        reason_[v] = kNoClause;
        if (heap_pos_[v] < 0) heap_insert(v);
    }
    trail_.resize(bound);
    trail_lim_.resize(target);
    qhead_ = bound;
}

void SatSolver::bump_var(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
        for (auto& a : activity_) a *= 1e-100;
        var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) heap_sift_up(heap_pos_[v]);
}

void SatSolver::decay_var_activity() { var_inc_ /= 0.95; }

void SatSolver::bump_clause(ClauseRef c) {
    int idx = arena_[c + 1];
    cla_activity_[idx] += cla_inc_;
    if (cla_activity_[idx] > 1e20) {
        for (auto& a : cla_activity_) a *= 1e-20;
        cla_inc_ *= 1e-20;
    }
}

void SatSolver::heap_insert(int v) {
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_sift_up(heap_.size() - 1);
}

void SatSolver::heap_sift_up(std::size_t i) {
    int v = heap_[i];
    while (i > 0) {
        std::size_t parent = (i - 1) / 2;
        if (!heap_less(heap_[parent], v)) break;
        heap_[i] = heap_[parent];
        heap_pos_[heap_[i]] = static_cast<int>(i);
        i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<int>(i);
}

void SatSolver::heap_sift_down(std::size_t i) {
    int v = heap_[i];
    const std::size_t n = heap_.size();
    while (true) {
        std::size_t left = 2 * i + 1;
        if (left >= n) break;
        std::size_t best = left;
        if (left + 1 < n && heap_less(heap_[left], heap_[left + 1])) best = left + 1;
        if (!heap_less(v, heap_[best])) break;
        heap_[i] = heap_[best];
        heap_pos_[heap_[i]] = static_cast<int>(i);
        i = best;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<int>(i);
}

int SatSolver::heap_pop() {
    int v = heap_[0];
    heap_pos_[v] = -1;
    heap_[0] = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_pos_[heap_[0]] = 0;
        heap_sift_down(0);
    }
    return v;
}

int SatSolver::pick_branch() {
    while (!heap_.empty()) {
        int v = heap_pop();
        if (assign_[v] == 0) return v;
    }
    return -1;
}

void SatSolver::reduce_db() {
    // Drop the less active half of the learnt clauses (keep binaries).
    std::vector<std::size_t> order(learnts_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return cla_activity_[a] < cla_activity_[b];
    });
    std::vector<char> drop(learnts_.size(), 0);
    std::size_t limit = learnts_.size() / 2;
    std::size_t dropped = 0;
    for (std::size_t oi = 0; oi < order.size() && dropped < limit; ++oi) {
        std::size_t i = order[oi];
        ClauseRef c = learnts_[i];
        if (clause_size(c) <= 2) continue;
        bool locked = false;
        const int* lits = clause_lits(c);
        if (value(lits[0]) > 0 && reason_[var_of(lits[0])] == c) locked = true;
        if (locked) continue;
        drop[i] = 1;
        dropped++;
    }
    if (dropped == 0) return;

    // Rebuild the arena without the dropped clauses.
    std::vector<int> fresh;
    fresh.reserve(arena_.size());
    std::vector<ClauseRef> remap_learnts;
    std::vector<double> fresh_act;
    for (auto& ws : watches_) ws.clear();
    std::size_t learnt_seen = 0;
    std::size_t live = 0;
    for (std::size_t pos = 0; pos < arena_.size();) {
        int size = arena_[pos];
        int tag = arena_[pos + 1];
        bool is_learnt = tag >= 0;
        bool keep = true;
        if (is_learnt) {
            if (drop[learnt_seen]) keep = false;
            learnt_seen++;
        }
        if (keep) {
            ClauseRef nc = static_cast<ClauseRef>(fresh.size());
            fresh.push_back(size);
            fresh.push_back(is_learnt ? static_cast<int>(remap_learnts.size()) : -1);
            for (int i = 0; i < size; ++i) fresh.push_back(arena_[pos + 2 + i]);
            const int* lits = fresh.data() + nc + 2;
            watches_[neg(lits[0])].push_back({nc, lits[1]});
            watches_[neg(lits[1])].push_back({nc, lits[0]});
            if (is_learnt) {
                remap_learnts.push_back(nc);
                fresh_act.push_back(cla_activity_[learnt_seen - 1]);
            }
            // Fix reasons pointing at the old location.
            if (value(lits[0]) > 0) {
                int v = var_of(lits[0]);
                if (reason_[v] == static_cast<ClauseRef>(pos)) reason_[v] = nc;
            }
            live++;
        }
        pos += 2 + size;
    }
    arena_ = std::move(fresh);
    learnts_ = std::move(remap_learnts);
    cla_activity_ = std::move(fresh_act);
    n_clauses_ = live;
}

namespace {
std::uint64_t luby(std::uint64_t x) {
    // Luby sequence 1,1,2,1,1,2,4,...
    std::uint64_t size = 1;
    int seq = 0;
    while (size < x + 1) {
        seq++;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        seq--;
        x = x % size;
    }
    return 1ull << seq;
}
}  // namespace

std::optional<std::vector<bool>> SatSolver::solve() {
    if (!ok_) return std::nullopt;
    if (propagate() != kNoClause) {
        ok_ = false;
        return std::nullopt;
    }

    std::vector<int> learnt;
    std::uint64_t restart_round = 0;
    std::uint64_t conflicts_until_restart = 100 * luby(restart_round);
    std::uint64_t conflicts_this_round = 0;
    std::size_t max_learnts = std::max<std::size_t>(20000, n_clauses_ / 3);

    while (true) {
        ClauseRef conflict = propagate();
        if (conflict != kNoClause) {
            conflicts_++;
            conflicts_this_round++;
            if (trail_lim_.empty()) {
                ok_ = false;
                return std::nullopt;
            }
            int backjump = 0;
            analyze(conflict, learnt, backjump);
            cancel_until(backjump);
            if (learnt.size() == 1) {
                enqueue(learnt[0], kNoClause);
            } else {
                ClauseRef c = attach_clause(learnt, true);
                enqueue(learnt[0], c);
            }
            decay_var_activity();
            cla_inc_ /= 0.999;
        } else {
            if (conflicts_this_round >= conflicts_until_restart) {
                conflicts_this_round = 0;
                restart_round++;
                conflicts_until_restart = 100 * luby(restart_round);
                cancel_until(0);
            }
            if (learnts_.size() >= max_learnts) {
                // Reduction rebuilds the arena; only safe with an empty trail.
                cancel_until(0);
                reduce_db();
                max_learnts = max_learnts + max_learnts / 10;
            }
            int v = pick_branch();
            if (v < 0) {
                std::vector<bool> model(n_vars_ + 1, false);
                for (std::size_t i = 1; i <= n_vars_; ++i) model[i] = assign_[i - 1] > 0;
                cancel_until(0);
                return model;
            }
            trail_lim_.push_back(static_cast<int>(trail_.size()));
            enqueue(phase_[v] > 0 ? 2 * v : 2 * v + 1, kNoClause);
        }
    }
}

void write_dimacs(const std::string& path, int num_vars,
                  const std::vector<std::vector<int>>& clauses) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "p cnf " << num_vars << " " << clauses.size() << "\n";
    for (const auto& c : clauses) {
        for (int lit : c) out << lit << " ";
        out << "0\n";
    }
}

std::vector<bool> read_model_file(const std::string& path, int num_vars) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::vector<bool> model(num_vars + 1, false);
    std::vector<bool> seen(num_vars + 1, false);
    std::string token;
    while (in >> token) {
        if (token == "v" || token == "s" || token == "SAT") continue;
        long lit;
        try {
            lit = std::stol(token);
        } catch (const std::exception&) {
            throw std::runtime_error("malformed model token: " + token);
        }
        if (lit == 0) continue;
        long v = lit > 0 ? lit : -lit;
        if (v > num_vars) throw std::runtime_error("model variable out of range: " + token);
        model[v] = lit > 0;
        seen[v] = true;
    }
    for (int v = 1; v <= num_vars; ++v)
        if (!seen[v]) model[v] = false;  // unassigned default to false
    return model;
}

}  // namespace opasyn
