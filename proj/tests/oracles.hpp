// oracles.hpp — test-only reference implementations, independent of the
// library's composition and estimation code paths.
#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "opasyn/automaton.hpp"

namespace opasyn::testing {

using Word = std::vector<Event>;

/// All strings of length <= max_len accepted by the closed behavior of `a`
/// (prefix-closed language of defined runs).
inline std::set<Word> language_upto(const Automaton& a, std::size_t max_len) {
    std::set<Word> out;
    std::vector<std::pair<StateId, Word>> frontier{{a.initial(), {}}};
    out.insert({});
    for (std::size_t len = 0; len < max_len; ++len) {
        std::vector<std::pair<StateId, Word>> next;
        for (const auto& [state, word] : frontier) {
            for (const auto& [eid, dst] : a.transitions_from(state)) {
                Word extended = word;
                extended.push_back(a.event(eid));
                out.insert(extended);
                next.push_back({dst, std::move(extended)});
            }
        }
        frontier = std::move(next);
    }
    return out;
}

/// Natural projection of a word onto an alphabet.
inline Word project(const Word& w, const EventSet& alphabet) {
    Word out;
    for (const auto& e : w)
        if (alphabet.count(e)) out.push_back(e);
    return out;
}

/// Membership of a word in L(a) by direct stepping.
inline bool accepts(const Automaton& a, const Word& w) { return a.run(w).has_value(); }

/// All words over `alphabet` of length <= max_len (exponential; keep small).
inline std::vector<Word> all_words(const std::vector<Event>& alphabet, std::size_t max_len) {
    std::vector<Word> out{{}};
    std::size_t begin = 0;
    for (std::size_t len = 0; len < max_len; ++len) {
        std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i)
            for (const auto& e : alphabet) {
                Word w = out[i];
                w.push_back(e);
                out.push_back(std::move(w));
            }
        begin = end;
    }
    return out;
}

/// Random deterministic automaton over `alphabet` with `n` states.
inline Automaton random_automaton(std::mt19937& rng, const std::vector<Event>& alphabet,
                                  std::size_t n, double density = 0.6,
                                  double marked_prob = 0.4) {
    Automaton a(EventSet(alphabet.begin(), alphabet.end()));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t i = 0; i < n; ++i)
        a.add_state("q" + std::to_string(i), coin(rng) < marked_prob);
    a.set_initial(0);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& e : alphabet)
            if (coin(rng) < density)
                a.add_transition(static_cast<StateId>(i), e, static_cast<StateId>(pick(rng)));
    return a;
}

}  // namespace opasyn::testing

#include "opasyn/ops.hpp"

namespace opasyn::testing {

/// Product-language law: s ∈ L(A‖B) iff each factor accepts the projection
/// of s to its own alphabet. Checked by exhaustive enumeration.
inline bool product_language_matches(const Automaton& a, const Automaton& b,
                                     std::size_t max_len) {
    Automaton prod = sync_product(a, b);
    EventSet joint = set_union(a.alphabet(), b.alphabet());
    std::vector<Event> alphabet(joint.begin(), joint.end());
    for (const auto& w : all_words(alphabet, max_len)) {
        bool in_product = accepts(prod, w);
        bool in_factors = accepts(a, project(w, a.alphabet())) &&
                          accepts(b, project(w, b.alphabet()));
        if (in_product != in_factors) return false;
    }
    return true;
}

/// Observer law: the belief reached by the projection of s equals the set of
/// states reachable by strings with the same projection. The estimate map is
/// computed exhaustively by a walk over (state, projection) pairs, saturating
/// unobservable detours of any length.
inline bool observer_beliefs_match(const Automaton& a, const EventSet& observable,
                                   std::size_t max_len) {
    ObserverResult obs = observer_full(a, observable);

    std::map<Word, std::set<StateId>> estimate;
    {
        std::set<std::pair<StateId, Word>> seen;
        std::deque<std::pair<StateId, Word>> work;
        work.push_back({a.initial(), {}});
        seen.insert(work.front());
        while (!work.empty()) {
            auto [state, proj] = work.front();
            work.pop_front();
            estimate[proj].insert(state);
            for (const auto& [eid, dst] : a.transitions_from(state)) {
                Word next = proj;
                if (observable.count(a.event(eid))) {
                    if (proj.size() >= max_len) continue;
                    next.push_back(a.event(eid));
                }
                auto key = std::make_pair(dst, std::move(next));
                if (seen.insert(key).second) work.push_back(key);
            }
        }
    }

    for (const auto& [proj, expect] : estimate) {
        auto state = obs.automaton.run(proj);
        if (!state) return false;
        const Belief& belief = obs.beliefs[*state];
        if (std::set<StateId>(belief.begin(), belief.end()) != expect) return false;
    }
    return true;
}

}  // namespace opasyn::testing
