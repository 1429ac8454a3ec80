#include <doctest.h>

#include "opasyn/ops.hpp"
#include "oracles.hpp"

using namespace opasyn;
using namespace opasyn::testing;

namespace {
std::vector<Event> three_events() {
    return {Event::plain("x"), Event::plain("y"), Event::plain("z")};
}
}  // namespace

TEST_CASE("product with itself is isomorphic to the accessible part") {
    std::mt19937 rng(11);
    for (int round = 0; round < 20; ++round) {
        Automaton a = random_automaton(rng, three_events(), 4);
        Automaton self = sync_product(a, a);
        Automaton acc = accessible(a);
        CHECK(self.num_states() == acc.num_states());
        CHECK(self.num_transitions() == acc.num_transitions());
        CHECK(language_upto(self, 5) == language_upto(acc, 5));
    }
}

TEST_CASE("product language equals intersection of inverse projections") {
    std::mt19937 rng(12);
    std::vector<Event> ab{Event::plain("x"), Event::plain("y")};
    std::vector<Event> bc{Event::plain("y"), Event::plain("z")};
    for (int round = 0; round < 30; ++round) {
        Automaton a = random_automaton(rng, ab, 1 + round % 4);
        Automaton b = random_automaton(rng, bc, 1 + (round / 2) % 4);
        CHECK(product_language_matches(a, b, 6));
    }
}

TEST_CASE("observer with full observation is the accessible part as singletons") {
    std::mt19937 rng(13);
    Automaton a = random_automaton(rng, three_events(), 5);
    ObserverResult obs = observer_full(a, a.alphabet());
    Automaton acc = accessible(a);
    CHECK(obs.automaton.num_states() == acc.num_states());
    for (const auto& b : obs.beliefs) CHECK(b.size() == 1);
    CHECK(language_upto(obs.automaton, 5) == language_upto(acc, 5));
}

TEST_CASE("observer beliefs match the exhaustive estimate oracle") {
    std::mt19937 rng(14);
    for (int round = 0; round < 40; ++round) {
        Automaton a = random_automaton(rng, three_events(), 1 + round % 5);
        // Random observable subset.
        EventSet observable;
        for (const auto& e : three_events())
            if (rng() % 2) observable.insert(e);
        CHECK(observer_beliefs_match(a, observable, 6));
    }
}

TEST_CASE("observer rejects observable events outside the alphabet") {
    Automaton a(plains({"x"}));
    a.add_state("q");
    a.set_initial(0);
    CHECK_THROWS(observer(a, plains({"w"})));
}

TEST_CASE("completion totalizes with a single fresh dump state") {
    Automaton a(plains({"x", "y"}));
    a.add_state("q");
    a.set_initial(0);
    Automaton bar = completion(a);
    CHECK(bar.num_states() == 2);
    CHECK(bar.num_transitions() == 4);
    for (StateId s = 0; s < bar.num_states(); ++s)
        for (const auto& e : bar.events()) CHECK(bar.successor(s, bar.event_id(e).value()));
}

TEST_CASE("completion round-trips by removing the dump state") {
    std::mt19937 rng(15);
    for (int round = 0; round < 20; ++round) {
        Automaton a = random_automaton(rng, three_events(), 4);
        Automaton bar = completion(a);
        CHECK(bar.num_states() == a.num_states() + 1);
        // Remove the dump and compare structurally.
        std::vector<StateId> keep;
        for (StateId s = 0; s < a.num_states(); ++s) keep.push_back(s);
        Automaton back = restrict_states(bar, keep);
        Automaton acc = accessible(a);
        CHECK(back.structurally_equal(acc));
    }
}

TEST_CASE("nonblocking and marker reachability against a direct search") {
    std::mt19937 rng(16);
    for (int round = 0; round < 40; ++round) {
        Automaton a = random_automaton(rng, three_events(), 6, 0.5, 0.3);
        // Direct oracle: reachable set, then forward search from each state.
        auto reachable = [&](StateId from) {
            std::set<StateId> seen{from};
            std::vector<StateId> work{from};
            while (!work.empty()) {
                StateId s = work.back();
                work.pop_back();
                for (const auto& [eid, dst] : a.transitions_from(s))
                    if (seen.insert(dst).second) work.push_back(dst);
            }
            return seen;
        };
        auto from_init = reachable(a.initial());
        bool marker = false;
        bool nonblocking = true;
        for (StateId s : from_init) {
            bool can_mark = false;
            for (StateId t : reachable(s))
                if (a.is_marked(t)) can_mark = true;
            if (a.is_marked(s)) marker = true;
            if (can_mark && !marker) marker = true;
            if (!can_mark) nonblocking = false;
        }
        CHECK(is_marker_reachable(a) == marker);
        CHECK(is_nonblocking(a) == nonblocking);
    }
}

TEST_CASE("nonblocking edge cases") {
    Automaton a(plains({"x"}));
    a.add_state("q0");
    a.add_state("q1", true);  // unreachable marked state
    a.set_initial(0);
    CHECK(!is_nonblocking(a));
    CHECK(!is_marker_reachable(a));

    Automaton chain(plains({"x", "y"}));
    chain.add_state("q0");
    chain.add_state("q1");
    chain.add_state("q2", true);
    chain.set_initial(0);
    chain.add_transition(0, Event::plain("x"), 1);
    chain.add_transition(1, Event::plain("y"), 2);
    CHECK(is_nonblocking(chain));
    CHECK(is_marker_reachable(chain));
}

TEST_CASE("relabel requires injectivity and preserves shape") {
    Automaton a(plains({"x", "y"}));
    a.add_state("q0");
    a.add_state("q1", true);
    a.set_initial(0);
    a.add_transition(0, Event::plain("x"), 1);
    std::map<Event, Event> to_on{{Event::plain("x"), Event::on("x")}};
    Automaton r = relabel(a, to_on);
    CHECK(r.successor(0, Event::on("x")).has_value());
    CHECK(!r.event_id(Event::plain("x")).has_value());

    std::map<Event, Event> collide{{Event::plain("x"), Event::plain("y")}};
    CHECK_THROWS(relabel(a, collide));
}

TEST_CASE("mark_all makes the marked language the closed language") {
    std::mt19937 rng(17);
    Automaton a = random_automaton(rng, three_events(), 4, 0.5, 0.0);
    Automaton m = mark_all(a);
    for (StateId s = 0; s < m.num_states(); ++s) CHECK(m.is_marked(s));
}

TEST_CASE("restrict removes states and takes the accessible part") {
    Automaton a(plains({"x", "y"}));
    a.add_state("q0");
    a.add_state("q1");
    a.add_state("q2", true);
    a.set_initial(0);
    a.add_transition(0, Event::plain("x"), 1);
    a.add_transition(1, Event::plain("y"), 2);
    Automaton r = restrict_states(a, {0, 2});  // cut the middle
    CHECK(r.num_states() == 1);                // q2 became unreachable
    CHECK(r.state_name(0) == "q0");
}

TEST_CASE("operations are deterministic across repeated runs") {
    std::mt19937 rng1(18), rng2(18);
    Automaton a1 = random_automaton(rng1, three_events(), 5);
    Automaton a2 = random_automaton(rng2, three_events(), 5);
    Automaton p1 = sync_product(a1, a1);
    Automaton p2 = sync_product(a2, a2);
    CHECK(p1.structurally_equal(p2));
    Automaton o1 = observer(a1, plains({"x"}));
    Automaton o2 = observer(a2, plains({"x"}));
    CHECK(o1.structurally_equal(o2));
}
