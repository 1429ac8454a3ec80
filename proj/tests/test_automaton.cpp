#include <doctest.h>

#include "opasyn/automaton.hpp"
#include "opasyn/serialize.hpp"

using namespace opasyn;

namespace {
Automaton chain3() {
    Automaton a(plains({"x", "y"}));
    a.add_state("q0");
    a.add_state("q1");
    a.add_state("q2", true);
    a.set_initial(0);
    a.add_transition("q0", Event::plain("x"), "q1");
    a.add_transition("q1", Event::plain("y"), "q2");
    return a;
}
}  // namespace

TEST_CASE("determinism is enforced at construction") {
    Automaton a(plains({"x"}));
    a.add_state("p");
    a.add_state("q");
    a.set_initial(0);
    a.add_transition(0, Event::plain("x"), 1);
    CHECK_NOTHROW(a.add_transition(0, Event::plain("x"), 1));  // idempotent
    CHECK_THROWS(a.add_transition(0, Event::plain("x"), 0));
}

TEST_CASE("events outside the alphabet are rejected") {
    Automaton a(plains({"x"}));
    a.add_state("p");
    CHECK_THROWS(a.add_transition(0, Event::plain("z"), 0));
}

TEST_CASE("run walks the transition function") {
    Automaton a = chain3();
    auto end = a.run({Event::plain("x"), Event::plain("y")});
    REQUIRE(end.has_value());
    CHECK(a.state_name(*end) == "q2");
    CHECK(a.is_marked(*end));
    CHECK(!a.run({Event::plain("y")}).has_value());
}

TEST_CASE("json round trip is structural identity") {
    Automaton a = chain3();
    auto j = automaton_to_json(a);
    Automaton back = automaton_from_json(j);
    CHECK(a.structurally_equal(back));
    // Serialization is canonical: dumping twice gives identical bytes.
    CHECK(j.dump() == automaton_to_json(back).dump());
}

TEST_CASE("dot export mentions every state and edge label") {
    Automaton a = chain3();
    auto dot = automaton_to_dot(a, "chain");
    CHECK(dot.find("\"q0\"") != std::string::npos);
    CHECK(dot.find("doublecircle") != std::string::npos);
    CHECK(dot.find("label=\"x\"") != std::string::npos);
}
