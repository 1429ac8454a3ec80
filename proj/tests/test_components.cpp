#include <doctest.h>

#include <map>

#include "opasyn/components.hpp"
#include "opasyn/fixtures.hpp"
#include "opasyn/ops.hpp"

using namespace opasyn;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Rule tables, transcribed as data. Each row is (source, event-set, target);
// the sets are rebuilt here with direct set arithmetic rather than through
// the builders' helpers, so the two derivations are independent.
// ---------------------------------------------------------------------------

struct Row {
    std::string src;
    EventSet events;
    std::string dst;
};

using Triples = std::set<std::tuple<std::string, std::string, std::string>>;

Triples table_to_triples(const std::vector<Row>& rows) {
    Triples out;
    for (const auto& r : rows)
        for (const auto& e : r.events) out.insert({r.src, e.canonical(), r.dst});
    return out;
}

Triples automaton_triples(const Automaton& a) {
    Triples out;
    for (StateId s = 0; s < a.num_states(); ++s)
        for (const auto& [eid, dst] : a.transitions_from(s))
            out.insert({a.state_name(s), a.event(eid).canonical(), a.state_name(dst)});
    return out;
}

struct Sets {
    std::set<std::string> sigma, sigma_c, sigma_o, sigma_uc, sigma_uo, om, oe, se;
    EventSet gamma, sharp, delta_on, delta_off;
};

Sets derive_sets(const ProblemInstance& inst) {
    Sets s;
    s.sigma = inst.sigma;
    s.sigma_c = inst.sigma_c;
    s.sigma_o = inst.sigma_o;
    for (const auto& e : s.sigma) {
        if (!s.sigma_c.count(e)) s.sigma_uc.insert(e);
        if (!s.sigma_o.count(e)) s.sigma_uo.insert(e);
    }
    for (const auto& sensor : inst.sensors)
        if (inst.maskable.count(sensor.id))
            s.om.insert(sensor.events.begin(), sensor.events.end());
    s.oe = inst.editor_observable;
    s.se = inst.editable;
    s.gamma = inst.gamma_set();
    s.sharp = sharps(s.se);
    for (int i : inst.maskable) {
        s.delta_on.insert(Event::sensor_on(i));
        s.delta_off.insert(Event::sensor_off(i));
    }
    return s;
}

std::set<std::string> minus(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::set<std::string> out;
    for (const auto& x : a)
        if (!b.count(x)) out.insert(x);
    return out;
}

std::set<std::string> inter(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::set<std::string> out;
    for (const auto& x : a)
        if (b.count(x)) out.insert(x);
    return out;
}

std::vector<Row> mask_constraint_table(const ProblemInstance& inst, int i) {
    Sets s = derive_sets(inst);
    std::set<std::string> si;
    for (const auto& sensor : inst.sensors)
        if (sensor.id == i) si = sensor.events;

    EventSet sigma1 = set_union(ons(s.om), plains(minus(s.sigma_o, s.om)));
    EventSet sigma2 = set_union(ons(minus(s.om, si)), plains(minus(s.sigma_o, s.om)));
    EventSet tail = set_union(s.sharp, s.gamma);
    tail.insert(Event::stop());
    tail.insert(Event::decode());
    EventSet sigma3 = set_union(set_union(offs(minus(s.om, si)), plains(s.sigma_uo)), tail);
    EventSet sigma4 = set_union(set_union(offs(s.om), plains(s.sigma_uo)), tail);
    EventSet preempt = s.sharp;
    preempt.insert(Event::stop());

    return {
        {"init", {Event::sensor_on(i)}, "on"},
        {"init", {Event::sensor_off(i)}, "off"},
        {"on", sigma1, "init"},
        {"on", sigma3, "on"},
        {"off", sigma2, "init"},
        {"off", sigma4, "off"},
        {"init", preempt, "init"},
    };
}

std::vector<Row> edit_constraint_table(const ProblemInstance& inst) {
    Sets s = derive_sets(inst);
    const int bound = inst.edit_bound;

    EventSet rule1 = set_union(plains(minus(minus(s.sigma, s.om), s.oe)),
                               ons(minus(s.om, s.oe)));
    rule1 = set_union(rule1, offs(s.om));
    rule1 = set_union(rule1, set_union(s.delta_on, s.delta_off));
    rule1 = set_union(rule1, s.gamma);
    rule1.insert(Event::decode());

    EventSet sigma6 = set_union(plains(minus(s.se, s.om)), ons(inter(s.om, s.se)));
    EventSet sigma5 = set_union(plains(minus(minus(s.oe, s.om), s.se)),
                                ons(inter(s.om, minus(s.oe, s.se))));
    EventSet toggles = set_union(s.delta_on, s.delta_off);

    std::vector<Row> rows{
        {"init", rule1, "init"},
        {"init", sigma6, "q0"},
        {"init", sigma5, "hat1"},
        {"hat1", {Event::stop()}, "init"},
        {"q0", toggles, "q0"},
        {"hat1", toggles, "hat1"},
    };
    for (int n = 0; n < bound; ++n)
        rows.push_back({"q" + std::to_string(n), s.sharp, "q" + std::to_string(n + 1)});
    if (bound >= 2) rows.push_back({"hat1", s.sharp, "q2"});
    for (int n = 0; n <= bound; ++n)
        rows.push_back({"q" + std::to_string(n), {Event::stop()}, "init"});
    return rows;
}

std::vector<Row> supervisor_constraint_table(const ProblemInstance& inst) {
    Sets s = derive_sets(inst);
    EventSet sigma8 = set_union(plains(minus(minus(s.sigma_o, s.om), s.se)),
                                set_union(ons(minus(s.om, s.se)), s.sharp));
    EventSet sigma_sc = set_union(plains(minus(s.sigma, s.om)), set_union(ons(s.om), offs(s.om)));
    sigma_sc = set_union(sigma_sc, set_union(s.delta_on, s.delta_off));
    sigma_sc = set_union(sigma_sc, set_union(s.sharp, s.gamma));
    sigma_sc.insert(Event::stop());
    sigma_sc.insert(Event::decode());

    return {
        {"init", set_minus(sigma_sc, s.gamma), "init"},
        {"init", s.gamma, "issue"},
        {"issue", sigma8, "init"},
        {"issue", set_minus(set_minus(sigma_sc, sigma8), s.gamma), "issue"},
    };
}

std::vector<Row> command_execution_table(const ProblemInstance& inst) {
    Sets s = derive_sets(inst);
    std::vector<Row> rows;
    for (const auto& g : inst.gamma()) {
        std::set<std::string> fire = g.command_events();
        fire.insert(s.sigma_uc.begin(), s.sigma_uc.end());
        rows.push_back({"idle", {g}, g.canonical()});
        rows.push_back({g.canonical(),
                        set_union(plains(inter(fire, s.sigma_uo)), offs(inter(fire, s.om))),
                        g.canonical()});
        rows.push_back({g.canonical(), plains(inter(fire, minus(s.sigma_o, s.om))), "idle"});
        rows.push_back({g.canonical(), ons(inter(fire, s.om)), "idle"});
    }
    rows.push_back({"idle", plains(inter(s.sigma_uc, minus(s.sigma, s.om))), "idle"});
    rows.push_back({"idle", set_union(ons(inter(s.sigma_uc, s.om)), offs(inter(s.sigma_uc, s.om))),
                    "idle"});
    return rows;
}

// Instance variants exercising different capability splits.
std::vector<ProblemInstance> variants() {
    std::vector<ProblemInstance> out;
    out.push_back(example_instance());
    {
        json j = example_instance_json();
        j["maskable"] = {5};
        out.push_back(load_instance(j));
    }
    {
        json j = example_instance_json();
        j["editor"]["observable"] = {"a", "b", "c"};
        j["editor"]["editable"] = {"b"};
        j["editor"]["bound"] = 2;
        out.push_back(load_instance(j));
    }
    {
        json j = example_instance_json();
        // Make d and f unobservable; sensors then cover only {a,b,c,e}.
        j["alphabet"]["observable"] = {"a", "b", "c", "e"};
        j["sensors"] = {{{"id", 1}, {"events", {"a"}}},
                        {{"id", 2}, {"events", {"b"}}},
                        {{"id", 3}, {"events", {"c"}}},
                        {{"id", 5}, {"events", {"e"}}}};
        j["editor"]["observable"] = {"a", "b", "c"};
        j["editor"]["editable"] = {"b", "c"};
        j["intruder"]["observable_events"] = {"b", "c", "e"};
        out.push_back(load_instance(j));
    }
    return out;
}

}  // namespace

TEST_CASE("mask constraint matches the transcribed rule table") {
    for (const auto& inst : variants()) {
        for (int i : inst.maskable_indices()) {
            Automaton mc = build_mask_constraint(inst, i);
            CHECK(mc.num_states() == 3);
            CHECK(automaton_triples(mc) == table_to_triples(mask_constraint_table(inst, i)));
            for (StateId s = 0; s < mc.num_states(); ++s) CHECK(mc.is_marked(s));
        }
    }
}

TEST_CASE("mask constraint for the example sensor 3") {
    ProblemInstance inst = example_instance();
    Automaton mc = build_mask_constraint(inst, 3);
    CHECK(mc.successor(*mc.state_id("init"), Event::sensor_on(3)).has_value());
    CHECK(mc.successor(*mc.state_id("init"), Event::sensor_off(3)).has_value());
    // Observations while on return to init: a, b, d, f and c+on.
    for (const auto& e : {Event::plain("a"), Event::plain("b"), Event::plain("d"),
                          Event::plain("f"), Event::on("c"), Event::on("e")}) {
        auto nxt = mc.successor(*mc.state_id("on"), e);
        REQUIRE(nxt.has_value());
        CHECK(mc.state_name(*nxt) == "init");
    }
    // Commands undefined at init (left open by the rules).
    CHECK(!mc.successor(*mc.state_id("init"), Event::command({"a"})).has_value());
    CHECK_THROWS(build_mask_constraint(inst, 1));  // not maskable
}

TEST_CASE("mask constraints product size bound") {
    ProblemInstance inst = example_instance();
    Automaton mc = build_mask_constraints(inst);
    CHECK(mc.num_states() <= 9);  // 3^2
    CHECK(mc.num_states() == 9);  // regression: all toggle combinations reachable
}

TEST_CASE("empty maskable set gives the universal single state") {
    json j = example_instance_json();
    j["maskable"] = json::array();
    ProblemInstance inst = load_instance(j);
    Automaton mc = build_mask_constraints(inst);
    CHECK(mc.num_states() == 1);
    for (const auto& e : mc.events()) CHECK(mc.successor(0, e).has_value());
}

TEST_CASE("edit constraints match the transcribed rule table") {
    for (const auto& inst : variants()) {
        Automaton ec = build_edit_constraints(inst);
        CHECK(ec.num_states() == static_cast<std::size_t>(inst.edit_bound) + 3);
        CHECK(automaton_triples(ec) == table_to_triples(edit_constraint_table(inst)));
        // Only the initial state is marked.
        for (StateId s = 0; s < ec.num_states(); ++s)
            CHECK(ec.is_marked(s) == (ec.state_name(s) == "init"));
    }
}

TEST_CASE("edit constraints bound semantics") {
    {
        ProblemInstance inst = example_instance();  // U = 1
        Automaton ec = build_edit_constraints(inst);
        CHECK(ec.num_states() == 4);
        CHECK(!ec.successor(*ec.state_id("hat1"), Event::sharp("b")).has_value());
        // Deletion: editable observation then stop, no sharp output.
        auto q0 = ec.successor(*ec.state_id("init"), Event::plain("b"));
        REQUIRE(q0.has_value());
        auto back = ec.successor(*q0, Event::stop());
        REQUIRE(back.has_value());
        CHECK(ec.state_name(*back) == "init");
    }
    {
        json j = example_instance_json();
        j["editor"]["bound"] = 2;
        Automaton ec = build_edit_constraints(load_instance(j));
        CHECK(ec.num_states() == 5);
        auto q2 = ec.successor(*ec.state_id("hat1"), Event::sharp("b"));
        REQUIRE(q2.has_value());
        CHECK(ec.state_name(*q2) == "q2");
    }
}

TEST_CASE("supervisor constraints match the transcribed rule table") {
    for (const auto& inst : variants()) {
        Automaton sc = build_supervisor_constraints(inst);
        CHECK(sc.num_states() == 2);
        CHECK(automaton_triples(sc) == table_to_triples(supervisor_constraint_table(inst)));
        for (StateId s = 0; s < sc.num_states(); ++s) CHECK(sc.is_marked(s));
    }
}

TEST_CASE("supervisor constraints forbid command bursts") {
    ProblemInstance inst = example_instance();
    Automaton sc = build_supervisor_constraints(inst);
    Event v1 = Event::command({"a"});
    Event v2 = Event::command({"b"});
    auto issue = sc.successor(sc.initial(), v1);
    REQUIRE(issue.has_value());
    CHECK(!sc.successor(*issue, v2).has_value());  // no second command yet
    // Any supervisor-visible observation re-arms the issuer.
    auto back = sc.successor(*issue, Event::sharp("b"));
    REQUIRE(back.has_value());
    CHECK(sc.state_name(*back) == "init");
}

TEST_CASE("command execution matches the transcribed rule table") {
    for (const auto& inst : variants()) {
        Automaton ce = build_command_execution(inst);
        CHECK(ce.num_states() == (std::size_t{1} << inst.sigma_c.size()));
        CHECK(automaton_triples(ce) == table_to_triples(command_execution_table(inst)));
    }
}

TEST_CASE("command execution example spot checks") {
    ProblemInstance inst = example_instance();
    Automaton ce = build_command_execution(inst);
    CHECK(ce.num_states() == 8);
    // At the state using cmd{b,c}: c fires as c+on back to idle, or silently
    // as c+off reusing the command.
    StateId v6 = *ce.state_id("cmd{b,c}");
    auto idle = ce.successor(v6, Event::on("c"));
    REQUIRE(idle.has_value());
    CHECK(ce.state_name(*idle) == "idle");
    auto stay = ce.successor(v6, Event::off("c"));
    REQUIRE(stay.has_value());
    CHECK(*stay == v6);
}

TEST_CASE("command execution with a single controllable event") {
    json j;
    j["alphabet"]["events"] = {"a", "u"};
    j["alphabet"]["controllable"] = {"a"};
    j["alphabet"]["observable"] = {"a", "u"};
    j["plant"]["states"] = {"p"};
    j["plant"]["initial"] = "p";
    j["plant"]["transitions"] = {{"p", "a", "p"}};
    j["sensors"] = {{{"id", 1}, {"events", {"a"}}}, {{"id", 2}, {"events", {"u"}}}};
    j["maskable"] = json::array();
    j["editor"]["observable"] = json::array();
    j["editor"]["editable"] = json::array();
    j["editor"]["bound"] = 1;
    j["intruder"]["observable_events"] = json::array();
    j["intruder"]["observable_commands"] = json::array();
    Automaton ce = build_command_execution(load_instance(j));
    CHECK(ce.num_states() == 2);
}

TEST_CASE("plant relabelling duplicates the masked events") {
    ProblemInstance inst = example_instance();
    Automaton g = relabel_plant(inst);
    std::size_t masked_edges = 0;
    const Automaton& original = inst.plant;
    for (StateId s = 0; s < original.num_states(); ++s)
        for (const auto& [eid, dst] : original.transitions_from(s))
            if (inst.sigma_om().count(original.event(eid).base())) masked_edges++;
    CHECK(g.num_transitions() == original.num_transitions() + masked_edges);
    // The c edge out of state 1 exists in both decorations with one endpoint.
    auto on = g.successor(*g.state_id("1"), Event::on("c"));
    auto off = g.successor(*g.state_id("1"), Event::off("c"));
    REQUIRE(on.has_value());
    REQUIRE(off.has_value());
    CHECK(*on == *off);
}

TEST_CASE("plant relabelling with nothing maskable is the identity") {
    json j = example_instance_json();
    j["maskable"] = json::array();
    ProblemInstance inst = load_instance(j);
    Automaton g = relabel_plant(inst);
    CHECK(g.structurally_equal(inst.plant));
}
