#include <doctest.h>

#include "opasyn/fixtures.hpp"
#include "opasyn/instance.hpp"

using namespace opasyn;
using nlohmann::json;

TEST_CASE("bundled example loads and derives the published quantities") {
    ProblemInstance inst = example_instance();
    CHECK(inst.sigma.size() == 6);
    CHECK(inst.sigma_uc() == std::set<std::string>{"d", "e", "f"});
    CHECK(inst.gamma().size() == 7);  // 2^3 - 1 commands
    CHECK(inst.sigma_om() == std::set<std::string>{"c", "e"});
    CHECK(inst.intruder_commands.size() == 6);  // all but the a-only command
    CHECK(inst.edit_bound == 1);

    auto cm = inst.mask_constraint_pair();
    CHECK(cm.controllable ==
          EventSet{Event::sensor_on(3), Event::sensor_off(3), Event::sensor_on(5),
                   Event::sensor_off(5)});
    auto cs = inst.supervisor_constraint_pair();
    CHECK(cs.controllable.size() == 7);
}

TEST_CASE("constraints satisfy controllable within observable") {
    ProblemInstance inst = example_instance();
    for (const auto& c :
         {inst.mask_constraint_pair(), inst.edit_constraint_pair(),
          inst.supervisor_constraint_pair(), inst.ensemble_constraint_pair()}) {
        for (const auto& e : c.controllable) CHECK(c.observable.count(e) == 1);
    }
}

TEST_CASE("ensemble constraint is the pairwise union") {
    ProblemInstance inst = example_instance();
    auto cm = inst.mask_constraint_pair();
    auto ce = inst.edit_constraint_pair();
    auto cme = inst.ensemble_constraint_pair();
    CHECK(cme.controllable == set_union(cm.controllable, ce.controllable));
    CHECK(cme.observable == set_union(cm.observable, ce.observable));
}

TEST_CASE("overlapping sensor sets are reported") {
    json j = example_instance_json();
    j["sensors"][1]["events"] = {"b", "c"};  // collides with sensor 3
    auto errs = validate_instance_json(j);
    bool found = false;
    for (const auto& e : errs)
        if (e.find("not disjoint") != std::string::npos) found = true;
    CHECK(found);
    CHECK_THROWS_AS(load_instance(j), ValidationError);
}

TEST_CASE("sensor cover must equal the observable events") {
    json j = example_instance_json();
    j["sensors"].erase(5);
    auto errs = validate_instance_json(j);
    CHECK(!errs.empty());
}

TEST_CASE("edit bound below one is rejected") {
    json j = example_instance_json();
    j["editor"]["bound"] = 0;
    CHECK_THROWS_AS(load_instance(j), ValidationError);
}

TEST_CASE("observable commands outside the generated set are rejected") {
    json j = example_instance_json();
    j["intruder"]["observable_commands"].push_back("cmd{d}");
    CHECK_THROWS(load_instance(j));
}

TEST_CASE("single controllable event yields a single command") {
    json j;
    j["alphabet"]["events"] = {"a"};
    j["alphabet"]["controllable"] = {"a"};
    j["alphabet"]["observable"] = {"a"};
    j["plant"]["states"] = {"p"};
    j["plant"]["initial"] = "p";
    j["plant"]["marked"] = {"p"};
    j["plant"]["transitions"] = {{"p", "a", "p"}};
    j["sensors"] = {{{"id", 1}, {"events", {"a"}}}};
    j["maskable"] = json::array();
    j["editor"]["observable"] = json::array();
    j["editor"]["editable"] = json::array();
    j["editor"]["bound"] = 1;
    j["intruder"]["observable_events"] = json::array();
    j["intruder"]["observable_commands"] = json::array();
    ProblemInstance inst = load_instance(j);
    CHECK(inst.gamma().size() == 1);
    CHECK(inst.gamma()[0].canonical() == "cmd{a}");
    // Empty capability sets degenerate cleanly.
    CHECK(inst.mask_constraint_pair().controllable.empty());
    CHECK(inst.edit_constraint_pair().controllable == EventSet{Event::stop()});
}

TEST_CASE("command count is 2^n - 1 on random controllable sizes") {
    for (int n = 1; n <= 4; ++n) {
        json j = example_instance_json();
        std::vector<std::string> ctrl{"a", "b", "c", "d"};
        ctrl.resize(n);
        j["alphabet"]["controllable"] = ctrl;
        j["intruder"]["observable_commands"] = json::array();
        ProblemInstance inst = load_instance(j);
        CHECK(inst.gamma().size() == (std::size_t{1} << n) - 1);
    }
}

TEST_CASE("instance json round trip is structural") {
    ProblemInstance inst = example_instance();
    json saved = instance_to_json(inst);
    ProblemInstance back = load_instance(saved);
    CHECK(back.sigma == inst.sigma);
    CHECK(back.sigma_c == inst.sigma_c);
    CHECK(back.plant.structurally_equal(inst.plant));
    CHECK(back.secret_states == inst.secret_states);
    CHECK(back.avoid_states == inst.avoid_states);
    CHECK(back.intruder_commands == inst.intruder_commands);
    CHECK(back.sat.horizon_cap == inst.sat.horizon_cap);
    CHECK(instance_to_json(back).dump() == saved.dump());
}
