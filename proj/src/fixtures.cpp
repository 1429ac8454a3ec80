#include "opasyn/fixtures.hpp"

namespace opasyn {

using nlohmann::json;

json example_instance_json() {
    json j;
    j["alphabet"]["events"] = {"a", "b", "c", "d", "e", "f"};
    j["alphabet"]["controllable"] = {"a", "b", "c"};
    j["alphabet"]["observable"] = {"a", "b", "c", "d", "e", "f"};

    j["plant"]["states"] = {"0", "1", "2", "3", "4", "5", "6", "7"};
    j["plant"]["initial"] = "0";
    j["plant"]["marked"] = {"7"};
    // Gate 1 is road a, gate 2 is reached over b or c; road d is a shortcut
    // to the gate-2 junction, e enters the laboratory and f leaves it.
    j["plant"]["transitions"] = {
        {"0", "a", "1"}, {"0", "b", "4"}, {"1", "b", "2"}, {"1", "c", "3"},
        {"2", "d", "6"}, {"2", "f", "6"}, {"3", "d", "6"}, {"3", "e", "5"},
        {"4", "f", "6"}, {"5", "f", "6"}, {"6", "b", "7"}, {"6", "c", "7"},
    };
    j["plant"]["secret"] = {"5"};
    j["plant"]["avoid"] = {"4"};

    j["sensors"] = {
        {{"id", 1}, {"events", {"a"}}}, {{"id", 2}, {"events", {"b"}}},
        {{"id", 3}, {"events", {"c"}}}, {{"id", 4}, {"events", {"d"}}},
        {{"id", 5}, {"events", {"e"}}}, {{"id", 6}, {"events", {"f"}}},
    };
    j["maskable"] = {3, 5};

    j["editor"]["observable"] = {"a", "b", "c", "d", "e", "f"};
    j["editor"]["editable"] = {"b", "c"};
    j["editor"]["bound"] = 1;

    j["intruder"]["observable_events"] = {"b", "c", "d", "e", "f"};
    j["intruder"]["observable_commands"] = {"cmd{b}",   "cmd{c}",   "cmd{a,b}",
                                            "cmd{a,c}", "cmd{b,c}", "cmd{a,b,c}"};

    j["sat"] = {{"k0", 3}, {"l0", 2}, {"k_max", 8}, {"l_max", 7}, {"horizon_cap", 64}};
    return j;
}

ProblemInstance example_instance() { return load_instance(example_instance_json()); }

}  // namespace opasyn
