#include "opasyn/instance.hpp"

#include <algorithm>
#include <sstream>

#include "opasyn/serialize.hpp"

namespace opasyn {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::ostringstream oss;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) oss << sep;
        oss << parts[i];
    }
    return oss.str();
}

std::set<std::string> string_set(const json& arr) {
    std::set<std::string> out;
    for (const auto& v : arr) out.insert(v.get<std::string>());
    return out;
}

bool subset(const std::set<std::string>& a, const std::set<std::string>& b) {
    return std::all_of(a.begin(), a.end(), [&](const auto& x) { return b.count(x) > 0; });
}

bool looks_like_sensor_symbol(const std::string& name) {
    if (name.size() < 2 || name[0] != 's') return false;
    return std::all_of(name.begin() + 1, name.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error("instance validation failed: " + join(violations, "; ")),
      violations_(std::move(violations)) {}

std::set<std::string> ProblemInstance::sigma_uc() const {
    std::set<std::string> out;
    for (const auto& e : sigma)
        if (!sigma_c.count(e)) out.insert(e);
    return out;
}

std::set<std::string> ProblemInstance::sigma_uo() const {
    std::set<std::string> out;
    for (const auto& e : sigma)
        if (!sigma_o.count(e)) out.insert(e);
    return out;
}

std::set<std::string> ProblemInstance::sigma_om() const {
    std::set<std::string> out;
    for (const auto& s : sensors)
        if (maskable.count(s.id)) out.insert(s.events.begin(), s.events.end());
    return out;
}

std::vector<int> ProblemInstance::maskable_indices() const {
    return std::vector<int>(maskable.begin(), maskable.end());
}

std::vector<Event> ProblemInstance::gamma() const {
    std::vector<std::string> base(sigma_c.begin(), sigma_c.end());
    std::vector<Event> out;
    const std::size_t n = base.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::set<std::string> members;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) members.insert(base[i]);
        out.push_back(Event::command(members));
    }
    std::sort(out.begin(), out.end());
    return out;
}

EventSet ProblemInstance::gamma_set() const {
    auto g = gamma();
    return EventSet(g.begin(), g.end());
}

EventSet ProblemInstance::gamma_o_set() const {
    EventSet out;
    for (const auto& members : intruder_commands) out.insert(Event::command(members));
    return out;
}

EventSet ProblemInstance::delta_m_on() const {
    EventSet out;
    for (int i : maskable) out.insert(Event::sensor_on(i));
    return out;
}

EventSet ProblemInstance::delta_m_off() const {
    EventSet out;
    for (int i : maskable) out.insert(Event::sensor_off(i));
    return out;
}

EventSet ProblemInstance::relabeled_plant_alphabet() const {
    auto om = sigma_om();
    std::set<std::string> rest;
    for (const auto& e : sigma)
        if (!om.count(e)) rest.insert(e);
    return set_union(plains(rest), set_union(ons(om), offs(om)));
}

EventSet ProblemInstance::sigma_b() const {
    EventSet out = relabeled_plant_alphabet();
    out = set_union(out, delta_m_on());
    out = set_union(out, delta_m_off());
    out = set_union(out, sharps(editable));
    out = set_union(out, gamma_set());
    out.insert(Event::stop());
    out.insert(Event::decode());
    return out;
}

EventSet ProblemInstance::sigma8() const {
    auto om = sigma_om();
    std::set<std::string> plain_part;  // Σ_o − Σ_o,M − Σ_s,E
    for (const auto& e : sigma_o)
        if (!om.count(e) && !editable.count(e)) plain_part.insert(e);
    std::set<std::string> on_part;  // Σ_o,M − Σ_s,E
    for (const auto& e : om)
        if (!editable.count(e)) on_part.insert(e);
    return set_union(plains(plain_part), set_union(ons(on_part), sharps(editable)));
}

ControlConstraint ProblemInstance::mask_constraint_pair() const {
    auto om = sigma_om();
    std::set<std::string> plain_obs;  // Σ_o − Σ_o,M
    for (const auto& e : sigma_o)
        if (!om.count(e)) plain_obs.insert(e);
    ControlConstraint c;
    c.controllable = set_union(delta_m_on(), delta_m_off());
    c.observable = set_union(set_union(plains(plain_obs), ons(om)), c.controllable);
    return c;
}

ControlConstraint ProblemInstance::edit_constraint_pair() const {
    auto om = sigma_om();
    std::set<std::string> plain_obs;  // Σ_o,E − Σ_o,M
    std::set<std::string> on_obs;     // Σ_o,M ∩ Σ_o,E
    for (const auto& e : editor_observable) {
        if (om.count(e))
            on_obs.insert(e);
        else
            plain_obs.insert(e);
    }
    ControlConstraint c;
    c.controllable = sharps(editable);
    c.controllable.insert(Event::stop());
    c.observable =
        set_union(set_union(plains(plain_obs), ons(on_obs)), c.controllable);
    return c;
}

ControlConstraint ProblemInstance::supervisor_constraint_pair() const {
    ControlConstraint c;
    c.controllable = gamma_set();
    c.observable = set_union(sigma8(), c.controllable);
    return c;
}

ControlConstraint ProblemInstance::ensemble_constraint_pair() const {
    auto cm = mask_constraint_pair();
    auto ce = edit_constraint_pair();
    return ControlConstraint{set_union(cm.controllable, ce.controllable),
                             set_union(cm.observable, ce.observable)};
}

std::vector<std::string> validate_instance_json(const json& j) {
    std::vector<std::string> errs;
    auto need = [&](const json& obj, const char* key, const char* where) -> const json* {
        if (!obj.contains(key)) {
            errs.push_back(std::string("missing field ") + where + "." + key);
            return nullptr;
        }
        return &obj.at(key);
    };

    if (!j.is_object()) return {"instance document must be a JSON object"};

    const json* alphabet = need(j, "alphabet", "instance");
    const json* plant = need(j, "plant", "instance");
    const json* sensors = need(j, "sensors", "instance");
    const json* maskable = need(j, "maskable", "instance");
    const json* editor = need(j, "editor", "instance");
    const json* intruder = need(j, "intruder", "instance");
    if (!errs.empty()) return errs;

    std::set<std::string> sigma, sigma_c, sigma_o;
    try {
        sigma = string_set(alphabet->at("events"));
        sigma_c = string_set(alphabet->at("controllable"));
        sigma_o = string_set(alphabet->at("observable"));
    } catch (const std::exception& e) {
        errs.push_back(std::string("alphabet: ") + e.what());
        return errs;
    }
    if (sigma.empty()) errs.push_back("alphabet.events is empty");
    for (const auto& e : sigma) {
        if (looks_like_sensor_symbol(e))
            errs.push_back("base event '" + e + "' clashes with sensor toggle notation");
        try {
            Event::plain(e);
        } catch (const std::exception& ex) {
            errs.push_back(std::string("bad event name: ") + ex.what());
        }
    }
    if (!subset(sigma_c, sigma)) errs.push_back("controllable events not a subset of alphabet");
    if (!subset(sigma_o, sigma)) errs.push_back("observable events not a subset of alphabet");

    // Plant
    std::set<std::string> plant_states;
    try {
        for (const auto& s : plant->at("states")) plant_states.insert(s.get<std::string>());
        json pj;
        pj["states"] = plant->at("states");
        pj["alphabet"] = json::array();
        for (const auto& e : sigma) pj["alphabet"].push_back(e);
        pj["initial"] = plant->at("initial");
        pj["marked"] = plant->value("marked", json::array());
        pj["transitions"] = plant->at("transitions");
        Automaton g = automaton_from_json(pj);
        (void)g;
    } catch (const std::exception& e) {
        errs.push_back(std::string("plant: ") + e.what());
    }
    for (const char* key : {"secret", "avoid"}) {
        if (plant->contains(key))
            for (const auto& s : plant->at(key))
                if (!plant_states.count(s.get<std::string>()))
                    errs.push_back(std::string(key) + " state not in plant: " +
                                   s.get<std::string>());
    }

    // Sensors: pairwise disjoint, union = Σ_o
    std::set<int> sensor_ids;
    std::set<std::string> covered;
    for (const auto& s : *sensors) {
        int id = s.at("id").get<int>();
        if (!sensor_ids.insert(id).second)
            errs.push_back("duplicate sensor id " + std::to_string(id));
        auto evs = string_set(s.at("events"));
        if (!subset(evs, sigma_o))
            errs.push_back("sensor " + std::to_string(id) + " covers non-observable events");
        for (const auto& e : evs)
            if (!covered.insert(e).second)
                errs.push_back("sensor sets not disjoint at event '" + e + "'");
    }
    if (covered != sigma_o)
        errs.push_back("sensor sets do not cover all observable events");

    for (const auto& m : *maskable) {
        int id = m.get<int>();
        if (!sensor_ids.count(id))
            errs.push_back("maskable index " + std::to_string(id) + " is not a sensor id");
    }

    // Editor
    std::set<std::string> sigma_oe, sigma_se;
    try {
        sigma_oe = string_set(editor->at("observable"));
        sigma_se = string_set(editor->at("editable"));
        int bound = editor->at("bound").get<int>();
        if (bound < 1) errs.push_back("editor.bound must be at least 1");
    } catch (const std::exception& e) {
        errs.push_back(std::string("editor: ") + e.what());
    }
    if (!subset(sigma_oe, sigma_o)) errs.push_back("editor.observable not a subset of observable");
    if (!subset(sigma_se, sigma_oe)) errs.push_back("editor.editable not a subset of editor.observable");

    // Intruder
    std::set<std::string> sigma_oi;
    try {
        sigma_oi = string_set(intruder->at("observable_events"));
        for (const auto& c : intruder->at("observable_commands")) {
            Event cmd = Event::parse(c.get<std::string>());
            if (cmd.kind() != EventKind::Command) {
                errs.push_back("observable_commands entry is not a command: " +
                               c.get<std::string>());
                continue;
            }
            if (!subset(cmd.command_events(), sigma_c))
                errs.push_back("observable command enables non-controllable events: " +
                               cmd.canonical());
        }
    } catch (const std::exception& e) {
        errs.push_back(std::string("intruder: ") + e.what());
    }
    if (!subset(sigma_oi, sigma)) errs.push_back("intruder.observable_events not a subset of alphabet");

    if (j.contains("sat")) {
        const auto& sat = j.at("sat");
        int k0 = sat.value("k0", 1), l0 = sat.value("l0", 1);
        int km = sat.value("k_max", 8), lm = sat.value("l_max", 8);
        int cap = sat.value("horizon_cap", 10000);
        if (k0 < 1 || l0 < 1) errs.push_back("sat bounds k0/l0 must be at least 1");
        if (km < k0 || lm < l0) errs.push_back("sat bounds k_max/l_max below k0/l0");
        if (cap < 1) errs.push_back("sat.horizon_cap must be positive");
    }
    return errs;
}

ProblemInstance load_instance(const json& j) {
    auto errs = validate_instance_json(j);
    if (!errs.empty()) throw ValidationError(std::move(errs));

    ProblemInstance inst;
    const auto& alphabet = j.at("alphabet");
    inst.sigma = string_set(alphabet.at("events"));
    inst.sigma_c = string_set(alphabet.at("controllable"));
    inst.sigma_o = string_set(alphabet.at("observable"));

    const auto& plant = j.at("plant");
    json pj;
    pj["states"] = plant.at("states");
    pj["alphabet"] = json::array();
    for (const auto& e : inst.sigma) pj["alphabet"].push_back(e);
    pj["initial"] = plant.at("initial");
    pj["marked"] = plant.value("marked", json::array());
    pj["transitions"] = plant.at("transitions");
    inst.plant = automaton_from_json(pj);
    if (plant.contains("secret")) inst.secret_states = string_set(plant.at("secret"));
    if (plant.contains("avoid")) inst.avoid_states = string_set(plant.at("avoid"));

    for (const auto& s : j.at("sensors")) {
        Sensor sensor;
        sensor.id = s.at("id").get<int>();
        sensor.events = string_set(s.at("events"));
        inst.sensors.push_back(sensor);
    }
    std::sort(inst.sensors.begin(), inst.sensors.end(),
              [](const Sensor& a, const Sensor& b) { return a.id < b.id; });
    for (const auto& m : j.at("maskable")) inst.maskable.insert(m.get<int>());

    const auto& editor = j.at("editor");
    inst.editor_observable = string_set(editor.at("observable"));
    inst.editable = string_set(editor.at("editable"));
    inst.edit_bound = editor.at("bound").get<int>();

    const auto& intruder = j.at("intruder");
    inst.intruder_observable = string_set(intruder.at("observable_events"));
    for (const auto& c : intruder.at("observable_commands"))
        inst.intruder_commands.insert(Event::parse(c.get<std::string>()).command_events());

    if (j.contains("sat")) {
        const auto& sat = j.at("sat");
        inst.sat.k0 = sat.value("k0", 1);
        inst.sat.l0 = sat.value("l0", 1);
        inst.sat.k_max = sat.value("k_max", 8);
        inst.sat.l_max = sat.value("l_max", 8);
        inst.sat.horizon_cap = sat.value("horizon_cap", 10000);
    }

    // Cross-checks that need the parsed structures.
    std::vector<std::string> errs2;
    auto gset = inst.gamma_set();
    for (const auto& members : inst.intruder_commands)
        if (!gset.count(Event::command(members)))
            errs2.push_back("observable command outside the generated command set: " +
                            Event::command(members).canonical());
    if (!errs2.empty()) throw ValidationError(std::move(errs2));
    return inst;
}

ProblemInstance load_instance_file(const std::string& path) {
    json j = json::parse(read_text_file(path));
    return load_instance(j);
}

json instance_to_json(const ProblemInstance& inst) {
    json j;
    j["alphabet"]["events"] = inst.sigma;
    j["alphabet"]["controllable"] = inst.sigma_c;
    j["alphabet"]["observable"] = inst.sigma_o;

    json pj = automaton_to_json(inst.plant);
    j["plant"]["states"] = pj["states"];
    j["plant"]["initial"] = pj["initial"];
    j["plant"]["marked"] = pj["marked"];
    j["plant"]["transitions"] = pj["transitions"];
    j["plant"]["secret"] = inst.secret_states;
    j["plant"]["avoid"] = inst.avoid_states;

    j["sensors"] = json::array();
    for (const auto& s : inst.sensors) j["sensors"].push_back({{"id", s.id}, {"events", s.events}});
    j["maskable"] = inst.maskable;

    j["editor"]["observable"] = inst.editor_observable;
    j["editor"]["editable"] = inst.editable;
    j["editor"]["bound"] = inst.edit_bound;

    j["intruder"]["observable_events"] = inst.intruder_observable;
    j["intruder"]["observable_commands"] = json::array();
    for (const auto& members : inst.intruder_commands)
        j["intruder"]["observable_commands"].push_back(Event::command(members).canonical());

    j["sat"] = {{"k0", inst.sat.k0},
                {"l0", inst.sat.l0},
                {"k_max", inst.sat.k_max},
                {"l_max", inst.sat.l_max},
                {"horizon_cap", inst.sat.horizon_cap}};
    return j;
}

}  // namespace opasyn
