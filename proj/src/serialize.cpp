#include "opasyn/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace opasyn {

using nlohmann::json;

json automaton_to_json(const Automaton& a) {
    json j;
    j["states"] = json::array();
    for (StateId s = 0; s < a.num_states(); ++s) j["states"].push_back(a.state_name(s));
    j["alphabet"] = json::array();
    for (const auto& e : a.events()) j["alphabet"].push_back(e.canonical());
    j["initial"] = a.has_initial() ? json(a.state_name(a.initial())) : json(nullptr);
    j["marked"] = json::array();
    for (StateId s = 0; s < a.num_states(); ++s)
        if (a.is_marked(s)) j["marked"].push_back(a.state_name(s));
    j["transitions"] = json::array();
    for (StateId s = 0; s < a.num_states(); ++s)
        for (const auto& [eid, dst] : a.transitions_from(s))
            j["transitions"].push_back(
                {a.state_name(s), a.event(eid).canonical(), a.state_name(dst)});
    return j;
}

Automaton automaton_from_json(const json& j) {
    EventSet alphabet;
    for (const auto& e : j.at("alphabet")) alphabet.insert(Event::parse(e.get<std::string>()));
    Automaton a(alphabet);
    for (const auto& s : j.at("states")) a.add_state(s.get<std::string>());
    if (j.contains("marked"))
        for (const auto& s : j.at("marked")) {
            auto id = a.state_id(s.get<std::string>());
            if (!id) throw std::invalid_argument("marked state not declared: " + s.get<std::string>());
            a.set_marked(*id, true);
        }
    if (j.contains("initial") && !j.at("initial").is_null()) {
        auto id = a.state_id(j.at("initial").get<std::string>());
        if (!id) throw std::invalid_argument("initial state not declared");
        a.set_initial(*id);
    }
    for (const auto& t : j.at("transitions")) {
        if (!t.is_array() || t.size() != 3)
            throw std::invalid_argument("transition must be [src,event,dst]");
        a.add_transition(t[0].get<std::string>(), Event::parse(t[1].get<std::string>()),
                         t[2].get<std::string>());
    }
    return a;
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string automaton_to_dot(const Automaton& a, const std::string& name) {
    std::ostringstream oss;
    oss << "digraph \"" << dot_escape(name) << "\" {\n";
    oss << "  rankdir=LR;\n";
    oss << "  node [shape=circle];\n";
    if (a.has_initial()) {
        oss << "  __init [shape=point];\n";
        oss << "  __init -> \"" << dot_escape(a.state_name(a.initial())) << "\";\n";
    }
    for (StateId s = 0; s < a.num_states(); ++s) {
        oss << "  \"" << dot_escape(a.state_name(s)) << "\"";
        if (a.is_marked(s)) oss << " [shape=doublecircle]";
        oss << ";\n";
    }
    for (StateId s = 0; s < a.num_states(); ++s)
        for (const auto& [eid, dst] : a.transitions_from(s))
            oss << "  \"" << dot_escape(a.state_name(s)) << "\" -> \""
                << dot_escape(a.state_name(dst)) << "\" [label=\""
                << dot_escape(a.event(eid).canonical()) << "\"];\n";
    oss << "}\n";
    return oss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream oss;
    oss << in.rdbuf();
    return oss.str();
}

}  // namespace opasyn
