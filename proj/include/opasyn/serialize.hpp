// serialize.hpp — automaton JSON schema and DOT export
#pragma once

#include <string>

#include <json.hpp>

#include "opasyn/automaton.hpp"

namespace opasyn {

/// {states, alphabet, initial, marked, transitions:[[src,event,dst]]} with
/// canonical event strings.
nlohmann::json automaton_to_json(const Automaton& a);
Automaton automaton_from_json(const nlohmann::json& j);

std::string automaton_to_dot(const Automaton& a, const std::string& name = "automaton");

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace opasyn
