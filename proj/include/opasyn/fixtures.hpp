// fixtures.hpp — bundled problem instances
#pragma once

#include "opasyn/instance.hpp"

namespace opasyn {

/// The campus location-privacy instance: an eight-location map entered
/// through gate 1 and left through gate 2, with the laboratory location
/// secret, two maskable sensors, a one-shot editor for two of the roads and
/// an intruder that eavesdrops five road sensors plus every command that
/// does not consist of the entry road alone.
nlohmann::json example_instance_json();
ProblemInstance example_instance();

}  // namespace opasyn
