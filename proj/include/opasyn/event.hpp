// event.hpp — decorated alphabet symbols for the closed-loop universe
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace opasyn {

enum class EventKind {
    Plain,      // base event a
    On,         // relabelled copy a+on (sensor turned on)
    Off,        // relabelled copy a+off (sensor turned off)
    Sharp,      // edit-function output a#
    SensorOn,   // mask action s<i>+on
    SensorOff,  // mask action s<i>+off
    Command,    // control command cmd{a,b,...}
    Stop,       // end of an edit round
    Decode,     // intruder certifies the secret
};

/// An event is identified by its canonical string; all comparisons,
/// hashing and serialization go through it. Canonical forms:
///   `a`, `c+on`, `c+off`, `b#`, `s3+on`, `s3+off`, `cmd{a,b}`, `stop`, `decode`
class Event {
  public:
    Event() = default;

    static Event plain(const std::string& name);
    static Event on(const std::string& name);
    static Event off(const std::string& name);
    static Event sharp(const std::string& name);
    static Event sensor_on(int index);
    static Event sensor_off(int index);
    static Event command(const std::set<std::string>& enabled);
    static Event stop();
    static Event decode();

    /// Parses a canonical string back into an event.
    static Event parse(const std::string& text);

    EventKind kind() const { return kind_; }
    /// Base symbol for Plain/On/Off/Sharp events.
    const std::string& base() const { return base_; }
    /// Sensor index for SensorOn/SensorOff events.
    int sensor_index() const { return sensor_; }
    /// Enabled controllable base events for Command events.
    const std::set<std::string>& command_events() const { return command_; }

    const std::string& canonical() const { return canonical_; }

    bool operator==(const Event& other) const { return canonical_ == other.canonical_; }
    std::strong_ordering operator<=>(const Event& other) const {
        return canonical_ <=> other.canonical_;
    }

  private:
    EventKind kind_ = EventKind::Plain;
    std::string base_;
    int sensor_ = -1;
    std::set<std::string> command_;
    std::string canonical_;

    void rebuild_canonical();
};

using EventSet = std::set<Event>;

/// Set helpers used pervasively by the component builders.
EventSet set_union(const EventSet& a, const EventSet& b);
EventSet set_minus(const EventSet& a, const EventSet& b);
EventSet set_intersect(const EventSet& a, const EventSet& b);

/// Lifts a set of base names into events of the given decoration.
EventSet plains(const std::set<std::string>& names);
EventSet ons(const std::set<std::string>& names);
EventSet offs(const std::set<std::string>& names);
EventSet sharps(const std::set<std::string>& names);

struct EventHash {
    std::size_t operator()(const Event& e) const {
        return std::hash<std::string>{}(e.canonical());
    }
};

}  // namespace opasyn
