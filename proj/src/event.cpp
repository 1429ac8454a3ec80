#include "opasyn/event.hpp"

#include <algorithm>
#include <sstream>

namespace opasyn {

void Event::rebuild_canonical() {
    switch (kind_) {
        case EventKind::Plain:
            canonical_ = base_;
            break;
        case EventKind::On:
            canonical_ = base_ + "+on";
            break;
        case EventKind::Off:
            canonical_ = base_ + "+off";
            break;
        case EventKind::Sharp:
            canonical_ = base_ + "#";
            break;
        case EventKind::SensorOn:
            canonical_ = "s" + std::to_string(sensor_) + "+on";
            break;
        case EventKind::SensorOff:
            canonical_ = "s" + std::to_string(sensor_) + "+off";
            break;
        case EventKind::Command: {
            std::ostringstream oss;
            oss << "cmd{";
            bool first = true;
            for (const auto& name : command_) {
                if (!first) oss << ",";
                oss << name;
                first = false;
            }
            oss << "}";
            canonical_ = oss.str();
            break;
        }
        case EventKind::Stop:
            canonical_ = "stop";
            break;
        case EventKind::Decode:
            canonical_ = "decode";
            break;
    }
}

static void check_name(const std::string& name) {
    if (name.empty()) throw std::invalid_argument("event name must be nonempty");
    for (char c : name) {
        if (c == '+' || c == '#' || c == '{' || c == '}' || c == ',' || c == ' ')
            throw std::invalid_argument("event name contains reserved character: " + name);
    }
    if (name == "stop" || name == "decode")
        throw std::invalid_argument("event name collides with reserved symbol: " + name);
}

Event Event::plain(const std::string& name) {
    check_name(name);
    Event e;
    e.kind_ = EventKind::Plain;
    e.base_ = name;
    e.rebuild_canonical();
    return e;
}

Event Event::on(const std::string& name) {
    check_name(name);
    Event e;
    e.kind_ = EventKind::On;
    e.base_ = name;
    e.rebuild_canonical();
    return e;
}

Event Event::off(const std::string& name) {
    check_name(name);
    Event e;
    e.kind_ = EventKind::Off;
    e.base_ = name;
    e.rebuild_canonical();
    return e;
}

Event Event::sharp(const std::string& name) {
    check_name(name);
    Event e;
    e.kind_ = EventKind::Sharp;
    e.base_ = name;
    e.rebuild_canonical();
    return e;
}

Event Event::sensor_on(int index) {
    Event e;
    e.kind_ = EventKind::SensorOn;
    e.sensor_ = index;
    e.rebuild_canonical();
    return e;
}

Event Event::sensor_off(int index) {
    Event e;
    e.kind_ = EventKind::SensorOff;
    e.sensor_ = index;
    e.rebuild_canonical();
    return e;
}

Event Event::command(const std::set<std::string>& enabled) {
    if (enabled.empty()) throw std::invalid_argument("command must enable at least one event");
    for (const auto& n : enabled) check_name(n);
    Event e;
    e.kind_ = EventKind::Command;
    e.command_ = enabled;
    e.rebuild_canonical();
    return e;
}

Event Event::stop() {
    Event e;
    e.kind_ = EventKind::Stop;
    e.rebuild_canonical();
    return e;
}

Event Event::decode() {
    Event e;
    e.kind_ = EventKind::Decode;
    e.rebuild_canonical();
    return e;
}

Event Event::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty event string");
    if (text == "stop") return stop();
    if (text == "decode") return decode();
    if (text.rfind("cmd{", 0) == 0) {
        if (text.back() != '}') throw std::invalid_argument("malformed command event: " + text);
        std::set<std::string> members;
        std::string body = text.substr(4, text.size() - 5);
        std::istringstream iss(body);
        std::string item;
        while (std::getline(iss, item, ',')) {
            if (!item.empty()) members.insert(item);
        }
        return command(members);
    }
    auto ends_with = [&](const std::string& suffix) {
        return text.size() > suffix.size() &&
               text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    auto is_sensor = [&](const std::string& stem) {
        if (stem.size() < 2 || stem[0] != 's') return false;
        return std::all_of(stem.begin() + 1, stem.end(),
                           [](char c) { return c >= '0' && c <= '9'; });
    };
    if (ends_with("+on")) {
        std::string stem = text.substr(0, text.size() - 3);
        if (is_sensor(stem)) return sensor_on(std::stoi(stem.substr(1)));
        return on(stem);
    }
    if (ends_with("+off")) {
        std::string stem = text.substr(0, text.size() - 4);
        if (is_sensor(stem)) return sensor_off(std::stoi(stem.substr(1)));
        return off(stem);
    }
    if (text.back() == '#') return sharp(text.substr(0, text.size() - 1));
    return plain(text);
}

EventSet set_union(const EventSet& a, const EventSet& b) {
    EventSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

EventSet set_minus(const EventSet& a, const EventSet& b) {
    EventSet out;
    for (const auto& e : a)
        if (!b.count(e)) out.insert(e);
    return out;
}

EventSet set_intersect(const EventSet& a, const EventSet& b) {
    EventSet out;
    for (const auto& e : a)
        if (b.count(e)) out.insert(e);
    return out;
}

EventSet plains(const std::set<std::string>& names) {
    EventSet out;
    for (const auto& n : names) out.insert(Event::plain(n));
    return out;
}

EventSet ons(const std::set<std::string>& names) {
    EventSet out;
    for (const auto& n : names) out.insert(Event::on(n));
    return out;
}

EventSet offs(const std::set<std::string>& names) {
    EventSet out;
    for (const auto& n : names) out.insert(Event::off(n));
    return out;
}

EventSet sharps(const std::set<std::string>& names) {
    EventSet out;
    for (const auto& n : names) out.insert(Event::sharp(n));
    return out;
}

}  // namespace opasyn
