#include <doctest.h>

#include <algorithm>

#include "opasyn/event.hpp"

using namespace opasyn;

TEST_CASE("canonical event strings") {
    CHECK(Event::plain("a").canonical() == "a");
    CHECK(Event::on("c").canonical() == "c+on");
    CHECK(Event::off("c").canonical() == "c+off");
    CHECK(Event::sharp("b").canonical() == "b#");
    CHECK(Event::sensor_on(3).canonical() == "s3+on");
    CHECK(Event::sensor_off(5).canonical() == "s5+off");
    CHECK(Event::command({"b", "a"}).canonical() == "cmd{a,b}");
    CHECK(Event::stop().canonical() == "stop");
    CHECK(Event::decode().canonical() == "decode");
}

TEST_CASE("parse inverts canonical") {
    std::vector<Event> samples{
        Event::plain("a"),      Event::on("c"),         Event::off("c"),
        Event::sharp("b"),      Event::sensor_on(3),    Event::sensor_off(12),
        Event::command({"a"}),  Event::command({"a", "b", "c"}),
        Event::stop(),          Event::decode(),
    };
    for (const auto& e : samples) {
        Event back = Event::parse(e.canonical());
        CHECK(back == e);
        CHECK(back.kind() == e.kind());
    }
}

TEST_CASE("events are totally ordered by canonical string") {
    std::vector<Event> events{Event::stop(), Event::plain("a"), Event::sharp("b"),
                              Event::command({"a"}), Event::sensor_on(3)};
    std::sort(events.begin(), events.end());
    for (std::size_t i = 0; i + 1 < events.size(); ++i)
        CHECK(events[i].canonical() < events[i + 1].canonical());
}

TEST_CASE("reserved names are rejected") {
    CHECK_THROWS(Event::plain("stop"));
    CHECK_THROWS(Event::plain("a+b"));
    CHECK_THROWS(Event::plain(""));
    CHECK_THROWS(Event::command({}));
}
