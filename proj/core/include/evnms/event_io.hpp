#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "evnms/event.hpp"

namespace evnms {

// Text format, one event per line: `t x y p` with t in decimal seconds and
// p in {0, 1}. Timestamps are rounded to the nearest microsecond on read.

std::vector<Event> read_events(std::istream& in);
std::vector<Event> read_events_file(const std::filesystem::path& path);

void write_events(std::ostream& out, std::span<const Event> events);
void write_events_file(const std::filesystem::path& path, std::span<const Event> events);

}  // namespace evnms
