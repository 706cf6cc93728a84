#include "evnms/event_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "evnms/errors.hpp"

namespace evnms {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view next_token(std::string_view& rest) {
  std::size_t b = 0;
  while (b < rest.size() && is_space(rest[b])) ++b;
  std::size_t e = b;
  while (e < rest.size() && !is_space(rest[e])) ++e;
  const std::string_view token = rest.substr(b, e - b);
  rest.remove_prefix(e);
  return token;
}

template <typename T>
bool parse_number(std::string_view token, T& value) {
  if (token.empty()) return false;
  const char* first = token.data();
  if (token.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), value);
  return ec == std::errc() && ptr == token.data() + token.size();
}

Event parse_line(std::string_view line, std::size_t line_no) {
  std::string_view rest = line;
  const auto t_tok = next_token(rest);
  const auto x_tok = next_token(rest);
  const auto y_tok = next_token(rest);
  const auto p_tok = next_token(rest);
  if (p_tok.empty() || !next_token(rest).empty()) {
    throw ParseError(line_no, "expected 4 fields 't x y p', got '" + std::string(line) + "'");
  }
  double seconds = 0.0;
  long x = 0;
  long y = 0;
  int p = 0;
  if (!parse_number(t_tok, seconds) || !(seconds >= 0.0)) {
    throw ParseError(line_no, "bad timestamp '" + std::string(t_tok) + "'");
  }
  if (!parse_number(x_tok, x) || x < 0 || x > 0xFFFF) {
    throw ParseError(line_no, "bad x '" + std::string(x_tok) + "'");
  }
  if (!parse_number(y_tok, y) || y < 0 || y > 0xFFFF) {
    throw ParseError(line_no, "bad y '" + std::string(y_tok) + "'");
  }
  if (!parse_number(p_tok, p) || (p != 0 && p != 1)) {
    throw ParseError(line_no, "bad polarity '" + std::string(p_tok) + "' (expected 0 or 1)");
  }
  return Event{from_seconds(seconds), static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
               p == 1 ? Polarity::kPositive : Polarity::kNegative};
}

}  // namespace

std::vector<Event> read_events(std::istream& in) {
  std::vector<Event> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    while (!view.empty() && is_space(view.back())) view.remove_suffix(1);
    if (view.empty()) continue;
    events.push_back(parse_line(view, line_no));
  }
  return events;
}

std::vector<Event> read_events_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open event file");
  return read_events(in);
}

void write_events(std::ostream& out, std::span<const Event> events) {
  char buf[64];
  for (const Event& e : events) {
    const Timestamp sec = e.t / 1000000;
    const Timestamp usec = e.t % 1000000;
    const int n = std::snprintf(buf, sizeof(buf), "%lld.%06lld %u %u %d\n",
                                static_cast<long long>(sec), static_cast<long long>(usec),
                                static_cast<unsigned>(e.x), static_cast<unsigned>(e.y),
                                e.p == Polarity::kPositive ? 1 : 0);
    out.write(buf, n);
  }
}

void write_events_file(const std::filesystem::path& path, std::span<const Event> events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot write event file");
  write_events(out, events);
  if (!out) throw IoError(path.string(), "write failed for event file");
}

}  // namespace evnms
