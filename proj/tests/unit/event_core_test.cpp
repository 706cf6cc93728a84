#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>
#include <tuple>

#include "evnms/errors.hpp"
#include "evnms/event.hpp"
#include "evnms/event_io.hpp"

namespace evnms {
namespace {

Event ev(Timestamp t, int x, int y, Polarity p) {
  return Event{t, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y), p};
}

std::vector<Event> random_events(std::uint64_t seed, std::size_t n, SensorGeometry g) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> xd(0, g.width - 1);
  std::uniform_int_distribution<int> yd(0, g.height - 1);
  std::uniform_int_distribution<int> gap(0, 500);
  std::bernoulli_distribution pol(0.5);
  std::vector<Event> out;
  Timestamp t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    t += gap(rng);
    out.push_back(ev(t, xd(rng), yd(rng), pol(rng) ? Polarity::kPositive : Polarity::kNegative));
  }
  return out;
}

std::size_t count_not_never(const SurfaceState& s) {
  std::size_t n = 0;
  for (const auto& g : s.sae) {
    for (Timestamp t : g.cells()) n += t != kNever ? 1 : 0;
  }
  return n;
}

TEST(UpdateSae, SingleUpdateOnFreshState) {
  SurfaceState s;
  update_sae(s, ev(10, 3, 4, Polarity::kPositive));
  EXPECT_EQ(s.sae_at(Polarity::kPositive, 3, 4), 10);
  EXPECT_EQ(s.sae_at(Polarity::kNegative, 3, 4), kNever);
  EXPECT_EQ(count_not_never(s), 1u);
}

TEST(UpdateSae, LatestWins) {
  SurfaceState s;
  update_sae(s, ev(10, 3, 4, Polarity::kPositive));
  update_sae(s, ev(20, 3, 4, Polarity::kPositive));
  EXPECT_EQ(s.sae_at(Polarity::kPositive, 3, 4), 20);
}

TEST(UpdateSae, MatchesMapReplayOracle) {
  const SensorGeometry g;
  const auto events = random_events(11, 10000, g);
  SurfaceState s(g);
  std::map<std::tuple<int, int, int>, Timestamp> oracle;
  for (const Event& e : events) {
    update_sae(s, e);
    oracle[{e.x, e.y, static_cast<int>(e.p)}] = e.t;
  }
  std::size_t fired = 0;
  for (int p = 0; p < 2; ++p) {
    for (int y = 0; y < g.height; ++y) {
      for (int x = 0; x < g.width; ++x) {
        const auto it = oracle.find({x, y, p});
        const Timestamp expected = it == oracle.end() ? kNever : it->second;
        ASSERT_EQ(s.sae[p].at(x, y), expected) << x << "," << y << "," << p;
        fired += it != oracle.end();
      }
    }
  }
  EXPECT_EQ(fired, oracle.size());
}

TEST(UpdateSae, TouchesExactlyOneCellAndIsMonotone) {
  const SensorGeometry g{32, 24};
  SurfaceState s(g);
  for (const Event& e : random_events(5, 2000, g)) {
    const SurfaceState before = s;
    update_sae(s, e);
    int changed = 0;
    for (int p = 0; p < 2; ++p) {
      for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
          const Timestamp a = before.sae[p].at(x, y);
          const Timestamp b = s.sae[p].at(x, y);
          if (a != b) ++changed;
          ASSERT_GE(b, a);
        }
      }
    }
    ASSERT_LE(changed, 1);
    ASSERT_EQ(s.ssae, before.ssae);
  }
}

TEST(StreamGuard, RejectsOutOfBoundsWithPosition) {
  StreamGuard guard(SensorGeometry{240, 180});
  guard.admit(ev(0, 1, 1, Polarity::kPositive));
  try {
    guard.admit(ev(5, 240, 3, Polarity::kPositive));
    FAIL() << "expected StreamError";
  } catch (const StreamError& err) {
    EXPECT_EQ(err.position(), 1u);
  }
}

TEST(StreamGuard, OrderingPolicies) {
  StreamGuard reject(SensorGeometry{});
  reject.admit(ev(100, 1, 1, Polarity::kPositive));
  reject.admit(ev(100, 1, 1, Polarity::kPositive));
  EXPECT_THROW(reject.admit(ev(99, 1, 1, Polarity::kPositive)), StreamError);

  StreamGuard clamp(SensorGeometry{}, OrderPolicy::kClamp);
  clamp.admit(ev(100, 1, 1, Polarity::kPositive));
  const Event e = clamp.admit(ev(90, 2, 2, Polarity::kNegative));
  EXPECT_EQ(e.t, 100);
  EXPECT_EQ(e.x, 2);
  EXPECT_EQ(clamp.clamped(), 1u);
}

TEST(ReadEvents, ParsesDatasetLines) {
  std::istringstream in("0.003811 96 133 0\n0.0 0 0 1\n");
  const auto events = read_events(in);
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[0], ev(3811, 96, 133, Polarity::kNegative));
  EXPECT_EQ(events[1], ev(0, 0, 0, Polarity::kPositive));
}

TEST(ReadEvents, EmptyInputIsEmpty) {
  std::istringstream in("");
  EXPECT_TRUE(read_events(in).empty());
}

TEST(ReadEvents, MalformedLineReportsLineNumber) {
  std::istringstream in("0.1 1 2 0\n0.2 1 2\n");
  try {
    read_events(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& err) {
    EXPECT_EQ(err.line(), 2u);
  }
  std::istringstream bad_pol("0.1 1 2 3\n");
  EXPECT_THROW(read_events(bad_pol), ParseError);
  std::istringstream bad_t("abc 1 2 0\n");
  EXPECT_THROW(read_events(bad_t), ParseError);
}

TEST(ReadEvents, RoundTripThroughWriter) {
  const auto events = random_events(3, 1000, SensorGeometry{});
  std::ostringstream out;
  write_events(out, events);
  std::istringstream in(out.str());
  const auto back = read_events(in);
  EXPECT_EQ(back, events);
  std::ostringstream again;
  write_events(again, back);
  EXPECT_EQ(again.str(), out.str());
}

TEST(ReadEvents, MissingFileIsIoError) {
  EXPECT_THROW(read_events_file("/nonexistent/events.txt"), IoError);
}

TEST(SurfaceState, ReplayIsDeterministic) {
  const auto events = random_events(9, 5000, SensorGeometry{});
  std::ostringstream text;
  write_events(text, events);
  auto replay = [&] {
    std::istringstream in(text.str());
    SurfaceState s;
    StreamGuard guard(s.geometry);
    for (const Event& e : read_events(in)) update_sae(s, guard.admit(e));
    return s;
  };
  EXPECT_EQ(replay(), replay());
}

}  // namespace
}  // namespace evnms
