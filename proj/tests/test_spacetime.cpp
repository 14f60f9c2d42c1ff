#include <gtest/gtest.h>

#include <random>

#include "relcoin/spacetime.hpp"

using namespace relcoin;

namespace {

SpacetimePoint pt(double x, double t) { return {{x}, t}; }

}  // namespace

TEST(Interval, TimelikeSpacelikeAndArithmetic) {
  EXPECT_DOUBLE_EQ(interval(pt(0, 0), pt(0, 1)), 1.0);
  EXPECT_DOUBLE_EQ(interval(pt(0, 0), pt(1, 0)), -1.0);
  EXPECT_DOUBLE_EQ(interval(pt(0, 0), pt(3, 5)), 25.0 - 9.0);
}

TEST(Interval, SymmetricInArguments) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 200; ++i) {
    const SpacetimePoint p{{u(gen), u(gen)}, u(gen)};
    const SpacetimePoint q{{u(gen), u(gen)}, u(gen)};
    EXPECT_DOUBLE_EQ(interval(p, q), interval(q, p));
  }
}

TEST(Interval, DimensionMismatchThrows) {
  EXPECT_THROW(interval(pt(0, 0), SpacetimePoint{{0, 0}, 1}), DimensionMismatch);
  EXPECT_THROW(causally_precedes(pt(0, 0), SpacetimePoint{{0, 0}, 1}), DimensionMismatch);
  EXPECT_THROW(earliest_arrival(pt(0, 0), Position{0, 0}), DimensionMismatch);
}

TEST(CausallyPrecedes, InsideOutsideAndOnTheCone) {
  EXPECT_TRUE(causally_precedes(pt(0, 0), pt(0.5, 1)));
  EXPECT_FALSE(causally_precedes(pt(0, 0), pt(2, 1)));
  EXPECT_TRUE(causally_precedes(pt(0, 0), pt(1, 1)));
}

TEST(EarliestArrival, Examples) {
  EXPECT_DOUBLE_EQ(earliest_arrival(pt(0, 0), {5}), 5.0);
  EXPECT_DOUBLE_EQ(earliest_arrival(pt(2, 3), {2}), 3.0);
  EXPECT_DOUBLE_EQ(earliest_arrival(pt(0, 1), {4}), 5.0);
}

TEST(CausalOrder, AntisymmetricOnTimelikePairs) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(-5, 5);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const SpacetimePoint p{{u(gen), u(gen)}, u(gen)};
    const SpacetimePoint q{{u(gen), u(gen)}, u(gen)};
    if (causally_precedes(p, q) && interval(p, q) > 0) {
      EXPECT_FALSE(causally_precedes(q, p));
      ++checked;
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(CausalOrder, TransitiveOnRandomTriples) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-3, 3);
  std::uniform_real_distribution<double> dt(0, 4);
  int chains = 0;
  for (int i = 0; i < 5000; ++i) {
    const SpacetimePoint p{{u(gen), u(gen)}, u(gen)};
    const SpacetimePoint q{{u(gen), u(gen)}, p.time + dt(gen)};
    const SpacetimePoint r{{u(gen), u(gen)}, q.time + dt(gen)};
    if (causally_precedes(p, q) && causally_precedes(q, r)) {
      ++chains;
      EXPECT_TRUE(causally_precedes(p, r));
    }
  }
  EXPECT_GT(chains, 100);
}

TEST(EarliestArrival, IsTheMinimalReachableTime) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 500; ++i) {
    const SpacetimePoint p{{u(gen), u(gen), u(gen)}, u(gen)};
    const Position x{u(gen), u(gen), u(gen)};
    const double T = earliest_arrival(p, x);
    EXPECT_TRUE(causally_precedes(p, {x, T}));
    EXPECT_FALSE(causally_precedes(p, {x, std::nextafter(T, -1e300) - 1e-12 * std::abs(T)}));
  }
}

TEST(ScenarioConfig, DefaultsAreValid) {
  ScenarioConfig s;
  EXPECT_NO_THROW(s.validate());
  EXPECT_DOUBLE_EQ(s.separation(), 10.0);
  EXPECT_EQ(s.spatial_dim(), 1u);
}

TEST(ScenarioConfig, RejectsBrokenGeometry) {
  EXPECT_THROW(ScenarioConfig::line(4.0, 1.0, 0.5), ConfigError);   // not > 4 delta
  EXPECT_NO_THROW(ScenarioConfig::line(4.01, 1.0, 0.5));
  EXPECT_THROW(ScenarioConfig::line(10, 1.0, 1.0), ConfigError);    // epsilon must be < delta
  EXPECT_THROW(ScenarioConfig::line(10, 1.0, 0.0), ConfigError);    // epsilon > 0
  EXPECT_THROW(ScenarioConfig::line(10, 1.0, 0.5, std::numeric_limits<double>::infinity()), ConfigError);
  ScenarioConfig s;
  s.safety_factor = 3.5;
  EXPECT_THROW(s.validate(), ConfigError);
  s = ScenarioConfig{};
  s.site2 = {1, 2};
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(ScenarioJson, RoundTripAndUnknownKeys) {
  const auto s = ScenarioConfig::line(20, 2, 1, 3);
  const auto back = scenario_from_json(nlohmann::json::parse(to_json(s).dump()));
  EXPECT_EQ(back.site2, s.site2);
  EXPECT_DOUBLE_EQ(back.delta, 2);
  EXPECT_DOUBLE_EQ(back.start_time, 3);
  EXPECT_THROW(scenario_from_json(nlohmann::json::parse(R"({"delta": 1, "speed": 2})")), ConfigError);
  EXPECT_THROW(scenario_from_json(nlohmann::json::parse(R"({"delta": "x"})")), ConfigError);
}
