#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "judgeaudit/errors.hpp"
#include "judgeaudit/scoring.hpp"

#include "test_utils.hpp"

using namespace judgeaudit;

namespace {

SampleSet set_from_clipped(std::vector<double> clipped) {
  SampleSet set;
  set.example_id = "x";
  set.n_raw = static_cast<int>(clipped.size());
  set.parsed = clipped;
  set.clipped = std::move(clipped);
  return set;
}

}  // namespace

TEST_CASE("parse_score fixture corpus") {
  struct Fixture {
    const char* text;
    bool has_value;
    double value;
  };
  const Fixture fixtures[] = {
      {"8", true, 8.0},
      {" 7.5\n", true, 7.5},
      {"Score: 9", true, 9.0},
      {"good", false, 0.0},
      {"-3", true, -3.0},
      {"+4.25", true, 4.25},
      {"9.", true, 9.0},
      {"score is 8 out of 10", true, 8.0},
      {"", false, 0.0},
      {"...", false, 0.0},
      {"8\n7", true, 8.0},
      {"  10  ", true, 10.0},
      {"0", true, 0.0},
      {"3.14159", true, 3.14159},
      {"The answer: 7", true, 7.0},
      {"I'd rate it an 8.", true, 8.0},
      {"minus five", false, 0.0},
      {"7/10", true, 7.0},
      {"-0.5", true, -0.5},
      {"Score:9", true, 9.0},
  };
  for (const auto& fixture : fixtures) {
    CAPTURE(fixture.text);
    const auto parsed = parse_score(fixture.text);
    CHECK(parsed.has_value() == fixture.has_value);
    if (fixture.has_value) {
      CHECK(*parsed == doctest::Approx(fixture.value).epsilon(1e-12));
    }
  }
}

TEST_CASE("parse_score round-trips formatted decimals") {
  SplitMix64 rng(17);
  for (int i = 0; i < 300; ++i) {
    const double value = (rng.next_double() - 0.5) * 200.0;
    char text[64];
    std::snprintf(text, sizeof(text), "%.9f", value);
    const auto parsed = parse_score(text);
    REQUIRE(parsed.has_value());
    CHECK(*parsed == doctest::Approx(value).epsilon(1e-9));
  }
}

TEST_CASE("clip clamps into the range and rejects non-finite input") {
  const ScoreRange range{0, 9};
  CHECK(clip(12.0, range) == 9.0);
  CHECK(clip(-3.0, range) == 0.0);
  CHECK(clip(5.0, range) == 5.0);
  CHECK(clip(clip(12.7, range), range) == clip(12.7, range));
  CHECK_THROWS_AS(clip(std::nan(""), range), NumericError);
  CHECK_THROWS_AS(clip(INFINITY, range), NumericError);
}

TEST_CASE("build_sample_set keeps valid parses in generation order") {
  RawGeneration gen;
  gen.example_id = "e1";
  gen.texts = {"7", "8", "bad", "12", "-1", "oops"};
  const auto set = build_sample_set(gen, ScoreRange{0, 9});
  CHECK(set.example_id == "e1");
  CHECK(set.n_raw == 6);
  CHECK(set.parsed == std::vector<double>{7.0, 8.0, 12.0, -1.0});
  CHECK(set.clipped == std::vector<double>{7.0, 8.0, 9.0, 0.0});
}

TEST_CASE("aggregate averages clipped samples") {
  const auto three = aggregate(set_from_clipped({8.0, 8.0, 9.0}));
  REQUIRE(three.value.has_value());
  CHECK(*three.value == doctest::Approx(25.0 / 3.0).epsilon(1e-12));
  CHECK(three.n_valid == 3);

  const auto empty = aggregate(set_from_clipped({}));
  CHECK_FALSE(empty.value.has_value());
  CHECK(empty.n_valid == 0);

  const auto single = aggregate(set_from_clipped({5.0}));
  CHECK(*single.value == 5.0);
}

TEST_CASE("aggregate is permutation invariant") {
  SplitMix64 rng(6);
  std::vector<double> values;
  for (int i = 0; i < 10; ++i) values.push_back(static_cast<double>(rng.next_int(0, 9)));
  const auto forward = aggregate(set_from_clipped(values));
  std::sort(values.begin(), values.end());
  const auto sorted = aggregate(set_from_clipped(values));
  CHECK(*forward.value == doctest::Approx(*sorted.value).epsilon(1e-12));
}

TEST_CASE("dataset_mode pools rounded samples and breaks ties upward") {
  const ScoreRange range{0, 9};

  std::vector<SampleSet> unique_max;
  unique_max.push_back(set_from_clipped(std::vector<double>(37, 8.0)));
  unique_max.push_back(set_from_clipped(std::vector<double>(10, 7.0)));
  unique_max.push_back(set_from_clipped(std::vector<double>(3, 9.0)));
  CHECK(dataset_mode(unique_max, range) == 8);

  std::vector<SampleSet> tied;
  tied.push_back(set_from_clipped(std::vector<double>(10, 7.0)));
  tied.push_back(set_from_clipped(std::vector<double>(10, 8.0)));
  CHECK(dataset_mode(tied, range) == 8);

  std::vector<SampleSet> small;
  small.push_back(set_from_clipped({3.0, 3.0, 4.0}));
  CHECK(dataset_mode(small, range) == 3);

  std::vector<SampleSet> empty;
  empty.push_back(set_from_clipped({}));
  CHECK_THROWS_AS(dataset_mode(empty, range), DegenerateDistributionError);
}

TEST_CASE("mode_ratio counts matches against the dataset mode") {
  const auto set = set_from_clipped({8, 8, 8, 7, 8, 9, 8, 8, 8, 8});
  CHECK(*mode_ratio(set, 8) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(*mode_ratio(set_from_clipped({5, 5, 5}), 5) == 1.0);
  CHECK(*mode_ratio(set_from_clipped({1, 2, 3}), 8) == 0.0);
  CHECK_FALSE(mode_ratio(set_from_clipped({}), 8).has_value());
}

TEST_CASE("mode_ratio stays within the unit interval") {
  SplitMix64 rng(12);
  const ScoreRange range{0, 9};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> values;
    const int n = 1 + static_cast<int>(rng.next_int(0, 12));
    for (int i = 0; i < n; ++i) values.push_back(static_cast<double>(rng.next_int(0, 9)));
    const auto ratio = mode_ratio(set_from_clipped(values), 8);
    REQUIRE(ratio.has_value());
    CHECK(*ratio >= 0.0);
    CHECK(*ratio <= 1.0);
  }
}
