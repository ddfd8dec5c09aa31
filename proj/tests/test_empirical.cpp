#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "fixtures.hpp"
#include "wcm/empirical.hpp"
#include "wcm/rng.hpp"

using namespace wcm;

TEST_CASE("types count occurrences exactly") {
  auto ab = make_alphabet({"a", "b"});

  TypeMeasure degenerate = type_of(Dataset(ab, {0, 0, 0}));
  CHECK(degenerate.counts == std::vector<std::uint64_t>{3, 0});
  CHECK(degenerate.as_measure.weight(0) == 1.0);
  CHECK(degenerate.as_measure.weight(1) == 0.0);

  TypeMeasure two_thirds = type_of(Dataset(ab, {0, 0, 1}));
  CHECK(two_thirds.n == 3);
  CHECK(two_thirds.as_measure.weight(0) == 2.0 / 3.0);
  CHECK(two_thirds.as_measure.weight(1) == 1.0 / 3.0);

  // permutation invariance
  TypeMeasure shuffled = type_of(Dataset(ab, {1, 0, 0}));
  CHECK(shuffled.counts == two_thirds.counts);
  CHECK(shuffled.as_measure.weight(0) == two_thirds.as_measure.weight(0));
}

TEST_CASE("datasets validate their entries") {
  auto ab = make_alphabet({"a", "b"});
  CHECK_THROWS_AS(Dataset(ab, {}), Error);
  CHECK_THROWS_AS(Dataset(ab, {2}), Error);
}

TEST_CASE("empirical risk averages the per-entry losses") {
  fixtures::TwoPoint fx;
  Dataset z = fixtures::dataset_of(fx.alphabet, {"z1", "z1", "z2"});
  CHECK(empirical_risk(fx.lm, z, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  LossModel zeros(fx.alphabet, {"t"}, {{0.0, 0.0}});
  CHECK(empirical_risk(zeros, z, 0) == 0.0);

  Dataset single = fixtures::dataset_of(fx.alphabet, {"z2"});
  CHECK(empirical_risk(fx.lm, single, 0) == 1.0);
}

TEST_CASE("risk through the type equals the direct average") {
  fixtures::TwoPoint fx;
  Dataset z = fixtures::dataset_of(fx.alphabet, {"z1", "z1", "z2"});
  CHECK(risk_via_type(fx.lm, z, 0) ==
        doctest::Approx(empirical_risk(fx.lm, z, 0)).epsilon(1e-15));

  LossModel constant(fx.alphabet, {"t"}, {{2.5, 2.5}});
  CHECK(risk_via_type(constant, z, 0) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(empirical_risk(constant, z, 0) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("paired risk identity holds over random draws") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t size = 2 + rng.next_below(9);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < size; ++i) {
      labels.push_back("p" + std::to_string(i));
    }
    auto alphabet = make_alphabet(labels);
    std::vector<double> row(size);
    for (double& v : row) v = rng.next_in(0.0, 5.0);
    LossModel lm(alphabet, {"t"}, {row});

    std::vector<std::size_t> entries(1 + rng.next_below(20));
    for (auto& e : entries) e = rng.next_below(size);
    Dataset z(alphabet, entries);

    CHECK(std::abs(empirical_risk(lm, z, 0) - risk_via_type(lm, z, 0)) <=
          1e-12);
  }
}

TEST_CASE("aggregation concatenates and mixes the types") {
  auto ab = make_alphabet({"a", "b"});
  Dataset z1(ab, {0});
  Dataset z2(ab, {1, 1});
  Dataset joint = aggregate(z1, z2);
  CHECK(joint.entries() == std::vector<std::size_t>{0, 1, 1});
  CHECK(type_of(joint).as_measure.weight(0) == 1.0 / 3.0);
  CHECK(type_of(joint).as_measure.weight(1) == 2.0 / 3.0);

  Dataset doubled = aggregate(z2, z2);
  CHECK(type_of(doubled).as_measure.weight(1) ==
        type_of(z2).as_measure.weight(1));

  auto other = make_alphabet({"a", "c"});
  CHECK_THROWS_AS(aggregate(z1, Dataset(other, {0})), Error);
}

TEST_CASE("aggregated type is the length-weighted mix on random pairs") {
  SplitMix64 rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t size = 2 + rng.next_below(6);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < size; ++i) {
      labels.push_back("p" + std::to_string(i));
    }
    auto alphabet = make_alphabet(labels);
    std::vector<std::size_t> e1(1 + rng.next_below(12));
    std::vector<std::size_t> e2(1 + rng.next_below(12));
    for (auto& e : e1) e = rng.next_below(size);
    for (auto& e : e2) e = rng.next_below(size);
    Dataset z1(alphabet, e1);
    Dataset z2(alphabet, e2);

    const double w =
        static_cast<double>(z1.length()) /
        static_cast<double>(z1.length() + z2.length());
    DiscreteMeasure mixed =
        mix(type_of(z1).as_measure, type_of(z2).as_measure, w);
    DiscreteMeasure joint = type_of(aggregate(z1, z2)).as_measure;
    for (std::size_t i = 0; i < mixed.size(); ++i) {
      CHECK(std::abs(mixed.weight(i) - joint.weight(i)) <= 1e-12);
    }
    CHECK(is_abs_continuous(type_of(z1).as_measure, joint));
    CHECK(is_abs_continuous(type_of(z2).as_measure, joint));
  }
}
