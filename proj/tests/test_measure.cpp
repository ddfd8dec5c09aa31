#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wcm/empirical.hpp"
#include "wcm/measure.hpp"
#include "wcm/rng.hpp"

using namespace wcm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DiscreteMeasure random_measure(SplitMix64& rng, const AlphabetPtr& alphabet,
                               bool full_support = true) {
  std::vector<double> w(alphabet->size(), 0.0);
  bool any = false;
  for (double& v : w) {
    if (full_support || rng.next_double() < 0.6) {
      v = rng.next_positive();
      any = true;
    }
  }
  if (!any) w[rng.next_below(w.size())] = rng.next_positive();
  return DiscreteMeasure(alphabet, std::move(w));
}

}  // namespace

TEST_CASE("measure construction normalizes and validates") {
  auto ab = make_alphabet({"a", "b"});

  DiscreteMeasure even(ab, {1.0, 1.0});
  CHECK(even.weight(0) == 0.5);
  CHECK(even.weight(1) == 0.5);

  auto abc = make_alphabet({"a", "b", "c"});
  DiscreteMeasure scaled(abc, {2.0, 3.0, 5.0});
  CHECK(scaled.weight(0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(scaled.weight(1) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(scaled.weight(2) == doctest::Approx(0.5).epsilon(1e-15));

  double mass = 0.0;
  for (double w : scaled.weights()) mass += w;
  CHECK(std::abs(mass - 1.0) <= 1e-12);

  CHECK_THROWS_AS(DiscreteMeasure(ab, {1.0, -0.1}), Error);
  try {
    DiscreteMeasure(ab, {1.0, -0.1});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::negative_weight);
  }

  CHECK_THROWS_AS(DiscreteMeasure(ab, {0.0, 0.0}), Error);
  try {
    DiscreteMeasure(ab, {0.0, 0.0});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::zero_total_mass);
  }

  CHECK_THROWS_AS(DiscreteMeasure(ab, {1.0}), Error);
  CHECK_THROWS_AS(DiscreteMeasure(ab, {1.0, kInf}), Error);
  CHECK_THROWS_AS(DiscreteMeasure(ab, {1.0, std::nan("")}), Error);
}

TEST_CASE("alphabet labels are unique and indexed") {
  CHECK_THROWS_AS(make_alphabet({"a", "a"}), Error);
  CHECK_THROWS_AS(make_alphabet({}), Error);
  auto ab = make_alphabet({"a", "b"});
  CHECK(ab->index_of("b") == 1);
  CHECK(ab->label(0) == "a");
  CHECK_THROWS_AS(ab->index_of("c"), Error);
}

TEST_CASE("relative entropy matches direct summation") {
  auto ab = make_alphabet({"a", "b"});
  DiscreteMeasure p(ab, {1.0, 0.0});
  DiscreteMeasure q(ab, {0.5, 0.5});

  CHECK(kl_divergence(q, q) == 0.0);
  CHECK(kl_divergence(p, q) ==
        doctest::Approx(oracle::kl(p.weights(), q.weights())).epsilon(1e-15));
  CHECK(kl_divergence(p, q) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(kl_divergence(p, q) == doctest::Approx(0.693147).epsilon(1e-6));
  CHECK(kl_divergence(q, p) == kInf);

  auto other = make_alphabet({"a", "b", "c"});
  DiscreteMeasure r(other, {1.0, 1.0, 1.0});
  CHECK_THROWS_AS(kl_divergence(p, r), Error);
}

TEST_CASE("jeffreys divergence is the symmetrized sum") {
  auto ab = make_alphabet({"a", "b"});
  DiscreteMeasure p(ab, {0.26894, 0.73106});
  DiscreteMeasure q(ab, {0.5, 0.5});

  CHECK(jeffreys_divergence(q, q) == 0.0);
  const double expected =
      oracle::kl(p.weights(), q.weights()) + oracle::kl(q.weights(), p.weights());
  CHECK(jeffreys_divergence(p, q) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(jeffreys_divergence(p, q) == doctest::Approx(0.231055).epsilon(1e-4));

  SplitMix64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    auto alphabet = make_alphabet({"a", "b", "c", "d"});
    DiscreteMeasure a = random_measure(rng, alphabet);
    DiscreteMeasure b = random_measure(rng, alphabet);
    // summation order is fixed, so symmetry holds bit for bit
    CHECK(jeffreys_divergence(a, b) == jeffreys_divergence(b, a));
  }
}

TEST_CASE("mix is the convex combination") {
  auto ab = make_alphabet({"a", "b"});
  DiscreteMeasure p(ab, {1.0, 0.0});
  DiscreteMeasure q(ab, {0.0, 1.0});

  DiscreteMeasure endpoint = mix(p, q, 1.0);
  CHECK(endpoint.weight(0) == p.weight(0));
  CHECK(endpoint.weight(1) == p.weight(1));

  DiscreteMeasure quarter = mix(p, q, 0.25);
  CHECK(quarter.weight(0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(quarter.weight(1) == doctest::Approx(0.75).epsilon(1e-15));

  CHECK_THROWS_AS(mix(p, q, 1.5), Error);
  CHECK_THROWS_AS(mix(p, q, -0.1), Error);
  try {
    mix(p, q, 1.5);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::weight_out_of_range);
  }
}

TEST_CASE("mixing types reproduces the aggregated dataset's type") {
  auto ab = make_alphabet({"a", "b"});
  Dataset z1(ab, {0});
  Dataset z2(ab, {1, 1});
  DiscreteMeasure mixed =
      mix(type_of(z1).as_measure, type_of(z2).as_measure, 1.0 / 3.0);
  DiscreteMeasure joint = type_of(aggregate(z1, z2)).as_measure;
  for (std::size_t i = 0; i < mixed.size(); ++i) {
    CHECK(std::abs(mixed.weight(i) - joint.weight(i)) <= 1e-12);
  }
}

TEST_CASE("absolute continuity is support containment") {
  auto ab = make_alphabet({"a", "b"});
  DiscreteMeasure point(ab, {1.0, 0.0});
  DiscreteMeasure full(ab, {0.5, 0.5});

  CHECK(is_abs_continuous(full, full));
  CHECK(is_abs_continuous(point, full));
  CHECK_FALSE(is_abs_continuous(full, point));

  CHECK_THROWS_AS(require_abs_continuous(full, point, "P", "Q"), Error);
  try {
    require_abs_continuous(full, point, "P", "Q");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_abs_continuous);
    CHECK(std::string(e.what()).find("'b'") != std::string::npos);
  }
}

TEST_CASE("divergence properties on random measure pairs") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t size = 2 + rng.next_below(11);  // up to 12 points
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < size; ++i) {
      labels.push_back("p" + std::to_string(i));
    }
    auto alphabet = make_alphabet(labels);
    DiscreteMeasure p = random_measure(rng, alphabet, false);
    DiscreteMeasure q = random_measure(rng, alphabet, false);

    const double kl = kl_divergence(p, q);
    CHECK(kl >= 0.0);
    CHECK(kl_divergence(p, p) == 0.0);
    CHECK(std::isfinite(kl) == is_abs_continuous(p, q));

    const DiscreteMeasure m = mix(p, q, 0.5);
    double mass = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      mass += m.weight(i);
      if (p.in_support(i) || q.in_support(i)) CHECK(m.in_support(i));
    }
    CHECK(std::abs(mass - 1.0) <= 1e-12);
    CHECK(is_abs_continuous(p, m));
    CHECK(is_abs_continuous(q, m));
  }
}
