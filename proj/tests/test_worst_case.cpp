#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wcm/rng.hpp"
#include "wcm/worst_case.hpp"

using namespace wcm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RandomInstance {
  AlphabetPtr alphabet;
  LossModel lm;
  DiscreteMeasure base;
};

RandomInstance draw_instance(SplitMix64& rng, std::size_t max_size = 10,
                             double loss_max = 5.0) {
  const std::size_t size = 2 + rng.next_below(max_size - 1);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < size; ++i) {
    labels.push_back("p" + std::to_string(i));
  }
  auto alphabet = make_alphabet(labels);
  std::vector<double> row(size), weights(size);
  for (double& v : row) v = rng.next_in(0.0, loss_max);
  for (double& v : weights) v = rng.next_positive();
  return RandomInstance{alphabet, LossModel(alphabet, {"t"}, {row}),
                        DiscreteMeasure(alphabet, weights)};
}

}  // namespace

TEST_CASE("log-partition values match direct summation") {
  fixtures::TwoPoint fx;

  CHECK(log_partition(fx.lm, 0, fx.reference, 0.0) == 0.0);

  const double at_one = log_partition(fx.lm, 0, fx.reference, 1.0);
  CHECK(at_one == doctest::Approx(std::log(0.5 + 0.5 * std::exp(1.0)))
                      .epsilon(1e-15));
  CHECK(at_one ==
        doctest::Approx(oracle::log_partition({0.5, 0.5}, {0.0, 1.0}, 1.0))
            .epsilon(1e-15));
  CHECK(at_one == doctest::Approx(0.620115).epsilon(1e-6));
}

TEST_CASE("bounded loss caps the scaled log-partition value") {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    RandomInstance inst = draw_instance(rng);
    const double bound = max_loss_on_support(inst.lm, 0, inst.base);
    for (double t : {0.5, 1.0, 2.0}) {
      CHECK(log_partition(inst.lm, 0, inst.base, 1.0 / t) <=
            bound / t + 1e-12);
    }
  }
}

TEST_CASE("log-partition diverges only for infinite loss on the support") {
  auto ab = make_alphabet({"a", "b"});
  LossModel lm(ab, {"t"}, {{0.0, kInf}});
  DiscreteMeasure full(ab, {0.5, 0.5});
  DiscreteMeasure safe(ab, {1.0, 0.0});
  CHECK(log_partition(lm, 0, full, 1.0) == kInf);
  CHECK(log_partition(lm, 0, safe, 1.0) == 0.0);
  // negative argument: the infinite-loss term vanishes instead
  CHECK(std::isfinite(log_partition(lm, 0, full, -1.0)));
}

TEST_CASE("tilting a constant loss returns the reference") {
  auto ab = make_alphabet({"a", "b", "c"});
  LossModel lm(ab, {"t"}, {{2.0, 2.0, 2.0}});
  DiscreteMeasure base(ab, {0.2, 0.3, 0.5});
  WorstCaseTilt w = tilt(lm, 0, base, 1.5);
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(std::abs(w.measure.weight(i) - base.weight(i)) <= 1e-12);
  }
  CHECK(std::abs(w.gamma) <= 1e-12);
}

TEST_CASE("two-point tilt matches the closed form") {
  fixtures::TwoPoint fx;
  WorstCaseTilt w = tilt(fx.lm, 0, fx.reference, 1.0);

  const std::vector<double> expected =
      oracle::tilt({0.5, 0.5}, {0.0, 1.0}, 1.0);
  CHECK(w.measure.weight(0) == doctest::Approx(expected[0]).epsilon(1e-14));
  CHECK(w.measure.weight(1) == doctest::Approx(expected[1]).epsilon(1e-14));
  CHECK(w.measure.weight(0) == doctest::Approx(0.26894142).epsilon(1e-7));
  CHECK(w.measure.weight(1) == doctest::Approx(0.73105858).epsilon(1e-7));

  CHECK(w.gamma ==
        doctest::Approx(oracle::kl(expected, {0.5, 0.5})).epsilon(1e-12));
  CHECK(w.gamma == doctest::Approx(0.110945).epsilon(1e-5));
  CHECK(w.log_partition == doctest::Approx(0.620115).epsilon(1e-6));
  CHECK(w.finite_beta());
}

TEST_CASE("tilt rejects bad temperatures and infinite support loss") {
  fixtures::TwoPoint fx;
  CHECK_THROWS_AS(tilt(fx.lm, 0, fx.reference, 0.0), Error);
  CHECK_THROWS_AS(tilt(fx.lm, 0, fx.reference, -1.0), Error);
  try {
    tilt(fx.lm, 0, fx.reference, -1.0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::non_positive_beta);
  }

  LossModel infinite(fx.alphabet, {"t"}, {{0.0, kInf}});
  CHECK_THROWS_AS(tilt(infinite, 0, fx.reference, 1.0), Error);
  try {
    tilt(infinite, 0, fx.reference, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::infeasible_temperature);
  }
  // off the support the same loss row is harmless
  DiscreteMeasure safe(fx.alphabet, {1.0, 0.0});
  CHECK_NOTHROW(tilt(infinite, 0, safe, 1.0));
}

TEST_CASE("tilt keeps the support and dominates the reference") {
  SplitMix64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    RandomInstance inst = draw_instance(rng);
    double previous_kl = kInf;
    double first_kl = 0.0;
    double last_kl = 0.0;
    for (int k = -6; k <= 6; ++k) {
      const double beta = std::pow(2.0, k);
      WorstCaseTilt w = tilt(inst.lm, 0, inst.base, beta);
      for (std::size_t i = 0; i < inst.base.size(); ++i) {
        CHECK(w.measure.in_support(i) == inst.base.in_support(i));
      }
      CHECK(expected_loss(inst.lm, 0, w.measure) >=
            expected_loss(inst.lm, 0, inst.base) - 1e-12);
      // the spent budget shrinks as the temperature rises; near the
      // concentrated end consecutive values can collide at double
      // resolution, so each step is checked weakly
      CHECK(w.gamma <= previous_kl);
      previous_kl = w.gamma;
      if (k == -6) first_kl = w.gamma;
      if (k == 6) last_kl = w.gamma;
    }
    CHECK(first_kl > last_kl);
  }
}

TEST_CASE("shifting the loss row leaves the tilt unchanged") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    RandomInstance inst = draw_instance(rng);
    std::vector<double> shifted = inst.lm.loss_row(0);
    for (double& v : shifted) v += 3.25;
    LossModel lm_shifted(inst.alphabet, {"t"}, {shifted});

    const double beta = rng.next_in(0.1, 10.0);
    WorstCaseTilt a = tilt(inst.lm, 0, inst.base, beta);
    WorstCaseTilt b = tilt(lm_shifted, 0, inst.base, beta);
    for (std::size_t i = 0; i < inst.base.size(); ++i) {
      CHECK(std::abs(a.measure.weight(i) - b.measure.weight(i)) <= 1e-12);
    }
  }
}

TEST_CASE("budget supremum is the mass of the loss-maximizing set") {
  fixtures::TwoPoint fx;
  CHECK(gamma_sup(fx.lm, 0, fx.reference) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));

  auto abc = make_alphabet({"a", "b", "c"});
  LossModel lm(abc, {"t"}, {{1.0, 5.0, 5.0}});
  DiscreteMeasure base(abc, {0.2, 0.3, 0.5});
  CHECK(gamma_sup(lm, 0, base) ==
        doctest::Approx(-std::log(0.8)).epsilon(1e-12));
  CHECK(gamma_sup(lm, 0, base) == doctest::Approx(0.223144).epsilon(1e-5));

  LossModel constant(abc, {"t"}, {{2.0, 2.0, 2.0}});
  CHECK(gamma_sup(constant, 0, base) == 0.0);

  // ties within 1e-12 of the max join the argmax set
  LossModel near_tie(abc, {"t"}, {{1.0, 5.0, 5.0 - 1e-13}});
  CHECK(gamma_sup(near_tie, 0, base) ==
        doctest::Approx(-std::log(0.8)).epsilon(1e-12));
}

TEST_CASE("budget inversion returns the matching temperature") {
  fixtures::TwoPoint fx;

  WorstCaseTilt zero = solve_beta(fx.lm, 0, fx.reference, 0.0);
  CHECK_FALSE(zero.finite_beta());
  CHECK(zero.gamma == 0.0);
  for (std::size_t i = 0; i < fx.reference.size(); ++i) {
    CHECK(zero.measure.weight(i) == fx.reference.weight(i));
  }

  const double budget = tilt(fx.lm, 0, fx.reference, 1.0).gamma;
  WorstCaseTilt solved = solve_beta(fx.lm, 0, fx.reference, budget);
  CHECK(std::abs(solved.beta - 1.0) <= 1e-6);
  CHECK(std::abs(solved.gamma - budget) <= 1e-10);

  CHECK_THROWS_AS(solve_beta(fx.lm, 0, fx.reference, 0.8), Error);
  try {
    solve_beta(fx.lm, 0, fx.reference, 0.8);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::gamma_infeasible);
    CHECK(std::string(e.what()).find("0.693147") != std::string::npos);
  }

  CHECK_THROWS_AS(solve_beta(fx.lm, 0, fx.reference, -0.1), Error);

  auto abc = make_alphabet({"a", "b", "c"});
  LossModel constant(abc, {"t"}, {{2.0, 2.0, 2.0}});
  DiscreteMeasure base(abc, {0.2, 0.3, 0.5});
  CHECK_THROWS_AS(solve_beta(constant, 0, base, 0.1), Error);
  try {
    solve_beta(constant, 0, base, 0.1);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::constant_loss_nonzero_gamma);
  }
}

TEST_CASE("budget inversion round-trips the temperature") {
  SplitMix64 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    RandomInstance inst = draw_instance(rng);
    // log-uniform over [0.05, 20]
    const double beta =
        std::exp(rng.next_in(std::log(0.05), std::log(20.0)));
    const double budget = tilt(inst.lm, 0, inst.base, beta).gamma;
    WorstCaseTilt solved = solve_beta(inst.lm, 0, inst.base, budget);
    CHECK(std::abs(solved.beta - beta) / beta <= 1e-5);
    CHECK(std::abs(solved.gamma - budget) <= 1e-10);

    const double sup = gamma_sup(inst.lm, 0, inst.base);
    const double drawn = rng.next_double() * 0.9 * sup;
    WorstCaseTilt from_budget = solve_beta(inst.lm, 0, inst.base, drawn);
    if (from_budget.finite_beta()) {
      CHECK(std::abs(from_budget.gamma - drawn) <= 1e-10);
    }
  }
}

TEST_CASE("budget inversion near the edges of the feasible range") {
  SplitMix64 rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    RandomInstance inst = draw_instance(rng);
    const double sup = gamma_sup(inst.lm, 0, inst.base);

    WorstCaseTilt near_sup = solve_beta(inst.lm, 0, inst.base, 0.99 * sup);
    CHECK(std::abs(near_sup.gamma - 0.99 * sup) <= 1e-10);
    CHECK(near_sup.beta > 0.0);

    WorstCaseTilt tiny = solve_beta(inst.lm, 0, inst.base, 1e-12);
    CHECK(tiny.finite_beta());
    CHECK(std::abs(tiny.gamma - 1e-12) <= 1e-10);
  }
}

TEST_CASE("dual log-partition identities hold") {
  fixtures::TwoPoint fx;
  WorstCaseTilt w = tilt(fx.lm, 0, fx.reference, 1.0);

  // frozen pieces, all from direct summation
  const std::vector<double> tilted = oracle::tilt({0.5, 0.5}, {0.0, 1.0}, 1.0);
  CHECK(expected_loss(fx.lm, 0, w.measure) ==
        doctest::Approx(oracle::expectation(tilted, {0.0, 1.0}))
            .epsilon(1e-12));
  CHECK(kl_divergence(fx.reference, w.measure) ==
        doctest::Approx(0.120110).epsilon(1e-5));

  const auto [first, second] = log_partition_identities(w, fx.lm);
  CHECK(std::abs(first) <= 1e-9);
  CHECK(std::abs(second) <= 1e-9);

  auto abc = make_alphabet({"a", "b", "c"});
  LossModel constant(abc, {"t"}, {{2.0, 2.0, 2.0}});
  DiscreteMeasure base(abc, {0.2, 0.3, 0.5});
  const auto [c1, c2] =
      log_partition_identities(tilt(constant, 0, base, 0.7), constant);
  CHECK(std::abs(c1) <= 1e-12);
  CHECK(std::abs(c2) <= 1e-12);

  WorstCaseTilt zero = solve_beta(fx.lm, 0, fx.reference, 0.0);
  CHECK_THROWS_AS(log_partition_identities(zero, fx.lm), Error);
  try {
    log_partition_identities(zero, fx.lm);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_beta);
  }
}
