#include "wcm/worst_case.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace wcm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSolveTolerance = 1e-10;   // |achieved kl - gamma|
constexpr double kBetaResolution = 1e-12;   // relative bracket width
constexpr int kExpansionBudget = 200;
constexpr int kBisectionBudget = 200;
constexpr double kLossTieTolerance = 1e-12;

// Loss range over the support of base. max is +inf when a support point
// carries infinite loss.
struct SupportLossRange {
  double min;
  double max;
};

SupportLossRange support_loss_range(const LossModel& lm, std::size_t model,
                                    const DiscreteMeasure& base) {
  const std::vector<double>& row = lm.loss_row(model);
  double lo = kInf;
  double hi = -kInf;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base.weight(i) == 0.0) continue;
    lo = std::min(lo, row[i]);
    hi = std::max(hi, row[i]);
  }
  return {lo, hi};
}

bool constant_on_support(const SupportLossRange& range) {
  return std::isfinite(range.max) && range.max - range.min <= kLossTieTolerance;
}

}  // namespace

bool WorstCaseTilt::finite_beta() const noexcept {
  return std::isfinite(beta);
}

double log_partition(const LossModel& lm, std::size_t model,
                     const DiscreteMeasure& base, double t) {
  lm.require_model(model);
  lm.require_alphabet(base, "log_partition");
  if (t == 0.0) return 0.0;  // log of total mass

  const std::vector<double>& row = lm.loss_row(model);

  double shift = -kInf;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base.weight(i) == 0.0) continue;
    shift = std::max(shift, t * row[i]);
  }
  if (shift == kInf) return kInf;   // t > 0 against an infinite loss
  if (shift == -kInf) return -kInf; // t < 0 and every support loss infinite

  double total = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double wi = base.weight(i);
    if (wi == 0.0) continue;
    const double exponent = t * row[i];
    if (exponent == -kInf) continue;  // exp underflows to an exact zero
    total += wi * std::exp(exponent - shift);
  }
  return shift + std::log(total);
}

WorstCaseTilt tilt(const LossModel& lm, std::size_t model,
                   const DiscreteMeasure& base, double beta) {
  lm.require_model(model);
  lm.require_alphabet(base, "tilt");
  if (!(beta > 0.0) || std::isnan(beta)) {
    raise(Errc::non_positive_beta, "beta must be positive");
  }

  const double j = log_partition(lm, model, base, 1.0 / beta);
  if (!std::isfinite(j)) {
    raise(Errc::infeasible_temperature,
          "log-partition diverges at beta = " + std::to_string(beta) +
              ": a support point of the reference carries infinite loss");
  }

  const std::vector<double>& row = lm.loss_row(model);
  std::vector<double> weights(base.size(), 0.0);
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double wi = base.weight(i);
    if (wi == 0.0) continue;
    weights[i] = std::exp(std::log(wi) + row[i] / beta - j);
  }
  DiscreteMeasure measure(base.alphabet(), std::move(weights));
  const double achieved = kl_divergence(measure, base);
  return WorstCaseTilt{base, model, beta, achieved, std::move(measure), j};
}

double gamma_sup(const LossModel& lm, std::size_t model,
                 const DiscreteMeasure& base) {
  lm.require_model(model);
  lm.require_alphabet(base, "gamma_sup");
  const std::vector<double>& row = lm.loss_row(model);
  const SupportLossRange range = support_loss_range(lm, model, base);
  if (constant_on_support(range)) return 0.0;

  double arg_mass = 0.0;
  double support_mass = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double wi = base.weight(i);
    if (wi == 0.0) continue;
    support_mass += wi;
    if (row[i] >= range.max - kLossTieTolerance) arg_mass += wi;
  }
  if (arg_mass >= support_mass) return 0.0;
  return -std::log(arg_mass);
}

WorstCaseTilt solve_beta(const LossModel& lm, std::size_t model,
                         const DiscreteMeasure& base, double gamma) {
  lm.require_model(model);
  lm.require_alphabet(base, "solve_beta");
  if (!(gamma >= 0.0)) {
    raise(Errc::gamma_infeasible, "gamma must be nonnegative");
  }
  if (gamma == 0.0) {
    // Zero budget forces the tilt back onto the reference; no finite beta
    // attains kl = 0 for non-constant loss, so beta is marked infinite.
    return WorstCaseTilt{base, model, kInf, 0.0, base, 0.0};
  }

  const SupportLossRange range = support_loss_range(lm, model, base);
  if (range.max == kInf) {
    raise(Errc::infeasible_temperature,
          "no tilt exists: a support point of the reference carries "
          "infinite loss");
  }
  if (constant_on_support(range)) {
    raise(Errc::constant_loss_nonzero_gamma,
          "loss is constant on the support of the reference; only gamma = 0 "
          "is feasible");
  }
  const double sup = gamma_sup(lm, model, base);
  if (gamma >= sup) {
    raise(Errc::gamma_infeasible,
          "gamma = " + std::to_string(gamma) +
              " is not attainable; the supremum of feasible budgets is " +
              std::to_string(sup));
  }

  // kl(beta) decreases strictly in beta: bracket the root from beta = 1.
  double beta_lo = 1.0;  // kl(beta_lo) >= gamma
  double beta_hi = 1.0;  // kl(beta_hi) <= gamma
  WorstCaseTilt probe = tilt(lm, model, base, 1.0);
  if (probe.gamma == gamma) return probe;
  if (probe.gamma > gamma) {
    int steps = 0;
    do {
      if (++steps > kExpansionBudget) {
        raise(Errc::non_convergence, "bracket expansion budget exhausted");
      }
      beta_hi *= 2.0;
      probe = tilt(lm, model, base, beta_hi);
    } while (probe.gamma > gamma);
    beta_lo = beta_hi / 2.0;
  } else {
    int steps = 0;
    do {
      if (++steps > kExpansionBudget) {
        raise(Errc::non_convergence, "bracket expansion budget exhausted");
      }
      beta_lo *= 0.5;
      probe = tilt(lm, model, base, beta_lo);
    } while (probe.gamma < gamma);
    beta_hi = beta_lo * 2.0;
  }

  // Bisection on log beta. Runs past the kl tolerance until the bracket is
  // relatively tight, so inverting an achieved budget reproduces beta
  // itself and the round trip is stable.
  for (int it = 0; it < kBisectionBudget; ++it) {
    const double beta_mid = std::sqrt(beta_lo) * std::sqrt(beta_hi);
    probe = tilt(lm, model, base, beta_mid);
    if (probe.gamma > gamma) {
      beta_lo = beta_mid;
    } else {
      beta_hi = beta_mid;
    }
    if (std::abs(probe.gamma - gamma) <= kSolveTolerance &&
        beta_hi - beta_lo <= kBetaResolution * beta_lo) {
      return probe;
    }
  }
  if (std::abs(probe.gamma - gamma) <= kSolveTolerance) return probe;
  raise(Errc::non_convergence,
        "bisection budget exhausted at |kl - gamma| = " +
            std::to_string(std::abs(probe.gamma - gamma)));
}

std::pair<double, double> log_partition_identities(const WorstCaseTilt& w,
                                                   const LossModel& lm) {
  if (!w.finite_beta()) {
    raise(Errc::degenerate_beta,
          "identities are undefined for the degenerate infinite-beta tilt");
  }
  const double scaled = w.beta * w.log_partition;
  const double first =
      scaled - (expected_loss(lm, w.model, w.measure) -
                w.beta * kl_divergence(w.measure, w.base));
  const double second =
      scaled - (expected_loss(lm, w.model, w.base) +
                w.beta * kl_divergence(w.base, w.measure));
  return {first, second};
}

}  // namespace wcm
