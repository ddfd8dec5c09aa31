#pragma once

#include <utility>

#include "wcm/loss_model.hpp"
#include "wcm/measure.hpp"

namespace wcm {

// The worst-case data-generating measure for one model: the exponential
// tilt of a reference measure toward high loss, together with the inverse
// temperature that produced it, the relative-entropy budget it spends, and
// the log-partition value of the tilt.
//
// beta == +infinity marks the zero-budget case, where the tilt degenerates
// to the reference itself and no finite inverse temperature applies.
struct WorstCaseTilt {
  DiscreteMeasure base;    // reference measure the tilt was built from
  std::size_t model;       // model index the loss row belongs to
  double beta;             // inverse temperature (+infinity: degenerate)
  double gamma;            // achieved kl_divergence(measure, base)
  DiscreteMeasure measure; // the tilted measure
  double log_partition;    // log-partition value at 1/beta

  bool finite_beta() const noexcept;
};

// log sum_i base_i * exp(t * loss[model][i]) over the support of base,
// max-shifted so exponents never overflow. +infinity exactly when t > 0
// and a support point carries infinite loss.
double log_partition(const LossModel& lm, std::size_t model,
                     const DiscreteMeasure& base, double t);

// Tilt the reference by exp(loss/beta), normalized by the log-partition
// value. Feasible iff log_partition(1/beta) is finite.
WorstCaseTilt tilt(const LossModel& lm, std::size_t model,
                   const DiscreteMeasure& base, double beta);

// Supremum of the achievable relative-entropy budget: -log of the base
// mass of the loss-maximizing points on the support (ties within 1e-12 of
// the max are included). Zero when the loss is constant on the support.
double gamma_sup(const LossModel& lm, std::size_t model,
                 const DiscreteMeasure& base);

// Invert the budget: find beta > 0 whose tilt spends exactly gamma.
//
// The map beta -> kl(tilt(beta), base) is continuous and strictly
// decreasing for non-constant loss, so the root is bracketed by geometric
// expansion from beta = 1 and then bisected on log beta. The returned
// tilt satisfies |gamma_achieved - gamma| <= 1e-10. gamma = 0 returns the
// reference itself with beta marked infinite.
WorstCaseTilt solve_beta(const LossModel& lm, std::size_t model,
                         const DiscreteMeasure& base, double gamma);

// Residuals of the two dual forms of the scaled log-partition value:
//   first:  beta*J - (E_tilt[loss] - beta*kl(tilt, base))
//   second: beta*J - (E_base[loss] + beta*kl(base, tilt))
// Both vanish (within rounding) for any feasible finite-beta tilt.
std::pair<double, double> log_partition_identities(const WorstCaseTilt& w,
                                                   const LossModel& lm);

}  // namespace wcm
