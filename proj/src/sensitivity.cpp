#include "wcm/sensitivity.hpp"

#include <cmath>
#include <utility>

namespace wcm {

namespace {

void require_finite_beta(const WorstCaseTilt& w, const char* where) {
  if (!w.finite_beta()) {
    raise(Errc::degenerate_beta,
          std::string(where) +
              ": the degenerate infinite-beta tilt has no decomposition");
  }
}

double ordered_term_sum(const std::vector<SensitivityTerm>& terms) {
  double total = 0.0;
  for (const SensitivityTerm& t : terms) total += t.coefficient * t.value;
  return total;
}

SensitivityReport make_report(double g_direct,
                              std::vector<SensitivityTerm> terms, double beta,
                              DiscreteMeasure reference) {
  const double closed = ordered_term_sum(terms);
  return SensitivityReport{g_direct,
                           closed,
                           g_direct - closed,
                           std::move(terms),
                           beta,
                           std::move(reference),
                           std::nullopt,
                           std::nullopt};
}

}  // namespace

double expected_loss_diff(const LossModel& lm, std::size_t model,
                          const DiscreteMeasure& p1,
                          const DiscreteMeasure& p2) {
  require_same_alphabet(p1, p2, "expected_loss_diff");
  const double a = expected_loss(lm, model, p1);
  const double b = expected_loss(lm, model, p2);
  if (!std::isfinite(a) || !std::isfinite(b)) {
    raise(Errc::infinite_loss,
          "expected loss is infinite; the difference is undefined");
  }
  return a - b;
}

SensitivityReport sensitivity_from_tilt(const LossModel& lm,
                                        const WorstCaseTilt& w,
                                        const DiscreteMeasure& p) {
  require_finite_beta(w, "sensitivity_from_tilt");
  require_abs_continuous(p, w.base, "P", "the reference");
  const double g_direct = expected_loss_diff(lm, w.model, p, w.measure);
  std::vector<SensitivityTerm> terms{
      {"kl(P, reference)", w.beta, kl_divergence(p, w.base)},
      {"kl(P, tilt)", -w.beta, kl_divergence(p, w.measure)},
      {"kl(tilt, reference)", -w.beta, kl_divergence(w.measure, w.base)},
  };
  return make_report(g_direct, std::move(terms), w.beta, w.base);
}

SensitivityReport jeffreys_gap(const LossModel& lm, const WorstCaseTilt& w) {
  require_finite_beta(w, "jeffreys_gap");
  const double g_direct = expected_loss_diff(lm, w.model, w.base, w.measure);
  std::vector<SensitivityTerm> terms{
      {"jeffreys(reference, tilt)", -w.beta,
       jeffreys_divergence(w.base, w.measure)},
  };
  return make_report(g_direct, std::move(terms), w.beta, w.base);
}

SensitivityReport sensitivity_decomposition(const LossModel& lm,
                                            const WorstCaseTilt& w,
                                            const DiscreteMeasure& p1,
                                            const DiscreteMeasure& p2) {
  require_finite_beta(w, "sensitivity_decomposition");
  require_abs_continuous(p1, w.base, "P1", "the reference");
  require_abs_continuous(p2, w.base, "P2", "the reference");
  const double g_direct = expected_loss_diff(lm, w.model, p1, p2);
  std::vector<SensitivityTerm> terms{
      {"kl(P2, tilt)", w.beta, kl_divergence(p2, w.measure)},
      {"kl(P1, tilt)", -w.beta, kl_divergence(p1, w.measure)},
      {"kl(P2, reference)", -w.beta, kl_divergence(p2, w.base)},
      {"kl(P1, reference)", w.beta, kl_divergence(p1, w.base)},
  };
  return make_report(g_direct, std::move(terms), w.beta, w.base);
}

SensitivityReport sensitivity_pinned(const LossModel& lm, std::size_t model,
                                     const DiscreteMeasure& p1,
                                     const DiscreteMeasure& p2, double beta,
                                     PinnedReference pinned) {
  const DiscreteMeasure& reference =
      (pinned == PinnedReference::p2) ? p2 : p1;
  if (pinned == PinnedReference::p2) {
    require_abs_continuous(p1, p2, "P1", "P2");
  } else {
    require_abs_continuous(p2, p1, "P2", "P1");
  }
  const WorstCaseTilt w = tilt(lm, model, reference, beta);
  const double g_direct = expected_loss_diff(lm, model, p1, p2);
  std::vector<SensitivityTerm> terms{
      {"kl(P2, tilt)", w.beta, kl_divergence(p2, w.measure)},
      {"kl(P1, tilt)", -w.beta, kl_divergence(p1, w.measure)},
  };
  if (pinned == PinnedReference::p2) {
    terms.push_back({"kl(P1, P2)", w.beta, kl_divergence(p1, p2)});
  } else {
    terms.push_back({"kl(P2, P1)", -w.beta, kl_divergence(p2, p1)});
  }
  return make_report(g_direct, std::move(terms), w.beta, reference);
}

DiscreteMeasure mixed_reference(const DiscreteMeasure& p1,
                                const DiscreteMeasure& p2) {
  return mix(p1, p2, 0.5);
}

SensitivityReport dataset_sensitivity(const LossModel& lm,
                                      const WorstCaseTilt& w,
                                      const Dataset& z1, const Dataset& z2) {
  const TypeMeasure t1 = type_of(z1);
  const TypeMeasure t2 = type_of(z2);
  // Single code path with the pair decomposition so both routes to a
  // dataset sensitivity emit identical reports.
  SensitivityReport report =
      sensitivity_decomposition(lm, w, t1.as_measure, t2.as_measure);
  const double tilt_part = report.terms.at(0).coefficient *
                               report.terms.at(0).value +
                           report.terms.at(1).coefficient *
                               report.terms.at(1).value;
  const double reference_part = report.terms.at(2).coefficient *
                                    report.terms.at(2).value +
                                report.terms.at(3).coefficient *
                                    report.terms.at(3).value;
  report.tilt_distance_term = tilt_part;
  report.reference_distance_term = reference_part;
  return report;
}

}  // namespace wcm
