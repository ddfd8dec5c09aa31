#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wcm/empirical.hpp"
#include "wcm/loss_model.hpp"
#include "wcm/measure.hpp"
#include "wcm/worst_case.hpp"

namespace wcm {

// One signed divergence term of a closed-form decomposition. The closed
// form is the ordered sum of coefficient * value over the terms.
struct SensitivityTerm {
  std::string name;
  double coefficient;
  double value;
};

// Both sides of a sensitivity identity: the definition-side difference of
// expected losses, the divergence-based closed form, and their residual.
// Thresholds live in the callers; the report only carries diagnostics.
struct SensitivityReport {
  double g_direct = 0.0;
  double g_closed_form = 0.0;
  double residual = 0.0;
  std::vector<SensitivityTerm> terms;
  double beta = 0.0;
  DiscreteMeasure reference;

  // Dataset-sensitivity reports also expose the two groupings of the
  // closed form: distance-to-tilt difference and distance-to-reference
  // difference, each already scaled by beta. They sum to g_closed_form.
  std::optional<double> tilt_distance_term;
  std::optional<double> reference_distance_term;
};

// Which of the two measures serves as the tilt's reference when the
// decomposition pins the reference to an endpoint.
enum class PinnedReference { p1, p2 };

// Difference of expected losses E_{p1}[loss] - E_{p2}[loss].
double expected_loss_diff(const LossModel& lm, std::size_t model,
                          const DiscreteMeasure& p1,
                          const DiscreteMeasure& p2);

// Variation of the expected loss when the measure moves from the tilt to
// p, against the three-divergence closed form anchored at the tilt.
SensitivityReport sensitivity_from_tilt(const LossModel& lm,
                                        const WorstCaseTilt& w,
                                        const DiscreteMeasure& p);

// Reference-to-tilt variation: the closed form collapses to minus the
// Jeffreys divergence between reference and tilt, scaled by beta.
SensitivityReport jeffreys_gap(const LossModel& lm, const WorstCaseTilt& w);

// Four-term decomposition of E_{p1}[loss] - E_{p2}[loss] for any pair of
// measures dominated by the tilt's reference. No term depends on both p1
// and p2.
SensitivityReport sensitivity_decomposition(const LossModel& lm,
                                            const WorstCaseTilt& w,
                                            const DiscreteMeasure& p1,
                                            const DiscreteMeasure& p2);

// Three-term decomposition with the reference pinned to p1 or p2; builds
// the tilt of the chosen endpoint at the given beta internally.
SensitivityReport sensitivity_pinned(const LossModel& lm, std::size_t model,
                                     const DiscreteMeasure& p1,
                                     const DiscreteMeasure& p2, double beta,
                                     PinnedReference pinned);

// The 50/50 convex combination, the canonical reference for measure pairs
// that are not absolutely continuous with respect to each other. Never
// applied implicitly.
DiscreteMeasure mixed_reference(const DiscreteMeasure& p1,
                                const DiscreteMeasure& p2);

// Dataset- (empirical-risk-) sensitivity: the decomposition applied to the
// two types, with the direct side computed from the empirical risks.
SensitivityReport dataset_sensitivity(const LossModel& lm,
                                      const WorstCaseTilt& w,
                                      const Dataset& z1, const Dataset& z2);

}  // namespace wcm
