#pragma once

#include <cstdint>
#include <vector>

#include "wcm/empirical.hpp"
#include "wcm/loss_model.hpp"
#include "wcm/measure.hpp"
#include "wcm/sensitivity.hpp"
#include "wcm/worst_case.hpp"

namespace wcm {

// Hard ceiling on |alphabet|^n for every exhaustive enumeration. There is
// no sampling fallback: the audited identities are equalities and only
// exact enumeration keeps their tolerances meaningful.
inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

// |alphabet|^n, raising enumeration_cap_exceeded (with the required count
// in the message) when the product passes the cap.
std::uint64_t dataset_space_size(std::size_t alphabet_size, std::size_t n,
                                 std::uint64_t cap = kDefaultEnumerationCap);

// Lexicographic rank <-> entries, first entry most significant.
std::vector<std::size_t> dataset_entries_from_rank(std::uint64_t rank,
                                                   std::size_t alphabet_size,
                                                   std::size_t n);
std::uint64_t dataset_rank(const std::vector<std::size_t>& entries,
                           std::size_t alphabet_size);

// A statistical learning algorithm on a finite problem: one conditional
// measure over models per dataset of length n, stored densely and indexed
// by dataset rank.
class LearningAlgorithm {
 public:
  LearningAlgorithm(LossModel lm, std::size_t n,
                    std::vector<DiscreteMeasure> kernel);

  const LossModel& loss_model() const noexcept { return lm_; }
  std::size_t dataset_length() const noexcept { return n_; }
  std::uint64_t dataset_count() const noexcept { return kernel_.size(); }
  const DiscreteMeasure& conditional(std::uint64_t rank) const;

 private:
  LossModel lm_;
  std::size_t n_;
  std::vector<DiscreteMeasure> kernel_;
};

// The Gibbs learning algorithm: every conditional tilts the prior by
// exp(-empirical_risk/lambda), normalized per dataset.
struct GibbsAlgorithm {
  LearningAlgorithm algorithm;
  DiscreteMeasure prior;
  double lambda;
  std::vector<double> log_partitions;  // per dataset rank, at -1/lambda
};

// Result of auditing the doubly-expected gap against the information
// identity: direct enumeration on one side, lambda * (mutual + lautum) on
// the other.
struct GapAudit {
  double doubly_expected_direct;
  double mutual_info;
  double lautum_info;
  double information_sum_scaled;  // lambda * (mutual + lautum)
  double identity_residual;       // direct - scaled
};

// Population risk minus empirical risk for one model and one training
// dataset.
double generalization_gap(const LossModel& lm, std::size_t model,
                          const DiscreteMeasure& pz, const Dataset& z);

// Gap decomposition anchored at an arbitrary feasible tilt; the reference
// and budget are free choices.
SensitivityReport gap_decomposition(const LossModel& lm,
                                    const DiscreteMeasure& pz,
                                    const Dataset& z, const WorstCaseTilt& w);

// Gap decomposition with the reference pinned to the population measure
// itself; builds the tilt of pz at the given beta.
SensitivityReport gap_decomposition_population(const LossModel& lm,
                                               std::size_t model,
                                               const DiscreteMeasure& pz,
                                               const Dataset& z, double beta);

// Gap averaged over the algorithm's model choice for a fixed dataset.
double expected_gap(const LearningAlgorithm& alg, const DiscreteMeasure& pz,
                    const Dataset& z);

// Gap averaged over models and over datasets drawn from the product
// measure formed by pz. Exact enumeration in rank order.
double doubly_expected_gap(const LearningAlgorithm& alg,
                           const DiscreteMeasure& pz,
                           std::uint64_t cap = kDefaultEnumerationCap);

GibbsAlgorithm gibbs_posterior(LossModel lm, const DiscreteMeasure& prior,
                               double lambda, std::size_t n,
                               std::uint64_t cap = kDefaultEnumerationCap);

// Marginal measure over models under the product data measure.
DiscreteMeasure model_marginal(const LearningAlgorithm& alg,
                               const DiscreteMeasure& pz,
                               std::uint64_t cap = kDefaultEnumerationCap);

// Dataset-averaged divergence from conditional to marginal.
double mutual_information(const LearningAlgorithm& alg,
                          const DiscreteMeasure& pz,
                          std::uint64_t cap = kDefaultEnumerationCap);

// Dataset-averaged divergence from marginal to conditional.
double lautum_information(const LearningAlgorithm& alg,
                          const DiscreteMeasure& pz,
                          std::uint64_t cap = kDefaultEnumerationCap);

GapAudit gibbs_audit(const GibbsAlgorithm& gibbs, const DiscreteMeasure& pz,
                     std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace wcm
