#include "wcm/gen_gap.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace wcm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double product_weight(const DiscreteMeasure& pz,
                      const std::vector<std::size_t>& entries) {
  double w = 1.0;
  for (std::size_t idx : entries) w *= pz.weight(idx);
  return w;
}

double mean_loss(const LossModel& lm, std::size_t model,
                 const std::vector<std::size_t>& entries) {
  const std::vector<double>& row = lm.loss_row(model);
  double total = 0.0;
  for (std::size_t idx : entries) total += row[idx];
  return total / static_cast<double>(entries.size());
}

}  // namespace

std::uint64_t dataset_space_size(std::size_t alphabet_size, std::size_t n,
                                 std::uint64_t cap) {
  std::uint64_t count = 1;
  for (std::size_t t = 0; t < n; ++t) {
    if (count > cap / alphabet_size) {
      raise(Errc::enumeration_cap_exceeded,
            "enumerating all datasets needs " + std::to_string(alphabet_size) +
                "^" + std::to_string(n) + " entries, above the cap of " +
                std::to_string(cap) + "; reduce n or the alphabet");
    }
    count *= alphabet_size;
  }
  if (count > cap) {
    raise(Errc::enumeration_cap_exceeded,
          "enumerating all datasets needs " + std::to_string(count) +
              " entries, above the cap of " + std::to_string(cap) +
              "; reduce n or the alphabet");
  }
  return count;
}

std::vector<std::size_t> dataset_entries_from_rank(std::uint64_t rank,
                                                   std::size_t alphabet_size,
                                                   std::size_t n) {
  std::vector<std::size_t> entries(n, 0);
  for (std::size_t t = n; t-- > 0;) {
    entries[t] = static_cast<std::size_t>(rank % alphabet_size);
    rank /= alphabet_size;
  }
  return entries;
}

std::uint64_t dataset_rank(const std::vector<std::size_t>& entries,
                           std::size_t alphabet_size) {
  std::uint64_t rank = 0;
  for (std::size_t idx : entries) {
    rank = rank * alphabet_size + idx;
  }
  return rank;
}

LearningAlgorithm::LearningAlgorithm(LossModel lm, std::size_t n,
                                     std::vector<DiscreteMeasure> kernel)
    : lm_(std::move(lm)), n_(n), kernel_(std::move(kernel)) {
  if (n_ == 0) {
    raise(Errc::length_mismatch, "dataset length must be at least 1");
  }
  const std::uint64_t expected =
      dataset_space_size(lm_.alphabet_size(), n_,
                         std::numeric_limits<std::uint64_t>::max());
  if (kernel_.size() != expected) {
    raise(Errc::length_mismatch,
          "kernel covers " + std::to_string(kernel_.size()) +
              " datasets, expected " + std::to_string(expected));
  }
  for (const DiscreteMeasure& conditional : kernel_) {
    if (conditional.alphabet() != lm_.model_alphabet() &&
        !(*conditional.alphabet() == *lm_.model_alphabet())) {
      raise(Errc::alphabet_mismatch,
            "kernel conditional is not a measure over the model set");
    }
  }
}

const DiscreteMeasure& LearningAlgorithm::conditional(
    std::uint64_t rank) const {
  return kernel_.at(rank);
}

double generalization_gap(const LossModel& lm, std::size_t model,
                          const DiscreteMeasure& pz, const Dataset& z) {
  lm.require_model(model);
  lm.require_alphabet(pz, "generalization_gap");
  const double population = expected_loss(lm, model, pz);
  const double training = empirical_risk(lm, z, model);
  if (!std::isfinite(population) || !std::isfinite(training)) {
    raise(Errc::infinite_loss,
          "generalization gap is undefined under infinite loss");
  }
  return population - training;
}

SensitivityReport gap_decomposition(const LossModel& lm,
                                    const DiscreteMeasure& pz,
                                    const Dataset& z,
                                    const WorstCaseTilt& w) {
  require_abs_continuous(pz, w.base, "the data measure", "the reference");
  const TypeMeasure type = type_of(z);
  require_abs_continuous(type.as_measure, w.base, "the dataset type",
                         "the reference");
  return sensitivity_decomposition(lm, w, pz, type.as_measure);
}

SensitivityReport gap_decomposition_population(const LossModel& lm,
                                               std::size_t model,
                                               const DiscreteMeasure& pz,
                                               const Dataset& z, double beta) {
  const TypeMeasure type = type_of(z);
  require_abs_continuous(type.as_measure, pz, "the dataset type",
                         "the data measure");
  return gap_decomposition(lm, pz, z, tilt(lm, model, pz, beta));
}

double expected_gap(const LearningAlgorithm& alg, const DiscreteMeasure& pz,
                    const Dataset& z) {
  if (z.length() != alg.dataset_length()) {
    raise(Errc::length_mismatch,
          "dataset has length " + std::to_string(z.length()) +
              ", algorithm expects " +
              std::to_string(alg.dataset_length()));
  }
  const LossModel& lm = alg.loss_model();
  lm.require_alphabet(pz, "expected_gap");
  const DiscreteMeasure& conditional =
      alg.conditional(dataset_rank(z.entries(), lm.alphabet_size()));
  double total = 0.0;
  for (std::size_t m = 0; m < lm.model_count(); ++m) {
    const double weight = conditional.weight(m);
    if (weight == 0.0) continue;
    total += weight * generalization_gap(lm, m, pz, z);
  }
  return total;
}

double doubly_expected_gap(const LearningAlgorithm& alg,
                           const DiscreteMeasure& pz, std::uint64_t cap) {
  const LossModel& lm = alg.loss_model();
  lm.require_alphabet(pz, "doubly_expected_gap");
  const std::uint64_t count =
      dataset_space_size(lm.alphabet_size(), alg.dataset_length(), cap);
  double total = 0.0;
  for (std::uint64_t rank = 0; rank < count; ++rank) {
    std::vector<std::size_t> entries = dataset_entries_from_rank(
        rank, lm.alphabet_size(), alg.dataset_length());
    const double weight = product_weight(pz, entries);
    if (weight == 0.0) continue;
    Dataset z(lm.alphabet(), std::move(entries));
    total += weight * expected_gap(alg, pz, z);
  }
  return total;
}

GibbsAlgorithm gibbs_posterior(LossModel lm, const DiscreteMeasure& prior,
                               double lambda, std::size_t n,
                               std::uint64_t cap) {
  if (!(lambda > 0.0) || std::isnan(lambda)) {
    raise(Errc::non_positive_lambda, "lambda must be positive");
  }
  if (prior.alphabet() != lm.model_alphabet() &&
      !(*prior.alphabet() == *lm.model_alphabet())) {
    raise(Errc::alphabet_mismatch,
          "prior is not a measure over the model set");
  }
  for (std::size_t m = 0; m < lm.model_count(); ++m) {
    if (prior.weight(m) == 0.0) continue;
    for (std::size_t i = 0; i < lm.alphabet_size(); ++i) {
      if (std::isinf(lm.loss(m, i))) {
        raise(Errc::infinite_loss,
              "model '" + lm.model_label(m) +
                  "' carries infinite loss at point '" +
                  lm.alphabet()->label(i) +
                  "' but has positive prior mass");
      }
    }
  }

  const std::uint64_t count = dataset_space_size(lm.alphabet_size(), n, cap);
  std::vector<DiscreteMeasure> kernel;
  kernel.reserve(count);
  std::vector<double> log_partitions(count, 0.0);
  std::vector<double> scaled_risk(lm.model_count(), 0.0);
  for (std::uint64_t rank = 0; rank < count; ++rank) {
    const std::vector<std::size_t> entries =
        dataset_entries_from_rank(rank, lm.alphabet_size(), n);
    double shift = -kInf;
    for (std::size_t m = 0; m < lm.model_count(); ++m) {
      scaled_risk[m] = -mean_loss(lm, m, entries) / lambda;
      if (prior.weight(m) > 0.0) shift = std::max(shift, scaled_risk[m]);
    }
    double mass = 0.0;
    for (std::size_t m = 0; m < lm.model_count(); ++m) {
      const double qm = prior.weight(m);
      if (qm == 0.0) continue;
      mass += qm * std::exp(scaled_risk[m] - shift);
    }
    const double log_partition_value = shift + std::log(mass);
    log_partitions[rank] = log_partition_value;

    std::vector<double> weights(lm.model_count(), 0.0);
    for (std::size_t m = 0; m < lm.model_count(); ++m) {
      const double qm = prior.weight(m);
      if (qm == 0.0) continue;
      weights[m] =
          std::exp(std::log(qm) + scaled_risk[m] - log_partition_value);
    }
    kernel.emplace_back(lm.model_alphabet(), std::move(weights));
  }
  LearningAlgorithm algorithm(std::move(lm), n, std::move(kernel));
  return GibbsAlgorithm{std::move(algorithm), prior, lambda,
                        std::move(log_partitions)};
}

DiscreteMeasure model_marginal(const LearningAlgorithm& alg,
                               const DiscreteMeasure& pz, std::uint64_t cap) {
  const LossModel& lm = alg.loss_model();
  lm.require_alphabet(pz, "model_marginal");
  const std::uint64_t count =
      dataset_space_size(lm.alphabet_size(), alg.dataset_length(), cap);
  std::vector<double> weights(lm.model_count(), 0.0);
  for (std::uint64_t rank = 0; rank < count; ++rank) {
    const std::vector<std::size_t> entries = dataset_entries_from_rank(
        rank, lm.alphabet_size(), alg.dataset_length());
    const double weight = product_weight(pz, entries);
    if (weight == 0.0) continue;
    const DiscreteMeasure& conditional = alg.conditional(rank);
    for (std::size_t m = 0; m < lm.model_count(); ++m) {
      weights[m] += weight * conditional.weight(m);
    }
  }
  return DiscreteMeasure(lm.model_alphabet(), std::move(weights));
}

double mutual_information(const LearningAlgorithm& alg,
                          const DiscreteMeasure& pz, std::uint64_t cap) {
  const LossModel& lm = alg.loss_model();
  lm.require_alphabet(pz, "mutual_information");
  const DiscreteMeasure marginal = model_marginal(alg, pz, cap);
  const std::uint64_t count =
      dataset_space_size(lm.alphabet_size(), alg.dataset_length(), cap);
  double total = 0.0;
  for (std::uint64_t rank = 0; rank < count; ++rank) {
    const std::vector<std::size_t> entries = dataset_entries_from_rank(
        rank, lm.alphabet_size(), alg.dataset_length());
    const double weight = product_weight(pz, entries);
    if (weight == 0.0) continue;
    const double term = kl_divergence(alg.conditional(rank), marginal);
    if (std::isinf(term)) {
      raise(Errc::not_abs_continuous,
            "the conditional at dataset rank " + std::to_string(rank) +
                " escapes the support of the model marginal");
    }
    total += weight * term;
  }
  return total;
}

double lautum_information(const LearningAlgorithm& alg,
                          const DiscreteMeasure& pz, std::uint64_t cap) {
  const LossModel& lm = alg.loss_model();
  lm.require_alphabet(pz, "lautum_information");
  const DiscreteMeasure marginal = model_marginal(alg, pz, cap);
  const std::uint64_t count =
      dataset_space_size(lm.alphabet_size(), alg.dataset_length(), cap);
  double total = 0.0;
  for (std::uint64_t rank = 0; rank < count; ++rank) {
    const std::vector<std::size_t> entries = dataset_entries_from_rank(
        rank, lm.alphabet_size(), alg.dataset_length());
    const double weight = product_weight(pz, entries);
    if (weight == 0.0) continue;
    const double term = kl_divergence(marginal, alg.conditional(rank));
    if (std::isinf(term)) {
      raise(Errc::infinite_lautum,
            "lautum information is infinite: the conditional at dataset rank " +
                std::to_string(rank) +
                " has smaller support than the model marginal");
    }
    total += weight * term;
  }
  return total;
}

GapAudit gibbs_audit(const GibbsAlgorithm& gibbs, const DiscreteMeasure& pz,
                     std::uint64_t cap) {
  const double direct = doubly_expected_gap(gibbs.algorithm, pz, cap);
  const double mutual = mutual_information(gibbs.algorithm, pz, cap);
  const double lautum = lautum_information(gibbs.algorithm, pz, cap);
  const double scaled = gibbs.lambda * (mutual + lautum);
  return GapAudit{direct, mutual, lautum, scaled, direct - scaled};
}

}  // namespace wcm
