#include "wcm/empirical.hpp"

#include <cmath>
#include <limits>

namespace wcm {

Dataset::Dataset(AlphabetPtr alphabet, std::vector<std::size_t> entries)
    : alphabet_(std::move(alphabet)), entries_(std::move(entries)) {
  if (entries_.empty()) {
    raise(Errc::length_mismatch, "dataset must contain at least one entry");
  }
  for (std::size_t idx : entries_) {
    if (idx >= alphabet_->size()) {
      raise(Errc::length_mismatch,
            "dataset entry index " + std::to_string(idx) +
                " out of range for alphabet of size " +
                std::to_string(alphabet_->size()));
    }
  }
}

TypeMeasure type_of(const Dataset& z) {
  std::vector<std::uint64_t> counts(z.alphabet()->size(), 0);
  for (std::size_t idx : z.entries()) counts[idx] += 1;
  const double n = static_cast<double>(z.length());
  std::vector<double> weights(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    weights[i] = static_cast<double>(counts[i]) / n;
  }
  DiscreteMeasure measure(z.alphabet(), std::move(weights),
                          DiscreteMeasure::ExactWeights{});
  return TypeMeasure{std::move(counts), z.length(), std::move(measure)};
}

double empirical_risk(const LossModel& lm, const Dataset& z,
                      std::size_t model) {
  lm.require_model(model);
  if (z.alphabet() != lm.alphabet() && !(*z.alphabet() == *lm.alphabet())) {
    raise(Errc::alphabet_mismatch,
          "empirical_risk: dataset is not on the model's alphabet");
  }
  const std::vector<double>& row = lm.loss_row(model);
  double total = 0.0;
  for (std::size_t idx : z.entries()) {
    if (std::isinf(row[idx])) return std::numeric_limits<double>::infinity();
    total += row[idx];
  }
  return total / static_cast<double>(z.length());
}

double risk_via_type(const LossModel& lm, const Dataset& z,
                     std::size_t model) {
  return expected_loss(lm, model, type_of(z).as_measure);
}

Dataset aggregate(const Dataset& z1, const Dataset& z2) {
  if (z1.alphabet() != z2.alphabet() && !(*z1.alphabet() == *z2.alphabet())) {
    raise(Errc::alphabet_mismatch,
          "aggregate: datasets live on different alphabets");
  }
  std::vector<std::size_t> entries = z1.entries();
  entries.insert(entries.end(), z2.entries().begin(), z2.entries().end());
  return Dataset(z1.alphabet(), std::move(entries));
}

}  // namespace wcm
