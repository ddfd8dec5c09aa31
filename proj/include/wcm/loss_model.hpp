#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wcm/measure.hpp"

namespace wcm {

class Dataset;

// Finite model set over a finite data alphabet with a dense loss table.
// Entries are nonnegative; +infinity is representable so that feasibility
// of a tilt stays a property of the (model, reference, beta) triple
// rather than a construction-time rejection.
class LossModel {
 public:
  LossModel(AlphabetPtr alphabet, std::vector<std::string> model_labels,
            std::vector<std::vector<double>> loss);

  const AlphabetPtr& alphabet() const noexcept { return alphabet_; }
  std::size_t alphabet_size() const noexcept { return alphabet_->size(); }

  std::size_t model_count() const noexcept { return models_->size(); }
  const std::string& model_label(std::size_t model) const;
  std::size_t model_index(const std::string& label) const;

  // The model set viewed as an alphabet, so measures over models (priors,
  // posteriors, marginals) reuse the measure machinery.
  const AlphabetPtr& model_alphabet() const noexcept { return models_; }

  double loss(std::size_t model, std::size_t point) const;
  const std::vector<double>& loss_row(std::size_t model) const;

  void require_model(std::size_t model) const;
  void require_alphabet(const DiscreteMeasure& p, const char* where) const;

 private:
  AlphabetPtr alphabet_;
  AlphabetPtr models_;
  std::vector<std::vector<double>> loss_;
};

// sum_i p_i * loss[model][i]; +infinity as soon as a support point carries
// infinite loss.
double expected_loss(const LossModel& lm, std::size_t model,
                     const DiscreteMeasure& p);

// max of loss[model][.] over the support of p.
double max_loss_on_support(const LossModel& lm, std::size_t model,
                           const DiscreteMeasure& p);

// Exhaustive scan of empirical_risk(z, model) + lambda * regularizer[model];
// ties break toward the lowest model index.
std::size_t erm_minimizer(const LossModel& lm, const Dataset& z, double lambda,
                          const std::vector<double>& regularizer);

}  // namespace wcm
