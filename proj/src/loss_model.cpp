#include "wcm/loss_model.hpp"

#include <cmath>
#include <limits>

#include "wcm/empirical.hpp"

namespace wcm {

LossModel::LossModel(AlphabetPtr alphabet,
                     std::vector<std::string> model_labels,
                     std::vector<std::vector<double>> loss)
    : alphabet_(std::move(alphabet)),
      models_(make_alphabet(std::move(model_labels))),
      loss_(std::move(loss)) {
  if (loss_.size() != models_->size()) {
    raise(Errc::length_mismatch,
          "loss table has " + std::to_string(loss_.size()) + " rows for " +
              std::to_string(models_->size()) + " models");
  }
  for (std::size_t m = 0; m < loss_.size(); ++m) {
    if (loss_[m].size() != alphabet_->size()) {
      raise(Errc::length_mismatch,
            "loss row for model '" + models_->label(m) + "' has " +
                std::to_string(loss_[m].size()) + " entries, alphabet has " +
                std::to_string(alphabet_->size()));
    }
    for (std::size_t i = 0; i < loss_[m].size(); ++i) {
      const double v = loss_[m][i];
      if (std::isnan(v) || v < 0.0) {
        raise(Errc::negative_loss,
              "loss for model '" + models_->label(m) + "' at point '" +
                  alphabet_->label(i) + "' must be a nonnegative number");
      }
    }
  }
}

const std::string& LossModel::model_label(std::size_t model) const {
  require_model(model);
  return models_->label(model);
}

std::size_t LossModel::model_index(const std::string& label) const {
  if (!models_->contains(label)) {
    raise(Errc::unknown_model, "unknown model '" + label + "'");
  }
  return models_->index_of(label);
}

double LossModel::loss(std::size_t model, std::size_t point) const {
  require_model(model);
  return loss_[model].at(point);
}

const std::vector<double>& LossModel::loss_row(std::size_t model) const {
  require_model(model);
  return loss_[model];
}

void LossModel::require_model(std::size_t model) const {
  if (model >= models_->size()) {
    raise(Errc::unknown_model,
          "model index " + std::to_string(model) + " out of range (have " +
              std::to_string(models_->size()) + ")");
  }
}

void LossModel::require_alphabet(const DiscreteMeasure& p,
                                 const char* where) const {
  if (p.alphabet() != alphabet_ && !(*p.alphabet() == *alphabet_)) {
    raise(Errc::alphabet_mismatch,
          std::string(where) + ": measure is not on the model's alphabet");
  }
}

double expected_loss(const LossModel& lm, std::size_t model,
                     const DiscreteMeasure& p) {
  lm.require_model(model);
  lm.require_alphabet(p, "expected_loss");
  const std::vector<double>& row = lm.loss_row(model);
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.weight(i);
    if (pi == 0.0) continue;  // 0 * inf must not poison the sum
    if (std::isinf(row[i])) return std::numeric_limits<double>::infinity();
    total += pi * row[i];
  }
  return total;
}

double max_loss_on_support(const LossModel& lm, std::size_t model,
                           const DiscreteMeasure& p) {
  lm.require_model(model);
  lm.require_alphabet(p, "max_loss_on_support");
  const std::vector<double>& row = lm.loss_row(model);
  double best = 0.0;
  bool seen = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.weight(i) == 0.0) continue;
    if (!seen || row[i] > best) best = row[i];
    seen = true;
  }
  return best;
}

std::size_t erm_minimizer(const LossModel& lm, const Dataset& z, double lambda,
                          const std::vector<double>& regularizer) {
  if (regularizer.size() != lm.model_count()) {
    raise(Errc::length_mismatch,
          "regularizer has " + std::to_string(regularizer.size()) +
              " entries for " + std::to_string(lm.model_count()) + " models");
  }
  if (!(lambda >= 0.0)) {
    raise(Errc::weight_out_of_range, "lambda must be nonnegative");
  }
  std::size_t best = 0;
  double best_objective = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < lm.model_count(); ++m) {
    const double objective =
        empirical_risk(lm, z, m) + lambda * regularizer[m];
    if (objective < best_objective) {
      best_objective = objective;
      best = m;
    }
  }
  return best;
}

}  // namespace wcm
