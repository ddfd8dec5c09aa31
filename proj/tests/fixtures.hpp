#pragma once

// Shared desk-scale fixtures: a two-point instance with a single 0/1 loss
// row and a three-point two-model instance used by the algorithm audits.

#include <string>
#include <vector>

#include "wcm/empirical.hpp"
#include "wcm/loss_model.hpp"
#include "wcm/measure.hpp"

namespace fixtures {

struct TwoPoint {
  wcm::AlphabetPtr alphabet = wcm::make_alphabet({"z1", "z2"});
  wcm::LossModel lm{alphabet, {"theta0"}, {{0.0, 1.0}}};
  wcm::DiscreteMeasure reference{alphabet, {0.5, 0.5}};
};

struct ThreePoint {
  wcm::AlphabetPtr alphabet = wcm::make_alphabet({"z1", "z2", "z3"});
  wcm::LossModel lm{alphabet,
                    {"theta1", "theta2"},
                    {{0.0, 1.0, 2.0}, {2.0, 1.0, 0.0}}};
  wcm::DiscreteMeasure data{alphabet, {0.5, 0.3, 0.2}};
  wcm::DiscreteMeasure uniform_prior{lm.model_alphabet(), {1.0, 1.0}};
};

inline wcm::Dataset dataset_of(const wcm::AlphabetPtr& alphabet,
                               const std::vector<std::string>& labels) {
  std::vector<std::size_t> entries;
  entries.reserve(labels.size());
  for (const std::string& label : labels) {
    entries.push_back(alphabet->index_of(label));
  }
  return wcm::Dataset(alphabet, std::move(entries));
}

}  // namespace fixtures
