#pragma once

#include <cstdint>
#include <vector>

#include "wcm/loss_model.hpp"
#include "wcm/measure.hpp"

namespace wcm {

// A finite tuple of data points, stored as alphabet indices. Datasets are
// bound to one alphabet; cross-alphabet aggregation is an error.
class Dataset {
 public:
  Dataset(AlphabetPtr alphabet, std::vector<std::size_t> entries);

  const AlphabetPtr& alphabet() const noexcept { return alphabet_; }
  std::size_t length() const noexcept { return entries_.size(); }
  std::size_t entry(std::size_t t) const { return entries_.at(t); }
  const std::vector<std::size_t>& entries() const noexcept { return entries_; }

 private:
  AlphabetPtr alphabet_;
  std::vector<std::size_t> entries_;
};

// Empirical measure of a dataset. Counts are exact integers; the float
// measure is derived from them, so repeated aggregation accumulates no
// drift.
struct TypeMeasure {
  std::vector<std::uint64_t> counts;
  std::uint64_t n;
  DiscreteMeasure as_measure;
};

TypeMeasure type_of(const Dataset& z);

// (1/n) sum_t loss[model][z_t].
double empirical_risk(const LossModel& lm, const Dataset& z,
                      std::size_t model);

// The same risk evaluated as an expectation under the dataset's type.
double risk_via_type(const LossModel& lm, const Dataset& z, std::size_t model);

// Concatenation; the aggregate's type is the n1/(n1+n2) convex combination
// of the two types.
Dataset aggregate(const Dataset& z1, const Dataset& z2);

}  // namespace wcm
