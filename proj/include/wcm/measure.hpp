#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "wcm/errors.hpp"

namespace wcm {

// Finite ordered set of distinct data-point labels. Index <-> label is a
// bijection; measures and datasets refer to points by index.
class DataAlphabet {
 public:
  explicit DataAlphabet(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  bool contains(const std::string& label) const {
    return index_.count(label) != 0;
  }
  std::size_t index_of(const std::string& label) const;

  bool operator==(const DataAlphabet& other) const noexcept {
    return labels_ == other.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

using AlphabetPtr = std::shared_ptr<const DataAlphabet>;

AlphabetPtr make_alphabet(std::vector<std::string> labels);

// Probability measure with finite support on a DataAlphabet. Weights are
// dense, nonnegative, and normalized at construction. Immutable.
class DiscreteMeasure {
 public:
  // Tag for weights that are already an exact probability vector (e.g.
  // integer counts divided by n); skips the renormalizing division.
  struct ExactWeights {};

  DiscreteMeasure(AlphabetPtr alphabet, std::vector<double> weights);
  DiscreteMeasure(AlphabetPtr alphabet, std::vector<double> weights,
                  ExactWeights);

  const AlphabetPtr& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double weight(std::size_t i) const { return weights_.at(i); }
  const std::vector<double>& weights() const noexcept { return weights_; }

  bool in_support(std::size_t i) const { return weights_.at(i) > 0.0; }
  std::size_t support_size() const noexcept;

 private:
  AlphabetPtr alphabet_;
  std::vector<double> weights_;
};

bool same_alphabet(const DiscreteMeasure& a, const DiscreteMeasure& b);
void require_same_alphabet(const DiscreteMeasure& a, const DiscreteMeasure& b,
                           const char* where);

// Relative entropy sum_{i: p_i>0} p_i log(p_i/q_i), natural log, with the
// 0 log 0 = 0 convention. Returns +infinity when p is not absolutely
// continuous with respect to q. Summation runs in ascending alphabet
// index so results are deterministic.
double kl_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q);

// Symmetrized relative entropy kl(p,q) + kl(q,p).
double jeffreys_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q);

// Convex combination w*p + (1-w)*q. Endpoints return the input unchanged.
DiscreteMeasure mix(const DiscreteMeasure& p, const DiscreteMeasure& q,
                    double w);

// True iff support(p) is contained in support(q).
bool is_abs_continuous(const DiscreteMeasure& p, const DiscreteMeasure& q);

// Raises not_abs_continuous naming the first offending support point.
void require_abs_continuous(const DiscreteMeasure& p, const DiscreteMeasure& q,
                            const char* what_p, const char* what_q);

}  // namespace wcm
