#include "wcm/measure.hpp"

#include <cmath>
#include <limits>

namespace wcm {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::negative_weight: return "negative_weight";
    case Errc::zero_total_mass: return "zero_total_mass";
    case Errc::length_mismatch: return "length_mismatch";
    case Errc::non_finite_weight: return "non_finite_weight";
    case Errc::alphabet_mismatch: return "alphabet_mismatch";
    case Errc::weight_out_of_range: return "weight_out_of_range";
    case Errc::unknown_model: return "unknown_model";
    case Errc::negative_loss: return "negative_loss";
    case Errc::infeasible_temperature: return "infeasible_temperature";
    case Errc::non_positive_beta: return "non_positive_beta";
    case Errc::gamma_infeasible: return "gamma_infeasible";
    case Errc::constant_loss_nonzero_gamma: return "constant_loss_nonzero_gamma";
    case Errc::non_convergence: return "non_convergence";
    case Errc::degenerate_beta: return "degenerate_beta";
    case Errc::not_abs_continuous: return "not_abs_continuous";
    case Errc::infinite_loss: return "infinite_loss";
    case Errc::enumeration_cap_exceeded: return "enumeration_cap_exceeded";
    case Errc::non_positive_lambda: return "non_positive_lambda";
    case Errc::infinite_lautum: return "infinite_lautum";
    case Errc::bad_input: return "bad_input";
  }
  return "unknown";
}

DataAlphabet::DataAlphabet(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) {
    raise(Errc::length_mismatch, "alphabet must have at least one point");
  }
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      raise(Errc::alphabet_mismatch,
            "duplicate alphabet label '" + labels_[i] + "'");
    }
  }
}

std::size_t DataAlphabet::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) {
    raise(Errc::alphabet_mismatch, "label '" + label + "' not in alphabet");
  }
  return it->second;
}

AlphabetPtr make_alphabet(std::vector<std::string> labels) {
  return std::make_shared<const DataAlphabet>(std::move(labels));
}

namespace {

void validate_weights(const DataAlphabet& alphabet,
                      const std::vector<double>& weights) {
  if (weights.size() != alphabet.size()) {
    raise(Errc::length_mismatch,
          "expected " + std::to_string(alphabet.size()) + " weights, got " +
              std::to_string(weights.size()));
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i])) {
      raise(Errc::non_finite_weight,
            "weight for '" + alphabet.label(i) + "' is not finite");
    }
    if (weights[i] < 0.0) {
      raise(Errc::negative_weight,
            "weight for '" + alphabet.label(i) + "' is negative");
    }
  }
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(AlphabetPtr alphabet,
                                 std::vector<double> weights)
    : alphabet_(std::move(alphabet)), weights_(std::move(weights)) {
  validate_weights(*alphabet_, weights_);
  double total = 0.0;
  for (double w : weights_) total += w;
  if (total <= 0.0) {
    raise(Errc::zero_total_mass, "weights sum to zero");
  }
  for (double& w : weights_) w /= total;
}

DiscreteMeasure::DiscreteMeasure(AlphabetPtr alphabet,
                                 std::vector<double> weights, ExactWeights)
    : alphabet_(std::move(alphabet)), weights_(std::move(weights)) {
  validate_weights(*alphabet_, weights_);
  double total = 0.0;
  for (double w : weights_) total += w;
  if (total <= 0.0) {
    raise(Errc::zero_total_mass, "weights sum to zero");
  }
}

std::size_t DiscreteMeasure::support_size() const noexcept {
  std::size_t count = 0;
  for (double w : weights_) count += (w > 0.0);
  return count;
}

bool same_alphabet(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return a.alphabet() == b.alphabet() || *a.alphabet() == *b.alphabet();
}

void require_same_alphabet(const DiscreteMeasure& a, const DiscreteMeasure& b,
                           const char* where) {
  if (!same_alphabet(a, b)) {
    raise(Errc::alphabet_mismatch,
          std::string(where) + ": measures live on different alphabets");
  }
}

double kl_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  require_same_alphabet(p, q, "kl_divergence");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.weight(i);
    if (pi == 0.0) continue;
    const double qi = q.weight(i);
    if (qi == 0.0) return std::numeric_limits<double>::infinity();
    total += pi * std::log(pi / qi);
  }
  return total;
}

double jeffreys_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  return kl_divergence(p, q) + kl_divergence(q, p);
}

DiscreteMeasure mix(const DiscreteMeasure& p, const DiscreteMeasure& q,
                    double w) {
  require_same_alphabet(p, q, "mix");
  if (!(w >= 0.0 && w <= 1.0)) {
    raise(Errc::weight_out_of_range, "mixing weight must lie in [0, 1]");
  }
  if (w == 1.0) return p;
  if (w == 0.0) return q;
  std::vector<double> mixed(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    mixed[i] = w * p.weight(i) + (1.0 - w) * q.weight(i);
  }
  return DiscreteMeasure(p.alphabet(), std::move(mixed));
}

bool is_abs_continuous(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  require_same_alphabet(p, q, "is_abs_continuous");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.weight(i) > 0.0 && q.weight(i) == 0.0) return false;
  }
  return true;
}

void require_abs_continuous(const DiscreteMeasure& p, const DiscreteMeasure& q,
                            const char* what_p, const char* what_q) {
  require_same_alphabet(p, q, "require_abs_continuous");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.weight(i) > 0.0 && q.weight(i) == 0.0) {
      raise(Errc::not_abs_continuous,
            std::string(what_p) + " is not absolutely continuous with " +
                what_q + ": point '" + p.alphabet()->label(i) +
                "' has positive mass under " + what_p + " but zero mass under " +
                what_q);
    }
  }
}

}  // namespace wcm
