#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wcm/loss_model.hpp"
#include "wcm/measure.hpp"

namespace wcm {

// Parameters of one randomized verification run. The seed is part of the
// spec: identical specs reproduce identical summaries bit for bit.
struct InstanceSpec {
  std::size_t trials = 100;
  std::uint64_t seed = 42;
  std::size_t alphabet_min = 2;
  std::size_t alphabet_max = 10;
  std::size_t models_min = 1;
  std::size_t models_max = 4;
  double loss_max = 5.0;
  double beta_min = 0.1;
  double beta_max = 10.0;
  std::size_t max_dataset_len = 20;
  // When set, replaces every per-identity threshold (used by the CLI's
  // --threshold flag to demonstrate the failure path).
  std::optional<double> threshold_override;
};

struct IdentityFailure {
  std::size_t trial;
  double residual;
  std::string instance_dump;
};

struct IdentityStats {
  std::string name;
  double threshold = 0.0;
  std::size_t trials = 0;
  double max_abs_residual = 0.0;
  double mean_abs_residual = 0.0;
  std::vector<IdentityFailure> failures;
};

struct VerificationSummary {
  std::vector<IdentityStats> identities;
  std::size_t trials_run = 0;
  std::size_t trials_skipped = 0;
  // Populated by type sweeps only: (kl(type, data measure), |gap|) per
  // dataset, sorted ascending.
  std::vector<std::pair<double, double>> kl_gap_pairs;

  bool all_passed() const;
  std::size_t failure_count() const;
};

// Randomized regression suite over every closed-form identity: draws
// feasible instances, evaluates each identity, and aggregates residuals.
// Deterministic given the spec; infeasible draws are redrawn up to 100
// times per trial and then recorded as skipped.
VerificationSummary run_suite(const InstanceSpec& spec);

// Exhaustive audit of the population-referenced gap decomposition over
// every dataset of length n, plus the (divergence, |gap|) profile showing
// the gap shrink as the type approaches the data measure. Datasets whose
// type escapes the support of pz carry zero product mass and are skipped.
VerificationSummary type_sweep(const LossModel& lm, std::size_t model,
                               const DiscreteMeasure& pz, std::size_t n,
                               double beta);

}  // namespace wcm
