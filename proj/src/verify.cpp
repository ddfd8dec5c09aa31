#include "wcm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "wcm/empirical.hpp"
#include "wcm/gen_gap.hpp"
#include "wcm/rng.hpp"
#include "wcm/sensitivity.hpp"
#include "wcm/worst_case.hpp"

namespace wcm {

namespace {

std::string fmt(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string fmt_vector(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += fmt(values[i]);
  }
  return out + "]";
}

// One randomly drawn feasible instance, everything a replay needs.
struct Instance {
  AlphabetPtr alphabet;
  LossModel lm;
  DiscreteMeasure base;
  std::size_t model;
  double beta;
};

std::string dump_instance(const Instance& inst) {
  std::string out = "{alphabet_size=" + std::to_string(inst.alphabet->size());
  out += ",model=" + std::to_string(inst.model);
  out += ",beta=" + fmt(inst.beta);
  out += ",base=" + fmt_vector(inst.base.weights());
  out += ",loss=[";
  for (std::size_t m = 0; m < inst.lm.model_count(); ++m) {
    if (m) out += ",";
    out += fmt_vector(inst.lm.loss_row(m));
  }
  out += "]}";
  return out;
}

DiscreteMeasure draw_measure(SplitMix64& rng, const AlphabetPtr& alphabet,
                             bool full_support) {
  std::vector<double> weights(alphabet->size(), 0.0);
  if (full_support) {
    for (double& w : weights) w = rng.next_positive();
  } else {
    bool any = false;
    for (double& w : weights) {
      if (rng.next_double() < 0.5) {
        w = rng.next_positive();
        any = true;
      }
    }
    if (!any) {
      weights[rng.next_below(weights.size())] = rng.next_positive();
    }
  }
  return DiscreteMeasure(alphabet, std::move(weights));
}

Dataset draw_dataset(SplitMix64& rng, const AlphabetPtr& alphabet,
                     std::size_t max_len) {
  const std::size_t len = 1 + rng.next_below(max_len);
  std::vector<std::size_t> entries(len);
  for (std::size_t& e : entries) e = rng.next_below(alphabet->size());
  return Dataset(alphabet, std::move(entries));
}

Instance draw_instance(SplitMix64& rng, const InstanceSpec& spec) {
  const std::size_t alphabet_size =
      spec.alphabet_min +
      rng.next_below(spec.alphabet_max - spec.alphabet_min + 1);
  const std::size_t model_count =
      spec.models_min + rng.next_below(spec.models_max - spec.models_min + 1);

  std::vector<std::string> labels(alphabet_size);
  for (std::size_t i = 0; i < alphabet_size; ++i) {
    labels[i] = "z" + std::to_string(i + 1);
  }
  AlphabetPtr alphabet = make_alphabet(std::move(labels));

  std::vector<std::string> model_labels(model_count);
  std::vector<std::vector<double>> loss(model_count);
  for (std::size_t m = 0; m < model_count; ++m) {
    model_labels[m] = "theta" + std::to_string(m + 1);
    loss[m].resize(alphabet_size);
    for (double& v : loss[m]) v = rng.next_in(0.0, spec.loss_max);
  }
  LossModel lm(alphabet, std::move(model_labels), std::move(loss));

  DiscreteMeasure base = draw_measure(rng, alphabet, true);
  const std::size_t model = rng.next_below(model_count);
  const double beta = rng.next_in(spec.beta_min, spec.beta_max);
  return Instance{alphabet, std::move(lm), std::move(base), model, beta};
}

// Identity slots in canonical order; the summary lists them in this order
// regardless of which trials contributed.
enum IdentityId : std::size_t {
  kSensitivityFromTilt = 0,
  kSensitivityDecomposition,
  kReferenceInvariance,
  kDualEqualities,
  kBetaSolverBudget,
  kBetaSolverRoundtrip,
  kRiskViaType,
  kDatasetSensitivity,
  kGapDecomposition,
  kTiltDominance,
  kJeffreysForm,
  kIdentityCount,
};

struct IdentityDefinition {
  const char* name;
  double threshold;
};

constexpr IdentityDefinition kIdentityTable[kIdentityCount] = {
    {"sensitivity_from_tilt", 1e-9},
    {"sensitivity_decomposition", 1e-9},
    {"reference_invariance", 1e-9},
    {"dual_equalities", 1e-9},
    {"beta_solver_budget", 1e-8},
    {"beta_solver_roundtrip", 1e-5},
    {"risk_via_type", 1e-12},
    {"dataset_sensitivity", 1e-9},
    {"gap_decomposition", 1e-9},
    {"tilt_dominance", 1e-12},
    {"jeffreys_form", 1e-9},
};

class Recorder {
 public:
  explicit Recorder(const std::optional<double>& override_threshold) {
    stats_.resize(kIdentityCount);
    sums_.assign(kIdentityCount, 0.0);
    for (std::size_t i = 0; i < kIdentityCount; ++i) {
      stats_[i].name = kIdentityTable[i].name;
      stats_[i].threshold =
          override_threshold.value_or(kIdentityTable[i].threshold);
    }
  }

  void record(IdentityId id, std::size_t trial, double abs_residual,
              const std::string& dump) {
    IdentityStats& s = stats_[id];
    s.trials += 1;
    sums_[id] += abs_residual;
    s.max_abs_residual = std::max(s.max_abs_residual, abs_residual);
    if (abs_residual > s.threshold) {
      s.failures.push_back(IdentityFailure{trial, abs_residual, dump});
    }
  }

  std::vector<IdentityStats> finalize() {
    for (std::size_t i = 0; i < kIdentityCount; ++i) {
      if (stats_[i].trials > 0) {
        stats_[i].mean_abs_residual =
            sums_[i] / static_cast<double>(stats_[i].trials);
      }
    }
    return std::move(stats_);
  }

 private:
  std::vector<IdentityStats> stats_;
  std::vector<double> sums_;
};

void run_trial(std::size_t trial, SplitMix64 rng, const InstanceSpec& spec,
               Recorder& recorder, std::size_t& skipped) {
  // Redraw until the drawn loss row is non-constant on the support, so
  // budgets and roundtrips are well-posed. Continuous draws make retries
  // overwhelmingly unlikely; the cap keeps a bad spec from spinning.
  Instance inst = draw_instance(rng, spec);
  int attempts = 1;
  while (gamma_sup(inst.lm, inst.model, inst.base) <= 0.0) {
    if (++attempts > 100) {
      skipped += 1;
      return;
    }
    inst = draw_instance(rng, spec);
  }
  const std::string dump = dump_instance(inst);
  const LossModel& lm = inst.lm;
  const std::size_t model = inst.model;
  const double beta = inst.beta;

  const WorstCaseTilt w = tilt(lm, model, inst.base, beta);

  {
    const DiscreteMeasure p = draw_measure(rng, inst.alphabet, false);
    const SensitivityReport rep = sensitivity_from_tilt(lm, w, p);
    recorder.record(kSensitivityFromTilt, trial, std::abs(rep.residual), dump);
  }

  {
    const DiscreteMeasure p1 = draw_measure(rng, inst.alphabet, false);
    const DiscreteMeasure p2 = draw_measure(rng, inst.alphabet, false);
    const SensitivityReport rep = sensitivity_decomposition(lm, w, p1, p2);
    recorder.record(kSensitivityDecomposition, trial, std::abs(rep.residual),
                    dump);

    const DiscreteMeasure alt_base = draw_measure(rng, inst.alphabet, true);
    const double alt_beta = rng.next_in(spec.beta_min, spec.beta_max);
    const WorstCaseTilt alt = tilt(lm, model, alt_base, alt_beta);
    const SensitivityReport alt_rep = sensitivity_decomposition(lm, alt, p1, p2);
    const double invariance =
        std::max(std::abs(rep.residual), std::abs(alt_rep.residual));
    recorder.record(kReferenceInvariance, trial, invariance, dump);
  }

  {
    const auto [first, second] = log_partition_identities(w, lm);
    recorder.record(kDualEqualities, trial,
                    std::max(std::abs(first), std::abs(second)), dump);
  }

  {
    const double sup = gamma_sup(lm, model, inst.base);
    const double budget = rng.next_double() * 0.9 * sup;
    const WorstCaseTilt solved = solve_beta(lm, model, inst.base, budget);
    const double achieved =
        solved.finite_beta() ? std::abs(solved.gamma - budget) : budget;
    recorder.record(kBetaSolverBudget, trial, achieved, dump);

    const WorstCaseTilt round = solve_beta(lm, model, inst.base, w.gamma);
    const double relative = std::abs(round.beta - beta) / beta;
    recorder.record(kBetaSolverRoundtrip, trial, relative, dump);
  }

  for (int repeat = 0; repeat < 10; ++repeat) {
    const Dataset z = draw_dataset(rng, inst.alphabet, spec.max_dataset_len);
    const std::size_t m = rng.next_below(lm.model_count());
    const double gap =
        std::abs(empirical_risk(lm, z, m) - risk_via_type(lm, z, m));
    recorder.record(kRiskViaType, trial, gap, dump);
  }

  for (int repeat = 0; repeat < 2; ++repeat) {
    const Dataset z1 = draw_dataset(rng, inst.alphabet, spec.max_dataset_len);
    const Dataset z2 = draw_dataset(rng, inst.alphabet, spec.max_dataset_len);
    const TypeMeasure joint = type_of(aggregate(z1, z2));
    const WorstCaseTilt anchored = tilt(lm, model, joint.as_measure, beta);
    const SensitivityReport rep = dataset_sensitivity(lm, anchored, z1, z2);
    recorder.record(kDatasetSensitivity, trial, std::abs(rep.residual), dump);
  }

  {
    const Dataset z = draw_dataset(rng, inst.alphabet, 12);
    const DiscreteMeasure& pz = inst.base;
    const SensitivityReport population =
        gap_decomposition_population(lm, model, pz, z, beta);
    const SensitivityReport anchored =
        gap_decomposition(lm, pz, z, tilt(lm, model, pz, beta));
    double worst = std::abs(population.residual);
    worst = std::max(worst, std::abs(population.g_closed_form -
                                     anchored.g_closed_form));
    worst = std::max(worst,
                     std::abs(population.g_direct - anchored.g_direct));

    const DiscreteMeasure mixed =
        mix(pz, type_of(z).as_measure, 0.5);
    const double second_beta = rng.next_in(spec.beta_min, spec.beta_max);
    for (const double b : {beta, second_beta}) {
      const SensitivityReport rep =
          gap_decomposition(lm, pz, z, tilt(lm, model, mixed, b));
      worst = std::max(worst, std::abs(rep.residual));
    }
    recorder.record(kGapDecomposition, trial, worst, dump);
  }

  {
    const double slack = expected_loss(lm, model, w.measure) -
                         expected_loss(lm, model, w.base);
    recorder.record(kTiltDominance, trial, std::max(0.0, -slack), dump);

    const SensitivityReport rep = jeffreys_gap(lm, w);
    recorder.record(kJeffreysForm, trial, std::abs(rep.residual), dump);
  }
}

}  // namespace

bool VerificationSummary::all_passed() const { return failure_count() == 0; }

std::size_t VerificationSummary::failure_count() const {
  std::size_t count = 0;
  for (const IdentityStats& s : identities) count += s.failures.size();
  return count;
}

VerificationSummary run_suite(const InstanceSpec& spec) {
  if (spec.alphabet_min < 2 || spec.alphabet_max < spec.alphabet_min ||
      spec.models_min < 1 || spec.models_max < spec.models_min ||
      spec.max_dataset_len < 1) {
    raise(Errc::bad_input, "instance spec ranges are empty or inverted");
  }
  if (!std::isfinite(spec.loss_max) || spec.loss_max <= 0.0 ||
      !(spec.beta_min > 0.0) || spec.beta_max < spec.beta_min) {
    raise(Errc::bad_input,
          "loss_max must be finite positive and the beta range non-empty");
  }
  Recorder recorder(spec.threshold_override);
  VerificationSummary summary;
  const SplitMix64 master(spec.seed);
  for (std::size_t trial = 0; trial < spec.trials; ++trial) {
    std::size_t skipped = 0;
    run_trial(trial, master.substream(trial), spec, recorder, skipped);
    summary.trials_skipped += skipped;
    summary.trials_run += (skipped == 0);
  }
  summary.identities = recorder.finalize();
  return summary;
}

VerificationSummary type_sweep(const LossModel& lm, std::size_t model,
                               const DiscreteMeasure& pz, std::size_t n,
                               double beta) {
  lm.require_model(model);
  lm.require_alphabet(pz, "type_sweep");

  IdentityStats stats;
  stats.name = "gap_decomposition_sweep";
  stats.threshold = 1e-9;
  double sum = 0.0;

  VerificationSummary summary;
  const WorstCaseTilt w = tilt(lm, model, pz, beta);
  const std::uint64_t count =
      dataset_space_size(pz.size(), n, kDefaultEnumerationCap);
  for (std::uint64_t rank = 0; rank < count; ++rank) {
    std::vector<std::size_t> entries =
        dataset_entries_from_rank(rank, pz.size(), n);
    Dataset z(pz.alphabet(), std::move(entries));
    const TypeMeasure type = type_of(z);
    if (!is_abs_continuous(type.as_measure, pz)) {
      summary.trials_skipped += 1;  // zero product mass under pz
      continue;
    }
    const SensitivityReport rep = gap_decomposition(lm, pz, z, w);
    const double residual = std::abs(rep.residual);
    stats.trials += 1;
    sum += residual;
    stats.max_abs_residual = std::max(stats.max_abs_residual, residual);
    if (residual > stats.threshold) {
      stats.failures.push_back(IdentityFailure{
          static_cast<std::size_t>(rank), residual,
          "{dataset_rank=" + std::to_string(rank) + "}"});
    }
    summary.kl_gap_pairs.emplace_back(kl_divergence(type.as_measure, pz),
                                      std::abs(rep.g_direct));
    summary.trials_run += 1;
  }
  if (stats.trials > 0) {
    stats.mean_abs_residual = sum / static_cast<double>(stats.trials);
  }
  std::sort(summary.kl_gap_pairs.begin(), summary.kl_gap_pairs.end());
  summary.identities.push_back(std::move(stats));
  return summary;
}

}  // namespace wcm
