// Command-line front end: solve worst-case tilts, decompose sensitivities
// and generalization gaps, audit the Gibbs algorithm, and run the
// randomized verification suite. Reports are deterministic JSON.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wcm/gen_gap.hpp"
#include "wcm/io.hpp"
#include "wcm/sensitivity.hpp"
#include "wcm/verify.hpp"
#include "wcm/worst_case.hpp"

namespace {

using wcm::io::number_json;
using wcm::io::ordered_json;

// Exit-code contract: 0 success, 1 input/parse error, 2 mathematical
// infeasibility, 3 verification failure.
constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitVerifyFailed = 3;

int exit_code_for(wcm::Errc code) {
  switch (code) {
    case wcm::Errc::infeasible_temperature:
    case wcm::Errc::gamma_infeasible:
    case wcm::Errc::constant_loss_nonzero_gamma:
    case wcm::Errc::non_convergence:
    case wcm::Errc::degenerate_beta:
    case wcm::Errc::not_abs_continuous:
    case wcm::Errc::infinite_loss:
    case wcm::Errc::enumeration_cap_exceeded:
    case wcm::Errc::infinite_lautum:
      return kExitInfeasible;
    default:
      return kExitInput;
  }
}

std::uint64_t enumeration_cap() {
  const char* raw = std::getenv("WCM_ENUM_CAP");
  if (raw == nullptr || *raw == '\0') return wcm::kDefaultEnumerationCap;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || value == 0) {
    wcm::raise(wcm::Errc::bad_input,
               std::string("WCM_ENUM_CAP: '") + raw +
                   "' is not a positive integer");
  }
  return value;
}

void emit(const ordered_json& report, const std::string& out_path) {
  const std::string text = wcm::io::serialize(report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    wcm::io::write_text_file(out_path, text);
  }
}

ordered_json report_header(const std::string& command,
                           ordered_json arguments, ordered_json inputs) {
  ordered_json report = ordered_json::object();
  report["command"] = command;
  report["arguments"] = std::move(arguments);
  report["inputs"] = std::move(inputs);
  return report;
}

ordered_json tilt_results(const wcm::LossModel& lm,
                          const wcm::WorstCaseTilt& w) {
  ordered_json results = ordered_json::object();
  results["model"] = lm.model_label(w.model);
  results["beta"] = number_json(w.beta);
  results["gamma_achieved"] = number_json(w.gamma);
  results["log_partition"] = number_json(w.log_partition);
  results["expected_loss_reference"] =
      number_json(wcm::expected_loss(lm, w.model, w.base));
  results["expected_loss_tilt"] =
      number_json(wcm::expected_loss(lm, w.model, w.measure));
  results["tilt"] = wcm::io::measure_json(w.measure);
  results["reference"] = wcm::io::measure_json(w.base);
  return results;
}

// Builds the tilt from exactly one of --beta / --gamma.
wcm::WorstCaseTilt build_tilt(const wcm::LossModel& lm, std::size_t model,
                              const wcm::DiscreteMeasure& reference,
                              const std::optional<double>& beta,
                              const std::optional<double>& gamma) {
  if (beta.has_value() == gamma.has_value()) {
    wcm::raise(wcm::Errc::bad_input,
               "exactly one of --beta and --gamma is required");
  }
  if (beta) return wcm::tilt(lm, model, reference, *beta);
  return wcm::solve_beta(lm, model, reference, *gamma);
}

struct CommonFlags {
  std::string instance_path;
  std::string model_label;
  std::string out_path;
};

int cmd_solve_beta(const CommonFlags& common, double gamma) {
  const wcm::io::InstanceData instance =
      wcm::io::load_instance(common.instance_path);
  const std::size_t model = instance.lm.model_index(common.model_label);
  const wcm::WorstCaseTilt w =
      wcm::solve_beta(instance.lm, model, instance.reference, gamma);

  ordered_json arguments = ordered_json::object();
  arguments["instance"] = common.instance_path;
  arguments["model"] = common.model_label;
  arguments["gamma"] = wcm::io::format_number(gamma);
  ordered_json inputs = ordered_json::object();
  inputs["instance_digest"] = wcm::io::file_digest(common.instance_path);

  ordered_json report =
      report_header("solve-beta", std::move(arguments), std::move(inputs));
  ordered_json results = tilt_results(instance.lm, w);
  results["gamma_target"] = number_json(gamma);
  results["gamma_residual"] = number_json(w.finite_beta() ? w.gamma - gamma
                                                          : 0.0);
  report["results"] = std::move(results);
  emit(report, common.out_path);
  return kExitOk;
}

int cmd_tilt(const CommonFlags& common, double beta) {
  const wcm::io::InstanceData instance =
      wcm::io::load_instance(common.instance_path);
  const std::size_t model = instance.lm.model_index(common.model_label);
  const wcm::WorstCaseTilt w =
      wcm::tilt(instance.lm, model, instance.reference, beta);

  ordered_json arguments = ordered_json::object();
  arguments["instance"] = common.instance_path;
  arguments["model"] = common.model_label;
  arguments["beta"] = wcm::io::format_number(beta);
  ordered_json inputs = ordered_json::object();
  inputs["instance_digest"] = wcm::io::file_digest(common.instance_path);

  ordered_json report =
      report_header("tilt", std::move(arguments), std::move(inputs));
  ordered_json results = tilt_results(instance.lm, w);
  const auto [first, second] =
      wcm::log_partition_identities(w, instance.lm);
  results["dual_identity_residuals"] =
      ordered_json::array({number_json(first), number_json(second)});
  report["results"] = std::move(results);
  emit(report, common.out_path);
  return kExitOk;
}

int cmd_decompose(const CommonFlags& common, const std::string& p1_selector,
                  const std::string& p2_selector,
                  const std::string& reference_selector,
                  const std::optional<double>& beta,
                  const std::optional<double>& gamma) {
  const wcm::io::InstanceData instance =
      wcm::io::load_instance(common.instance_path);
  const wcm::LossModel& lm = instance.lm;
  const std::size_t model = lm.model_index(common.model_label);

  const bool both_datasets = wcm::io::selector_is_dataset(p1_selector) &&
                             wcm::io::selector_is_dataset(p2_selector);

  ordered_json inputs = ordered_json::object();
  inputs["instance_digest"] = wcm::io::file_digest(common.instance_path);
  auto note_dataset = [&](const std::string& selector, const char* key) {
    if (wcm::io::selector_is_dataset(selector)) {
      inputs[key] = wcm::io::file_digest(selector.substr(8));
    }
  };
  note_dataset(p1_selector, "p1_digest");
  note_dataset(p2_selector, "p2_digest");
  note_dataset(reference_selector, "reference_digest");

  wcm::SensitivityReport report_value = [&] {
    if (both_datasets) {
      const wcm::Dataset z1 =
          wcm::io::load_dataset(p1_selector.substr(8), lm.alphabet());
      const wcm::Dataset z2 =
          wcm::io::load_dataset(p2_selector.substr(8), lm.alphabet());
      const wcm::DiscreteMeasure reference =
          reference_selector == "aggregate"
              ? wcm::type_of(wcm::aggregate(z1, z2)).as_measure
              : wcm::io::resolve_selector(reference_selector, instance);
      const wcm::WorstCaseTilt w =
          build_tilt(lm, model, reference, beta, gamma);
      return wcm::dataset_sensitivity(lm, w, z1, z2);
    }
    if (reference_selector == "aggregate") {
      wcm::raise(wcm::Errc::bad_input,
                 "selector 'aggregate' needs dataset selectors for both "
                 "--p1 and --p2");
    }
    const wcm::DiscreteMeasure p1 =
        wcm::io::resolve_selector(p1_selector, instance);
    const wcm::DiscreteMeasure p2 =
        wcm::io::resolve_selector(p2_selector, instance);
    const wcm::DiscreteMeasure reference =
        reference_selector == "mixed"
            ? wcm::mixed_reference(p1, p2)
            : wcm::io::resolve_selector(reference_selector, instance);
    const wcm::WorstCaseTilt w = build_tilt(lm, model, reference, beta, gamma);
    return wcm::sensitivity_decomposition(lm, w, p1, p2);
  }();

  ordered_json arguments = ordered_json::object();
  arguments["instance"] = common.instance_path;
  arguments["model"] = common.model_label;
  arguments["p1"] = p1_selector;
  arguments["p2"] = p2_selector;
  arguments["reference"] = reference_selector;
  if (beta) arguments["beta"] = wcm::io::format_number(*beta);
  if (gamma) arguments["gamma"] = wcm::io::format_number(*gamma);

  ordered_json report =
      report_header("decompose", std::move(arguments), std::move(inputs));
  report["results"] = wcm::io::sensitivity_report_json(report_value);
  emit(report, common.out_path);
  return kExitOk;
}

int cmd_gap(const CommonFlags& common, const std::string& dataset_path,
            const std::string& data_selector,
            const std::string& reference_selector,
            const std::optional<double>& beta,
            const std::optional<double>& gamma) {
  const wcm::io::InstanceData instance =
      wcm::io::load_instance(common.instance_path);
  const wcm::LossModel& lm = instance.lm;
  const std::size_t model = lm.model_index(common.model_label);

  const wcm::Dataset z = wcm::io::load_dataset(dataset_path, lm.alphabet());
  const wcm::DiscreteMeasure pz =
      data_selector.empty() ? instance.data_or_reference()
                            : wcm::io::resolve_selector(data_selector,
                                                        instance);
  const wcm::DiscreteMeasure reference =
      reference_selector.empty()
          ? pz
          : wcm::io::resolve_selector(reference_selector, instance);

  const wcm::WorstCaseTilt w = build_tilt(lm, model, reference, beta, gamma);
  const wcm::SensitivityReport decomposition =
      wcm::gap_decomposition(lm, pz, z, w);
  const double gap = wcm::generalization_gap(lm, model, pz, z);

  ordered_json arguments = ordered_json::object();
  arguments["instance"] = common.instance_path;
  arguments["model"] = common.model_label;
  arguments["dataset"] = dataset_path;
  if (!data_selector.empty()) arguments["data"] = data_selector;
  if (!reference_selector.empty()) {
    arguments["reference"] = reference_selector;
  }
  if (beta) arguments["beta"] = wcm::io::format_number(*beta);
  if (gamma) arguments["gamma"] = wcm::io::format_number(*gamma);

  ordered_json inputs = ordered_json::object();
  inputs["instance_digest"] = wcm::io::file_digest(common.instance_path);
  inputs["dataset_digest"] = wcm::io::file_digest(dataset_path);

  ordered_json report =
      report_header("gap", std::move(arguments), std::move(inputs));
  ordered_json results = ordered_json::object();
  results["generalization_gap"] = number_json(gap);
  results["empirical_risk"] =
      number_json(wcm::empirical_risk(lm, z, model));
  results["population_risk"] =
      number_json(wcm::expected_loss(lm, model, pz));
  results["decomposition"] = wcm::io::sensitivity_report_json(decomposition);
  report["results"] = std::move(results);
  emit(report, common.out_path);
  return kExitOk;
}

int cmd_gibbs_audit(const CommonFlags& common, const std::string& prior_selector,
                    double lambda, std::size_t n,
                    const std::string& data_selector) {
  const wcm::io::InstanceData instance =
      wcm::io::load_instance(common.instance_path);
  const wcm::LossModel& lm = instance.lm;
  const std::uint64_t cap = enumeration_cap();

  const wcm::DiscreteMeasure prior = [&] {
    if (prior_selector == "uniform") {
      return wcm::DiscreteMeasure(
          lm.model_alphabet(),
          std::vector<double>(lm.model_count(), 1.0));
    }
    if (!prior_selector.empty() && prior_selector.front() == '[') {
      ordered_json parsed =
          ordered_json::parse(prior_selector, nullptr, false);
      if (parsed.is_discarded() || !parsed.is_array()) {
        wcm::raise(wcm::Errc::bad_input,
                   "prior selector is not a valid weight list");
      }
      std::vector<double> weights;
      for (const auto& item : parsed) {
        if (!item.is_number()) {
          wcm::raise(wcm::Errc::bad_input,
                     "prior selector must contain only numbers");
        }
        weights.push_back(item.get<double>());
      }
      return wcm::DiscreteMeasure(lm.model_alphabet(), std::move(weights));
    }
    wcm::raise(wcm::Errc::bad_input,
               "prior selector must be 'uniform' or '[w1, ...]'");
  }();

  const wcm::DiscreteMeasure pz =
      data_selector.empty() ? instance.data_or_reference()
                            : wcm::io::resolve_selector(data_selector,
                                                        instance);

  const wcm::GibbsAlgorithm gibbs =
      wcm::gibbs_posterior(lm, prior, lambda, n, cap);
  const wcm::GapAudit audit = wcm::gibbs_audit(gibbs, pz, cap);

  ordered_json arguments = ordered_json::object();
  arguments["instance"] = common.instance_path;
  arguments["prior"] = prior_selector;
  arguments["lambda"] = wcm::io::format_number(lambda);
  arguments["n"] = n;
  if (!data_selector.empty()) arguments["data"] = data_selector;

  ordered_json inputs = ordered_json::object();
  inputs["instance_digest"] = wcm::io::file_digest(common.instance_path);

  ordered_json report =
      report_header("gibbs-audit", std::move(arguments), std::move(inputs));
  ordered_json results = ordered_json::object();
  results["doubly_expected_gap"] = number_json(audit.doubly_expected_direct);
  results["mutual_information"] = number_json(audit.mutual_info);
  results["lautum_information"] = number_json(audit.lautum_info);
  results["lambda_times_information_sum"] =
      number_json(audit.information_sum_scaled);
  results["identity_residual"] = number_json(audit.identity_residual);
  report["results"] = std::move(results);
  emit(report, common.out_path);
  return kExitOk;
}

int cmd_verify(const wcm::InstanceSpec& spec, const std::string& out_path) {
  const wcm::VerificationSummary summary = wcm::run_suite(spec);

  ordered_json arguments = ordered_json::object();
  arguments["trials"] = spec.trials;
  arguments["seed"] = spec.seed;
  arguments["alphabet_min"] = spec.alphabet_min;
  arguments["alphabet_max"] = spec.alphabet_max;
  arguments["models_min"] = spec.models_min;
  arguments["models_max"] = spec.models_max;
  arguments["loss_max"] = wcm::io::format_number(spec.loss_max);
  arguments["beta_min"] = wcm::io::format_number(spec.beta_min);
  arguments["beta_max"] = wcm::io::format_number(spec.beta_max);
  arguments["max_dataset_len"] = spec.max_dataset_len;
  if (spec.threshold_override) {
    arguments["threshold"] = wcm::io::format_number(*spec.threshold_override);
  }

  ordered_json report = report_header("verify", std::move(arguments),
                                      ordered_json::object());
  report["results"] = wcm::io::summary_json(summary);
  emit(report, out_path);
  return summary.all_passed() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"worst-case data measures, sensitivity decompositions, and "
               "generalization-gap audits on finite alphabets"};
  app.require_subcommand(1);

  CommonFlags common;
  std::optional<double> beta;
  std::optional<double> gamma;
  double gamma_required = 0.0;
  double beta_required = 0.0;
  std::string p1_selector;
  std::string p2_selector;
  std::string reference_selector = "reference";
  std::string dataset_path;
  std::string data_selector;
  std::string gap_reference_selector;
  std::string prior_selector = "uniform";
  double lambda = 1.0;
  std::size_t gibbs_n = 1;
  wcm::InstanceSpec spec;
  double threshold_flag = 0.0;
  std::string verify_out;

  auto add_common = [&](CLI::App* cmd, bool with_model = true) {
    cmd->add_option("--instance", common.instance_path,
                    "instance file (alphabet, reference, models, loss)")
        ->required();
    if (with_model) {
      cmd->add_option("--model", common.model_label, "model label")
          ->required();
    }
    cmd->add_option("--out", common.out_path,
                    "report path (stdout when omitted)");
  };

  CLI::App* solve = app.add_subcommand(
      "solve-beta", "invert a relative-entropy budget into the tilt");
  add_common(solve);
  solve->add_option("--gamma", gamma_required, "relative-entropy budget")
      ->required();

  CLI::App* tilt_cmd = app.add_subcommand(
      "tilt", "tilt the reference at a fixed inverse temperature");
  add_common(tilt_cmd);
  tilt_cmd->add_option("--beta", beta_required, "inverse temperature")
      ->required();

  CLI::App* decompose = app.add_subcommand(
      "decompose", "closed-form decomposition of an expected-loss or "
                   "empirical-risk difference");
  add_common(decompose);
  decompose->add_option("--p1", p1_selector, "first measure selector")
      ->required();
  decompose->add_option("--p2", p2_selector, "second measure selector")
      ->required();
  decompose->add_option("--reference", reference_selector,
                        "reference selector (also: 'aggregate', 'mixed')");
  decompose->add_option("--beta", beta, "inverse temperature");
  decompose->add_option("--gamma", gamma, "relative-entropy budget");

  CLI::App* gap = app.add_subcommand(
      "gap", "generalization gap of a model on a training dataset");
  add_common(gap);
  gap->add_option("--dataset", dataset_path, "training dataset file")
      ->required();
  gap->add_option("--data", data_selector,
                  "data measure selector (default: instance 'data' field)");
  gap->add_option("--reference", gap_reference_selector,
                  "reference selector (default: the data measure)");
  gap->add_option("--beta", beta, "inverse temperature");
  gap->add_option("--gamma", gamma, "relative-entropy budget");

  CLI::App* gibbs = app.add_subcommand(
      "gibbs-audit", "audit the doubly-expected gap of the Gibbs algorithm "
                     "against the information identity");
  add_common(gibbs, false);
  gibbs->add_option("--prior", prior_selector,
                    "prior over models: 'uniform' or '[w1, ...]'");
  gibbs->add_option("--lambda", lambda, "Gibbs temperature")->required();
  gibbs->add_option("--n", gibbs_n, "dataset length")->required();
  gibbs->add_option("--data", data_selector,
                    "data measure selector (default: instance 'data' field)");

  CLI::App* verify = app.add_subcommand(
      "verify", "run the randomized identity-verification suite");
  verify->add_option("--trials", spec.trials, "number of trials");
  verify->add_option("--seed", spec.seed, "master RNG seed");
  verify->add_option("--alphabet-min", spec.alphabet_min, "");
  verify->add_option("--alphabet-max", spec.alphabet_max, "");
  verify->add_option("--models-min", spec.models_min, "");
  verify->add_option("--models-max", spec.models_max, "");
  verify->add_option("--loss-max", spec.loss_max, "");
  verify->add_option("--beta-min", spec.beta_min, "");
  verify->add_option("--beta-max", spec.beta_max, "");
  verify->add_option("--max-dataset-len", spec.max_dataset_len, "");
  CLI::Option* threshold_opt = verify->add_option(
      "--threshold", threshold_flag,
      "override every per-identity residual threshold");
  verify->add_option("--out", verify_out, "report path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (solve->parsed()) return cmd_solve_beta(common, gamma_required);
    if (tilt_cmd->parsed()) return cmd_tilt(common, beta_required);
    if (decompose->parsed()) {
      return cmd_decompose(common, p1_selector, p2_selector,
                           reference_selector, beta, gamma);
    }
    if (gap->parsed()) {
      return cmd_gap(common, dataset_path, data_selector,
                     gap_reference_selector, beta, gamma);
    }
    if (gibbs->parsed()) {
      return cmd_gibbs_audit(common, prior_selector, lambda, gibbs_n,
                             data_selector);
    }
    if (verify->parsed()) {
      if (threshold_opt->count() > 0) {
        spec.threshold_override = threshold_flag;
      }
      return cmd_verify(spec, verify_out);
    }
  } catch (const wcm::Error& e) {
    std::cerr << "error (" << wcm::errc_name(e.code()) << "): " << e.what()
              << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
