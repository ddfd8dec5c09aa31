#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "wcm/empirical.hpp"
#include "wcm/loss_model.hpp"
#include "wcm/measure.hpp"
#include "wcm/sensitivity.hpp"
#include "wcm/verify.hpp"

// File formats and report emission for the command-line front end.
// Instances and reports are JSON; reports are written by a dedicated
// serializer that prints every floating-point number with 17 significant
// digits, so identical inputs produce byte-identical reports and every
// value round-trips losslessly.
namespace wcm::io {

using ordered_json = nlohmann::ordered_json;

// A parsed instance file: alphabet, loss table, reference measure, and an
// optional data-generating measure.
struct InstanceData {
  LossModel lm;
  DiscreteMeasure reference;
  std::optional<DiscreteMeasure> data;

  // The data measure when present, otherwise the reference.
  const DiscreteMeasure& data_or_reference() const {
    return data ? *data : reference;
  }
};

InstanceData load_instance(const std::string& path);

// Dataset files hold entries by label, resolved against the instance's
// alphabet.
Dataset load_dataset(const std::string& path, const AlphabetPtr& alphabet);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// FNV-1a over the raw file bytes, prefixed with the algorithm name.
std::string file_digest(const std::string& path);

// Measure selectors accepted by the CLI:
//   "reference" | "data"  named measures from the instance file
//   "[w1, w2, ...]"       inline weights over the alphabet
//   "dataset:PATH"        the type of the dataset at PATH
DiscreteMeasure resolve_selector(const std::string& selector,
                                 const InstanceData& instance);

bool selector_is_dataset(const std::string& selector);

// Formats a double with 17 significant digits.
std::string format_number(double value);

// JSON value for a possibly infinite quantity; infinities become the
// strings "infinity" / "-infinity".
ordered_json number_json(double value);

ordered_json measure_json(const DiscreteMeasure& measure);
ordered_json sensitivity_report_json(const SensitivityReport& report);
ordered_json summary_json(const VerificationSummary& summary);

// Deterministic writer: objects one key per line, arrays inline, floats
// via format_number. Ends with a newline.
std::string serialize(const ordered_json& value);

}  // namespace wcm::io
