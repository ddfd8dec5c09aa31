#include "wcm/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace wcm::io {

namespace {

[[noreturn]] void bad_file(const std::string& path, const std::string& what) {
  raise(Errc::bad_input, path + ": " + what);
}

ordered_json parse_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    // e.what() carries the byte position of the syntax error
    bad_file(path, std::string("not valid JSON: ") + e.what());
  }
}

const ordered_json& require_field(const std::string& path,
                                  const ordered_json& root,
                                  const char* field) {
  if (!root.is_object() || !root.contains(field)) {
    bad_file(path, std::string("missing field '") + field + "'");
  }
  return root.at(field);
}

std::vector<std::string> parse_string_array(const std::string& path,
                                            const ordered_json& value,
                                            const char* field) {
  if (!value.is_array() || value.empty()) {
    bad_file(path, std::string("field '") + field +
                       "' must be a non-empty array of strings");
  }
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const auto& item : value) {
    if (!item.is_string()) {
      bad_file(path, std::string("field '") + field +
                         "' must contain only strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

double parse_loss_entry(const std::string& path, const ordered_json& value,
                        const std::string& where) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    if (s == "inf" || s == "infinity") {
      return std::numeric_limits<double>::infinity();
    }
  }
  bad_file(path, where + ": entries must be numbers (or \"inf\")");
}

std::vector<double> parse_number_array(const std::string& path,
                                       const ordered_json& value,
                                       const char* field) {
  if (!value.is_array() || value.empty()) {
    bad_file(path, std::string("field '") + field +
                       "' must be a non-empty array of numbers");
  }
  std::vector<double> out;
  out.reserve(value.size());
  for (const auto& item : value) {
    if (!item.is_number()) {
      bad_file(path, std::string("field '") + field +
                         "' must contain only numbers");
    }
    out.push_back(item.get<double>());
  }
  return out;
}

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buffer[8];
          std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
          out += buffer;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void write_value(const ordered_json& value, std::string& out, int depth);

void write_inline(const ordered_json& value, std::string& out) {
  switch (value.type()) {
    case ordered_json::value_t::null: out += "null"; break;
    case ordered_json::value_t::boolean:
      out += value.get<bool>() ? "true" : "false";
      break;
    case ordered_json::value_t::number_integer:
      out += std::to_string(value.get<std::int64_t>());
      break;
    case ordered_json::value_t::number_unsigned:
      out += std::to_string(value.get<std::uint64_t>());
      break;
    case ordered_json::value_t::number_float:
      out += format_number(value.get<double>());
      break;
    case ordered_json::value_t::string:
      append_escaped(out, value.get<std::string>());
      break;
    case ordered_json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : value) {
        if (!first) out += ", ";
        first = false;
        write_inline(item, out);
      }
      out += ']';
      break;
    }
    case ordered_json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out += ", ";
        first = false;
        append_escaped(out, it.key());
        out += ": ";
        write_inline(it.value(), out);
      }
      out += '}';
      break;
    }
    default: out += "null";
  }
}

void write_value(const ordered_json& value, std::string& out, int depth) {
  if (value.is_object() && !value.empty()) {
    out += "{\n";
    const std::string pad((depth + 1) * 2, ' ');
    bool first = true;
    for (auto it = value.begin(); it != value.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      append_escaped(out, it.key());
      out += ": ";
      write_value(it.value(), out, depth + 1);
    }
    out += '\n';
    out += std::string(depth * 2, ' ');
    out += '}';
    return;
  }
  if (value.is_array() && !value.empty() &&
      (value.front().is_object() || value.front().is_array())) {
    out += "[\n";
    const std::string pad((depth + 1) * 2, ' ');
    bool first = true;
    for (const auto& item : value) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      write_value(item, out, depth + 1);
    }
    out += '\n';
    out += std::string(depth * 2, ' ');
    out += ']';
    return;
  }
  write_inline(value, out);
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) {
    raise(Errc::bad_input, path + ": cannot open file");
  }
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream stream(path, std::ios::binary | std::ios::trunc);
  if (!stream) {
    raise(Errc::bad_input, path + ": cannot open file for writing");
  }
  stream << content;
  if (!stream) {
    raise(Errc::bad_input, path + ": write failed");
  }
}

std::string file_digest(const std::string& path) {
  const std::string bytes = read_text_file(path);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "fnv1a64:%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

InstanceData load_instance(const std::string& path) {
  const ordered_json root = parse_file(path);

  AlphabetPtr alphabet;
  try {
    alphabet = make_alphabet(
        parse_string_array(path, require_field(path, root, "alphabet"),
                           "alphabet"));
  } catch (const Error& e) {
    if (e.code() == Errc::bad_input) throw;
    bad_file(path, std::string("field 'alphabet': ") + e.what());
  }

  const ordered_json& loss_field = require_field(path, root, "loss");
  if (!loss_field.is_array()) {
    bad_file(path, "field 'loss' must be an array of rows");
  }
  std::vector<std::vector<double>> loss;
  loss.reserve(loss_field.size());
  for (std::size_t row = 0; row < loss_field.size(); ++row) {
    const ordered_json& row_json = loss_field.at(row);
    if (!row_json.is_array()) {
      bad_file(path, "field 'loss': row " + std::to_string(row) +
                         " must be an array");
    }
    std::vector<double> values;
    values.reserve(row_json.size());
    for (const auto& entry : row_json) {
      values.push_back(parse_loss_entry(
          path, entry, "field 'loss': row " + std::to_string(row)));
    }
    loss.push_back(std::move(values));
  }

  try {
    LossModel lm(alphabet,
                 parse_string_array(path, require_field(path, root, "models"),
                                    "models"),
                 std::move(loss));

    DiscreteMeasure reference(
        alphabet, parse_number_array(
                      path, require_field(path, root, "reference"),
                      "reference"));

    std::optional<DiscreteMeasure> data;
    if (root.contains("data")) {
      data.emplace(alphabet,
                   parse_number_array(path, root.at("data"), "data"));
    }
    return InstanceData{std::move(lm), std::move(reference), std::move(data)};
  } catch (const Error& e) {
    if (e.code() == Errc::bad_input) throw;
    bad_file(path, e.what());
  }
}

Dataset load_dataset(const std::string& path, const AlphabetPtr& alphabet) {
  const ordered_json root = parse_file(path);
  const std::vector<std::string> labels =
      parse_string_array(path, require_field(path, root, "entries"),
                         "entries");
  std::vector<std::size_t> entries;
  entries.reserve(labels.size());
  for (const std::string& label : labels) {
    if (!alphabet->contains(label)) {
      bad_file(path, "field 'entries': label '" + label +
                         "' is not in the instance alphabet");
    }
    entries.push_back(alphabet->index_of(label));
  }
  return Dataset(alphabet, std::move(entries));
}

DiscreteMeasure resolve_selector(const std::string& selector,
                                 const InstanceData& instance) {
  if (selector == "reference") return instance.reference;
  if (selector == "data") {
    if (!instance.data) {
      raise(Errc::bad_input,
            "selector 'data': the instance file has no 'data' measure");
    }
    return *instance.data;
  }
  if (selector_is_dataset(selector)) {
    const std::string dataset_path = selector.substr(8);
    return type_of(load_dataset(dataset_path,
                                instance.lm.alphabet()))
        .as_measure;
  }
  if (!selector.empty() && selector.front() == '[') {
    ordered_json parsed = ordered_json::parse(selector, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_array()) {
      raise(Errc::bad_input,
            "selector '" + selector + "' is not a valid weight list");
    }
    return DiscreteMeasure(
        instance.lm.alphabet(),
        parse_number_array("selector", parsed, "weights"));
  }
  raise(Errc::bad_input,
        "unknown measure selector '" + selector +
            "'; expected 'reference', 'data', '[w1, ...]', or 'dataset:PATH'");
}

bool selector_is_dataset(const std::string& selector) {
  return selector.rfind("dataset:", 0) == 0;
}

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

ordered_json number_json(double value) {
  if (std::isfinite(value)) return value;
  if (value > 0.0) return "infinity";
  if (value < 0.0) return "-infinity";
  return "nan";
}

ordered_json measure_json(const DiscreteMeasure& measure) {
  ordered_json out = ordered_json::object();
  for (std::size_t i = 0; i < measure.size(); ++i) {
    out[measure.alphabet()->label(i)] = number_json(measure.weight(i));
  }
  return out;
}

ordered_json sensitivity_report_json(const SensitivityReport& report) {
  ordered_json out = ordered_json::object();
  out["g_direct"] = number_json(report.g_direct);
  out["g_closed_form"] = number_json(report.g_closed_form);
  out["residual"] = number_json(report.residual);
  out["beta"] = number_json(report.beta);
  ordered_json terms = ordered_json::array();
  for (const SensitivityTerm& term : report.terms) {
    ordered_json item = ordered_json::object();
    item["name"] = term.name;
    item["coefficient"] = number_json(term.coefficient);
    item["value"] = number_json(term.value);
    terms.push_back(std::move(item));
  }
  out["terms"] = std::move(terms);
  if (report.tilt_distance_term) {
    out["tilt_distance_term"] = number_json(*report.tilt_distance_term);
  }
  if (report.reference_distance_term) {
    out["reference_distance_term"] =
        number_json(*report.reference_distance_term);
  }
  out["reference"] = measure_json(report.reference);
  return out;
}

ordered_json summary_json(const VerificationSummary& summary) {
  ordered_json out = ordered_json::object();
  out["trials_run"] = summary.trials_run;
  out["trials_skipped"] = summary.trials_skipped;
  out["all_passed"] = summary.all_passed();
  ordered_json identities = ordered_json::array();
  for (const IdentityStats& stats : summary.identities) {
    ordered_json item = ordered_json::object();
    item["name"] = stats.name;
    item["threshold"] = number_json(stats.threshold);
    item["trials"] = stats.trials;
    item["max_abs_residual"] = number_json(stats.max_abs_residual);
    item["mean_abs_residual"] = number_json(stats.mean_abs_residual);
    ordered_json failures = ordered_json::array();
    for (const IdentityFailure& failure : stats.failures) {
      ordered_json f = ordered_json::object();
      f["trial"] = failure.trial;
      f["residual"] = number_json(failure.residual);
      f["instance"] = failure.instance_dump;
      failures.push_back(std::move(f));
    }
    item["failures"] = std::move(failures);
    identities.push_back(std::move(item));
  }
  out["identities"] = std::move(identities);
  if (!summary.kl_gap_pairs.empty()) {
    ordered_json pairs = ordered_json::array();
    for (const auto& [kl, gap] : summary.kl_gap_pairs) {
      pairs.push_back(ordered_json::array({number_json(kl), number_json(gap)}));
    }
    out["kl_gap_profile"] = std::move(pairs);
  }
  return out;
}

std::string serialize(const ordered_json& value) {
  std::string out;
  write_value(value, out, 0);
  out += '\n';
  return out;
}

}  // namespace wcm::io
