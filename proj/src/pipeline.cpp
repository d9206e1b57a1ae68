#include "hpstat/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hpstat/dataio.hpp"
#include "hpstat/error.hpp"
#include "hpstat/report.hpp"

namespace hpstat {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream stream(value);
  T out{};
  stream >> out;
  if (!stream || !stream.eof()) {
    throw InvalidArgument("config key '" + key + "': cannot parse '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  throw InvalidArgument("config key '" + key + "': expected true|false, got '" + value + "'");
}

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  return p.is_absolute() ? p : base / p;
}

void read_analysis_section(const pt::ptree& section, const fs::path& base, AnalysisConfig& cfg,
                           std::vector<std::string>& layer_order) {
  for (const auto& [key, node] : section) {
    const std::string value = trim(node.data());
    if (key == "layers") {
      layer_order = split_list(value);
    } else if (key == "metric") {
      cfg.metric.kind = parse_metric_kind(value);
    } else if (key == "zero_norm_epsilon") {
      cfg.metric.zero_norm_epsilon = parse_number<double>(key, value);
    } else if (key == "per_class") {
      cfg.per_class = parse_number<Index>(key, value);
    } else if (key == "subsample_seed") {
      cfg.subsample_seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "permute_labels") {
      cfg.permute_labels = parse_bool(key, value);
    } else if (key == "permute_seed") {
      cfg.permute_seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "tests") {
      cfg.tests.clear();
      for (const auto& item : split_list(value)) cfg.tests.push_back(parse_test_kind(item));
    } else if (key == "spans") {
      cfg.spans.clear();
      for (const auto& item : split_list(value)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
          throw InvalidArgument("span '" + item + "' must be written first:second");
        }
        cfg.spans.emplace_back(trim(item.substr(0, colon)), trim(item.substr(colon + 1)));
      }
    } else if (key == "span_splits") {
      cfg.span_splits.clear();
      for (const auto& item : split_list(value)) cfg.span_splits.push_back(parse_data_split(item));
    } else if (key == "trials") {
      cfg.spec.trials = parse_number<std::uint64_t>(key, value);
    } else if (key == "alpha") {
      cfg.spec.alpha = parse_number<double>(key, value);
    } else if (key == "seed") {
      cfg.spec.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "report_csv") {
      cfg.report_csv = resolve(base, value);
    } else if (key == "report_json") {
      cfg.report_json = resolve(base, value);
    } else if (key == "matrices_json") {
      cfg.matrices_json = resolve(base, value);
    } else {
      throw InvalidArgument("unknown key '" + key + "' in [analysis]");
    }
  }
}

}  // namespace

AnalysisConfig parse_analysis_config_text(const std::string& text, const fs::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream stream(text);
    pt::read_ini(stream, tree);
  } catch (const pt::ini_parser_error& e) {
    throw FormatError(std::string("config: ") + e.what());
  }

  AnalysisConfig cfg;
  std::vector<std::string> layer_order;
  std::vector<std::string> section_order;
  std::map<std::string, LayerFiles> layers;

  for (const auto& [name, section] : tree) {
    if (section.empty() && !section.data().empty()) {
      throw InvalidArgument("config: key '" + name + "' outside any section");
    }
    if (name == "analysis") {
      read_analysis_section(section, base_dir, cfg, layer_order);
    } else if (name == "labels") {
      for (const auto& [key, node] : section) {
        cfg.labels[parse_data_split(key)] = resolve(base_dir, trim(node.data()));
      }
    } else if (name.rfind("layer ", 0) == 0) {
      LayerFiles files;
      files.name = trim(name.substr(6));
      for (const auto& [key, node] : section) {
        const auto dot = key.find('.');
        if (dot == std::string::npos) {
          throw InvalidArgument("layer key '" + key + "' must be <state>.<split>");
        }
        const auto state = parse_model_state(key.substr(0, dot));
        const auto split = parse_data_split(key.substr(dot + 1));
        files.files[{state, split}] = resolve(base_dir, trim(node.data()));
      }
      section_order.push_back(files.name);
      layers[files.name] = std::move(files);
    } else {
      throw InvalidArgument("config: unknown section [" + name + "]");
    }
  }

  if (layer_order.empty()) layer_order = section_order;
  if (layer_order.empty()) throw InvalidArgument("config lists no layers");
  for (const auto& name : layer_order) {
    const auto it = layers.find(name);
    if (it == layers.end()) {
      throw InvalidArgument("layer '" + name + "' has no [layer " + name + "] section");
    }
    cfg.layers.push_back(it->second);
  }
  if (cfg.layers.size() != layers.size()) {
    throw InvalidArgument("config has [layer] sections not named in 'layers'");
  }
  cfg.spec.validate();
  return cfg;
}

AnalysisConfig parse_analysis_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_analysis_config_text(buffer.str(), path.parent_path());
}

AnalysisOutput run_analysis(const AnalysisConfig& cfg) {
  std::vector<std::string> names;
  for (const auto& layer : cfg.layers) names.push_back(layer.name);
  AnalysisOutput output{LayerAnalysis(names), {}};

  // Matrices are the expensive part: one per distinct (file, split).
  std::map<std::pair<fs::path, DataSplit>, HpMatrix> cache;
  std::vector<HpMatrix> computed;
  for (const auto& layer : cfg.layers) {
    for (const auto& [key, path] : layer.files) {
      const auto [state, split] = key;
      auto found = cache.find({path, split});
      if (found == cache.end()) {
        std::optional<fs::path> labels;
        if (auto it = cfg.labels.find(split); it != cfg.labels.end()) labels = it->second;
        auto rep = read_representation(path, {}, labels);
        if (cfg.per_class > 0) rep = subsample_per_class(rep, cfg.per_class, cfg.subsample_seed);
        if (cfg.permute_labels) {
          rep = permute_labels(std::move(rep),
                               cfg.permute_seed + (split == DataSplit::Validation ? 1 : 0));
        }
        found = cache.emplace(std::make_pair(path, split), pairwise_hp_matrix(rep, cfg.metric)).first;
      }
      HpMatrix matrix = found->second;
      matrix.provenance = {layer.name, state, split};
      computed.push_back(matrix);
      output.analysis.add(std::move(matrix));
    }
  }

  output.reports = run_layer_battery(output.analysis, cfg.tests, cfg.spec);
  if (!cfg.spans.empty()) {
    std::vector<std::pair<Index, Index>> spans;
    for (const auto& [first, second] : cfg.spans) {
      spans.emplace_back(output.analysis.layer_index(first), output.analysis.layer_index(second));
    }
    for (DataSplit split : cfg.span_splits) {
      auto rows = multi_layer_span_tests(output.analysis, spans, split, cfg.spec);
      output.reports.insert(output.reports.end(), rows.begin(), rows.end());
    }
  }

  if (cfg.report_csv) write_report(output.reports, ReportFormat::Csv, *cfg.report_csv);
  if (cfg.report_json) write_report(output.reports, ReportFormat::Json, *cfg.report_json);
  if (cfg.matrices_json) {
    std::ofstream out(*cfg.matrices_json, std::ios::trunc);
    if (!out) throw Error("cannot open " + cfg.matrices_json->string() + " for writing");
    out << "[\n";
    for (std::size_t k = 0; k < computed.size(); ++k) {
      out << hp_matrix_to_json(computed[k]) << (k + 1 < computed.size() ? ",\n" : "\n");
    }
    out << "]\n";
  }
  return output;
}

}  // namespace hpstat
