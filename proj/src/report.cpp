#include "hpstat/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "hpstat/error.hpp"

namespace hpstat {

using nlohmann::json;

namespace {

std::string fixed3(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.3f", value);
  return buffer;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

json row_to_json(const TestReport& row) {
  return {{"test_kind", std::string(to_string(row.test_kind))},
          {"input_layer", row.input_layer},
          {"output_layer", row.output_layer},
          {"delta", row.delta},
          {"p_value", row.p_value},
          {"reject", row.reject}};
}

}  // namespace

std::string report_to_csv(std::span<const TestReport> rows) {
  std::string out = "test_kind,input_layer,output_layer,delta,p_value,reject\n";
  for (const auto& row : rows) {
    out += std::string(to_string(row.test_kind)) + ',' + csv_field(row.input_layer) + ',' +
           csv_field(row.output_layer) + ',' + fixed3(row.delta) + ',' + fixed3(row.p_value) +
           ',' + (row.reject ? "true" : "false") + '\n';
  }
  return out;
}

std::string report_to_json(std::span<const TestReport> rows) {
  json array = json::array();
  for (const auto& row : rows) array.push_back(row_to_json(row));
  return array.dump(2) + '\n';
}

std::vector<TestReport> report_from_json(std::string_view text) {
  std::vector<TestReport> rows;
  try {
    const auto array = json::parse(text);
    for (const auto& item : array) {
      TestReport row;
      row.test_kind = parse_test_kind(item.at("test_kind").get<std::string>());
      row.input_layer = item.at("input_layer").get<std::string>();
      row.output_layer = item.at("output_layer").get<std::string>();
      row.delta = item.at("delta").get<double>();
      row.p_value = item.at("p_value").get<double>();
      row.reject = item.at("reject").get<bool>();
      rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed report JSON: ") + e.what());
  }
  return rows;
}

void write_report(std::span<const TestReport> rows, ReportFormat format,
                  const std::filesystem::path& path) {
  if (rows.empty()) throw InvalidArgument("refusing to write an empty report");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << (format == ReportFormat::Csv ? report_to_csv(rows) : report_to_json(rows));
  if (!out) throw Error("write failed for " + path.string());
}

std::string hp_matrix_to_json(const HpMatrix& matrix) {
  json entries = json::array();
  for (const auto& e : matrix.entries) {
    entries.push_back({{"class_a", e.first},
                       {"class_b", e.second},
                       {"n", e.n},
                       {"m", e.m},
                       {"S", e.cross_edges},
                       {"H", e.hp}});
  }
  json out = {{"layer", matrix.provenance.layer},
              {"state", std::string(to_string(matrix.provenance.state))},
              {"split", std::string(to_string(matrix.provenance.split))},
              {"metric", std::string(to_string(matrix.metric.kind))},
              {"classes", matrix.class_ids},
              {"mean_H", matrix.entries.empty() ? 0.0 : mean_hp(matrix)},
              {"pairs", entries}};
  return out.dump(2);
}

}  // namespace hpstat
