#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hpstat/analysis.hpp"
#include "hpstat/hp_matrix.hpp"

namespace hpstat {

enum class ReportFormat { Csv, Json };

/// Header `test_kind,input_layer,output_layer,delta,p_value,reject`; delta and
/// p-value rounded to three decimals.
std::string report_to_csv(std::span<const TestReport> rows);

/// Full-precision JSON array of row objects.
std::string report_to_json(std::span<const TestReport> rows);
std::vector<TestReport> report_from_json(std::string_view text);

/// Throws InvalidArgument for an empty row list and Error on I/O failure.
void write_report(std::span<const TestReport> rows, ReportFormat format,
                  const std::filesystem::path& path);

std::string hp_matrix_to_json(const HpMatrix& matrix);

}  // namespace hpstat
