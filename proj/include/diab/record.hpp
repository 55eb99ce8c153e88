#pragma once

#include <optional>
#include <string>
#include <vector>

namespace diab {

enum class SelfReport { yes, no, other };

// One survey participant as read from the extract, before exclusion and
// labeling. Feature values are positional in schema order; absent cells
// stay absent rather than being coded as sentinel numbers.
struct RawRecord {
  std::string id;
  std::vector<std::optional<double>> values;

  std::optional<double> age_years;
  std::optional<bool> pregnancy_flag;
  std::optional<SelfReport> self_report_diabetes;
  std::optional<double> plasma_glucose_mg_dl;
};

}  // namespace diab
