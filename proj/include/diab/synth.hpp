#pragma once

#include <cstdint>
#include <string>

#include "diab/csv.hpp"

namespace diab {

struct SynthConfig {
  size_t n = 1000;
  uint64_t seed = 17;
  double prevalence = 0.19;
  double missing_rate = 0.25;  // fraction of all schema cells, MCAR
};

// Synthetic NHANES-style extract over the 16-feature schema. Diabetic
// records shift AGE, WAIST, BMI (and friends) upward and set REL=yes
// more often; labels are driven by a generated glucose column, so the
// ingest rules reproduce them. Age is always present and >= 20, and the
// pregnancy/self-report columns stay empty, keeping every record
// eligible.
CsvTable synth_table(const SynthConfig& cfg);

void write_synth(const std::string& path, const SynthConfig& cfg, char delimiter = ',');

}  // namespace diab
