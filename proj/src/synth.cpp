#include "diab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "diab/errors.hpp"
#include "diab/ingest.hpp"
#include "diab/schema.hpp"
#include "diab/seeds.hpp"

namespace diab {

namespace {

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

std::string fmt0(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.0f", v);
  return buf;
}

std::string fmt1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

double categorical(Rng& rng, const std::vector<double>& weights) {
  return static_cast<double>(rng.weighted_index(weights)) + 1.0;  // codes start at 1
}

}  // namespace

CsvTable synth_table(const SynthConfig& cfg) {
  if (cfg.n < 20) throw ArgumentError("synthetic cohort needs n >= 20");
  if (!(cfg.prevalence > 0.0 && cfg.prevalence < 1.0))
    throw ArgumentError("prevalence must lie in (0, 1)");
  const double cells = 16.0;
  if (cfg.missing_rate < 0.0 || cfg.missing_rate >= (cells - 1.0) / cells)
    throw ArgumentError("missing rate must lie in [0, 15/16)");
  // age is exempt from masking (it must survive the exclusion rules), so
  // the other 15 features carry its share
  const double mask_rate = cfg.missing_rate * cells / (cells - 1.0);

  const FeatureSchema schema = FeatureSchema::default_schema();
  Rng rng(derive_seed(cfg.seed, "synth"));

  CsvTable table;
  table.header.push_back(kIdCode);
  for (const std::string& code : schema.codes()) table.header.push_back(code);
  table.header.push_back(kGlucoseCode);
  table.header.push_back(kSelfReportCode);
  table.header.push_back(kPregnancyCode);

  for (size_t i = 0; i < cfg.n; ++i) {
    const bool dia = rng.bernoulli(cfg.prevalence);
    const double glucose = dia ? clamp(rng.normal(165.0, 30.0), 127.5, 400.0)
                               : clamp(rng.normal(95.0, 12.0), 45.0, 125.0);

    std::vector<std::string> values(schema.size());
    // schema order; class-conditional shifts give every model signal
    values[0] = fmt0(clamp(std::round(dia ? rng.normal(63.0, 11.0) : rng.normal(45.0, 14.0)),
                           20.0, 85.0));                                            // AGE
    values[1] = fmt1(dia ? clamp(rng.normal(113.0, 13.0), 55.0, 180.0)
                         : clamp(rng.normal(94.0, 12.0), 55.0, 180.0));             // WAIST
    values[2] = fmt0(rng.bernoulli(dia ? 0.60 : 0.18) ? 1.0 : 2.0);                 // REL
    values[3] = fmt1(clamp(rng.normal(167.0, 10.0), 130.0, 210.0));                 // HEIGHT
    values[4] = fmt0(clamp(std::round(dia ? rng.normal(222.0, 40.0)
                                          : rng.normal(195.0, 35.0)),
                           90.0, 400.0));                                           // CHOL
    values[5] = fmt1(dia ? clamp(rng.normal(37.5, 3.5), 25.0, 55.0)
                         : clamp(rng.normal(38.5, 3.5), 25.0, 55.0));               // LEG
    values[6] = fmt1(dia ? clamp(rng.normal(92.0, 18.0), 35.0, 200.0)
                         : clamp(rng.normal(78.0, 15.0), 35.0, 200.0));             // WEIGHT
    values[7] = fmt1(dia ? clamp(rng.normal(33.5, 6.0), 15.0, 65.0)
                         : clamp(rng.normal(27.5, 5.0), 15.0, 65.0));               // BMI
    values[8] = fmt0(dia ? categorical(rng, {0.22, 0.08, 0.33, 0.30, 0.07})
                         : categorical(rng, {0.28, 0.07, 0.38, 0.20, 0.07}));       // RACE
    values[9] = fmt0(rng.bernoulli(dia ? 0.62 : 0.28) ? 1.0 : 2.0);                 // HBP
    values[10] = fmt0(clamp(std::round(dia ? rng.normal(5.5, 2.5) : rng.normal(6.5, 2.5)),
                            1.0, 11.0));                                            // INCOME
    values[11] = fmt0(clamp(std::round(rng.exponential(48.0)), 0.0, 365.0));        // ALC
    values[12] = fmt0(rng.bernoulli(0.55) ? 0.0
                                          : std::round(rng.uniform(14.0, 30.0)));   // SMOKE
    values[13] = fmt0(clamp(std::round(dia ? rng.normal(2.9, 1.2) : rng.normal(3.4, 1.1)),
                            1.0, 5.0));                                             // EDU
    values[14] = fmt0(clamp(std::round(dia ? rng.normal(2.1, 0.9) : rng.normal(2.6, 0.9)),
                            1.0, 4.0));                                             // EXER
    values[15] = fmt0(rng.bernoulli(dia ? 0.55 : 0.50) ? 1.0 : 2.0);                // GEND

    for (size_t f = 1; f < schema.size(); ++f)
      if (rng.bernoulli(mask_rate)) values[f].clear();

    std::vector<std::string> row;
    row.reserve(table.header.size());
    row.push_back("S" + std::to_string(100000 + i));
    for (auto& v : values) row.push_back(std::move(v));
    row.push_back(fmt1(glucose));
    row.push_back("");  // DIQ010: label comes from the glucose rule
    row.push_back("");  // RIDEXPRG: nobody flagged pregnant
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_synth(const std::string& path, const SynthConfig& cfg, char delimiter) {
  write_delimited(path, synth_table(cfg), delimiter);
}

}  // namespace diab
