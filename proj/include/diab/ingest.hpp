#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diab/cohort.hpp"
#include "diab/csv.hpp"
#include "diab/record.hpp"
#include "diab/schema.hpp"

namespace diab {

// Auxiliary column codes recognized next to the schema features. All are
// optional in the header; a missing column reads as all-absent.
inline constexpr const char* kIdCode = "SEQN";
inline constexpr const char* kGlucoseCode = "LBXGLU";
inline constexpr const char* kSelfReportCode = "DIQ010";
inline constexpr const char* kPregnancyCode = "RIDEXPRG";
inline constexpr const char* kAgeCode = "RIDAGEYR";

// Reads a delimited extract into records. The header must contain every
// schema survey code; a missing code raises SchemaError naming all of the
// missing ones. Empty cells, the literal "NA", and unparseable cells
// become missing values. Row count is preserved.
std::vector<RawRecord> ingest_delimited(const std::string& path, const FeatureSchema& schema,
                                        char delimiter = ',');

std::vector<RawRecord> records_from_table(const CsvTable& table, const FeatureSchema& schema);

enum class ExclusionReason { kept, missing_age, under_age, pregnant };

ExclusionReason exclusion_reason(const RawRecord& record);

// True when the record stays in the study: age >= 20 and not pregnant.
inline bool apply_exclusions(const RawRecord& record) {
  return exclusion_reason(record) == ExclusionReason::kept;
}

struct LabelResult {
  int label = 0;
  LabelSource source = LabelSource::glucose;
};

// Self-report answer wins when present; otherwise plasma glucose > 126
// mg/dL marks the diabetic class. Neither signal -> no label.
std::optional<LabelResult> assign_label(const RawRecord& record);

struct ExclusionReport {
  size_t total_read = 0;
  size_t excluded_missing_age = 0;
  size_t excluded_under_age = 0;
  size_t excluded_pregnant = 0;
  size_t unlabeled = 0;
  size_t labeled_self_report = 0;
  size_t labeled_glucose = 0;
  size_t cohort_size = 0;

  std::string to_text() const;
};

// Applies exclusions then labeling, keeping input row order.
std::pair<Cohort, ExclusionReport> build_cohort(const std::vector<RawRecord>& records,
                                                const FeatureSchema& schema);

}  // namespace diab
