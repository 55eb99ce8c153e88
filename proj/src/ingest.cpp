#include "diab/ingest.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "diab/errors.hpp"

namespace diab {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n\f\v";
  const size_t a = s.find_first_not_of(ws);
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(ws);
  return s.substr(a, b - a + 1);
}

std::optional<double> parse_cell(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty() || s == "NA") return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<size_t> find_column(const std::vector<std::string>& header, const std::string& code) {
  for (size_t i = 0; i < header.size(); ++i)
    if (trim(header[i]) == code) return i;
  return std::nullopt;
}

std::optional<std::string> raw_cell(const std::vector<std::string>& row,
                                    std::optional<size_t> col) {
  if (!col || *col >= row.size()) return std::nullopt;
  return row[*col];
}

}  // namespace

std::vector<RawRecord> records_from_table(const CsvTable& table, const FeatureSchema& schema) {
  std::vector<size_t> feature_cols(schema.size());
  std::vector<std::string> missing_codes;
  for (size_t f = 0; f < schema.size(); ++f) {
    const auto col = find_column(table.header, schema.at(f).survey_code);
    if (!col) missing_codes.push_back(schema.at(f).survey_code);
    else feature_cols[f] = *col;
  }
  if (!missing_codes.empty()) {
    std::ostringstream msg;
    msg << "input header is missing schema codes:";
    for (const auto& c : missing_codes) msg << ' ' << c;
    throw SchemaError(msg.str());
  }

  const auto id_col = find_column(table.header, kIdCode);
  const auto glucose_col = find_column(table.header, kGlucoseCode);
  const auto self_report_col = find_column(table.header, kSelfReportCode);
  const auto pregnancy_col = find_column(table.header, kPregnancyCode);
  const auto age_col = find_column(table.header, kAgeCode);

  std::vector<RawRecord> records;
  records.reserve(table.rows.size());
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    RawRecord rec;
    if (auto raw = raw_cell(row, id_col); raw && !trim(*raw).empty()) rec.id = trim(*raw);
    else rec.id = "row" + std::to_string(r + 1);

    rec.values.resize(schema.size());
    for (size_t f = 0; f < schema.size(); ++f) {
      if (auto raw = raw_cell(row, feature_cols[f])) rec.values[f] = parse_cell(*raw);
    }

    if (auto raw = raw_cell(row, age_col)) rec.age_years = parse_cell(*raw);
    if (auto raw = raw_cell(row, glucose_col)) rec.plasma_glucose_mg_dl = parse_cell(*raw);

    if (auto raw = raw_cell(row, pregnancy_col)) {
      if (auto v = parse_cell(*raw)) rec.pregnancy_flag = (*v == 1.0);
    }
    if (auto raw = raw_cell(row, self_report_col)) {
      if (auto v = parse_cell(*raw)) {
        if (*v == 1.0) rec.self_report_diabetes = SelfReport::yes;
        else if (*v == 2.0) rec.self_report_diabetes = SelfReport::no;
        else rec.self_report_diabetes = SelfReport::other;
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<RawRecord> ingest_delimited(const std::string& path, const FeatureSchema& schema,
                                        char delimiter) {
  return records_from_table(read_delimited(path, delimiter), schema);
}

ExclusionReason exclusion_reason(const RawRecord& record) {
  if (!record.age_years) return ExclusionReason::missing_age;
  if (*record.age_years < 20.0) return ExclusionReason::under_age;
  if (record.pregnancy_flag && *record.pregnancy_flag) return ExclusionReason::pregnant;
  return ExclusionReason::kept;
}

std::optional<LabelResult> assign_label(const RawRecord& record) {
  if (record.self_report_diabetes) {
    if (*record.self_report_diabetes == SelfReport::yes)
      return LabelResult{1, LabelSource::self_report};
    if (*record.self_report_diabetes == SelfReport::no)
      return LabelResult{0, LabelSource::self_report};
    // "other" answers fall through to the glucose rule
  }
  if (record.plasma_glucose_mg_dl) {
    const int label = (*record.plasma_glucose_mg_dl > 126.0) ? 1 : 0;
    return LabelResult{label, LabelSource::glucose};
  }
  return std::nullopt;
}

std::string ExclusionReport::to_text() const {
  std::ostringstream out;
  out << "records read:           " << total_read << '\n'
      << "excluded, missing age:  " << excluded_missing_age << '\n'
      << "excluded, under 20:     " << excluded_under_age << '\n'
      << "excluded, pregnant:     " << excluded_pregnant << '\n'
      << "unlabeled (no signal):  " << unlabeled << '\n'
      << "labeled by self-report: " << labeled_self_report << '\n'
      << "labeled by glucose:     " << labeled_glucose << '\n'
      << "cohort size:            " << cohort_size << '\n';
  return out.str();
}

std::pair<Cohort, ExclusionReport> build_cohort(const std::vector<RawRecord>& records,
                                                const FeatureSchema& schema) {
  Cohort cohort;
  cohort.n_features = schema.size();
  ExclusionReport report;
  report.total_read = records.size();

  for (const auto& rec : records) {
    switch (exclusion_reason(rec)) {
      case ExclusionReason::missing_age:
        ++report.excluded_missing_age;
        continue;
      case ExclusionReason::under_age:
        ++report.excluded_under_age;
        continue;
      case ExclusionReason::pregnant:
        ++report.excluded_pregnant;
        continue;
      case ExclusionReason::kept:
        break;
    }
    const auto label = assign_label(rec);
    if (!label) {
      ++report.unlabeled;
      continue;
    }
    if (label->source == LabelSource::self_report) ++report.labeled_self_report;
    else ++report.labeled_glucose;

    cohort.ids.push_back(rec.id);
    cohort.labels.push_back(label->label);
    cohort.label_source.push_back(label->source);
    for (size_t f = 0; f < schema.size(); ++f) {
      if (rec.values[f]) {
        cohort.features.push_back(*rec.values[f]);
        cohort.mask.push_back(1);
      } else {
        cohort.features.push_back(0.0);
        cohort.mask.push_back(0);
      }
    }
  }
  report.cohort_size = cohort.n();
  return {std::move(cohort), report};
}

}  // namespace diab
