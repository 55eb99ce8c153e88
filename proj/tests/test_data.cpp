#include "doctest.h"

#include <fstream>

#include "diab/cohort.hpp"
#include "diab/csv.hpp"
#include "diab/errors.hpp"
#include "diab/ingest.hpp"
#include "diab/schema.hpp"

#include "oracles.hpp"

using namespace diab;

namespace {

std::string write_file(const testutil::TempDir& dir, const std::string& name,
                       const std::string& text) {
  const std::string path = dir.file(name);
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path;
}

// Minimal extract header: the 16 schema codes plus the auxiliary columns.
std::string extract_header() {
  std::string h = "SEQN";
  for (const auto& code : FeatureSchema::default_schema().codes()) h += "," + code;
  return h + ",LBXGLU,DIQ010,RIDEXPRG";
}

// One extract row: age + glucose + optional overrides, everything else blank.
std::string extract_row(const std::string& id, const std::string& age,
                        const std::string& glucose, const std::string& self_report = "",
                        const std::string& pregnant = "") {
  const size_t n = FeatureSchema::default_schema().size();
  std::string row = id + "," + age;           // RIDAGEYR is the first schema column
  for (size_t i = 1; i < n; ++i) row += ",";  // remaining features blank
  row += "," + glucose + "," + self_report + "," + pregnant;
  return row;
}

}  // namespace

TEST_CASE("csv round-trips quoting, embedded delimiters and CRLF") {
  CsvTable table;
  table.header = {"a", "b", "c"};
  table.rows = {{"1", "he,llo", "line1\nline2"}, {"2", "say \"hi\"", ""}};

  testutil::TempDir dir("csv");
  const std::string path = dir.file("t.csv");
  write_delimited(path, table);

  const CsvTable back = read_delimited(path);
  CHECK(back.header == table.header);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0][1] == "he,llo");
  CHECK(back.rows[0][2] == "line1\nline2");
  CHECK(back.rows[1][1] == "say \"hi\"");

  // CRLF endings parse the same as LF.
  const CsvTable crlf = parse_delimited("x,y\r\n1,2\r\n", ',');
  CHECK(crlf.header == std::vector<std::string>{"x", "y"});
  REQUIRE(crlf.rows.size() == 1);
  CHECK(crlf.rows[0] == std::vector<std::string>{"1", "2"});
}

TEST_CASE("csv_escape quotes only when needed") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("with,comma") == "\"with,comma\"");
  CHECK(csv_escape("with\"quote") == "\"with\"\"quote\"");
  CHECK(csv_escape("tab\tless", '\t') == "\"tab\tless\"");
}

TEST_CASE("default schema matches the 16-feature codebook") {
  const FeatureSchema& s = FeatureSchema::default_schema();
  REQUIRE(s.size() == 16);
  CHECK(s.at(0).name == "AGE");
  CHECK(s.at(0).survey_code == "RIDAGEYR");
  CHECK(s.at(15).name == "GEND");
  CHECK(s.at(15).survey_code == "RIAGENDR");

  // Kind assignment per the codebook.
  auto kind_of_name = [&](const std::string& name) {
    for (const auto& def : s.entries())
      if (def.name == name) return def.kind;
    FAIL("unknown feature ", name);
    return FeatureKind::numeric;
  };
  for (const char* numeric : {"AGE", "WAIST", "HEIGHT", "CHOL", "LEG", "WEIGHT", "BMI", "ALC", "SMOKE"})
    CHECK(kind_of_name(numeric) == FeatureKind::numeric);
  for (const char* nominal : {"RACE", "GEND", "HBP", "REL"})
    CHECK(kind_of_name(nominal) == FeatureKind::categorical_nominal);
  for (const char* ordinal : {"INCOME", "EDU", "EXER"})
    CHECK(kind_of_name(ordinal) == FeatureKind::categorical_ordinal);

  // Survey codes are unique.
  auto codes = s.codes();
  std::sort(codes.begin(), codes.end());
  CHECK(std::adjacent_find(codes.begin(), codes.end()) == codes.end());

  // JSON round-trip preserves order and kinds.
  const FeatureSchema back = FeatureSchema::from_json(s.to_json());
  REQUIRE(back.size() == s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    CHECK(back.at(i).survey_code == s.at(i).survey_code);
    CHECK(back.at(i).kind == s.at(i).kind);
  }
}

TEST_CASE("ingest preserves row count and maps blanks to missing") {
  testutil::TempDir dir("ingest");
  const std::string path = write_file(
      dir, "x.csv",
      extract_header() + "\n" + extract_row("A1", "33", "100") + "\n" +
          extract_row("A2", "41", "130") + "\n" + extract_row("A3", "52", "99") + "\n");

  const auto records = ingest_delimited(path, FeatureSchema::default_schema());
  REQUIRE(records.size() == 3);
  CHECK(records[0].id == "A1");
  CHECK(records[0].age_years == 33.0);
  // BMI (and every non-age feature) was left blank.
  const auto bmi = FeatureSchema::default_schema().index_of_code("BMXBMI");
  REQUIRE(bmi.has_value());
  CHECK_FALSE(records[0].values[*bmi].has_value());
  CHECK(records[1].plasma_glucose_mg_dl == 130.0);
}

TEST_CASE("ingest rejects a header missing schema codes, naming them") {
  testutil::TempDir dir("ingest-missing");
  // Drop LBXTC from the header.
  std::string header = extract_header();
  const auto pos = header.find(",LBXTC");
  header.erase(pos, 6);
  const std::string path = write_file(dir, "x.csv", header + "\n");
  CHECK_THROWS_WITH_AS(ingest_delimited(path, FeatureSchema::default_schema()),
                       doctest::Contains("LBXTC"), SchemaError);
}

TEST_CASE("ingest treats NA and unparseable cells as missing") {
  const std::string text = extract_header() + "\n" + extract_row("B1", "NA", "abc") + "\n";
  const auto records =
      records_from_table(parse_delimited(text, ','), FeatureSchema::default_schema());
  REQUIRE(records.size() == 1);
  CHECK_FALSE(records[0].age_years.has_value());
  CHECK_FALSE(records[0].plasma_glucose_mg_dl.has_value());
}

TEST_CASE("exclusion rules: age and pregnancy") {
  RawRecord r;
  r.values.resize(16);

  r.age_years = 45.0;
  CHECK(exclusion_reason(r) == ExclusionReason::kept);
  r.age_years = 19.0;
  CHECK(exclusion_reason(r) == ExclusionReason::under_age);
  r.age_years = 20.0;  // boundary: kept (inclusive)
  CHECK(exclusion_reason(r) == ExclusionReason::kept);
  r.age_years.reset();
  CHECK(exclusion_reason(r) == ExclusionReason::missing_age);
  r.age_years = 30.0;
  r.pregnancy_flag = true;
  CHECK(exclusion_reason(r) == ExclusionReason::pregnant);
  r.pregnancy_flag = false;
  CHECK(exclusion_reason(r) == ExclusionReason::kept);
}

TEST_CASE("labeling: self-report wins, glucose cut at 126 strict") {
  RawRecord r;
  r.values.resize(16);

  r.self_report_diabetes = SelfReport::yes;
  r.plasma_glucose_mg_dl = 90.0;  // ignored: self-report present
  auto lab = assign_label(r);
  REQUIRE(lab.has_value());
  CHECK(lab->label == 1);
  CHECK(lab->source == LabelSource::self_report);

  r.self_report_diabetes = SelfReport::no;
  lab = assign_label(r);
  REQUIRE(lab.has_value());
  CHECK(lab->label == 0);

  r.self_report_diabetes.reset();
  r.plasma_glucose_mg_dl = 130.0;
  lab = assign_label(r);
  REQUIRE(lab.has_value());
  CHECK(lab->label == 1);
  CHECK(lab->source == LabelSource::glucose);

  r.plasma_glucose_mg_dl = 100.0;
  CHECK(assign_label(r)->label == 0);
  r.plasma_glucose_mg_dl = 126.0;  // strictly greater than 126 is diabetic
  CHECK(assign_label(r)->label == 0);

  r.plasma_glucose_mg_dl.reset();
  CHECK_FALSE(assign_label(r).has_value());

  // "Other" self-report answers fall through to glucose.
  r.self_report_diabetes = SelfReport::other;
  r.plasma_glucose_mg_dl = 130.0;
  lab = assign_label(r);
  REQUIRE(lab.has_value());
  CHECK(lab->label == 1);
  CHECK(lab->source == LabelSource::glucose);
}

TEST_CASE("build_cohort applies exclusions then labels, keeping order") {
  const std::string text = extract_header() + "\n" +
                           extract_row("K1", "45", "130") + "\n" +      // kept, diabetic
                           extract_row("K2", "19", "130") + "\n" +      // under age
                           extract_row("K3", "30", "130", "", "1") + "\n" +  // pregnant
                           extract_row("K4", "50", "100") + "\n" +      // kept, negative
                           extract_row("K5", "60", "") + "\n" +         // no label signal
                           extract_row("K6", "70", "", "1") + "\n";     // self-report yes
  const auto records =
      records_from_table(parse_delimited(text, ','), FeatureSchema::default_schema());
  const auto [cohort, report] = build_cohort(records, FeatureSchema::default_schema());

  CHECK(report.total_read == 6);
  CHECK(report.excluded_under_age == 1);
  CHECK(report.excluded_pregnant == 1);
  CHECK(report.unlabeled == 1);
  CHECK(report.labeled_glucose == 2);
  CHECK(report.labeled_self_report == 1);
  CHECK(report.cohort_size == 3);

  REQUIRE(cohort.n() == 3);
  CHECK(cohort.ids == std::vector<std::string>{"K1", "K4", "K6"});
  CHECK(cohort.labels == std::vector<int>{1, 0, 1});
  CHECK(cohort.label_source[2] == LabelSource::self_report);
}

TEST_CASE("empty input after header gives an empty cohort") {
  const auto records = records_from_table(parse_delimited(extract_header() + "\n", ','),
                                          FeatureSchema::default_schema());
  CHECK(records.empty());
  const auto [cohort, report] = build_cohort(records, FeatureSchema::default_schema());
  CHECK(cohort.n() == 0);
  CHECK(report.total_read == 0);
  CHECK(report.cohort_size == 0);
}

TEST_CASE("cohort artifact round-trips through JSON and disk") {
  const auto& schema = FeatureSchema::default_schema();
  Cohort c;
  c.n_features = schema.size();
  c.ids = {"r1", "r2"};
  c.features.assign(2 * schema.size(), 0.0);
  c.mask.assign(2 * schema.size(), 0);
  c.labels = {1, 0};
  c.label_source = {LabelSource::glucose, LabelSource::self_report};
  c.set(0, 0, 44.0, true);
  c.set(1, 7, 31.25, true);

  testutil::TempDir dir("cohort");
  const std::string path = dir.file("cohort.json");
  c.save(path, schema);
  const Cohort back = Cohort::load(path, schema);

  CHECK(back.ids == c.ids);
  CHECK(back.labels == c.labels);
  CHECK(back.features == c.features);
  CHECK(back.mask == c.mask);
  CHECK(back.label_source == c.label_source);

  CHECK_THROWS_AS(Cohort::load(dir.file("absent.json"), schema), ArtifactError);
}
