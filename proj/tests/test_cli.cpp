#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

#include "diab/cli.hpp"
#include "diab/cohort.hpp"
#include "diab/config.hpp"
#include "diab/ensemble.hpp"
#include "diab/errors.hpp"
#include "diab/tuning.hpp"

using namespace diab;
namespace fs = std::filesystem;

namespace {

// Swallows std::cout for the duration of a scope; the subcommands narrate
// their progress and we don't want that in the test log.
struct CoutCapture {
  std::stringstream captured;
  std::streambuf* saved;
  CoutCapture() : saved(std::cout.rdbuf(captured.rdbuf())) {}
  ~CoutCapture() { std::cout.rdbuf(saved); }
  std::string text() const { return captured.str(); }
};

int run_binary(const std::string& args) {
  const int rc = std::system((std::string(DIABSCREEN_BIN) + " " + args).c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

// Tiny but complete run configuration: one candidate per model so `train`
// stays around a second, and small bootstrap/replicate counts.
RunConfig tiny_config(const testutil::TempDir& td, uint64_t seed) {
  RunConfig cfg;
  cfg.input = td.file("extract.csv");
  cfg.out = td.file("run");
  cfg.seed = seed;
  cfg.cv_folds = 5;
  cfg.n_boot = 5;
  cfg.synth.n = 200;
  cfg.synth.prevalence = 0.25;
  cfg.synth.missing_rate = 0.15;
  cfg.grids["logistic_regression"] = {{"l2_strength", {1.0}}};
  cfg.grids["knn"] = {{"k", {5}}, {"weighting", {"uniform"}}};
  cfg.grids["random_forest"] =
      {{"n_trees", {10}}, {"max_depth", {4}}, {"features_per_split", {"sqrt"}}};
  cfg.grids["gradient_boosting"] =
      {{"n_stages", {20}}, {"learning_rate", {0.1}}, {"max_depth", {2}}};
  cfg.grids["svm_linear"] = {{"cost_c", {1.0}}};
  cfg.validate();
  return cfg;
}

}  // namespace

TEST_CASE("RunConfig defaults match the documented run contract") {
  const RunConfig cfg;
  CHECK(cfg.input.empty());
  CHECK(cfg.delimiter == ',');
  CHECK(cfg.out == "out");
  CHECK(cfg.seed == 17);
  CHECK(cfg.test_fraction == doctest::Approx(0.2));
  CHECK(cfg.cv_folds == 10);
  CHECK(cfg.n_boot == 1000);
  CHECK(cfg.recall_target == doctest::Approx(0.75));
  CHECK(cfg.jobs == 0);
  CHECK(cfg.synth.n == 1000);
  CHECK(cfg.synth.prevalence == doctest::Approx(0.19));
  CHECK(cfg.synth.missing_rate == doctest::Approx(0.25));
  CHECK(cfg.schema.size() == 16);

  // every model kind ships a default grid, with the documented sizes
  const size_t expected[] = {4, 8, 12, 8, 3};
  for (size_t k = 0; k < kAllModelKinds.size(); ++k) {
    const ModelKind kind = kAllModelKinds[k];
    REQUIRE(cfg.grids.contains(to_string(kind)));
    const Grid grid = grid_from_json(kind, cfg.grids.at(to_string(kind)));
    CHECK(grid.candidates.size() == expected[k]);
  }
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("RunConfig survives a JSON round trip") {
  RunConfig cfg;
  cfg.input = "data/extract.tsv";
  cfg.delimiter = '\t';
  cfg.out = "elsewhere";
  cfg.seed = 99;
  cfg.test_fraction = 0.3;
  cfg.cv_folds = 4;
  cfg.n_boot = 12;
  cfg.recall_target = 0.9;
  cfg.jobs = 3;
  cfg.synth.n = 64;
  cfg.synth.prevalence = 0.4;
  cfg.synth.missing_rate = 0.0;
  cfg.grids["svm_linear"] = {{"cost_c", {0.5, 2.0}}};

  const RunConfig back = RunConfig::from_json(cfg.to_json());
  CHECK(back.to_json().dump() == cfg.to_json().dump());
  CHECK(back.delimiter == '\t');
  CHECK(back.grids.at("svm_linear").at("cost_c").size() == 2);
}

TEST_CASE("config parsing rejects unknown keys and bad values") {
  SUBCASE("unknown top-level key") {
    CHECK_THROWS_WITH_AS(RunConfig::from_json({{"frobnicate", 1}}),
                         doctest::Contains("frobnicate"), ArgumentError);
  }
  SUBCASE("unknown synth key") {
    CHECK_THROWS_WITH_AS(RunConfig::from_json({{"synth", {{"shape", 2}}}}),
                         doctest::Contains("synth.shape"), ArgumentError);
  }
  SUBCASE("non-object config") {
    CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::array()), ArgumentError);
  }
  SUBCASE("delimiter spellings") {
    CHECK(RunConfig::from_json({{"delimiter", "\t"}}).delimiter == '\t');
    CHECK(RunConfig::from_json({{"delimiter", "\\t"}}).delimiter == '\t');
    CHECK(RunConfig::from_json({{"delimiter", ";"}}).delimiter == ';');
    CHECK_THROWS_AS(RunConfig::from_json({{"delimiter", "ab"}}), ArgumentError);
  }
  SUBCASE("range checks") {
    CHECK_THROWS_AS(RunConfig::from_json({{"cv_folds", 1}}), ArgumentError);
    CHECK_THROWS_AS(RunConfig::from_json({{"n_boot", 1}}), ArgumentError);
    CHECK_THROWS_AS(RunConfig::from_json({{"recall_target", 0.0}}), ArgumentError);
    CHECK_THROWS_AS(RunConfig::from_json({{"recall_target", 1.5}}), ArgumentError);
    CHECK_THROWS_AS(RunConfig::from_json({{"test_fraction", 1.0}}), ArgumentError);
    CHECK_THROWS_AS(RunConfig::from_json({{"synth", {{"n", 8}}}}), ArgumentError);
  }
  SUBCASE("grids must cover every model kind") {
    RunConfig cfg;
    cfg.grids.erase("svm_linear");
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("svm_linear"), ArgumentError);
  }
  SUBCASE("grids with an unknown kind") {
    CHECK_THROWS_AS(
        RunConfig::from_json({{"grids", {{"perceptron", {{"lr", {0.1}}}}}}}),
        ArgumentError);
  }
}

TEST_CASE("resolve_config layers flag overrides on top of the file") {
  testutil::TempDir td("cli-resolve");
  const std::string cfg_path = td.file("run.json");
  {
    RunConfig file_cfg;
    file_cfg.seed = 5;
    file_cfg.out = "from-file";
    file_cfg.n_boot = 50;
    std::ofstream out(cfg_path);
    out << file_cfg.to_json().dump(1) << "\n";
  }

  SUBCASE("file only") {
    CliOverrides ov;
    ov.config_path = cfg_path;
    const RunConfig cfg = resolve_config(ov);
    CHECK(cfg.seed == 5);
    CHECK(cfg.out == "from-file");
    CHECK(cfg.n_boot == 50);
  }
  SUBCASE("flags win over the file") {
    CliOverrides ov;
    ov.config_path = cfg_path;
    ov.seed = 99;
    ov.out = std::string("from-flag");
    ov.n_boot = 7;
    ov.recall_target = 0.5;
    ov.jobs = 2;
    const RunConfig cfg = resolve_config(ov);
    CHECK(cfg.seed == 99);
    CHECK(cfg.out == "from-flag");
    CHECK(cfg.n_boot == 7);
    CHECK(cfg.recall_target == doctest::Approx(0.5));
    CHECK(cfg.jobs == 2);
  }
  SUBCASE("no file means library defaults") {
    CliOverrides ov;
    ov.out = std::string("ovr");
    const RunConfig cfg = resolve_config(ov);
    CHECK(cfg.seed == 17);
    CHECK(cfg.out == "ovr");
  }
  SUBCASE("overrides are validated") {
    CliOverrides ov;
    ov.n_boot = 1;
    CHECK_THROWS_AS(resolve_config(ov), ArgumentError);
  }
  SUBCASE("missing config file") {
    CliOverrides ov;
    ov.config_path = td.file("nope.json");
    CHECK_THROWS_AS(resolve_config(ov), IoError);
  }
}

TEST_CASE("synth requires an input path to write to") {
  RunConfig cfg;
  cfg.input.clear();
  CHECK_THROWS_WITH_AS(cmd_synth(cfg), doctest::Contains("input"), ArgumentError);
}

TEST_CASE("full pipeline runs in process and reproduces itself") {
  testutil::TempDir td("cli-pipeline");
  RunConfig cfg = tiny_config(td, 29);
  const fs::path out = cfg.out;

  std::string train_stdout;
  {
    CoutCapture quiet;
    cmd_synth(cfg);
    cmd_ingest(cfg);
    {
      CoutCapture train_out;
      cmd_train(cfg);
      train_stdout = train_out.text();
    }
    cmd_evaluate(cfg);
    cmd_bootstrap(cfg);
  }

  // --- synth + ingest artifacts
  REQUIRE(fs::exists(cfg.input));
  const nlohmann::json excl =
      nlohmann::json::parse(testutil::slurp(out / "cohort" / "exclusions.json"));
  CHECK(excl.at("total_read") == 200);
  CHECK(excl.at("cohort_size") == 200);
  CHECK(excl.at("excluded_missing_age") == 0);
  CHECK(excl.at("excluded_under_age") == 0);
  CHECK(excl.at("excluded_pregnant") == 0);
  CHECK(fs::exists(out / "cohort" / "exclusions.txt"));
  const Cohort cohort = Cohort::load((out / "cohort" / "cohort.json").string(), cfg.schema);
  REQUIRE(cohort.n() == 200);

  // --- train artifacts: partitions, CV reports, per-model + ensemble fits
  const Cohort train_part =
      Cohort::load((out / "cohort" / "train.json").string(), cfg.schema);
  const Cohort test_part =
      Cohort::load((out / "cohort" / "test.json").string(), cfg.schema);
  CHECK(train_part.n() == 160);
  CHECK(test_part.n() == 40);
  CHECK(train_part.positives() + test_part.positives() == cohort.positives());
  for (ModelKind kind : kAllModelKinds) {
    const std::string name = to_string(kind);
    CHECK(fs::exists(out / "models" / (name + ".json")));
    CHECK(fs::exists(out / "cv" / (name + ".json")));
    CHECK(fs::exists(out / "cv" / (name + ".csv")));
    CHECK(train_stdout.find(name + ": best") != std::string::npos);
  }
  CHECK(fs::exists(out / "models" / "preproc.json"));
  CHECK(train_stdout.find("ensemble decision boundary T = ") != std::string::npos);
  const EnsembleModel ensemble =
      EnsembleModel::load((out / "models" / "ensemble.json").string());
  CHECK(ensemble.members().size() == 5);
  CHECK(ensemble.decision_boundary() >= 0.0);
  CHECK(ensemble.decision_boundary() <= 1.0);

  // --- evaluate artifacts
  const fs::path eval_dir = out / "eval";
  for (const char* name : {"roc.svg", "recall_vs_t.csv", "recall_vs_t.svg",
                           "predictions.csv", "importances.csv", "metrics.json"})
    CHECK(fs::exists(eval_dir / name));
  const nlohmann::json metrics =
      nlohmann::json::parse(testutil::slurp(eval_dir / "metrics.json"));
  CHECK(metrics.at("format_version") == 1);
  const double t_chosen = metrics.at("decision_boundary_t").get<double>();
  CHECK(metrics.at("internal_cutoff").get<double>() ==
        doctest::Approx(1.0 - t_chosen).epsilon(1e-12));
  REQUIRE(metrics.at("models").size() == 6);
  for (ModelKind kind : kAllModelKinds)
    CHECK(fs::exists(eval_dir / ("roc_" + to_string(kind) + ".csv")));
  CHECK(fs::exists(eval_dir / "roc_ensemble.csv"));
  for (const auto& [name, entry] : metrics.at("models").items()) {
    const double auc = entry.at("auc").get<double>();
    CHECK(auc >= 0.0);
    CHECK(auc <= 1.0);
    for (const char* at : {"at_t_0.5", "at_t_chosen"}) {
      const auto& confusion = entry.at(at).at("confusion");
      const long long total =
          confusion.at("tp").get<long long>() + confusion.at("fp").get<long long>() +
          confusion.at("fn").get<long long>() + confusion.at("tn").get<long long>();
      CHECK(total == 40);  // every test row lands in exactly one confusion cell
    }
  }

  // screening block recomputes from the labeled cohort
  const auto& screening = metrics.at("screening");
  CHECK(screening.at("n_total") == 200);
  const double prop_neg = screening.at("prop_negative").get<double>();
  CHECK(prop_neg ==
        doctest::Approx(1.0 - static_cast<double>(cohort.positives()) / 200.0));
  const double neg_recall = screening.at("negative_recall").get<double>();
  const long long eliminated = screening.at("eliminated").get<long long>();
  CHECK(eliminated ==
        static_cast<long long>(std::floor(200.0 * prop_neg * neg_recall)));
  CHECK(screening.at("to_notify").get<long long>() == 200 - eliminated);

  // predictions.csv: header + one row per test sample, sane class labels
  {
    std::istringstream in(testutil::slurp(eval_dir / "predictions.csv"));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line.rfind("id,p_", 0) == 0);
    CHECK(line.find(",p_bar,class") != std::string::npos);
    size_t rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      const bool diab_row = line.find(",diabetic") != std::string::npos;
      const bool non_row = line.find(",non-diabetic") != std::string::npos;
      CHECK((diab_row || non_row));
    }
    CHECK(rows == 40);
  }

  // importances.csv: all 16 features, sorted by the forest column
  {
    std::istringstream in(testutil::slurp(eval_dir / "importances.csv"));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "feature,survey_code,random_forest,gradient_boosting");
    std::vector<double> rf_col;
    while (std::getline(in, line)) {
      std::istringstream cells(line);
      std::string cell;
      std::getline(cells, cell, ',');
      std::getline(cells, cell, ',');
      std::getline(cells, cell, ',');
      rf_col.push_back(std::stod(cell));
    }
    REQUIRE(rf_col.size() == 16);
    CHECK(std::is_sorted(rf_col.rbegin(), rf_col.rend()));
  }

  // --- bootstrap artifacts
  const fs::path boot_dir = out / "bootstrap";
  for (const char* name : {"band.json", "band.csv", "replicate_aucs.csv", "bootstrap.svg"})
    CHECK(fs::exists(boot_dir / name));
  const nlohmann::json band =
      nlohmann::json::parse(testutil::slurp(boot_dir / "band.json"));
  CHECK(band.at("n_boot") == 5);
  CHECK(band.at("fpr_grid").size() == 101);
  CHECK(band.at("replicate_aucs").size() == 5);
  bool known_kind = false;
  for (ModelKind kind : kAllModelKinds)
    if (band.at("model_kind") == to_string(kind)) known_kind = true;
  CHECK(known_kind);

  // --- config echoes exist, reload cleanly, and match what we ran with
  for (const char* sub : {"synth", "ingest", "train", "evaluate", "bootstrap"}) {
    const fs::path echo = out / "config-echo" / (std::string(sub) + ".json");
    REQUIRE(fs::exists(echo));
    const RunConfig echoed =
        RunConfig::from_json(nlohmann::json::parse(testutil::slurp(echo)));
    CHECK(echoed.to_json().dump() == cfg.to_json().dump());
  }

  // --- same seed, fresh directory: every report byte-identical
  RunConfig cfg2 = cfg;
  cfg2.input = td.file("extract2.csv");
  cfg2.out = td.file("run2");
  {
    CoutCapture quiet;
    cmd_synth(cfg2);
    cmd_ingest(cfg2);
    cmd_train(cfg2);
    cmd_evaluate(cfg2);
    cmd_bootstrap(cfg2);
  }
  CHECK(testutil::slurp(cfg2.input) == testutil::slurp(cfg.input));
  for (const char* rel :
       {"eval/metrics.json", "eval/predictions.csv", "eval/recall_vs_t.csv",
        "models/ensemble.json", "models/preproc.json", "bootstrap/band.json"})
    CHECK(testutil::slurp(fs::path(cfg2.out) / rel) == testutil::slurp(out / rel));
  for (ModelKind kind : kAllModelKinds)
    CHECK(testutil::slurp(fs::path(cfg2.out) / "models" / (to_string(kind) + ".json")) ==
          testutil::slurp(out / "models" / (to_string(kind) + ".json")));
}

TEST_CASE("evaluate and train fail loudly when artifacts are missing") {
  testutil::TempDir td("cli-missing");
  RunConfig cfg;
  cfg.out = td.file("empty-run");

  CHECK_THROWS_WITH_AS(cmd_train(cfg), doctest::Contains("ingest"), ArtifactError);
  CHECK_THROWS_WITH_AS(cmd_evaluate(cfg), doctest::Contains("train"), ArtifactError);
  CHECK_THROWS_WITH_AS(cmd_bootstrap(cfg), doctest::Contains("train"), ArtifactError);
}

TEST_CASE("binary: exit codes and error reporting") {
  testutil::TempDir td("cli-binary");

  SUBCASE("--help exits cleanly") {
    CHECK(run_binary("--help > " + td.file("help.log") + " 2>&1") == 0);
    CHECK(testutil::slurp(td.file("help.log")).find("ingest") != std::string::npos);
  }
  SUBCASE("a subcommand is required") {
    CHECK(run_binary("> /dev/null 2>&1") != 0);
  }
  SUBCASE("header-only extract ingests to an empty cohort") {
    const std::string extract = td.file("empty.csv");
    {
      std::ofstream out(extract);
      out << "SEQN,RIDAGEYR,BMXWAIST,MCQ250A,BMXHT,LBXTC,BMXLEG,BMXWT,BMXBMI,RIDRETH1,"
             "BPQ020,INDHHINC,ALQ120Q,SMD030,DMDEDUC2,PAQ180,RIAGENDR,LBXGLU,DIQ010,"
             "RIDEXPRG\n";
    }
    const std::string cfg_path = td.file("cfg.json");
    {
      RunConfig cfg;
      cfg.input = extract;
      cfg.out = td.file("ingest-run");
      std::ofstream out(cfg_path);
      out << cfg.to_json().dump(1) << "\n";
    }
    CHECK(run_binary("ingest --config " + cfg_path + " > " + td.file("ingest.log") +
                     " 2>&1") == 0);
    CHECK(fs::exists(fs::path(td.file("ingest-run")) / "cohort" / "cohort.json"));
  }
  SUBCASE("evaluate without artifacts exits 1 and names the gap") {
    const std::string log = td.file("eval.log");
    CHECK(run_binary("evaluate --out " + td.file("nothing") + " > " + log + " 2>&1") == 1);
    const std::string text = testutil::slurp(log);
    CHECK(text.find("error:") != std::string::npos);
    CHECK(text.find("missing cohort artifact") != std::string::npos);
    CHECK(text.find("run `train` first") != std::string::npos);
  }
  SUBCASE("malformed config exits 1") {
    const std::string cfg_path = td.file("bad.json");
    {
      std::ofstream out(cfg_path);
      out << "{\"frobnicate\": 1}\n";
    }
    const std::string log = td.file("bad.log");
    CHECK(run_binary("ingest --config " + cfg_path + " > " + log + " 2>&1") == 1);
    CHECK(testutil::slurp(log).find("unknown config key") != std::string::npos);
  }
}
