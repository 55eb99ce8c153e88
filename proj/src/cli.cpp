#include "diab/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "diab/bootstrap.hpp"
#include "diab/csv.hpp"
#include "diab/ensemble.hpp"
#include "diab/errors.hpp"
#include "diab/ingest.hpp"
#include "diab/metrics.hpp"
#include "diab/parallel.hpp"
#include "diab/seeds.hpp"
#include "diab/split.hpp"
#include "diab/svg.hpp"
#include "diab/synth.hpp"
#include "diab/tuning.hpp"

namespace fs = std::filesystem;

namespace diab {

namespace {

std::string num17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << text;
  if (!out) throw IoError("write failure on: " + path);
}

void write_json(const std::string& path, const nlohmann::json& j) {
  write_text(path, j.dump(1) + "\n");
}

nlohmann::json read_json(const std::string& path, const std::string& hint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("missing artifact: " + path + " (" + hint + ")");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError("malformed artifact " + path + ": " + e.what());
  }
  return j;
}

void echo_config(const RunConfig& cfg, const std::string& subcommand) {
  fs::create_directories(fs::path(cfg.out) / "config-echo");
  write_json((fs::path(cfg.out) / "config-echo" / (subcommand + ".json")).string(),
             cfg.to_json());
}

std::string cohort_path(const RunConfig& cfg, const char* name) {
  return (fs::path(cfg.out) / "cohort" / name).string();
}

std::string model_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out) / "models" / (name + ".json")).string();
}

struct Preproc {
  ImputationPlan plan;
  FeatureEncoder encoder;
};

void save_preproc(const RunConfig& cfg, const Preproc& pre) {
  write_json(model_path(cfg, "preproc"),
             {{"format_version", 1},
              {"imputation", pre.plan.to_json(cfg.schema)},
              {"encoder", pre.encoder.to_json(cfg.schema)}});
}

Preproc load_preproc(const RunConfig& cfg) {
  const nlohmann::json j = read_json(model_path(cfg, "preproc"), "run `train` first");
  Preproc pre;
  pre.plan = ImputationPlan::from_json(j.at("imputation"), cfg.schema);
  pre.encoder = FeatureEncoder::from_json(j.at("encoder"), cfg.schema);
  return pre;
}

DesignMatrix encode_with(const Preproc& pre, const Cohort& cohort) {
  return pre.encoder.transform(apply_imputer(pre.plan, cohort));
}

}  // namespace

RunConfig resolve_config(const CliOverrides& overrides) {
  RunConfig cfg =
      overrides.config_path ? RunConfig::load(*overrides.config_path) : RunConfig();
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.out) cfg.out = *overrides.out;
  if (overrides.n_boot) cfg.n_boot = *overrides.n_boot;
  if (overrides.recall_target) cfg.recall_target = *overrides.recall_target;
  if (overrides.jobs) cfg.jobs = *overrides.jobs;
  cfg.validate();
  return cfg;
}

void cmd_synth(const RunConfig& cfg) {
  if (cfg.input.empty())
    throw ArgumentError("config needs `input`: the path the synthetic extract is written to");
  SynthConfig synth;
  synth.n = cfg.synth.n;
  synth.seed = cfg.seed;
  synth.prevalence = cfg.synth.prevalence;
  synth.missing_rate = cfg.synth.missing_rate;
  const fs::path parent = fs::path(cfg.input).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  write_synth(cfg.input, synth, cfg.delimiter);
  echo_config(cfg, "synth");
  std::cout << "wrote " << synth.n << "-row synthetic extract to " << cfg.input << "\n";
}

void cmd_ingest(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ArgumentError("config needs `input`: the extract to ingest");
  const std::vector<RawRecord> records =
      ingest_delimited(cfg.input, cfg.schema, cfg.delimiter);
  const auto [cohort, report] = build_cohort(records, cfg.schema);
  fs::create_directories(fs::path(cfg.out) / "cohort");
  cohort.save(cohort_path(cfg, "cohort.json"), cfg.schema);
  write_text(cohort_path(cfg, "exclusions.txt"), report.to_text());
  write_json(cohort_path(cfg, "exclusions.json"),
             {{"total_read", report.total_read},
              {"excluded_missing_age", report.excluded_missing_age},
              {"excluded_under_age", report.excluded_under_age},
              {"excluded_pregnant", report.excluded_pregnant},
              {"unlabeled", report.unlabeled},
              {"labeled_self_report", report.labeled_self_report},
              {"labeled_glucose", report.labeled_glucose},
              {"cohort_size", report.cohort_size}});
  echo_config(cfg, "ingest");
  std::cout << report.to_text();
}

void cmd_train(const RunConfig& cfg) {
  const Cohort cohort = Cohort::load(cohort_path(cfg, "cohort.json"), cfg.schema);
  const auto [train, test] = split_train_test(cohort, cfg.test_fraction, cfg.seed);
  fs::create_directories(fs::path(cfg.out) / "cohort");
  fs::create_directories(fs::path(cfg.out) / "models");
  fs::create_directories(fs::path(cfg.out) / "cv");
  train.save(cohort_path(cfg, "train.json"), cfg.schema);
  test.save(cohort_path(cfg, "test.json"), cfg.schema);

  std::vector<TrainedModel> members;
  bool preproc_saved = false;
  for (size_t k = 0; k < kAllModelKinds.size(); ++k) {
    const ModelKind kind = kAllModelKinds[k];
    const Grid grid = grid_from_json(kind, cfg.grids.at(to_string(kind)));
    CVResult cv = grid_search(grid, train, cfg.schema, cfg.cv_folds,
                              derive_seed(cfg.seed, "tune", k), resolve_jobs(cfg.jobs));
    const fs::path cv_base = fs::path(cfg.out) / "cv" / to_string(kind);
    write_json(cv_base.string() + ".json", cv.report_json());
    write_text(cv_base.string() + ".csv", cv.report_csv());
    cv.best_model->save(model_path(cfg, to_string(kind)));
    std::cout << to_string(kind) << ": best "
              << describe_params(cv.candidates[cv.best_index].params) << " (mean CV AUC "
              << num17(cv.candidates[cv.best_index].mean_auc) << ")\n";
    if (!preproc_saved) {
      save_preproc(cfg, {cv.final_plan, cv.final_encoder});
      preproc_saved = true;
    }
    members.push_back(std::move(*cv.best_model));
  }

  EnsembleModel ensemble(std::move(members), 0.5);
  const Preproc pre = load_preproc(cfg);
  const DesignMatrix train_X = encode_with(pre, train);
  const std::vector<double> train_scores = ensemble.proba_rows(train_X);
  const double t = choose_threshold(train_scores, train.labels, cfg.recall_target);
  ensemble.set_decision_boundary(t);
  ensemble.save(model_path(cfg, "ensemble"));
  echo_config(cfg, "train");
  std::cout << "ensemble decision boundary T = " << num17(t) << " (internal cutoff "
            << num17(1.0 - t) << ") for diabetic recall target " << num17(cfg.recall_target)
            << " on the training partition\n";
}

namespace {

struct ScoredModel {
  std::string name;
  std::vector<double> test_scores;
  double auc = 0.0;
};

std::string roc_csv(const RocCurve& curve) {
  std::string out = "fpr,tpr\n";
  for (const RocPoint& p : curve.points)
    out += num17(p.fpr) + "," + num17(p.tpr) + "\n";
  return out;
}

nlohmann::json metrics_entry(const std::vector<double>& scores, const std::vector<int>& labels,
                             double auc, double t_chosen) {
  return {{"auc", auc},
          {"at_t_0.5", classification_metrics(predictions_at(scores, 0.5), labels).to_json()},
          {"at_t_chosen",
           classification_metrics(predictions_at(scores, t_chosen), labels).to_json()}};
}

}  // namespace

void cmd_evaluate(const RunConfig& cfg) {
  const Cohort train =
      Cohort::load(cohort_path(cfg, "train.json"), cfg.schema, "run `train` first");
  const Cohort test =
      Cohort::load(cohort_path(cfg, "test.json"), cfg.schema, "run `train` first");
  const Preproc pre = load_preproc(cfg);
  const EnsembleModel ensemble = EnsembleModel::load(model_path(cfg, "ensemble"));
  const DesignMatrix test_X = encode_with(pre, test);
  const double t_chosen = ensemble.decision_boundary();

  fs::create_directories(fs::path(cfg.out) / "eval");
  const fs::path eval_dir = fs::path(cfg.out) / "eval";

  std::vector<ScoredModel> scored;
  for (const TrainedModel& m : ensemble.members()) {
    ScoredModel s;
    s.name = to_string(m.kind());
    s.test_scores = m.predict_proba_rows(test_X);
    scored.push_back(std::move(s));
  }
  {
    ScoredModel s;
    s.name = "ensemble";
    s.test_scores = ensemble.proba_rows(test_X);
    scored.push_back(std::move(s));
  }

  nlohmann::json metrics;
  metrics["format_version"] = 1;
  metrics["decision_boundary_t"] = t_chosen;
  metrics["internal_cutoff"] = ensemble.internal_cutoff();
  ChartSpec roc_chart;
  roc_chart.title = "ROC curves (test partition)";
  roc_chart.x_label = "false positive rate";
  roc_chart.y_label = "true positive rate";
  roc_chart.diagonal = true;
  nlohmann::json models_json = nlohmann::json::object();
  for (ScoredModel& s : scored) {
    const RocCurve curve = roc_curve(s.test_scores, test.labels);
    s.auc = curve.auc;
    write_text((eval_dir / ("roc_" + s.name + ".csv")).string(), roc_csv(curve));
    ChartSeries series;
    series.label = s.name + " (AUC " + num17(curve.auc).substr(0, 5) + ")";
    for (const RocPoint& p : curve.points) {
      series.x.push_back(p.fpr);
      series.y.push_back(p.tpr);
    }
    roc_chart.series.push_back(std::move(series));
    models_json[s.name] = metrics_entry(s.test_scores, test.labels, curve.auc, t_chosen);
  }
  metrics["models"] = std::move(models_json);
  write_chart_svg((eval_dir / "roc.svg").string(), roc_chart);

  // recall-vs-T trade-off on the ensemble's test scores
  const std::vector<double>& ens_scores = scored.back().test_scores;
  const RecallCurves curves = recall_vs_threshold(ens_scores, test.labels);
  {
    std::string csv = "t,diabetic_recall,non_diabetic_recall\n";
    for (size_t g = 0; g < curves.t_grid.size(); ++g)
      csv += num17(curves.t_grid[g]) + "," + num17(curves.diabetic[g]) + "," +
             num17(curves.non_diabetic[g]) + "\n";
    write_text((eval_dir / "recall_vs_t.csv").string(), csv);
    ChartSpec chart;
    chart.title = "Recall vs decision boundary T (ensemble)";
    chart.x_label = "decision boundary T";
    chart.y_label = "recall";
    chart.series.push_back({"diabetic", curves.t_grid, curves.diabetic});
    chart.series.push_back({"non-diabetic", curves.t_grid, curves.non_diabetic});
    chart.vlines.push_back({0.5, "T=0.5"});
    chart.vlines.push_back({t_chosen, "T=" + num17(t_chosen).substr(0, 4)});
    write_chart_svg((eval_dir / "recall_vs_t.svg").string(), chart);
  }

  // screening arithmetic over the whole labeled cohort at the chosen T
  {
    const size_t n_total = train.n() + test.n();
    const size_t n_neg = n_total - (train.positives() + test.positives());
    const double prop_negative = static_cast<double>(n_neg) / static_cast<double>(n_total);
    const MetricsAtT at_t =
        classification_metrics(predictions_at(ens_scores, t_chosen), test.labels);
    const ScreeningSummary s = screening_summary(static_cast<long long>(n_total),
                                                 prop_negative, at_t.non_diabetic.recall);
    metrics["screening"] = {{"n_total", n_total},
                            {"prop_negative", prop_negative},
                            {"negative_recall", at_t.non_diabetic.recall},
                            {"eliminated", s.eliminated},
                            {"to_notify", s.to_notify}};
  }
  write_json((eval_dir / "metrics.json").string(), metrics);

  // per-sample ensemble rows: id, member probabilities, average, class
  {
    CsvTable table;
    table.header = {"id"};
    for (const TrainedModel& m : ensemble.members())
      table.header.push_back("p_" + to_string(m.kind()));
    table.header.push_back("p_bar");
    table.header.push_back("class");
    for (size_t i = 0; i < test.n(); ++i) {
      std::vector<std::string> row = {test.ids[i]};
      for (size_t m = 0; m < scored.size() - 1; ++m)
        row.push_back(num17(scored[m].test_scores[i]));
      row.push_back(num17(ens_scores[i]));
      row.push_back(classify_diabetic(ens_scores[i], t_chosen) ? "diabetic" : "non-diabetic");
      table.rows.push_back(std::move(row));
    }
    write_delimited((eval_dir / "predictions.csv").string(), table);
  }

  // per-feature importances from the tree members
  {
    std::vector<double> rf, gb;
    for (const TrainedModel& m : ensemble.members()) {
      if (m.kind() == ModelKind::random_forest) rf = m.feature_importances();
      if (m.kind() == ModelKind::gradient_boosting) gb = m.feature_importances();
    }
    std::vector<size_t> order(rf.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (rf[a] != rf[b]) return rf[a] > rf[b];
      return a < b;
    });
    CsvTable table;
    table.header = {"feature", "survey_code", "random_forest", "gradient_boosting"};
    for (size_t f : order)
      table.rows.push_back({cfg.schema.at(f).name, cfg.schema.at(f).survey_code, num17(rf[f]),
                            num17(gb[f])});
    write_delimited((eval_dir / "importances.csv").string(), table);
  }

  echo_config(cfg, "evaluate");
  for (const ScoredModel& s : scored)
    std::cout << s.name << ": test AUC " << num17(s.auc) << "\n";
}

void cmd_bootstrap(const RunConfig& cfg) {
  const Cohort train =
      Cohort::load(cohort_path(cfg, "train.json"), cfg.schema, "run `train` first");
  const Cohort test =
      Cohort::load(cohort_path(cfg, "test.json"), cfg.schema, "run `train` first");
  const Preproc pre = load_preproc(cfg);
  const DesignMatrix test_X = encode_with(pre, test);

  // best single model by test AUC carries the band, ties to kind order
  std::string best_name;
  double best_auc = -1.0;
  HyperParams best_params = default_params(ModelKind::logistic_regression);
  for (ModelKind kind : kAllModelKinds) {
    const TrainedModel model = TrainedModel::load(model_path(cfg, to_string(kind)));
    const double auc = roc_curve(model.predict_proba_rows(test_X), test.labels).auc;
    if (auc > best_auc) {
      best_auc = auc;
      best_name = to_string(kind);
      best_params = model.params();
    }
  }

  const BootstrapBand band = bootstrap_roc(train, test, cfg.schema, best_params, cfg.n_boot,
                                           cfg.seed, resolve_jobs(cfg.jobs));

  fs::create_directories(fs::path(cfg.out) / "bootstrap");
  const fs::path boot_dir = fs::path(cfg.out) / "bootstrap";
  nlohmann::json j = band.to_json();
  j["model_kind"] = best_name;
  j["model_params"] = hyperparams_to_json(best_params);
  write_json((boot_dir / "band.json").string(), j);
  {
    std::string csv = "fpr,mean_tpr,lower_tpr,upper_tpr\n";
    for (size_t g = 0; g < band.fpr_grid.size(); ++g)
      csv += num17(band.fpr_grid[g]) + "," + num17(band.mean_tpr[g]) + "," +
             num17(band.lower_tpr[g]) + "," + num17(band.upper_tpr[g]) + "\n";
    write_text((boot_dir / "band.csv").string(), csv);
  }
  {
    std::string csv = "replicate,auc\n";
    for (size_t r = 0; r < band.replicate_aucs.size(); ++r)
      csv += std::to_string(r) + "," + num17(band.replicate_aucs[r]) + "\n";
    write_text((boot_dir / "replicate_aucs.csv").string(), csv);
  }
  {
    ChartSpec chart;
    chart.title = "Bootstrap ROC band (" + best_name + ", " +
                  std::to_string(band.n_boot) + " replicates)";
    chart.x_label = "false positive rate";
    chart.y_label = "true positive rate";
    chart.diagonal = true;
    chart.band = ChartBand{band.fpr_grid, band.lower_tpr, band.upper_tpr, "2.5%-97.5% band"};
    chart.series.push_back({"mean ROC", band.fpr_grid, band.mean_tpr});
    write_chart_svg((boot_dir / "bootstrap.svg").string(), chart);
  }
  echo_config(cfg, "bootstrap");
  std::cout << "bootstrap (" << best_name << "): mean AUC " << num17(band.mean_auc) << " ["
            << num17(band.auc_lower) << ", " << num17(band.auc_upper) << "] over "
            << band.n_boot << " replicates\n";
}

}  // namespace diab
