// Copyright 2026 The reclink Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver.
//
//   reclink run     --input data.csv --truth-column entity -o out/
//   reclink sweep   --input data.csv --truth-column entity -o out/
//   reclink degrade --input data.csv --fields addr,city --fraction 0.3 \
//                   --seed 1 --output degraded.csv
//   reclink eval    --found clusters.txt --truth truth.txt
//   reclink --config out/manifest.ini run
//
// Options of run and sweep may also come from a config file section named
// after the verb; flags on the command line take precedence. Both verbs
// write manifest.ini to the output directory.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "reclink/common.h"
#include "reclink/pipeline.h"

namespace {

using reclink::PipelineConfig;

const std::map<std::string, reclink::FeatureMode> kFeatureModes = {
    {"word", reclink::FeatureMode::kWord},
    {"ngram", reclink::FeatureMode::kNGram}};
const std::map<std::string, reclink::Method> kMethods = {
    {"tfidf", reclink::Method::kTfIdf},
    {"soft", reclink::Method::kSoftTfIdf}};
const std::map<std::string, reclink::SparsityMode> kSparsityModes = {
    {"adjust", reclink::SparsityMode::kAdjust},
    {"impute", reclink::SparsityMode::kImputeMode}};

// Named choices, kept as text so the manifest shows them by name.
struct Choices {
  std::string features = "word";
  std::string method = "soft";
  std::string sparsity = "adjust";

  void ApplyTo(PipelineConfig &c) const {
    c.tokenizer.mode = kFeatureModes.at(features);
    c.similarity.method = kMethods.at(method);
    c.sparsity = kSparsityModes.at(sparsity);
  }
};

void AddPipelineOptions(CLI::App *app, PipelineConfig &c, Choices &v) {
  // Not marked required so that it may come from the config file.
  app->add_option("-i,--input", c.input, "Delimited input file with header");
  app->add_option("--delimiter", c.delimiter, "Field delimiter")
      ->capture_default_str();
  app->add_option("--fields", c.fields,
                  "Fields to compare (default: all but the truth column)")
      ->delimiter(',');
  app->add_option("--truth-column", c.truth_column,
                  "Column of ground-truth entity ids");
  app->add_option("--truth-file", c.truth_file,
                  "File of 'record_index entity_id' lines");
  app->add_option("--features", v.features, "word or ngram")
      ->check(CLI::IsMember(kFeatureModes))
      ->capture_default_str();
  app->add_option("--ngram", c.tokenizer.ngram, "N-gram length")
      ->capture_default_str();
  app->add_option("--case-fold", c.tokenizer.case_fold,
                  "Lowercase ASCII letters before matching")
      ->capture_default_str();
  app->add_option("--stop-words", c.stop_word_file,
                  "Extra stop words, one per line");
  app->add_option("--method", v.method, "tfidf or soft")
      ->check(CLI::IsMember(kMethods))
      ->capture_default_str();
  app->add_option("--theta", c.similarity.theta,
                  "Jaro-Winkler cutoff for soft matches")
      ->capture_default_str();
  app->add_option("--prefix-factor", c.similarity.prefix_factor,
                  "Jaro-Winkler prefix scale")
      ->capture_default_str();
  app->add_option("--max-prefix", c.similarity.max_prefix,
                  "Jaro-Winkler prefix cap")
      ->capture_default_str();
  app->add_option("--weights", c.similarity.weights,
                  "Per-field weights (default: all 1)")
      ->delimiter(',');
  app->add_option("--sparsity", v.sparsity, "adjust or impute")
      ->check(CLI::IsMember(kSparsityModes))
      ->capture_default_str();
  app->add_flag("--refine", c.refine, "Split weakly connected clusters");
  app->add_flag("--refine-iterate", c.refine_options.iterate,
                "Repeat refinement until nothing changes");
  app->add_option("--refine-max-size", c.refine_options.max_cluster_size,
                  "Leave larger clusters unrefined")
      ->capture_default_str();
  app->add_option("-o,--output", c.output_dir, "Output directory");
  app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
}

void CheckRequired(const CLI::App *app, const PipelineConfig &c) {
  if (c.input.empty()) throw reclink::Error("--input is required");
  if (c.sparsity == reclink::SparsityMode::kImputeMode &&
      app->count("--seed") == 0) {
    throw reclink::Error("--seed is required with --sparsity impute");
  }
}

void WriteManifest(const CLI::App *app, const PipelineConfig &c,
                   double tau_auto) {
  if (c.output_dir.empty()) return;
  std::filesystem::create_directories(c.output_dir);
  std::string path =
      (std::filesystem::path(c.output_dir) / "manifest.ini").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw reclink::Error("cannot write '" + path + "'");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", tau_auto);
  out << "; tau_auto = " << buf << "\n[" << app->get_name() << "]\n";
  // Unset options come out as "" and would read back as one empty value.
  std::istringstream lines(app->config_to_str(true, false));
  for (std::string line; std::getline(lines, line);) {
    if (!line.ends_with("=\"\"")) out << line << '\n';
  }
}

int Main(int argc, char **argv) {
  CLI::App app{"Unsupervised duplicate detection"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "INI/TOML file with a [run] or [sweep] section");

  PipelineConfig run_config;
  Choices run_choices;
  CLI::App *run = app.add_subcommand("run", "Cluster at one threshold");
  AddPipelineOptions(run, run_config, run_choices);
  run->add_option("--tau", run_config.tau,
                  "Fixed threshold (default: automatic)");

  PipelineConfig sweep_config;
  Choices sweep_choices;
  CLI::App *sweep = app.add_subcommand("sweep", "Metrics over a threshold grid");
  AddPipelineOptions(sweep, sweep_config, sweep_choices);
  sweep->add_option("--tau-start", sweep_config.sweep_start);
  sweep->add_option("--tau-stop", sweep_config.sweep_stop);
  sweep->add_option("--tau-step", sweep_config.sweep_step,
                    "Grid spacing (default: evenly spaced points)")
      ->capture_default_str();
  sweep->add_option("--points", sweep_config.sweep_points,
                    "Grid size over the nontrivial interval")
      ->capture_default_str();

  std::string degrade_input, degrade_output;
  std::vector<std::string> degrade_fields;
  double fraction = 0.3;
  uint64_t degrade_seed = 0;
  char degrade_delimiter = ',';
  CLI::App *degrade =
      app.add_subcommand("degrade", "Blank a fraction of entries per field");
  degrade->add_option("-i,--input", degrade_input)->required();
  degrade->add_option("-o,--output", degrade_output)->required();
  degrade->add_option("--fields", degrade_fields)->required()->delimiter(',');
  degrade->add_option("--fraction", fraction)->capture_default_str();
  degrade->add_option("--seed", degrade_seed)->required();
  degrade->add_option("--delimiter", degrade_delimiter)->capture_default_str();

  std::string found_path, truth_path, eval_output;
  CLI::App *eval = app.add_subcommand("eval", "Compare two cluster files");
  eval->add_option("--found", found_path)->required();
  eval->add_option("--truth", truth_path)->required();
  eval->add_option("-o,--output", eval_output, "JSON file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) {
    PipelineConfig &c = run_config;
    run_choices.ApplyTo(c);
    c.threshold = run->count("--tau") > 0 ? reclink::ThresholdMode::kFixed
                                          : reclink::ThresholdMode::kAuto;
    CheckRequired(run, c);
    reclink::RunResult r = reclink::Run(c);
    WriteManifest(run, c, r.tau_auto);
    std::printf("tau %.6g (auto %.6g), %zu clusters\n", r.tau, r.tau_auto,
                r.clusters.size());
    if (r.metrics) std::cout << reclink::ToJson(*r.metrics).dump(2) << '\n';
    if (c.output_dir.empty()) reclink::WriteClusters(std::cout, r.clusters);
  } else if (sweep->parsed()) {
    PipelineConfig &c = sweep_config;
    sweep_choices.ApplyTo(c);
    c.threshold = reclink::ThresholdMode::kSweep;
    CheckRequired(sweep, c);
    std::vector<reclink::SweepRow> rows = reclink::Sweep(c);
    double tau_auto = 0;
    for (const auto &row : rows) {
      if (row.is_auto) tau_auto = row.tau;
    }
    WriteManifest(sweep, c, tau_auto);
    if (c.output_dir.empty()) reclink::WriteSweepTable(std::cout, rows);
  } else if (degrade->parsed()) {
    reclink::LoadOptions options;
    options.delimiter = degrade_delimiter;
    reclink::DataSet data = reclink::LoadDatasetFile(degrade_input, options);
    reclink::DataSet out =
        reclink::Degrade(data, degrade_fields, fraction, degrade_seed);
    std::ofstream file(degrade_output, std::ios::binary);
    if (!file) throw reclink::Error("cannot write '" + degrade_output + "'");
    reclink::WriteDataset(file, out, degrade_delimiter);
  } else if (eval->parsed()) {
    auto read = [](const std::string &path) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw reclink::Error("cannot open '" + path + "'");
      return reclink::ReadClusters(in);
    };
    reclink::ClusterSet found = read(found_path);
    reclink::ClusterSet truth = read(truth_path);
    std::string json =
        reclink::ToJson(reclink::Evaluate(found, truth)).dump(2) + "\n";
    if (eval_output.empty()) {
      std::cout << json;
    } else {
      std::ofstream file(eval_output, std::ios::binary);
      if (!file) throw reclink::Error("cannot write '" + eval_output + "'");
      file << json;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  try {
    return Main(argc, argv);
  } catch (const std::exception &e) {
    std::cerr << "reclink: " << e.what() << '\n';
    return 2;
  }
}
