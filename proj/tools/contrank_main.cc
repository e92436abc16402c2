/*
 * Copyright 2026 The Contrank Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line entry point: train, eval, perturb, gradcheck, dump-embeddings
// and bleu subcommands.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "contrank/checkpoint.h"
#include "contrank/corpus.h"
#include "contrank/error.h"
#include "contrank/evaluator.h"
#include "contrank/grad_check.h"
#include "contrank/metrics.h"
#include "contrank/perturb.h"
#include "contrank/train_config.h"
#include "contrank/trainer.h"

namespace fs = std::filesystem;

namespace contrank {
namespace {

std::ofstream OpenOutput(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::vector<std::string> SplitCommaList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct TrainArgs {
  std::string config;
  std::string train;
  std::string valid;
  std::string out;
  std::string augment;
  std::string augment_mode = "attach";
};

int RunTrain(const TrainArgs& args) {
  const TrainConfig config = LoadTrainConfig(args.config);
  Dataset train = LoadDataset(args.train, Split::kTrain);
  if (!args.augment.empty()) {
    AugmentMode mode;
    if (args.augment_mode == "attach") {
      mode = AugmentMode::kAttach;
    } else if (args.augment_mode == "expand") {
      mode = AugmentMode::kExpand;
    } else {
      throw ConfigError("augment mode must be attach or expand");
    }
    train = MergeAugmentation(train, fs::path(args.augment), mode);
  }
  const Dataset valid = LoadDataset(args.valid, Split::kValidation);

  fs::create_directories(args.out);
  const TrainResult result = Train(config, train, valid, &std::cerr);
  const fs::path out(args.out);
  SaveCheckpoint(result.checkpoint, out / "checkpoint.json");
  {
    std::ofstream history = OpenOutput(out / "history.csv");
    WriteHistoryCsv(result.history, history);
  }
  {
    std::ofstream epochs = OpenOutput(out / "epochs.csv");
    WriteEpochCsv(result.history, epochs);
  }
  {
    std::ofstream resolved = OpenOutput(out / "config.json");
    resolved << TrainConfigToJson(config) << '\n';
  }
  std::cout << "best epoch " << result.history.best_epoch << " validation MAP "
            << result.history.best_map << '\n';
  return 0;
}

struct EvalArgs {
  std::string checkpoint;
  std::string data;
  std::string report;
  std::string per_query;
  std::vector<std::size_t> ks = {1};
};

int RunEval(const EvalArgs& args) {
  const Checkpoint checkpoint = LoadCheckpoint(args.checkpoint);
  const Dataset data = LoadDataset(args.data, Split::kTest);
  const EvaluationResult result = Evaluate(checkpoint, data, args.ks);
  const std::string json = MetricsReportJson(result.report);
  if (args.report.empty()) {
    std::cout << json << '\n';
  } else {
    std::ofstream out = OpenOutput(args.report);
    out << json << '\n';
  }
  if (!args.per_query.empty()) {
    std::ofstream out = OpenOutput(args.per_query);
    WritePerQueryTsv(result, args.ks, out);
  }
  return 0;
}

struct PerturbArgs {
  std::string data;
  std::string types = "punctuation,typo,contraction";
  std::uint64_t seed = 0;
  std::string lexicon;
  std::string out_dir;
};

int RunPerturb(const PerturbArgs& args) {
  const Dataset data = LoadDataset(args.data, Split::kTest);
  std::vector<PerturbationSpec> specs;
  for (const std::string& name : SplitCommaList(args.types)) {
    specs.push_back({ParsePerturbationType(name), args.seed});
  }
  if (specs.empty()) throw ConfigError("no perturbation type given");
  const ContractionLexicon lexicon = args.lexicon.empty()
                                         ? ContractionLexicon::Default()
                                         : ContractionLexicon::Load(
                                               args.lexicon);
  const auto suite = GenerateSuite(data, specs, lexicon);
  const fs::path source(args.data);
  const fs::path dir = args.out_dir.empty() ? source.parent_path()
                                            : fs::path(args.out_dir);
  if (!dir.empty()) fs::create_directories(dir);
  for (const auto& [type, set] : suite) {
    const fs::path path =
        dir / (source.stem().string() + "." +
               std::string(PerturbationTypeName(type)) + ".jsonl");
    SaveJsonl(set.dataset, path);
    std::cout << path.string() << " (" << set.skipped
              << " queries unchanged)\n";
  }
  return 0;
}

struct GradCheckArgs {
  std::string config;
  std::string data;
  int probes = 200;
  double epsilon = 1e-4;
  std::int64_t step = 0;
  std::uint64_t seed = 0;
  double tolerance = 1e-3;
};

int RunGradCheck(const GradCheckArgs& args) {
  const TrainConfig config = LoadTrainConfig(args.config);
  const Dataset data = LoadDataset(args.data, Split::kTrain);
  GradCheckOptions options;
  options.num_probes = args.probes;
  options.epsilon = args.epsilon;
  options.step = args.step;
  options.seed = args.seed;
  const GradCheckResult result = GradCheck(config, data, options);
  std::printf("max relative error %.6g over %zu probes (worst %s: analytic "
              "%.10g, numeric %.10g)\n",
              result.max_relative_error, result.probes,
              result.worst_parameter.c_str(), result.worst_analytic,
              result.worst_numeric);
  return result.max_relative_error <= args.tolerance ? 0 : 1;
}

struct DumpArgs {
  std::string checkpoint;
  std::string data;
  std::string out;
};

int RunDump(const DumpArgs& args) {
  const Checkpoint checkpoint = LoadCheckpoint(args.checkpoint);
  const Dataset data = LoadDataset(args.data, Split::kTest);
  std::ofstream out = OpenOutput(args.out);
  WriteEmbeddingsTsv(checkpoint, data, out);
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Contrastive ranking trainer and evaluator"};
  app.require_subcommand(1);

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a ranker");
  train_cmd->add_option("--config", train.config, "Config json")->required();
  train_cmd->add_option("--train", train.train, "Training data")->required();
  train_cmd->add_option("--valid", train.valid, "Validation data")->required();
  train_cmd->add_option("--out", train.out, "Output directory")->required();
  train_cmd->add_option("--augment", train.augment, "Reformulations jsonl");
  train_cmd->add_option("--augment-mode", train.augment_mode,
                        "attach or expand");

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval_cmd->add_option("--checkpoint", eval.checkpoint)->required();
  eval_cmd->add_option("--data", eval.data)->required();
  eval_cmd->add_option("--report", eval.report, "Metrics json path");
  eval_cmd->add_option("--per-query", eval.per_query, "Per-query tsv path");
  eval_cmd->add_option("--ks", eval.ks, "Precision cutoffs")->delimiter(',');

  PerturbArgs perturb;
  CLI::App* perturb_cmd =
      app.add_subcommand("perturb", "Write perturbed copies of a dataset");
  perturb_cmd->add_option("--data", perturb.data)->required();
  perturb_cmd->add_option("--types", perturb.types,
                          "Comma list of punctuation,typo,contraction");
  perturb_cmd->add_option("--seed", perturb.seed);
  perturb_cmd->add_option("--lexicon", perturb.lexicon, "Contraction tsv");
  perturb_cmd->add_option("--out-dir", perturb.out_dir);

  GradCheckArgs grad;
  CLI::App* grad_cmd =
      app.add_subcommand("gradcheck", "Compare gradients to finite differences");
  grad_cmd->add_option("--config", grad.config)->required();
  grad_cmd->add_option("--data", grad.data)->required();
  grad_cmd->add_option("--probes", grad.probes);
  grad_cmd->add_option("--epsilon", grad.epsilon);
  grad_cmd->add_option("--step", grad.step);
  grad_cmd->add_option("--seed", grad.seed);
  grad_cmd->add_option("--tolerance", grad.tolerance);

  DumpArgs dump;
  CLI::App* dump_cmd =
      app.add_subcommand("dump-embeddings", "Write pair embeddings as tsv");
  dump_cmd->add_option("--checkpoint", dump.checkpoint)->required();
  dump_cmd->add_option("--data", dump.data)->required();
  dump_cmd->add_option("--out", dump.out)->required();

  std::string candidate;
  std::string reference;
  CLI::App* bleu_cmd = app.add_subcommand("bleu", "Sentence BLEU");
  bleu_cmd->add_option("--candidate", candidate)->required();
  bleu_cmd->add_option("--reference", reference)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) return RunTrain(train);
    if (*eval_cmd) return RunEval(eval);
    if (*perturb_cmd) return RunPerturb(perturb);
    if (*grad_cmd) return RunGradCheck(grad);
    if (*dump_cmd) return RunDump(dump);
    if (*bleu_cmd) {
      std::printf("%.17g\n", Bleu(candidate, reference));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace
}  // namespace contrank

int main(int argc, char** argv) { return contrank::Main(argc, argv); }
