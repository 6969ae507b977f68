// docseg command line: train, predict, evaluate, baseline, tune, transfer,
// gen-synthetic and stats, one subcommand per workflow. Exit codes: 0 ok,
// 1 usage error, 2 data/format error, 3 training/numerical error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "docseg/docseg.hpp"

namespace {

using namespace docseg;

struct TaskArg {
  std::string name;
  std::string path;
};

std::vector<TaskArg> parse_task_args(const std::vector<std::string>& args) {
  std::vector<TaskArg> out;
  for (const std::string& a : args) {
    const std::size_t eq = a.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == a.size()) {
      throw ConfigError("--task expects name=path, got '" + a + "'");
    }
    out.push_back({a.substr(0, eq), a.substr(eq + 1)});
  }
  return out;
}

std::optional<EmbeddingTable> maybe_load_embeddings(const std::string& path,
                                                    std::size_t truncate_dim) {
  if (path.empty()) return std::nullopt;
  std::optional<std::size_t> trunc;
  if (truncate_dim > 0) trunc = truncate_dim;
  return load_embeddings(path, trunc);
}

std::vector<std::vector<Label>> predict_corpus(const ModelParams& model, const Vocab& vocab,
                                               const std::vector<Document>& docs,
                                               const std::string& task) {
  std::vector<std::vector<Label>> out;
  out.reserve(docs.size());
  for (const Document& d : docs) out.push_back(predict(model, d, vocab, task));
  return out;
}

struct CommonFlags {
  std::string train_path, dev_path, test_path, embeddings_path, model_path;
  std::string target_task;
  std::vector<std::string> task_args;
  std::size_t truncate_dim = 0;
  std::size_t dim = 500;
  std::size_t hidden = 100;
  std::size_t layers = 2;
  std::size_t iters = 10;
  double noise = 0.2;
  double lr = 0.1;
  std::uint64_t seed = 1;
  int jobs = 1;

  TrainingConfig to_config() const {
    TrainingConfig c;
    c.embedding_dim = dim;
    c.hidden = hidden;
    c.layers = layers;
    c.iterations = iters;
    c.noise_sigma = noise;
    c.learning_rate = lr;
    c.seed = seed;
    return c;
  }
};

void add_model_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--dim", f.dim, "Embedding dimension")->capture_default_str();
  cmd->add_option("--hidden", f.hidden, "Hidden layer size")->capture_default_str();
  cmd->add_option("--layers", f.layers, "Stacked bi-LSTM layers")->capture_default_str();
  cmd->add_option("--iters", f.iters, "Training iterations")->capture_default_str();
  cmd->add_option("--noise", f.noise, "Gaussian noise sigma on embeddings")->capture_default_str();
  cmd->add_option("--lr", f.lr, "SGD learning rate")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
  cmd->add_option("--embeddings", f.embeddings_path, "Pretrained embedding text file");
  cmd->add_option("--truncate-dim", f.truncate_dim,
                  "Keep only the first N embedding components (0 = all)");
}

std::vector<TaskSpec> load_tasks(const CommonFlags& f) {
  std::vector<TaskSpec> tasks;
  if (!f.train_path.empty() && !f.task_args.empty()) {
    throw ConfigError("give either --train or --task name=path, not both");
  }
  if (!f.train_path.empty()) {
    const std::string name = f.target_task.empty() ? "main" : f.target_task;
    tasks.push_back({name, read_corpus(f.train_path), TaskRole::Target});
    return tasks;
  }
  if (f.task_args.empty()) throw ConfigError("no training data: give --train or --task name=path");
  for (const TaskArg& a : parse_task_args(f.task_args)) {
    tasks.push_back({a.name, read_corpus(a.path), TaskRole::Auxiliary});
  }
  return tasks;
}

int cmd_train(const CommonFlags& f) {
  std::vector<TaskSpec> tasks = load_tasks(f);
  if (f.dev_path.empty()) throw ConfigError("train: --dev is required");
  if (f.model_path.empty()) throw ConfigError("train: --model is required");
  std::vector<Document> dev = read_corpus(f.dev_path);

  TrainingConfig config = f.to_config();
  config.target_task = f.target_task.empty() ? tasks.front().name : f.target_task;
  for (TaskSpec& t : tasks) {
    if (t.name == config.target_task) t.role = TaskRole::Target;
  }

  std::optional<EmbeddingTable> pretrained = maybe_load_embeddings(f.embeddings_path, f.truncate_dim);
  TrainedModel trained =
      train_tasks(tasks, dev, config, pretrained ? &*pretrained : nullptr);
  save_model(trained.params, trained.vocab, trained.config, f.model_path);
  std::cout << trained.report.to_text();
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& input_path,
                const std::string& output_path, const std::string& task_flag) {
  LoadedModel loaded = load_model(model_path);
  const std::string task = task_flag.empty() ? loaded.config.target_task : task_flag;
  std::vector<Document> docs = read_corpus(input_path);
  if (docs.empty()) throw DataError("predict: no documents in " + input_path);
  write_predictions(docs, predict_corpus(loaded.params, loaded.vocab, docs, task), output_path);
  return 0;
}

int cmd_evaluate(const std::string& gold_path, const std::string& pred_path, bool intra,
                 bool report) {
  std::vector<Document> gold = read_corpus(gold_path);
  std::vector<Document> pred = read_corpus(pred_path);
  Metrics m = intra ? intra_sentential_f1(gold, pred) : boundary_f1(gold, pred);
  if (intra && m.tp + m.fp + m.fn == 0) {
    std::cerr << "note: no scorable sentences (every sentence holds a single EDU)\n";
  }
  if (report) {
    std::cout << m.to_report();
  } else {
    std::cout << m.to_line() << "\n";
  }
  return 0;
}

int cmd_baseline(const std::string& mode, const std::string& input_path,
                 const std::string& output_path) {
  std::vector<Document> docs = read_corpus(input_path);
  if (docs.empty()) throw DataError("baseline: no documents in " + input_path);
  std::vector<std::vector<Label>> labels;
  labels.reserve(docs.size());
  for (const Document& d : docs) {
    labels.push_back(mode == "sent" ? baseline_sentence(d) : baseline_punct(d));
  }
  write_predictions(docs, labels, output_path);
  return 0;
}

void print_grid_row(std::ostream& out, const GridResult& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "iters=%zu sigma=%g dim=%zu seed=%llu dev_f1=%.4f\n",
                r.config.iterations, r.config.noise_sigma, r.config.embedding_dim,
                static_cast<unsigned long long>(r.config.seed), r.dev_f1);
  out << buf;
}

int cmd_tune(const CommonFlags& f, const std::vector<std::size_t>& grid_iters,
             const std::vector<double>& grid_noise, const std::vector<std::size_t>& grid_dims) {
  std::vector<TaskSpec> tasks = load_tasks(f);
  if (f.dev_path.empty()) throw ConfigError("tune: --dev is required");
  std::vector<Document> dev = read_corpus(f.dev_path);

  TrainingConfig base = f.to_config();
  base.target_task = f.target_task.empty() ? tasks.front().name : f.target_task;
  for (TaskSpec& t : tasks) {
    if (t.name == base.target_task) t.role = TaskRole::Target;
  }
  std::vector<TrainingConfig> grid = make_grid(base, grid_iters, grid_noise, grid_dims);

  std::optional<EmbeddingTable> pretrained = maybe_load_embeddings(f.embeddings_path, f.truncate_dim);
  TuneOutcome outcome = tune_grid(grid, tasks, dev, pretrained ? &*pretrained : nullptr, f.jobs);
  for (const GridResult& r : outcome.results) print_grid_row(std::cout, r);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "best: iters=%zu sigma=%g dim=%zu seed=%llu\n",
                outcome.best.iterations, outcome.best.noise_sigma, outcome.best.embedding_dim,
                static_cast<unsigned long long>(outcome.best.seed));
  std::cout << buf;

  if (!f.model_path.empty()) {
    TrainedModel trained =
        train_tasks(tasks, dev, outcome.best, pretrained ? &*pretrained : nullptr);
    save_model(trained.params, trained.vocab, trained.config, f.model_path);
  }
  return 0;
}

int cmd_transfer(const CommonFlags& f, const std::string& mode, const std::string& output_path,
                 const std::vector<std::size_t>& grid_iters, const std::vector<double>& grid_noise,
                 const std::vector<std::size_t>& grid_dims) {
  if (f.task_args.empty()) throw ConfigError("transfer: give source tasks via --task name=path");
  if (f.dev_path.empty()) throw ConfigError("transfer: --dev is required");
  if (f.test_path.empty()) throw ConfigError("transfer: --test is required");
  std::vector<TaskSpec> sources;
  for (const TaskArg& a : parse_task_args(f.task_args)) {
    sources.push_back({a.name, read_corpus(a.path), TaskRole::Auxiliary});
  }
  std::vector<Document> dev = read_corpus(f.dev_path);
  std::vector<Document> test = read_corpus(f.test_path);
  std::vector<TrainingConfig> grid = make_grid(f.to_config(), grid_iters, grid_noise, grid_dims);

  const TransferMode tm =
      (mode == "cross-domain") ? TransferMode::CrossDomain : TransferMode::CrossLingual;
  std::optional<EmbeddingTable> pretrained = maybe_load_embeddings(f.embeddings_path, f.truncate_dim);
  TransferResult r = run_transfer_protocol(tm, sources, dev, test, grid, f.target_task,
                                           pretrained ? &*pretrained : nullptr, f.jobs);

  for (const GridResult& g : r.grid_results) print_grid_row(std::cerr, g);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "selected: iters=%zu sigma=%g dim=%zu seed=%llu\n",
                r.selected_config.iterations, r.selected_config.noise_sigma,
                r.selected_config.embedding_dim,
                static_cast<unsigned long long>(r.selected_config.seed));
  std::cerr << buf;
  std::cout << r.test_metrics.to_line() << "\n";

  if (!output_path.empty()) write_predictions(test, r.test_predictions, output_path);
  if (!f.model_path.empty()) {
    save_model(r.model.params, r.model.vocab, r.model.config, f.model_path);
  }
  return 0;
}

int cmd_gen_synthetic(const std::string& spec_path, const std::string& output_path,
                      std::optional<std::uint64_t> seed, std::optional<std::size_t> n_docs) {
  SyntheticSpec spec = parse_synthetic_spec(spec_path);
  if (seed) spec.seed = *seed;
  if (n_docs) spec.n_docs = *n_docs;
  write_corpus(generate_synthetic(spec), output_path);
  return 0;
}

int cmd_stats(const std::string& input_path) {
  CorpusStats s = corpus_stats(read_corpus(input_path));
  std::cout << "docs edus sentences words\n";
  std::cout << s.documents << ' ' << s.edus << ' ' << s.sentences << ' ' << s.words << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Document-level discourse segmentation toolkit"};
  app.require_subcommand(1);

  CommonFlags f;
  std::string mode, gold_path, pred_path, input_path, output_path, spec_path;
  bool intra = false;
  bool report = false;
  std::vector<std::size_t> grid_iters = {10, 20, 30};
  std::vector<double> grid_noise = {0.1, 0.2};
  std::vector<std::size_t> grid_dims = {50, 500};
  std::optional<std::uint64_t> seed_override;
  std::optional<std::size_t> ndocs_override;

  CLI::App* train = app.add_subcommand("train", "Train a mono- or multi-task segmenter");
  train->add_option("--train", f.train_path, "Training corpus (mono)");
  train->add_option("--task", f.task_args, "Task as name=path (repeat for multi-task)");
  train->add_option("--target-task", f.target_task, "Task optimized on the dev set");
  train->add_option("--dev", f.dev_path, "Development corpus");
  train->add_option("--model", f.model_path, "Output model file");
  add_model_flags(train, f);

  CLI::App* predict_cmd = app.add_subcommand("predict", "Segment documents with a trained model");
  predict_cmd->add_option("--model", f.model_path, "Model file")->required();
  predict_cmd->add_option("--input", input_path, "Input corpus")->required();
  predict_cmd->add_option("--output", output_path, "Output corpus with predicted labels")->required();
  predict_cmd->add_option("--target-task", f.target_task, "Head used for prediction");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Score predictions against gold labels");
  evaluate->add_option("--gold", gold_path, "Gold corpus")->required();
  evaluate->add_option("--pred", pred_path, "Predicted corpus")->required();
  evaluate->add_flag("--intra", intra, "Intra-sentential scoring (ignores single-EDU sentences)");
  evaluate->add_flag("--report", report, "Key-value report instead of the single-line record");

  CLI::App* baseline = app.add_subcommand("baseline", "Run a rule-based baseline");
  baseline->add_option("--mode", mode, "sent (sentence starts) or punct (after punctuation)")
      ->required()
      ->check(CLI::IsMember({"sent", "punct"}));
  baseline->add_option("--input", input_path, "Input corpus")->required();
  baseline->add_option("--output", output_path, "Output corpus with baseline labels")->required();

  CLI::App* tune = app.add_subcommand("tune", "Grid-search hyperparameters on a dev set");
  tune->add_option("--train", f.train_path, "Training corpus (mono)");
  tune->add_option("--task", f.task_args, "Task as name=path (repeat for multi-task)");
  tune->add_option("--target-task", f.target_task, "Task optimized on the dev set");
  tune->add_option("--dev", f.dev_path, "Development corpus");
  tune->add_option("--model", f.model_path, "Retrain the best configuration into this file");
  tune->add_option("--grid-iters", grid_iters, "Iteration grid")->delimiter(',')->capture_default_str();
  tune->add_option("--grid-noise", grid_noise, "Noise sigma grid")->delimiter(',')->capture_default_str();
  tune->add_option("--grid-dim", grid_dims, "Embedding dimension grid")->delimiter(',')->capture_default_str();
  tune->add_option("--jobs", f.jobs, "Parallel grid workers")->capture_default_str();
  add_model_flags(tune, f);

  CLI::App* transfer = app.add_subcommand("transfer", "Cross-domain / cross-lingual protocol");
  transfer->add_option("--mode", mode, "cross-domain or cross-lingual")
      ->required()
      ->check(CLI::IsMember({"cross-domain", "cross-lingual"}));
  transfer->add_option("--task", f.task_args, "Source task as name=path (repeatable)");
  transfer->add_option("--dev", f.dev_path, "Tuning development corpus");
  transfer->add_option("--test", f.test_path, "Target test corpus");
  transfer->add_option("--target-task", f.target_task,
                       "Source task whose head is tuned and used for prediction");
  transfer->add_option("--output", output_path, "Write target test predictions here");
  transfer->add_option("--model", f.model_path, "Save the final model here");
  transfer->add_option("--grid-iters", grid_iters, "Iteration grid")->delimiter(',')->capture_default_str();
  transfer->add_option("--grid-noise", grid_noise, "Noise sigma grid")->delimiter(',')->capture_default_str();
  transfer->add_option("--grid-dim", grid_dims, "Embedding dimension grid")->delimiter(',')->capture_default_str();
  transfer->add_option("--jobs", f.jobs, "Parallel grid workers")->capture_default_str();
  add_model_flags(transfer, f);

  CLI::App* gen = app.add_subcommand("gen-synthetic", "Generate a rule-labeled synthetic corpus");
  gen->add_option("--spec", spec_path, "Key-value spec file")->required();
  gen->add_option("--output", output_path, "Output corpus")->required();
  gen->add_option("--seed", seed_override, "Override the spec seed");
  gen->add_option("--n-docs", ndocs_override, "Override the document count");

  CLI::App* stats = app.add_subcommand("stats", "Corpus statistics (docs, EDUs, sentences, words)");
  stats->add_option("--input", input_path, "Input corpus")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(train)) return cmd_train(f);
    if (app.got_subcommand(predict_cmd)) {
      return cmd_predict(f.model_path, input_path, output_path, f.target_task);
    }
    if (app.got_subcommand(evaluate)) return cmd_evaluate(gold_path, pred_path, intra, report);
    if (app.got_subcommand(baseline)) return cmd_baseline(mode, input_path, output_path);
    if (app.got_subcommand(tune)) return cmd_tune(f, grid_iters, grid_noise, grid_dims);
    if (app.got_subcommand(transfer)) {
      return cmd_transfer(f, mode, output_path, grid_iters, grid_noise, grid_dims);
    }
    if (app.got_subcommand(gen)) {
      return cmd_gen_synthetic(spec_path, output_path, seed_override, ndocs_override);
    }
    if (app.got_subcommand(stats)) return cmd_stats(input_path);
    std::cerr << "no subcommand\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const TaskError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ProtocolError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const TrainingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {  // parse/format/data/shape
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
