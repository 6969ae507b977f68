// Mono-task and multi-task SGD with hard parameter sharing, dev-based
// model selection, grid tuning and the cross-domain / cross-lingual
// transfer protocols. Training is plain SGD with a fixed learning rate;
// one document is one gradient step; an iteration is one pass over the
// training corpus (for multi-task, as many sampled steps as there are
// source documents in total). Everything is reproducible from the seed.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "docseg/config.hpp"
#include "docseg/corpus.hpp"
#include "docseg/embeddings.hpp"
#include "docseg/errors.hpp"
#include "docseg/eval.hpp"
#include "docseg/model.hpp"
#include "docseg/random.hpp"
#include "docseg/vocab.hpp"

namespace docseg {

enum class TaskRole : unsigned char { Target, Auxiliary };

struct TaskSpec {
  std::string name;
  std::vector<Document> train;
  TaskRole role = TaskRole::Auxiliary;
};

struct TrainReport {
  struct Entry {
    std::size_t iteration;  // 1-based
    double mean_loss;
    Metrics dev;
  };
  std::vector<Entry> entries;
  std::size_t selected_iteration = 0;  // 0 means no iteration ran
  double best_dev_f1 = 0.0;

  // Diffable plain-text table, one row per iteration.
  std::string to_text() const {
    std::ostringstream out;
    out << "iter mean_loss dev_p dev_r dev_f1\n";
    char buf[128];
    for (const Entry& e : entries) {
      std::snprintf(buf, sizeof(buf), "%zu %.6f %.4f %.4f %.4f\n", e.iteration, e.mean_loss,
                    e.dev.precision(), e.dev.recall(), e.dev.f1());
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), "selected %zu dev_f1 %.4f\n", selected_iteration, best_dev_f1);
    out << buf;
    return out.str();
  }
};

struct TrainedModel {
  ModelParams params;
  Vocab vocab;
  TrainingConfig config;
  TrainReport report;
};

namespace detail {

inline std::vector<EncodedSequence> encode_training_docs(const std::vector<Document>& docs,
                                                         const Vocab& vocab) {
  std::vector<EncodedSequence> out;
  out.reserve(docs.size());
  for (const Document& d : docs) {
    if (!d.has_gold_labels()) {
      throw DataError("training document '" + d.id + "' is missing gold labels");
    }
    out.push_back(encode_document(d, vocab));
  }
  return out;
}

inline Metrics dev_metrics(const ModelParams& model, const Vocab& vocab,
                           const std::vector<Document>& dev, const std::string& task) {
  std::vector<std::vector<Label>> gold, pred;
  gold.reserve(dev.size());
  pred.reserve(dev.size());
  for (const Document& d : dev) {
    if (!d.has_gold_labels()) throw DataError("dev document '" + d.id + "' is missing gold labels");
    std::vector<Label> g;
    g.reserve(d.tokens.size());
    for (const Token& t : d.tokens) g.push_back(*t.gold_label);
    gold.push_back(std::move(g));
    pred.push_back(predict(model, d, vocab, task));
  }
  return boundary_f1(gold, pred);
}

struct Checkpoint {
  ModelParams params;
  double f1 = -1.0;
  std::size_t iteration = 0;

  void consider(const ModelParams& current, double dev_f1, std::size_t iter) {
    if (dev_f1 > f1) {  // strict: ties keep the earliest iteration
      f1 = dev_f1;
      iteration = iter;
      params = current;
    }
  }
};

}  // namespace detail

// Single-task training: per iteration, visit the training documents in a
// seeded shuffled order, one document per SGD step; evaluate boundary F1
// on dev after each iteration and return the best-on-dev parameters.
inline TrainedModel train_mono(const std::vector<Document>& train,
                               const std::vector<Document>& dev, TrainingConfig config,
                               const EmbeddingTable* pretrained = nullptr) {
  if (train.empty()) throw ConfigError("train_mono: empty training set");
  if (dev.empty()) throw ConfigError("train_mono: empty development set");
  if (config.tasks.empty()) {
    config.tasks = {config.target_task.empty() ? std::string("main") : config.target_task};
  }
  if (config.target_task.empty()) config.target_task = config.tasks.front();
  if (config.tasks.size() != 1) {
    throw ConfigError("train_mono: expected exactly one task, got " +
                      std::to_string(config.tasks.size()));
  }
  config.validate();
  const std::string& task = config.tasks.front();

  TrainedModel out;
  out.config = config;
  out.vocab = build_vocab(train);
  out.params = build_model(config, out.vocab, pretrained);

  std::vector<EncodedSequence> sequences = detail::encode_training_docs(train, out.vocab);
  std::mt19937_64 order_rng = make_rng(config.seed, 0x0bde7);
  std::mt19937_64 noise_rng = make_rng(config.seed, 0x4015e);

  std::vector<std::size_t> order(sequences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  detail::Checkpoint best;
  for (std::size_t iter = 1; iter <= config.iterations; ++iter) {
    std::shuffle(order.begin(), order.end(), order_rng);
    double loss_sum = 0.0;
    for (std::size_t idx : order) {
      try {
        auto [loss, grads] = loss_and_grads(out.params, sequences[idx], task,
                                            config.noise_sigma, &noise_rng);
        loss_sum += loss;
        out.params.add_scaled(grads, -config.learning_rate);
      } catch (const NumericError& e) {
        throw TrainingError("iteration " + std::to_string(iter) + ": " + e.what());
      }
    }
    TrainReport::Entry entry;
    entry.iteration = iter;
    entry.mean_loss = loss_sum / static_cast<double>(sequences.size());
    entry.dev = detail::dev_metrics(out.params, out.vocab, dev, task);
    best.consider(out.params, entry.dev.f1(), iter);
    out.report.entries.push_back(entry);
  }

  if (best.iteration > 0) {
    out.params = std::move(best.params);
    out.report.selected_iteration = best.iteration;
    out.report.best_dev_f1 = best.f1;
  }
  return out;
}

// Multi-task training with hard parameter sharing: per step, sample a task
// uniformly among those with data, then one of its documents uniformly;
// the update touches the trunk and that task's head only. One iteration is
// as many steps as there are training documents in total. Selection is on
// the target task's dev F1.
inline TrainedModel train_multitask(const std::vector<TaskSpec>& tasks,
                                    const std::vector<Document>& dev, TrainingConfig config,
                                    const EmbeddingTable* pretrained = nullptr) {
  if (tasks.size() < 2) {
    throw ConfigError("train_multitask: needs at least two tasks (use train_mono otherwise)");
  }
  if (dev.empty()) throw ConfigError("train_multitask: empty development set");

  config.tasks.clear();
  std::size_t total_docs = 0;
  std::vector<std::size_t> sampleable;
  std::vector<Document> all_docs;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    config.tasks.push_back(tasks[i].name);
    total_docs += tasks[i].train.size();
    if (!tasks[i].train.empty()) sampleable.push_back(i);
    for (const Document& d : tasks[i].train) all_docs.push_back(d);
    if (tasks[i].role == TaskRole::Target && !config.target_task.empty() &&
        config.target_task != tasks[i].name) {
      throw ConfigError("train_multitask: task '" + tasks[i].name +
                        "' is marked target but config targets '" + config.target_task + "'");
    }
  }
  if (config.target_task.empty()) {
    for (const TaskSpec& t : tasks) {
      if (t.role == TaskRole::Target) config.target_task = t.name;
    }
    if (config.target_task.empty()) config.target_task = tasks.front().name;
  }
  if (sampleable.empty()) throw ConfigError("train_multitask: every task has an empty training set");
  config.validate();

  TrainedModel out;
  out.config = config;
  out.vocab = build_vocab(all_docs);
  out.params = build_model(config, out.vocab, pretrained);

  std::vector<std::vector<EncodedSequence>> sequences(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    sequences[i] = detail::encode_training_docs(tasks[i].train, out.vocab);
  }

  std::mt19937_64 sample_rng = make_rng(config.seed, 0x5a3b1e);
  std::mt19937_64 noise_rng = make_rng(config.seed, 0x4015e);
  std::uniform_int_distribution<std::size_t> task_pick(0, sampleable.size() - 1);

  detail::Checkpoint best;
  for (std::size_t iter = 1; iter <= config.iterations; ++iter) {
    double loss_sum = 0.0;
    for (std::size_t step = 0; step < total_docs; ++step) {
      const std::size_t ti = sampleable[task_pick(sample_rng)];
      std::uniform_int_distribution<std::size_t> doc_pick(0, sequences[ti].size() - 1);
      const EncodedSequence& seq = sequences[ti][doc_pick(sample_rng)];
      try {
        auto [loss, grads] =
            loss_and_grads(out.params, seq, tasks[ti].name, config.noise_sigma, &noise_rng);
        loss_sum += loss;
        out.params.add_scaled(grads, -config.learning_rate);
      } catch (const NumericError& e) {
        throw TrainingError("iteration " + std::to_string(iter) + ": " + e.what());
      }
    }
    TrainReport::Entry entry;
    entry.iteration = iter;
    entry.mean_loss = loss_sum / static_cast<double>(total_docs);
    entry.dev = detail::dev_metrics(out.params, out.vocab, dev, config.target_task);
    best.consider(out.params, entry.dev.f1(), iter);
    out.report.entries.push_back(entry);
  }

  if (best.iteration > 0) {
    out.params = std::move(best.params);
    out.report.selected_iteration = best.iteration;
    out.report.best_dev_f1 = best.f1;
  }
  return out;
}

// Routes to mono or multi-task depending on the roster size.
inline TrainedModel train_tasks(const std::vector<TaskSpec>& tasks,
                                const std::vector<Document>& dev, TrainingConfig config,
                                const EmbeddingTable* pretrained = nullptr) {
  if (tasks.empty()) throw ConfigError("train_tasks: no tasks given");
  if (tasks.size() == 1) {
    config.tasks = {tasks.front().name};
    if (config.target_task.empty()) config.target_task = tasks.front().name;
    return train_mono(tasks.front().train, dev, config, pretrained);
  }
  return train_multitask(tasks, dev, config, pretrained);
}

// ---------------------------------------------------------------------------
// Grid tuning
// ---------------------------------------------------------------------------

struct GridResult {
  TrainingConfig config;  // with the effective per-point seed
  double dev_f1 = 0.0;
  TrainReport report;
};

struct TuneOutcome {
  TrainingConfig best;
  std::vector<GridResult> results;
};

// Trains one model per grid point and selects the dev-F1 argmax; ties break
// toward fewer iterations, then smaller dimension, then smaller sigma.
// Point k trains with seed grid[k].seed ^ k, so parallel execution (jobs > 1)
// is bit-identical to sequential.
inline TuneOutcome tune_grid(const std::vector<TrainingConfig>& grid,
                             const std::vector<TaskSpec>& tasks,
                             const std::vector<Document>& dev,
                             const EmbeddingTable* pretrained = nullptr, int jobs = 1) {
  if (grid.empty()) throw ConfigError("tune_grid: empty grid");
  if (tasks.empty()) throw ConfigError("tune_grid: no tasks given");

  std::vector<GridResult> results(grid.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= grid.size()) return;
      try {
        TrainingConfig config = grid[k];
        config.seed = config.seed ^ static_cast<std::uint64_t>(k);
        TrainedModel trained = train_tasks(tasks, dev, config, pretrained);
        results[k].config = trained.config;
        results[k].dev_f1 = trained.report.best_dev_f1;
        results[k].report = std::move(trained.report);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(grid.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::size_t best = 0;
  auto better = [&](const GridResult& a, const GridResult& b) {
    if (a.dev_f1 != b.dev_f1) return a.dev_f1 > b.dev_f1;
    if (a.config.iterations != b.config.iterations) return a.config.iterations < b.config.iterations;
    if (a.config.embedding_dim != b.config.embedding_dim) {
      return a.config.embedding_dim < b.config.embedding_dim;
    }
    return a.config.noise_sigma < b.config.noise_sigma;
  };
  for (std::size_t k = 1; k < results.size(); ++k) {
    if (better(results[k], results[best])) best = k;
  }
  return {results[best].config, std::move(results)};
}

// ---------------------------------------------------------------------------
// Transfer protocols
// ---------------------------------------------------------------------------

enum class TransferMode : unsigned char { CrossDomain, CrossLingual };

struct TransferResult {
  Metrics test_metrics;
  TrainingConfig selected_config;
  std::vector<GridResult> grid_results;
  TrainedModel model;
  std::vector<std::vector<Label>> test_predictions;
};

// Tunes over the source tasks against the prescribed development set, then
// retrains with the winning configuration and scores the target test set.
//
// The target language/domain has no trained head of its own; scoring uses
// the head named by `selection_head` (default: the first source), the only
// head a selection signal exists for. Cross-lingual runs must tune on
// non-target data and cross-domain runs on target-domain dev data; what the
// protocol can check mechanically is that the dev documents are not the
// test documents.
inline TransferResult run_transfer_protocol(TransferMode mode, const std::vector<TaskSpec>& sources,
                                            const std::vector<Document>& tuning_dev,
                                            const std::vector<Document>& target_test,
                                            const std::vector<TrainingConfig>& grid,
                                            std::string selection_head = "",
                                            const EmbeddingTable* pretrained = nullptr,
                                            int jobs = 1) {
  if (sources.empty()) throw ConfigError("transfer: no source tasks");
  if (tuning_dev.empty()) {
    throw ProtocolError(mode == TransferMode::CrossLingual
                            ? "cross-lingual transfer needs a labeled non-target development set"
                            : "cross-domain transfer needs a labeled target-domain development set");
  }
  if (target_test.empty()) throw ProtocolError("transfer: empty target test set");
  for (const Document& dev_doc : tuning_dev) {
    for (const Document& test_doc : target_test) {
      if (dev_doc.id == test_doc.id) {
        throw ProtocolError("transfer: development document '" + dev_doc.id +
                            "' appears in the target test set");
      }
    }
  }
  if (selection_head.empty()) selection_head = sources.front().name;
  bool found = false;
  for (const TaskSpec& s : sources) found |= (s.name == selection_head);
  if (!found) {
    throw ProtocolError("transfer: selection head '" + selection_head +
                        "' is not one of the source tasks");
  }

  std::vector<TrainingConfig> protocol_grid = grid;
  for (TrainingConfig& c : protocol_grid) {
    c.tasks.clear();
    for (const TaskSpec& s : sources) c.tasks.push_back(s.name);
    c.target_task = selection_head;
  }

  TransferResult result;
  TuneOutcome tuned = tune_grid(protocol_grid, sources, tuning_dev, pretrained, jobs);
  result.selected_config = tuned.best;
  result.grid_results = std::move(tuned.results);

  // Fresh training run with the tuned parameters, source data only.
  result.model = train_tasks(sources, tuning_dev, result.selected_config, pretrained);

  std::vector<std::vector<Label>> gold;
  gold.reserve(target_test.size());
  for (const Document& d : target_test) {
    if (!d.has_gold_labels()) {
      throw DataError("target test document '" + d.id + "' is missing gold labels");
    }
    std::vector<Label> g;
    g.reserve(d.tokens.size());
    for (const Token& t : d.tokens) g.push_back(*t.gold_label);
    gold.push_back(std::move(g));
    result.test_predictions.push_back(
        predict(result.model.params, d, result.model.vocab, selection_head));
  }
  result.test_metrics = boundary_f1(gold, result.test_predictions);
  return result;
}

}  // namespace docseg
