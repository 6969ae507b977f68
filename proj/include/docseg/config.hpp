// Hyperparameter bundle. Defaults: 2 stacked layers, hidden size 100,
// noise sigma 0.2, embedding dimension 500. The grid helper expands the
// default tuning lattice i x sigma x d.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "docseg/errors.hpp"

namespace docseg {

struct TrainingConfig {
  std::size_t iterations = 10;
  double noise_sigma = 0.2;
  std::size_t embedding_dim = 500;
  std::size_t layers = 2;
  std::size_t hidden = 100;
  double learning_rate = 0.1;
  std::uint64_t seed = 1;
  std::vector<std::string> tasks;  // head roster; mono runs carry one entry
  std::string target_task;         // must be one of `tasks`

  void validate() const {
    if (layers < 1) throw ConfigError("config: layers must be >= 1");
    if (hidden < 1) throw ConfigError("config: hidden size must be >= 1");
    if (embedding_dim < 1) throw ConfigError("config: embedding dimension must be >= 1");
    if (noise_sigma < 0.0) throw ConfigError("config: noise sigma must be >= 0");
    if (learning_rate < 0.0) throw ConfigError("config: learning rate must be >= 0");
    if (tasks.empty()) throw ConfigError("config: task roster is empty");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (tasks[i].empty()) throw ConfigError("config: empty task name");
      if (tasks[i].find_first_of(" \t\n") != std::string::npos) {
        throw ConfigError("config: task name '" + tasks[i] + "' contains whitespace");
      }
      for (std::size_t j = i + 1; j < tasks.size(); ++j) {
        if (tasks[i] == tasks[j]) throw ConfigError("config: duplicate task name '" + tasks[i] + "'");
      }
    }
    bool found = false;
    for (const std::string& t : tasks) found |= (t == target_task);
    if (!found) throw ConfigError("config: target task '" + target_task + "' is not in the roster");
  }
};

// The default tuning lattice: i in {10,20,30}, sigma in {0.1,0.2},
// d in {50,500}; layers and hidden stay fixed at the base values.
inline std::vector<TrainingConfig> make_default_grid(const TrainingConfig& base) {
  std::vector<TrainingConfig> grid;
  for (std::size_t iters : {10, 20, 30}) {
    for (double sigma : {0.1, 0.2}) {
      for (std::size_t dim : {50, 500}) {
        TrainingConfig c = base;
        c.iterations = iters;
        c.noise_sigma = sigma;
        c.embedding_dim = dim;
        grid.push_back(c);
      }
    }
  }
  return grid;
}

inline std::vector<TrainingConfig> make_grid(const TrainingConfig& base,
                                             const std::vector<std::size_t>& iters,
                                             const std::vector<double>& sigmas,
                                             const std::vector<std::size_t>& dims) {
  if (iters.empty() || sigmas.empty() || dims.empty()) {
    throw ConfigError("make_grid: every grid axis needs at least one value");
  }
  std::vector<TrainingConfig> grid;
  for (std::size_t i : iters) {
    for (double s : sigmas) {
      for (std::size_t d : dims) {
        TrainingConfig c = base;
        c.iterations = i;
        c.noise_sigma = s;
        c.embedding_dim = d;
        grid.push_back(c);
      }
    }
  }
  return grid;
}

}  // namespace docseg
