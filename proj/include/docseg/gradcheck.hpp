// Central finite-difference validation of the analytic gradients. Walks
// every parameter scalar of a model, perturbs it by +/- epsilon, and
// compares the numeric gradient of the sequence loss with the value the
// backward pass produced.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "docseg/errors.hpp"
#include "docseg/model.hpp"

namespace docseg {

// Mean log-loss of a sequence under a fixed model, noise-free.
inline double sequence_loss(const ModelParams& model, const EncodedSequence& seq,
                            const std::string& task) {
  if (!seq.has_gold) throw DataError("sequence_loss: sequence is missing gold labels");
  LabelDistribution dist = forward(model, seq, task);
  double loss = 0.0;
  for (std::size_t t = 0; t < seq.ids.size(); ++t) {
    const std::size_t gold = (seq.labels[t] == Label::B) ? kClassB : kClassI;
    loss += log_loss(Vector{dist[t][0], dist[t][1]}, gold);
  }
  return loss / static_cast<double>(seq.ids.size());
}

struct GradCheckReport {
  struct TensorReport {
    std::string name;
    double max_relative_error;
  };
  std::vector<TensorReport> tensors;
  double max_relative_error = 0.0;
  double epsilon = 0.0;
};

inline double gradcheck_relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

// Intended for small models (h, d <= 8, sequences <= ~24 positions); cost is
// two forward passes per parameter scalar.
inline GradCheckReport grad_check(const ModelParams& model, const EncodedSequence& seq,
                                  const std::string& task, double epsilon = 1e-4) {
  if (epsilon < 1e-5 || epsilon > 1e-3) {
    throw ConfigError("grad_check: epsilon must lie in [1e-5, 1e-3]");
  }
  ModelParams work = model;  // perturbations stay local to the copy
  auto [loss0, grads] = loss_and_grads(work, seq, task, 0.0, nullptr);
  (void)loss0;

  std::vector<ParamRef> wrefs = work.param_refs();
  std::vector<ParamRef> grefs = grads.param_refs();

  GradCheckReport report;
  report.epsilon = epsilon;
  for (std::size_t r = 0; r < wrefs.size(); ++r) {
    double tensor_max = 0.0;
    for (std::size_t k = 0; k < wrefs[r].size; ++k) {
      double& w = wrefs[r].data[k];
      const double saved = w;
      w = saved + epsilon;
      const double loss_plus = sequence_loss(work, seq, task);
      w = saved - epsilon;
      const double loss_minus = sequence_loss(work, seq, task);
      w = saved;
      if (!std::isfinite(loss_plus) || !std::isfinite(loss_minus)) {
        throw NumericError("grad_check: non-finite loss while perturbing " + wrefs[r].name +
                           "[" + std::to_string(k) + "]");
      }
      const double numeric = (loss_plus - loss_minus) / (2.0 * epsilon);
      tensor_max = std::max(tensor_max, gradcheck_relative_error(grefs[r].data[k], numeric));
    }
    report.tensors.push_back({wrefs[r].name, tensor_max});
    report.max_relative_error = std::max(report.max_relative_error, tensor_max);
  }
  return report;
}

}  // namespace docseg
