// The segmentation network: embedding layer, stacked bi-directional LSTM
// trunk shared across tasks, and one linear+softmax head per task. Holds
// forward, loss+gradients (explicit backward passes), prediction over
// documents, and the versioned binary model file.
#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "docseg/config.hpp"
#include "docseg/corpus.hpp"
#include "docseg/embeddings.hpp"
#include "docseg/errors.hpp"
#include "docseg/kernel.hpp"
#include "docseg/random.hpp"
#include "docseg/vocab.hpp"

namespace docseg {

// Per-position class probabilities; index 0 = B, index 1 = I.
using LabelDistribution = std::vector<std::array<double, 2>>;

inline constexpr std::size_t kClassB = 0;
inline constexpr std::size_t kClassI = 1;
inline constexpr std::size_t kNumClasses = 2;

struct TaskHead {
  Matrix w;  // 2 x 2h
  Vector b;  // 2
};

struct ModelParams {
  struct LayerParams {
    LstmCellParams fwd, bwd;
  };

  Matrix embedding;                                  // V x d
  std::vector<LayerParams> layers;                   // layer 0 input d, others 2h
  std::vector<std::pair<std::string, TaskHead>> heads;  // roster order

  std::size_t vocab_size() const { return embedding.rows(); }
  std::size_t embedding_dim() const { return embedding.cols(); }
  std::size_t hidden_size() const { return layers.empty() ? 0 : layers[0].fwd.hidden_dim(); }
  std::size_t layer_count() const { return layers.size(); }

  const TaskHead* find_head(const std::string& task) const {
    for (const auto& [name, head] : heads) {
      if (name == task) return &head;
    }
    return nullptr;
  }
  TaskHead* find_head(const std::string& task) {
    for (auto& [name, head] : heads) {
      if (name == task) return &head;
    }
    return nullptr;
  }
  const TaskHead& head(const std::string& task) const {
    const TaskHead* h = find_head(task);
    if (!h) throw TaskError("model has no head for task '" + task + "'");
    return *h;
  }

  // Every tensor in a fixed order: embedding, then cells layer by layer
  // (forward then backward), then heads in roster order.
  std::vector<ParamRef> param_refs() {
    std::vector<ParamRef> refs;
    refs.push_back({"embedding", embedding.data(), embedding.size()});
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const std::string base = "layer" + std::to_string(l);
      layers[l].fwd.collect_params(base + ".fwd.", refs);
      layers[l].bwd.collect_params(base + ".bwd.", refs);
    }
    for (auto& [name, head] : heads) {
      refs.push_back({"head." + name + ".w", head.w.data(), head.w.size()});
      refs.push_back({"head." + name + ".b", head.b.data(), head.b.size()});
    }
    return refs;
  }

  std::size_t parameter_count() const {
    std::size_t n = embedding.size();
    for (const LayerParams& l : layers) {
      for (const LstmCellParams* c : {&l.fwd, &l.bwd}) {
        n += c->w_input.size() * 4 + c->u_input.size() * 4 + c->b_input.size() * 4;
      }
    }
    for (const auto& [name, head] : heads) n += head.w.size() + head.b.size();
    return n;
  }

  static ModelParams zeros_like(const ModelParams& m) {
    ModelParams z;
    z.embedding = Matrix(m.embedding.rows(), m.embedding.cols());
    z.layers.reserve(m.layers.size());
    for (const LayerParams& l : m.layers) {
      z.layers.push_back({LstmCellParams(l.fwd.hidden_dim(), l.fwd.input_dim()),
                          LstmCellParams(l.bwd.hidden_dim(), l.bwd.input_dim())});
    }
    for (const auto& [name, head] : m.heads) {
      z.heads.push_back({name, TaskHead{Matrix(head.w.rows(), head.w.cols()),
                                        Vector(head.b.size(), 0.0)}});
    }
    return z;
  }

  // this += alpha * g; structures must match.
  void add_scaled(ModelParams& g, double alpha) {
    std::vector<ParamRef> mine = param_refs();
    std::vector<ParamRef> theirs = g.param_refs();
    if (mine.size() != theirs.size()) throw ShapeError("add_scaled: parameter structures differ");
    for (std::size_t i = 0; i < mine.size(); ++i) {
      if (mine[i].size != theirs[i].size) {
        throw ShapeError("add_scaled: tensor " + mine[i].name + " size mismatch");
      }
      for (std::size_t k = 0; k < mine[i].size; ++k) mine[i].data[k] += alpha * theirs[i].data[k];
    }
  }
};

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

// Weights are drawn uniformly from [-0.1, 0.1] in param_refs order, all from
// config.seed, so identical configs give bit-identical models. Rows of the
// embedding table for words present in `pretrained` are then overwritten
// (truncated to the model dimension when the table is wider).
inline ModelParams build_model(const TrainingConfig& config, const Vocab& vocab,
                               const EmbeddingTable* pretrained = nullptr) {
  config.validate();
  if (vocab.size() == 0) throw DataError("build_model: empty vocabulary");
  const std::size_t d = config.embedding_dim;
  const std::size_t h = config.hidden;

  ModelParams m;
  m.embedding = Matrix(vocab.size(), d);
  for (std::size_t l = 0; l < config.layers; ++l) {
    const std::size_t in_dim = (l == 0) ? d : 2 * h;
    m.layers.push_back({LstmCellParams(h, in_dim), LstmCellParams(h, in_dim)});
  }
  for (const std::string& task : config.tasks) {
    m.heads.push_back({task, TaskHead{Matrix(kNumClasses, 2 * h), Vector(kNumClasses, 0.0)}});
  }

  std::mt19937_64 rng = make_rng(config.seed, 0x1417);
  std::uniform_real_distribution<double> unif(-0.1, 0.1);
  for (ParamRef& ref : m.param_refs()) {
    for (std::size_t i = 0; i < ref.size; ++i) ref.data[i] = unif(rng);
  }

  if (pretrained) {
    if (pretrained->dim < d) {
      throw FormatError("pretrained embeddings have dimension " + std::to_string(pretrained->dim) +
                        ", model needs at least " + std::to_string(d));
    }
    const auto& entries = vocab.entries();
    for (std::size_t idx = 0; idx < entries.size(); ++idx) {
      if (entries[idx].kind != Vocab::EntryKind::Word) continue;
      const Vector* vec = pretrained->find(entries[idx].text);
      if (!vec) continue;  // absent words keep their random rows
      for (std::size_t c = 0; c < d; ++c) m.embedding(idx, c) = (*vec)[c];
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Forward
// ---------------------------------------------------------------------------

struct LayerCache {
  std::vector<LstmStepCache> fwd_steps, bwd_steps;
  std::vector<Vector> fwd_h, bwd_h;
};

struct ForwardCache {
  // inputs[0] is the (possibly noised) embedded sequence; inputs[l] for
  // l >= 1 is the concatenated output of layer l-1; inputs[n] is the trunk
  // output fed to the head.
  std::vector<std::vector<Vector>> inputs;
  std::vector<LayerCache> layers;
  LabelDistribution probs;
};

namespace detail {

inline void run_direction(const LstmCellParams& cell, const std::vector<Vector>& inputs,
                          bool reversed, std::vector<LstmStepCache>& steps,
                          std::vector<Vector>& outputs) {
  const std::size_t len = inputs.size();
  const std::size_t h = cell.hidden_dim();
  steps.resize(len);
  outputs.assign(len, Vector());
  Vector hs(h, 0.0), cs(h, 0.0);
  for (std::size_t k = 0; k < len; ++k) {
    const std::size_t t = reversed ? len - 1 - k : k;
    LstmState next = lstm_cell_step(cell, inputs[t], hs, cs, &steps[t]);
    hs = next.h;
    cs = std::move(next.c);
    outputs[t] = std::move(next.h);
  }
}

}  // namespace detail

// Runs the trunk and the given task's head over an encoded sequence.
// noise_sigma > 0 adds fresh Gaussian noise to every embedding component
// (training-time regularization); sigma = 0 is deterministic inference.
inline LabelDistribution forward(const ModelParams& model, const EncodedSequence& seq,
                                 const std::string& task, double noise_sigma,
                                 std::mt19937_64* rng, ForwardCache* cache = nullptr) {
  if (seq.ids.empty()) throw DataError("forward: empty sequence");
  if (noise_sigma < 0.0) throw ConfigError("forward: negative noise sigma");
  if (noise_sigma > 0.0 && rng == nullptr) {
    throw ConfigError("forward: noise requested without a generator");
  }
  const TaskHead& head = model.head(task);
  const std::size_t len = seq.ids.size();
  const std::size_t d = model.embedding_dim();

  std::vector<Vector> current(len);
  for (std::size_t t = 0; t < len; ++t) {
    const std::size_t id = seq.ids[t];
    if (id >= model.vocab_size()) {
      throw DataError("forward: vocabulary index " + std::to_string(id) +
                      " out of range for table of " + std::to_string(model.vocab_size()));
    }
    const double* row = model.embedding.row(id);
    current[t].assign(row, row + d);
    if (noise_sigma > 0.0) {
      std::normal_distribution<double> noise(0.0, noise_sigma);
      for (std::size_t c = 0; c < d; ++c) current[t][c] += noise(*rng);
    }
  }

  if (cache) {
    cache->inputs.clear();
    cache->layers.assign(model.layer_count(), LayerCache{});
    cache->inputs.push_back(current);
  }

  const std::size_t h = model.hidden_size();
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    std::vector<LstmStepCache> fwd_scratch, bwd_scratch;
    LayerCache* lc = cache ? &cache->layers[l] : nullptr;
    std::vector<LstmStepCache>& fwd_steps = lc ? lc->fwd_steps : fwd_scratch;
    std::vector<LstmStepCache>& bwd_steps = lc ? lc->bwd_steps : bwd_scratch;
    std::vector<Vector> fwd_h, bwd_h;
    detail::run_direction(model.layers[l].fwd, current, false, fwd_steps, fwd_h);
    detail::run_direction(model.layers[l].bwd, current, true, bwd_steps, bwd_h);

    std::vector<Vector> concat(len, Vector(2 * h));
    for (std::size_t t = 0; t < len; ++t) {
      std::copy(fwd_h[t].begin(), fwd_h[t].end(), concat[t].begin());
      std::copy(bwd_h[t].begin(), bwd_h[t].end(), concat[t].begin() + h);
    }
    if (lc) {
      lc->fwd_h = std::move(fwd_h);
      lc->bwd_h = std::move(bwd_h);
    }
    current = std::move(concat);
    if (cache) cache->inputs.push_back(current);
  }

  LabelDistribution dist(len);
  for (std::size_t t = 0; t < len; ++t) {
    Vector logits = matvec(head.w, current[t]);
    add_inplace(logits, head.b);
    Vector p = softmax(logits);
    dist[t] = {p[0], p[1]};
  }
  if (cache) cache->probs = dist;
  return dist;
}

inline LabelDistribution forward(const ModelParams& model, const EncodedSequence& seq,
                                 const std::string& task) {
  return forward(model, seq, task, 0.0, nullptr);
}

// ---------------------------------------------------------------------------
// Loss and gradients
// ---------------------------------------------------------------------------

// Mean logistic loss over all interleaved positions (word and POS positions
// both carry labels and are both trained on). Gradients cover the trunk and
// the selected task's head; every other head's gradient stays zero.
inline std::pair<double, ModelParams> loss_and_grads(const ModelParams& model,
                                                     const EncodedSequence& seq,
                                                     const std::string& task, double noise_sigma,
                                                     std::mt19937_64* rng) {
  if (!seq.has_gold) {
    throw DataError("loss_and_grads: sequence is missing gold labels");
  }
  ForwardCache cache;
  forward(model, seq, task, noise_sigma, rng, &cache);

  const std::size_t len = seq.ids.size();
  const std::size_t h = model.hidden_size();
  const std::size_t n_layers = model.layer_count();
  const TaskHead& head = model.head(task);

  ModelParams grads = ModelParams::zeros_like(model);
  TaskHead* ghead = grads.find_head(task);

  double loss = 0.0;
  const double inv_len = 1.0 / static_cast<double>(len);
  std::vector<Vector> dtop(len, Vector(2 * h, 0.0));
  for (std::size_t t = 0; t < len; ++t) {
    const std::size_t gold = (seq.labels[t] == Label::B) ? kClassB : kClassI;
    const Vector probs{cache.probs[t][0], cache.probs[t][1]};
    loss += log_loss(probs, gold);

    Vector dlogits(kNumClasses);
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      dlogits[k] = (probs[k] - (k == gold ? 1.0 : 0.0)) * inv_len;
    }
    outer_accum(dlogits, cache.inputs[n_layers][t], ghead->w);
    add_inplace(ghead->b, dlogits);
    matvec_transpose_accum(head.w, dlogits, dtop[t]);
  }
  loss *= inv_len;

  // Trunk backward, top layer down.
  std::vector<Vector> dconcat = std::move(dtop);
  for (std::size_t li = n_layers; li-- > 0;) {
    const LayerCache& lc = cache.layers[li];
    const ModelParams::LayerParams& lp = model.layers[li];
    ModelParams::LayerParams& lg = grads.layers[li];
    const std::size_t in_dim = lp.fwd.input_dim();

    std::vector<Vector> dinputs(len, Vector(in_dim, 0.0));
    Vector dx(in_dim), dh_carry(h, 0.0), dc_carry(h, 0.0), dh_total(h);

    // Forward direction ran t = 0..L-1; its BPTT runs backwards.
    for (std::size_t k = len; k-- > 0;) {
      for (std::size_t j = 0; j < h; ++j) dh_total[j] = dconcat[k][j] + dh_carry[j];
      lstm_cell_backward(lp.fwd, lc.fwd_steps[k], dh_total, dc_carry, lg.fwd, dx, dh_carry, dc_carry);
      add_inplace(dinputs[k], dx);
    }
    // Backward direction ran t = L-1..0; its BPTT runs in sequence order.
    dh_carry.assign(h, 0.0);
    dc_carry.assign(h, 0.0);
    for (std::size_t k = 0; k < len; ++k) {
      for (std::size_t j = 0; j < h; ++j) dh_total[j] = dconcat[k][h + j] + dh_carry[j];
      lstm_cell_backward(lp.bwd, lc.bwd_steps[k], dh_total, dc_carry, lg.bwd, dx, dh_carry, dc_carry);
      add_inplace(dinputs[k], dx);
    }
    dconcat = std::move(dinputs);
  }

  // dconcat now holds gradients w.r.t. the embedded inputs; additive noise
  // does not change dL/dE.
  for (std::size_t t = 0; t < len; ++t) {
    double* row = grads.embedding.row(seq.ids[t]);
    for (std::size_t c = 0; c < model.embedding_dim(); ++c) row[c] += dconcat[t][c];
  }

  if (!std::isfinite(loss)) {
    throw NumericError("loss_and_grads: non-finite loss");
  }
  return {loss, std::move(grads)};
}

// ---------------------------------------------------------------------------
// Prediction
// ---------------------------------------------------------------------------

// One label per token: argmax over the word positions (ties go to B, POS
// positions are dropped via the token mask) with the first token forced to
// B, since EDUs cover the document.
inline std::vector<Label> predict(const ModelParams& model, const Document& doc,
                                  const Vocab& vocab, const std::string& task) {
  if (doc.tokens.empty()) throw DataError("predict: document '" + doc.id + "' is empty");
  EncodedSequence seq = encode_document(doc, vocab);
  LabelDistribution dist = forward(model, seq, task);
  std::vector<Label> out;
  out.reserve(doc.tokens.size());
  for (std::size_t t = 0; t < seq.ids.size(); ++t) {
    if (!seq.token_mask[t]) continue;
    out.push_back(dist[t][kClassB] >= dist[t][kClassI] ? Label::B : Label::I);
  }
  out.front() = Label::B;
  return out;
}

// ---------------------------------------------------------------------------
// Serialization
//
// Versioned container: a plain-text header (magic, version, shapes, task
// roster, training settings, vocabulary) followed by a DATA marker and the
// raw little-endian 64-bit tensors in param_refs order.
// ---------------------------------------------------------------------------

inline constexpr const char* kModelMagic = "DOCSEG-MODEL v1";

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline void save_model(ModelParams& model, const Vocab& vocab, const TrainingConfig& config,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open model file for writing: " + path);

  out << kModelMagic << '\n';
  out << "layers " << model.layer_count() << '\n';
  out << "hidden " << model.hidden_size() << '\n';
  out << "dim " << model.embedding_dim() << '\n';
  out << "vocab " << vocab.size() << '\n';
  out << "tasks " << model.heads.size();
  for (const auto& [name, head] : model.heads) out << ' ' << name;
  out << '\n';
  out << "target " << config.target_task << '\n';
  out << "train iters=" << config.iterations << " sigma=" << detail::format_double(config.noise_sigma)
      << " lr=" << detail::format_double(config.learning_rate) << " seed=" << config.seed << '\n';
  for (const Vocab::Entry& e : vocab.entries()) {
    switch (e.kind) {
      case Vocab::EntryKind::Unk: out << "entry u\n"; break;
      case Vocab::EntryKind::Word: out << "entry w " << e.text << '\n'; break;
      case Vocab::EntryKind::Pos: out << "entry p " << e.text << '\n'; break;
    }
  }
  out << "DATA\n";
  for (const ParamRef& ref : model.param_refs()) {
    out.write(reinterpret_cast<const char*>(ref.data),
              static_cast<std::streamsize>(ref.size * sizeof(double)));
  }
  if (!out) throw DataError("failed while writing model file: " + path);
}

struct LoadedModel {
  ModelParams params;
  Vocab vocab;
  TrainingConfig config;
};

inline LoadedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);

  std::string line;
  auto next_line = [&](const char* what) -> std::string {
    if (!std::getline(in, line)) {
      throw FormatError(path + ": truncated header, expected " + std::string(what));
    }
    return line;
  };

  if (next_line("magic") != kModelMagic) {
    throw FormatError(path + ": not a model file (bad magic '" + line + "')");
  }
  auto read_sized = [&](const char* key) -> std::size_t {
    std::istringstream ss(next_line(key));
    std::string k;
    std::size_t v = 0;
    if (!(ss >> k >> v) || k != key) {
      throw FormatError(path + ": malformed header line, expected '" + key + " <n>', found '" + line + "'");
    }
    return v;
  };
  const std::size_t n_layers = read_sized("layers");
  const std::size_t hidden = read_sized("hidden");
  const std::size_t dim = read_sized("dim");
  const std::size_t vocab_size = read_sized("vocab");
  if (n_layers == 0 || hidden == 0 || dim == 0 || vocab_size == 0) {
    throw FormatError(path + ": header declares a zero-sized model");
  }

  TrainingConfig config;
  config.layers = n_layers;
  config.hidden = hidden;
  config.embedding_dim = dim;
  {
    std::istringstream ss(next_line("tasks"));
    std::string k;
    std::size_t count = 0;
    if (!(ss >> k >> count) || k != "tasks") throw FormatError(path + ": malformed tasks line");
    for (std::size_t i = 0; i < count; ++i) {
      std::string t;
      if (!(ss >> t)) throw FormatError(path + ": tasks line declares " + std::to_string(count) +
                                        " tasks but lists fewer");
      config.tasks.push_back(t);
    }
    if (config.tasks.empty()) throw FormatError(path + ": model has no task heads");
  }
  {
    std::istringstream ss(next_line("target"));
    std::string k;
    if (!(ss >> k >> config.target_task) || k != "target") {
      throw FormatError(path + ": malformed target line");
    }
  }
  {
    std::istringstream ss(next_line("train"));
    std::string k;
    ss >> k;
    if (k != "train") throw FormatError(path + ": malformed train line");
    std::string field;
    while (ss >> field) {
      std::size_t eq = field.find('=');
      if (eq == std::string::npos) throw FormatError(path + ": malformed train field '" + field + "'");
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      if (key == "iters") config.iterations = std::strtoull(value.c_str(), nullptr, 10);
      else if (key == "sigma") config.noise_sigma = std::strtod(value.c_str(), nullptr);
      else if (key == "lr") config.learning_rate = std::strtod(value.c_str(), nullptr);
      else if (key == "seed") config.seed = std::strtoull(value.c_str(), nullptr, 10);
      else throw FormatError(path + ": unknown train field '" + key + "'");
    }
  }

  Vocab vocab;
  for (std::size_t i = 0; i < vocab_size; ++i) {
    std::string l = next_line("vocab entry");
    if (l.rfind("entry ", 0) != 0 || l.size() < 7) {
      throw FormatError(path + ": expected vocabulary entry, found '" + l + "'");
    }
    const char kind = l[6];
    if (kind == 'u') {
      if (i != Vocab::kUnkIndex) throw FormatError(path + ": UNK entry out of place");
      continue;  // the constructor already placed it
    }
    if (l.size() < 9 || l[7] != ' ') throw FormatError(path + ": malformed vocabulary entry '" + l + "'");
    const std::string text = l.substr(8);
    const std::size_t idx = (kind == 'w') ? vocab.add_word(text)
                          : (kind == 'p') ? vocab.add_pos(text)
                          : throw FormatError(path + ": unknown vocabulary entry kind '" +
                                              std::string(1, kind) + "'");
    if (idx != i) throw FormatError(path + ": duplicate vocabulary entry '" + text + "'");
  }

  if (next_line("DATA marker") != "DATA") {
    throw FormatError(path + ": expected DATA marker, found '" + line + "'");
  }

  LoadedModel result;
  result.config = config;
  result.vocab = std::move(vocab);

  ModelParams& m = result.params;
  m.embedding = Matrix(vocab_size, dim);
  for (std::size_t l = 0; l < n_layers; ++l) {
    const std::size_t in_dim = (l == 0) ? dim : 2 * hidden;
    m.layers.push_back({LstmCellParams(hidden, in_dim), LstmCellParams(hidden, in_dim)});
  }
  for (const std::string& t : config.tasks) {
    m.heads.push_back({t, TaskHead{Matrix(kNumClasses, 2 * hidden), Vector(kNumClasses, 0.0)}});
  }

  for (const ParamRef& ref : m.param_refs()) {
    in.read(reinterpret_cast<char*>(ref.data), static_cast<std::streamsize>(ref.size * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != ref.size * sizeof(double)) {
      throw FormatError(path + ": tensor " + ref.name + " expected " + std::to_string(ref.size) +
                        " values, file ends after " +
                        std::to_string(in.gcount() / sizeof(double)));
    }
  }
  char extra;
  if (in.read(&extra, 1)) {
    throw FormatError(path + ": trailing bytes after tensor data");
  }
  return result;
}

}  // namespace docseg
