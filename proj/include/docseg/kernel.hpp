// Dense numeric kernel: vector/matrix primitives, the LSTM cell with its
// analytic backward pass, softmax and logistic loss. Everything is 64-bit
// and deterministic; gradients are accumulated into caller-owned buffers.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "docseg/errors.hpp"
#include "docseg/matrix.hpp"

namespace docseg {

// Reference to one parameter tensor inside a larger structure. Used by the
// SGD update and by the finite-difference checker to walk every scalar.
struct ParamRef {
  std::string name;
  double* data;
  std::size_t size;
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline void check_conforming(const Matrix& w, const Vector& x, const char* what) {
  if (w.cols() != x.size()) {
    throw ShapeError(std::string(what) + ": matrix " + shape_string(w) +
                     " does not conform with vector of length " + std::to_string(x.size()));
  }
}

// y = W x
inline Vector matvec(const Matrix& w, const Vector& x) {
  check_conforming(w, x, "matvec");
  Vector y(w.rows(), 0.0);
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const double* wr = w.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < w.cols(); ++c) acc += wr[c] * x[c];
    y[r] = acc;
  }
  return y;
}

// y += W x
inline void matvec_accum(const Matrix& w, const Vector& x, Vector& y) {
  check_conforming(w, x, "matvec_accum");
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const double* wr = w.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < w.cols(); ++c) acc += wr[c] * x[c];
    y[r] += acc;
  }
}

// out += W^T a  (row-major friendly: walks W by rows)
inline void matvec_transpose_accum(const Matrix& w, const Vector& a, Vector& out) {
  if (w.rows() != a.size() || w.cols() != out.size()) {
    throw ShapeError("matvec_transpose_accum: matrix " + shape_string(w) +
                     " does not conform with vectors " + std::to_string(a.size()) + "/" +
                     std::to_string(out.size()));
  }
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const double ar = a[r];
    const double* wr = w.row(r);
    double* o = out.data();
    for (std::size_t c = 0; c < w.cols(); ++c) o[c] += wr[c] * ar;
  }
}

// dW += a x^T
inline void outer_accum(const Vector& a, const Vector& x, Matrix& dw) {
  if (dw.rows() != a.size() || dw.cols() != x.size()) {
    throw ShapeError("outer_accum: gradient " + shape_string(dw) +
                     " does not conform with vectors " + std::to_string(a.size()) + "/" +
                     std::to_string(x.size()));
  }
  for (std::size_t r = 0; r < a.size(); ++r) {
    const double ar = a[r];
    double* row = dw.row(r);
    for (std::size_t c = 0; c < x.size(); ++c) row[c] += ar * x[c];
  }
}

inline void add_inplace(Vector& y, const Vector& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += x[i];
}

// Numerically stable softmax (max subtraction). Output is positive and
// sums to 1 within 1e-12.
inline Vector softmax(const Vector& logits) {
  if (logits.empty()) throw ConfigError("softmax: empty logits vector");
  const double m = *std::max_element(logits.begin(), logits.end());
  Vector out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

inline constexpr double kLossProbFloor = 1e-12;

// -ln(probs[gold]) with the probability clamped below at 1e-12 so a fully
// saturated wrong prediction yields a large finite loss instead of inf.
inline double log_loss(const Vector& probs, std::size_t gold) {
  if (gold >= probs.size()) {
    throw DataError("log_loss: gold index " + std::to_string(gold) +
                    " out of range for " + std::to_string(probs.size()) + " classes");
  }
  return -std::log(std::max(probs[gold], kLossProbFloor));
}

// ---------------------------------------------------------------------------
// LSTM cell
//
// Standard four-gate cell, no peepholes:
//   i = sigm(W_i x + U_i h_prev + b_i)
//   f = sigm(W_f x + U_f h_prev + b_f)
//   g = tanh(W_g x + U_g h_prev + b_g)
//   o = sigm(W_o x + U_o h_prev + b_o)
//   c = f . c_prev + i . g
//   h = o . tanh(c)
// ---------------------------------------------------------------------------

struct LstmCellParams {
  Matrix w_input, u_input;
  Vector b_input;
  Matrix w_forget, u_forget;
  Vector b_forget;
  Matrix w_cell, u_cell;
  Vector b_cell;
  Matrix w_output, u_output;
  Vector b_output;

  LstmCellParams() = default;
  LstmCellParams(std::size_t hidden, std::size_t input)
      : w_input(hidden, input), u_input(hidden, hidden), b_input(hidden, 0.0),
        w_forget(hidden, input), u_forget(hidden, hidden), b_forget(hidden, 0.0),
        w_cell(hidden, input), u_cell(hidden, hidden), b_cell(hidden, 0.0),
        w_output(hidden, input), u_output(hidden, hidden), b_output(hidden, 0.0) {}

  std::size_t hidden_dim() const { return w_input.rows(); }
  std::size_t input_dim() const { return w_input.cols(); }

  // All 12 tensors must agree on (h, d_in). Throws ShapeError naming the tensor.
  void validate() const {
    const std::size_t h = hidden_dim();
    const std::size_t d = input_dim();
    auto want = [&](const Matrix& m, std::size_t r, std::size_t c, const char* name) {
      if (m.rows() != r || m.cols() != c) {
        throw ShapeError(std::string("lstm cell: ") + name + " is " + shape_string(m) +
                         ", expected " + std::to_string(r) + "x" + std::to_string(c));
      }
    };
    auto wantv = [&](const Vector& v, std::size_t n, const char* name) {
      if (v.size() != n) {
        throw ShapeError(std::string("lstm cell: ") + name + " has length " +
                         std::to_string(v.size()) + ", expected " + std::to_string(n));
      }
    };
    want(w_input, h, d, "w_input");   want(u_input, h, h, "u_input");   wantv(b_input, h, "b_input");
    want(w_forget, h, d, "w_forget"); want(u_forget, h, h, "u_forget"); wantv(b_forget, h, "b_forget");
    want(w_cell, h, d, "w_cell");     want(u_cell, h, h, "u_cell");     wantv(b_cell, h, "b_cell");
    want(w_output, h, d, "w_output"); want(u_output, h, h, "u_output"); wantv(b_output, h, "b_output");
  }

  // Fixed traversal order; prefix distinguishes cells inside a larger model.
  void collect_params(const std::string& prefix, std::vector<ParamRef>& out) {
    auto addm = [&](Matrix& m, const char* name) {
      out.push_back({prefix + name, m.data(), m.size()});
    };
    auto addv = [&](Vector& v, const char* name) {
      out.push_back({prefix + name, v.data(), v.size()});
    };
    addm(w_input, "w_input");   addm(u_input, "u_input");   addv(b_input, "b_input");
    addm(w_forget, "w_forget"); addm(u_forget, "u_forget"); addv(b_forget, "b_forget");
    addm(w_cell, "w_cell");     addm(u_cell, "u_cell");     addv(b_cell, "b_cell");
    addm(w_output, "w_output"); addm(u_output, "u_output"); addv(b_output, "b_output");
  }
};

struct LstmState {
  Vector h, c;
};

// Per-step activations kept for the backward pass.
struct LstmStepCache {
  Vector x, h_prev, c_prev;
  Vector i, f, g, o, c, tanh_c;
};

inline LstmState lstm_cell_step(const LstmCellParams& p, const Vector& x,
                                const Vector& h_prev, const Vector& c_prev,
                                LstmStepCache* cache = nullptr) {
  p.validate();
  const std::size_t h = p.hidden_dim();
  if (x.size() != p.input_dim()) {
    throw ShapeError("lstm_cell_step: input x has length " + std::to_string(x.size()) +
                     ", w_input expects " + std::to_string(p.input_dim()));
  }
  if (h_prev.size() != h || c_prev.size() != h) {
    throw ShapeError("lstm_cell_step: state h_prev/c_prev lengths " +
                     std::to_string(h_prev.size()) + "/" + std::to_string(c_prev.size()) +
                     " do not match hidden size " + std::to_string(h));
  }

  auto gate = [&](const Matrix& w, const Matrix& u, const Vector& b) {
    Vector z = matvec(w, x);
    matvec_accum(u, h_prev, z);
    add_inplace(z, b);
    return z;
  };

  Vector gi = gate(p.w_input, p.u_input, p.b_input);
  Vector gf = gate(p.w_forget, p.u_forget, p.b_forget);
  Vector gg = gate(p.w_cell, p.u_cell, p.b_cell);
  Vector go = gate(p.w_output, p.u_output, p.b_output);
  for (std::size_t k = 0; k < h; ++k) {
    gi[k] = sigmoid(gi[k]);
    gf[k] = sigmoid(gf[k]);
    gg[k] = std::tanh(gg[k]);
    go[k] = sigmoid(go[k]);
  }

  LstmState out{Vector(h), Vector(h)};
  Vector tc(h);
  for (std::size_t k = 0; k < h; ++k) {
    out.c[k] = gf[k] * c_prev[k] + gi[k] * gg[k];
    tc[k] = std::tanh(out.c[k]);
    out.h[k] = go[k] * tc[k];
  }

  if (cache) {
    cache->x = x;
    cache->h_prev = h_prev;
    cache->c_prev = c_prev;
    cache->i = std::move(gi);
    cache->f = std::move(gf);
    cache->g = std::move(gg);
    cache->o = std::move(go);
    cache->c = out.c;
    cache->tanh_c = std::move(tc);
  }
  return out;
}

// Backward through one step. dh is dL/dh_t, dc_carry is dL/dc_t arriving from
// step t+1. Parameter gradients accumulate into `grads`; dx, dh_prev, dc_prev
// are overwritten with the gradients flowing to the step inputs. dc_prev may
// alias dc_carry (the carry buffer of a BPTT loop); each element is read
// before it is written.
inline void lstm_cell_backward(const LstmCellParams& p, const LstmStepCache& s,
                               const Vector& dh, const Vector& dc_carry,
                               LstmCellParams& grads, Vector& dx, Vector& dh_prev,
                               Vector& dc_prev) {
  const std::size_t h = p.hidden_dim();
  const std::size_t d = p.input_dim();

  Vector dai(h), daf(h), dag(h), dao(h);
  dc_prev.resize(h);
  for (std::size_t k = 0; k < h; ++k) {
    const double dho = dh[k];
    const double dc = dc_carry[k] + dho * s.o[k] * (1.0 - s.tanh_c[k] * s.tanh_c[k]);
    const double do_ = dho * s.tanh_c[k];
    dai[k] = dc * s.g[k] * s.i[k] * (1.0 - s.i[k]);
    daf[k] = dc * s.c_prev[k] * s.f[k] * (1.0 - s.f[k]);
    dag[k] = dc * s.i[k] * (1.0 - s.g[k] * s.g[k]);
    dao[k] = do_ * s.o[k] * (1.0 - s.o[k]);
    dc_prev[k] = dc * s.f[k];
  }

  outer_accum(dai, s.x, grads.w_input);
  outer_accum(daf, s.x, grads.w_forget);
  outer_accum(dag, s.x, grads.w_cell);
  outer_accum(dao, s.x, grads.w_output);
  outer_accum(dai, s.h_prev, grads.u_input);
  outer_accum(daf, s.h_prev, grads.u_forget);
  outer_accum(dag, s.h_prev, grads.u_cell);
  outer_accum(dao, s.h_prev, grads.u_output);
  add_inplace(grads.b_input, dai);
  add_inplace(grads.b_forget, daf);
  add_inplace(grads.b_cell, dag);
  add_inplace(grads.b_output, dao);

  dx.assign(d, 0.0);
  matvec_transpose_accum(p.w_input, dai, dx);
  matvec_transpose_accum(p.w_forget, daf, dx);
  matvec_transpose_accum(p.w_cell, dag, dx);
  matvec_transpose_accum(p.w_output, dao, dx);

  dh_prev.assign(h, 0.0);
  matvec_transpose_accum(p.u_input, dai, dh_prev);
  matvec_transpose_accum(p.u_forget, daf, dh_prev);
  matvec_transpose_accum(p.u_cell, dag, dh_prev);
  matvec_transpose_accum(p.u_output, dao, dh_prev);
}

}  // namespace docseg
