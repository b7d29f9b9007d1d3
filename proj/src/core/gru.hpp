#pragma once

#include <string>
#include <vector>

#include "core/params.hpp"
#include "core/pose.hpp"
#include "core/tensor.hpp"

namespace smf {

// Read-only view of one GRU cell's parameters inside a ParamSet. Tensor names
// follow "<prefix>.<gate>.{W,U,b}" with gates reset/update/cand.
struct GruParams {
  const Tensor* w_reset;
  const Tensor* u_reset;
  const Tensor* b_reset;
  const Tensor* w_update;
  const Tensor* u_update;
  const Tensor* b_update;
  const Tensor* w_cand;
  const Tensor* u_cand;
  const Tensor* b_cand;

  static GruParams view(const ParamSet& params, const std::string& prefix);

  std::size_t hidden() const { return b_reset->size(); }
  std::size_t input() const { return w_reset->cols(); }
};

// Mutable view over the matching gradient tensors.
struct GruGrads {
  Tensor* w_reset;
  Tensor* u_reset;
  Tensor* b_reset;
  Tensor* w_update;
  Tensor* u_update;
  Tensor* b_update;
  Tensor* w_cand;
  Tensor* u_cand;
  Tensor* b_cand;

  static GruGrads view(ParamSet& grads, const std::string& prefix);
};

// Activations captured during the forward step; everything the backward pass
// needs to avoid recomputation.
struct GruStepCache {
  Vec x;
  Vec h_prev;
  Vec reset;
  Vec update;
  Vec cand;
};

// h' = (1-z) * n + z * h with
//   r = sigmoid(W_r x + U_r h + b_r)
//   z = sigmoid(W_z x + U_z h + b_z)
//   n = tanh(W_n x + U_n (r*h) + b_n)
Vec gru_step(const GruParams& p, const Vec& x, const Vec& h_prev, GruStepCache* cache = nullptr);

// Accumulates parameter gradients and the gradients w.r.t. the step input and
// previous hidden state, given dL/dh'.
void gru_step_backward(const GruParams& p, const GruStepCache& cache, const Vec& dh_out,
                       GruGrads& grads, Vec& dx_acc, Vec& dh_prev_acc);

// Folds gru_step over the flattened offset vectors, starting from the zero
// hidden state; returns the final hidden state (the person embedding).
Vec encode_steps(const std::vector<Vec>& inputs, const GruParams& p,
                 std::vector<GruStepCache>* caches = nullptr);
Vec encode_person(const OffsetSequence& offsets, const GruParams& p,
                  std::vector<GruStepCache>* caches = nullptr);

// Backward through the encoder fold given dL/dh_final.
void encode_backward(const GruParams& p, const std::vector<GruStepCache>& caches,
                     const Vec& dh_final, GruGrads& grads);

struct DecodeCache {
  std::vector<GruStepCache> steps;
  std::vector<Vec> hidden;   // hidden state after each step
  std::vector<Vec> outputs;  // projected offsets per step
};

// Autoregressive decoding: the hidden state starts from the conditioning
// vector, the first input is the last observed offset and every later input is
// the model's own previous prediction.
std::vector<Vec> decode_offsets(const Vec& init_hidden, const Vec& last_observed_offset,
                                std::size_t steps, const GruParams& p, const Tensor& w_out,
                                const Tensor& b_out, DecodeCache* cache = nullptr);

// Backward through decoding including the feedback path from each prediction
// into the next step's input. Returns dL/d(init_hidden).
Vec decode_backward(const GruParams& p, const Tensor& w_out, const Tensor& b_out,
                    const DecodeCache& cache, const std::vector<Vec>& d_outputs,
                    GruGrads& grads, Tensor& d_w_out, Tensor& d_b_out);

}  // namespace smf
