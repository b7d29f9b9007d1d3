#include "core/gru.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace smf {

GruParams GruParams::view(const ParamSet& params, const std::string& prefix) {
  GruParams p{};
  p.w_reset = &params.at(prefix + ".reset.W");
  p.u_reset = &params.at(prefix + ".reset.U");
  p.b_reset = &params.at(prefix + ".reset.b");
  p.w_update = &params.at(prefix + ".update.W");
  p.u_update = &params.at(prefix + ".update.U");
  p.b_update = &params.at(prefix + ".update.b");
  p.w_cand = &params.at(prefix + ".cand.W");
  p.u_cand = &params.at(prefix + ".cand.U");
  p.b_cand = &params.at(prefix + ".cand.b");
  return p;
}

GruGrads GruGrads::view(ParamSet& grads, const std::string& prefix) {
  GruGrads g{};
  g.w_reset = &grads.at(prefix + ".reset.W");
  g.u_reset = &grads.at(prefix + ".reset.U");
  g.b_reset = &grads.at(prefix + ".reset.b");
  g.w_update = &grads.at(prefix + ".update.W");
  g.u_update = &grads.at(prefix + ".update.U");
  g.b_update = &grads.at(prefix + ".update.b");
  g.w_cand = &grads.at(prefix + ".cand.W");
  g.u_cand = &grads.at(prefix + ".cand.U");
  g.b_cand = &grads.at(prefix + ".cand.b");
  return g;
}

Vec gru_step(const GruParams& p, const Vec& x, const Vec& h_prev, GruStepCache* cache) {
  const std::size_t hidden = p.hidden();
  if (x.size() != p.input()) {
    throw_usage("gru_step: input size " + std::to_string(x.size()) + " does not match W " +
                shape_str(p.w_reset->shape()));
  }
  if (h_prev.size() != hidden) {
    throw_usage("gru_step: hidden size " + std::to_string(h_prev.size()) +
                " does not match parameters (" + std::to_string(hidden) + ")");
  }

  Vec reset = p.b_reset->values();
  matvec_acc(*p.w_reset, x, reset);
  matvec_acc(*p.u_reset, h_prev, reset);
  for (double& v : reset) v = sigmoid_scalar(v);

  Vec update = p.b_update->values();
  matvec_acc(*p.w_update, x, update);
  matvec_acc(*p.u_update, h_prev, update);
  for (double& v : update) v = sigmoid_scalar(v);

  Vec gated(hidden);
  for (std::size_t i = 0; i < hidden; ++i) gated[i] = reset[i] * h_prev[i];
  Vec cand = p.b_cand->values();
  matvec_acc(*p.w_cand, x, cand);
  matvec_acc(*p.u_cand, gated, cand);
  for (double& v : cand) v = std::tanh(v);

  Vec h_next(hidden);
  for (std::size_t i = 0; i < hidden; ++i) {
    h_next[i] = (1.0 - update[i]) * cand[i] + update[i] * h_prev[i];
  }

  if (cache) {
    cache->x = x;
    cache->h_prev = h_prev;
    cache->reset = std::move(reset);
    cache->update = std::move(update);
    cache->cand = std::move(cand);
  }
  return h_next;
}

void gru_step_backward(const GruParams& p, const GruStepCache& cache, const Vec& dh_out,
                       GruGrads& grads, Vec& dx_acc, Vec& dh_prev_acc) {
  const std::size_t hidden = p.hidden();
  const Vec& r = cache.reset;
  const Vec& z = cache.update;
  const Vec& n = cache.cand;
  const Vec& h = cache.h_prev;

  Vec dn(hidden), dz(hidden);
  for (std::size_t i = 0; i < hidden; ++i) {
    dn[i] = dh_out[i] * (1.0 - z[i]);
    dz[i] = dh_out[i] * (h[i] - n[i]);
    dh_prev_acc[i] += dh_out[i] * z[i];
  }

  // Candidate branch.
  Vec da_n(hidden);
  for (std::size_t i = 0; i < hidden; ++i) da_n[i] = dn[i] * (1.0 - n[i] * n[i]);
  Vec gated(hidden);
  for (std::size_t i = 0; i < hidden; ++i) gated[i] = r[i] * h[i];
  outer_acc(da_n, cache.x, *grads.w_cand);
  outer_acc(da_n, gated, *grads.u_cand);
  for (std::size_t i = 0; i < hidden; ++i) (*grads.b_cand)[i] += da_n[i];
  matvec_t_acc(*p.w_cand, da_n, dx_acc);
  Vec d_gated(hidden, 0.0);
  matvec_t_acc(*p.u_cand, da_n, d_gated);
  Vec dr(hidden);
  for (std::size_t i = 0; i < hidden; ++i) {
    dr[i] = d_gated[i] * h[i];
    dh_prev_acc[i] += d_gated[i] * r[i];
  }

  // Update gate.
  Vec da_z(hidden);
  for (std::size_t i = 0; i < hidden; ++i) da_z[i] = dz[i] * z[i] * (1.0 - z[i]);
  outer_acc(da_z, cache.x, *grads.w_update);
  outer_acc(da_z, h, *grads.u_update);
  for (std::size_t i = 0; i < hidden; ++i) (*grads.b_update)[i] += da_z[i];
  matvec_t_acc(*p.w_update, da_z, dx_acc);
  matvec_t_acc(*p.u_update, da_z, dh_prev_acc);

  // Reset gate.
  Vec da_r(hidden);
  for (std::size_t i = 0; i < hidden; ++i) da_r[i] = dr[i] * r[i] * (1.0 - r[i]);
  outer_acc(da_r, cache.x, *grads.w_reset);
  outer_acc(da_r, h, *grads.u_reset);
  for (std::size_t i = 0; i < hidden; ++i) (*grads.b_reset)[i] += da_r[i];
  matvec_t_acc(*p.w_reset, da_r, dx_acc);
  matvec_t_acc(*p.u_reset, da_r, dh_prev_acc);
}

Vec encode_steps(const std::vector<Vec>& inputs, const GruParams& p,
                 std::vector<GruStepCache>* caches) {
  if (inputs.empty()) throw_usage("encode: empty input sequence");
  Vec h(p.hidden(), 0.0);
  if (caches) caches->resize(inputs.size());
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    h = gru_step(p, inputs[t], h, caches ? &(*caches)[t] : nullptr);
  }
  return h;
}

Vec encode_person(const OffsetSequence& offsets, const GruParams& p,
                  std::vector<GruStepCache>* caches) {
  if (offsets.length() == 0) throw_usage("encode_person: empty offset sequence");
  return encode_steps(offsets.deltas, p, caches);
}

void encode_backward(const GruParams& p, const std::vector<GruStepCache>& caches,
                     const Vec& dh_final, GruGrads& grads) {
  Vec dh = dh_final;
  Vec dx(p.input(), 0.0);  // inputs are data; gradient discarded
  for (std::size_t t = caches.size(); t-- > 0;) {
    Vec dh_prev(p.hidden(), 0.0);
    std::fill(dx.begin(), dx.end(), 0.0);
    gru_step_backward(p, caches[t], dh, grads, dx, dh_prev);
    dh = std::move(dh_prev);
  }
}

std::vector<Vec> decode_offsets(const Vec& init_hidden, const Vec& last_observed_offset,
                                std::size_t steps, const GruParams& p, const Tensor& w_out,
                                const Tensor& b_out, DecodeCache* cache) {
  if (steps < 1) throw_usage("decode_offsets: steps must be at least 1");
  if (init_hidden.size() != p.hidden()) {
    throw_usage("decode_offsets: conditioning size " + std::to_string(init_hidden.size()) +
                " does not match decoder hidden " + std::to_string(p.hidden()));
  }
  if (w_out.rank() != 2 || w_out.cols() != p.hidden() || b_out.size() != w_out.rows()) {
    throw_usage("decode_offsets: projection shape mismatch " + shape_str(w_out.shape()));
  }
  if (last_observed_offset.size() != p.input()) {
    throw_usage("decode_offsets: seed offset size mismatch");
  }

  std::vector<Vec> outputs;
  outputs.reserve(steps);
  if (cache) {
    cache->steps.resize(steps);
    cache->hidden.resize(steps);
    cache->outputs.clear();
  }
  Vec h = init_hidden;
  Vec input = last_observed_offset;
  for (std::size_t t = 0; t < steps; ++t) {
    h = gru_step(p, input, h, cache ? &cache->steps[t] : nullptr);
    Vec out = b_out.values();
    matvec_acc(w_out, h, out);
    if (cache) {
      cache->hidden[t] = h;
      cache->outputs.push_back(out);
    }
    input = out;  // feed the prediction back, no teacher forcing
    outputs.push_back(std::move(out));
  }
  return outputs;
}

Vec decode_backward(const GruParams& p, const Tensor& w_out, const Tensor& b_out,
                    const DecodeCache& cache, const std::vector<Vec>& d_outputs,
                    GruGrads& grads, Tensor& d_w_out, Tensor& d_b_out) {
  const std::size_t steps = cache.steps.size();
  if (d_outputs.size() != steps) throw_usage("decode_backward: gradient count mismatch");

  Vec dh_carry(p.hidden(), 0.0);
  Vec dx_carry(p.input(), 0.0);  // gradient flowing into the *input* of step t+1
  for (std::size_t t = steps; t-- > 0;) {
    // The output of step t is both a loss term and the input of step t+1.
    Vec dy = d_outputs[t];
    for (std::size_t i = 0; i < dy.size(); ++i) dy[i] += dx_carry[i];

    outer_acc(dy, cache.hidden[t], d_w_out);
    for (std::size_t i = 0; i < dy.size(); ++i) d_b_out[i] += dy[i];

    Vec dh = dh_carry;
    matvec_t_acc(w_out, dy, dh);

    Vec dh_prev(p.hidden(), 0.0);
    std::fill(dx_carry.begin(), dx_carry.end(), 0.0);
    gru_step_backward(p, cache.steps[t], dh, grads, dx_carry, dh_prev);
    dh_carry = std::move(dh_prev);
  }
  (void)b_out;
  return dh_carry;  // gradient w.r.t. the conditioning vector
}

}  // namespace smf
