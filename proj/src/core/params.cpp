#include "core/params.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace smf {

Tensor& ParamSet::add(const std::string& name, Tensor value) {
  if (name.empty()) throw_usage("parameter name must not be empty");
  if (contains(name)) throw_usage("duplicate parameter name '" + name + "'");
  index_[name] = values_.size();
  order_.push_back(name);
  values_.push_back(std::move(value));
  return values_.back();
}

Tensor& ParamSet::at(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw_usage("unknown parameter '" + name + "'");
  return values_[it->second];
}

const Tensor& ParamSet::at(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw_usage("unknown parameter '" + name + "'");
  return values_[it->second];
}

std::size_t ParamSet::value_count() const {
  std::size_t n = 0;
  for (const Tensor& t : values_) n += t.size();
  return n;
}

ParamSet ParamSet::zeros_like() const {
  ParamSet out;
  for (const std::string& name : order_) out.add(name, Tensor(at(name).shape()));
  return out;
}

void ParamSet::fill(double value) {
  for (Tensor& t : values_) t.fill(value);
}

AdamState AdamState::for_params(const ParamSet& params) {
  AdamState state;
  state.first_moment = params.zeros_like();
  state.second_moment = params.zeros_like();
  return state;
}

void adam_update(ParamSet& params, const ParamSet& grads, AdamState& state, double lr) {
  if (grads.size() != params.size()) {
    throw_usage("adam_update: gradient set has " + std::to_string(grads.size()) +
                " parameters, expected " + std::to_string(params.size()));
  }
  for (const std::string& name : params.names()) {
    if (!grads.contains(name)) throw_usage("adam_update: missing gradient for '" + name + "'");
    if (!grads.at(name).same_shape(params.at(name))) {
      throw_usage("adam_update: gradient shape mismatch for '" + name + "'");
    }
  }
  state.step += 1;
  double t = static_cast<double>(state.step);
  double bc1 = 1.0 - std::pow(state.beta1, t);
  double bc2 = 1.0 - std::pow(state.beta2, t);
  for (const std::string& name : params.names()) {
    Tensor& p = params.at(name);
    const Tensor& g = grads.at(name);
    Tensor& m = state.first_moment.at(name);
    Tensor& v = state.second_moment.at(name);
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
      double mhat = m[i] / bc1;
      double vhat = v[i] / bc2;
      p[i] -= lr * mhat / (std::sqrt(vhat) + state.epsilon);
    }
    check_finite(p, "parameter '" + name + "' after adam update");
  }
}

ParamSet finite_diff_grad(const std::function<double(const ParamSet&)>& loss_fn,
                          ParamSet& params, double step) {
  if (!(step > 0.0)) throw_usage("finite_diff_grad: step must be positive");
  ParamSet grads = params.zeros_like();
  for (const std::string& name : params.names()) {
    Tensor& p = params.at(name);
    Tensor& g = grads.at(name);
    for (std::size_t i = 0; i < p.size(); ++i) {
      double saved = p[i];
      p[i] = saved + step;
      double plus = loss_fn(params);
      p[i] = saved - step;
      double minus = loss_fn(params);
      p[i] = saved;
      if (!std::isfinite(plus) || !std::isfinite(minus)) {
        throw_numeric("finite_diff_grad: non-finite loss probing '" + name + "'");
      }
      g[i] = (plus - minus) / (2.0 * step);
    }
  }
  return grads;
}

void init_uniform_fan_in(ParamSet& params, Rng& rng) {
  for (const std::string& name : params.names()) {
    Tensor& t = params.at(name);
    if (t.rank() < 2) {
      t.zero();
      continue;
    }
    double bound = 1.0 / std::sqrt(static_cast<double>(t.shape().back()));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-bound, bound);
  }
}

}  // namespace smf
