#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/rng.hpp"
#include "core/tensor.hpp"

namespace smf {

// Ordered collection of named tensors. Iteration follows insertion order and
// is identical after a save/load round trip, which keeps optimizer updates,
// serialization and gradient checks aligned.
class ParamSet {
 public:
  Tensor& add(const std::string& name, Tensor value);

  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  Tensor& at(const std::string& name);
  const Tensor& at(const std::string& name) const;

  const std::vector<std::string>& names() const { return order_; }
  std::size_t size() const { return order_.size(); }
  std::size_t value_count() const;

  // Same names and shapes, all values zero.
  ParamSet zeros_like() const;

  void fill(double value);

 private:
  std::vector<std::string> order_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Tensor> values_;
};

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  ParamSet first_moment;
  ParamSet second_moment;

  static AdamState for_params(const ParamSet& params);
};

// One in-place bias-corrected Adam step. `grads` must carry exactly the names
// and shapes of `params`; the state's step counter advances by one.
void adam_update(ParamSet& params, const ParamSet& grads, AdamState& state, double lr);

// Central-difference gradient of `loss_fn` with respect to every coordinate of
// `params`. The callable may read the set it is handed but must not retain
// references; coordinates are restored exactly after probing.
ParamSet finite_diff_grad(const std::function<double(const ParamSet&)>& loss_fn,
                          ParamSet& params, double step);

// Fills every matrix with uniform values in [-1/sqrt(fan_in), +1/sqrt(fan_in)]
// (fan_in = last dimension) and every rank-1 tensor with zeros, drawing in
// iteration order from `rng`.
void init_uniform_fan_in(ParamSet& params, Rng& rng);

}  // namespace smf
