#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "core/params.hpp"
#include "core/rng.hpp"
#include "core/scene.hpp"
#include "core/tensor.hpp"

namespace smf {

enum class Pooling { max, sum, average };

Pooling parse_pooling(const std::string& name);
std::string pooling_name(Pooling pooling);

struct PoolCache {
  // For max pooling: index (into the embedding list) that won each coordinate.
  std::vector<std::size_t> argmax;
  std::size_t count = 0;
};

// Elementwise permutation-invariant reduction over person embeddings. Callers
// that need bit-exact invariance under person reordering must pass the
// embeddings in a canonical (id-sorted) order; ties in max pooling go to the
// earliest entry.
Vec social_pool(const std::vector<Vec>& embeddings, Pooling pooling, PoolCache* cache = nullptr);

// Scatters dL/dS back onto the embeddings: max routes to the argmax entries,
// sum/average distribute uniformly.
void social_pool_backward(const Vec& d_pooled, Pooling pooling, const PoolCache& cache,
                          std::vector<Vec>& d_embeddings);

enum class RunMode { train, eval };

struct ContextMlpCache {
  Vec raw;
  Vec hidden_act;  // tanh output of the first layer
  Vec mask;        // inverted dropout mask (scale or 0), empty in eval mode
  Vec dropped;     // value fed into the second layer
};

// Two dense layers with tanh between them; inverted dropout after the first
// activation in train mode. Parameter names: "<prefix>.fc1.{W,b}",
// "<prefix>.fc2.{W,b}".
Vec context_mlp_forward(const Vec& raw, const ParamSet& params, const std::string& prefix,
                        RunMode mode, double dropout_p, Rng* rng,
                        ContextMlpCache* cache = nullptr);

void context_mlp_backward(const Vec& d_out, const ParamSet& params, const std::string& prefix,
                          const ContextMlpCache& cache, ParamSet& grads);

// Supplies the raw context feature vector for a scene.
class ContextProvider {
 public:
  virtual ~ContextProvider() = default;
  virtual Vec raw_for(const Scene& scene, std::size_t t_obs) const = 0;
  virtual std::size_t dim() const = 0;
};

// Always returns the zero vector (disables context influence).
std::unique_ptr<ContextProvider> zero_context_provider(std::size_t dim);

// Loads a feature file mapping scene_id to a fixed-dimension vector.
std::unique_ptr<ContextProvider> load_context_features(const std::string& path);

// Mean-pools the scene's embedded context_raw sequence over the observed
// frames.
std::unique_ptr<ContextProvider> scene_context_provider(std::size_t dim);

// "zero" | "scene" | path to a feature file.
std::unique_ptr<ContextProvider> make_context_provider(const std::string& spec, std::size_t dim);

// Feature-file round trip helpers.
std::map<std::string, Vec> parse_context_features(const std::string& text);
std::string serialize_context_features(const std::map<std::string, Vec>& features);
void save_context_features(const std::map<std::string, Vec>& features, const std::string& path);

}  // namespace smf
