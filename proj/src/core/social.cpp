#include "core/social.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"

namespace smf {

Pooling parse_pooling(const std::string& name) {
  if (name == "max") return Pooling::max;
  if (name == "sum") return Pooling::sum;
  if (name == "average" || name == "avg") return Pooling::average;
  throw_usage("unknown pooling strategy '" + name + "' (expected max|sum|average)");
}

std::string pooling_name(Pooling pooling) {
  switch (pooling) {
    case Pooling::max: return "max";
    case Pooling::sum: return "sum";
    case Pooling::average: return "average";
  }
  return "?";
}

Vec social_pool(const std::vector<Vec>& embeddings, Pooling pooling, PoolCache* cache) {
  if (embeddings.empty()) throw_usage("social_pool: empty embedding set");
  const std::size_t dim = embeddings.front().size();
  for (const Vec& e : embeddings) {
    if (e.size() != dim) {
      throw_usage("social_pool: mixed embedding dimensions (" + std::to_string(e.size()) +
                  " vs " + std::to_string(dim) + ")");
    }
  }
  if (cache) {
    cache->count = embeddings.size();
    cache->argmax.assign(pooling == Pooling::max ? dim : 0, 0);
  }

  Vec pooled = embeddings.front();
  switch (pooling) {
    case Pooling::max:
      for (std::size_t p = 1; p < embeddings.size(); ++p) {
        for (std::size_t i = 0; i < dim; ++i) {
          if (embeddings[p][i] > pooled[i]) {  // strict: ties keep the earliest
            pooled[i] = embeddings[p][i];
            if (cache) cache->argmax[i] = p;
          }
        }
      }
      break;
    case Pooling::sum:
    case Pooling::average:
      for (std::size_t p = 1; p < embeddings.size(); ++p) {
        for (std::size_t i = 0; i < dim; ++i) pooled[i] += embeddings[p][i];
      }
      if (pooling == Pooling::average) {
        double inv = 1.0 / static_cast<double>(embeddings.size());
        for (double& v : pooled) v *= inv;
      }
      break;
  }
  return pooled;
}

void social_pool_backward(const Vec& d_pooled, Pooling pooling, const PoolCache& cache,
                          std::vector<Vec>& d_embeddings) {
  if (d_embeddings.size() != cache.count) {
    throw_usage("social_pool_backward: embedding count mismatch");
  }
  const std::size_t dim = d_pooled.size();
  switch (pooling) {
    case Pooling::max:
      for (std::size_t i = 0; i < dim; ++i) d_embeddings[cache.argmax[i]][i] += d_pooled[i];
      break;
    case Pooling::sum:
      for (Vec& d : d_embeddings) {
        for (std::size_t i = 0; i < dim; ++i) d[i] += d_pooled[i];
      }
      break;
    case Pooling::average: {
      double inv = 1.0 / static_cast<double>(cache.count);
      for (Vec& d : d_embeddings) {
        for (std::size_t i = 0; i < dim; ++i) d[i] += d_pooled[i] * inv;
      }
      break;
    }
  }
}

Vec context_mlp_forward(const Vec& raw, const ParamSet& params, const std::string& prefix,
                        RunMode mode, double dropout_p, Rng* rng, ContextMlpCache* cache) {
  if (!(dropout_p >= 0.0) || dropout_p >= 1.0) {
    throw_usage("dropout probability must lie in [0, 1)");
  }
  const Tensor& w1 = params.at(prefix + ".fc1.W");
  const Tensor& b1 = params.at(prefix + ".fc1.b");
  const Tensor& w2 = params.at(prefix + ".fc2.W");
  const Tensor& b2 = params.at(prefix + ".fc2.b");
  if (raw.size() != w1.cols()) {
    throw_usage("context MLP: raw feature dimension " + std::to_string(raw.size()) +
                " does not match fc1 " + shape_str(w1.shape()));
  }

  Vec hidden = b1.values();
  matvec_acc(w1, raw, hidden);
  for (double& v : hidden) v = std::tanh(v);

  Vec mask;
  Vec dropped = hidden;
  if (mode == RunMode::train && dropout_p > 0.0) {
    if (!rng) throw_usage("context MLP: train mode with dropout needs an rng");
    double keep_scale = 1.0 / (1.0 - dropout_p);
    mask.resize(hidden.size());
    for (std::size_t i = 0; i < hidden.size(); ++i) {
      mask[i] = rng->uniform() >= dropout_p ? keep_scale : 0.0;
      dropped[i] = hidden[i] * mask[i];
    }
  }

  Vec out = b2.values();
  matvec_acc(w2, dropped, out);

  if (cache) {
    cache->raw = raw;
    cache->hidden_act = std::move(hidden);
    cache->mask = std::move(mask);
    cache->dropped = std::move(dropped);
  }
  return out;
}

void context_mlp_backward(const Vec& d_out, const ParamSet& params, const std::string& prefix,
                          const ContextMlpCache& cache, ParamSet& grads) {
  const Tensor& w1 = params.at(prefix + ".fc1.W");
  const Tensor& w2 = params.at(prefix + ".fc2.W");

  outer_acc(d_out, cache.dropped, grads.at(prefix + ".fc2.W"));
  Tensor& gb2 = grads.at(prefix + ".fc2.b");
  for (std::size_t i = 0; i < d_out.size(); ++i) gb2[i] += d_out[i];

  Vec d_dropped(cache.dropped.size(), 0.0);
  matvec_t_acc(w2, d_out, d_dropped);
  if (!cache.mask.empty()) {
    for (std::size_t i = 0; i < d_dropped.size(); ++i) d_dropped[i] *= cache.mask[i];
  }
  Vec d_pre(cache.hidden_act.size());
  for (std::size_t i = 0; i < d_pre.size(); ++i) {
    d_pre[i] = d_dropped[i] * (1.0 - cache.hidden_act[i] * cache.hidden_act[i]);
  }
  outer_acc(d_pre, cache.raw, grads.at(prefix + ".fc1.W"));
  Tensor& gb1 = grads.at(prefix + ".fc1.b");
  for (std::size_t i = 0; i < d_pre.size(); ++i) gb1[i] += d_pre[i];
  (void)w1;
}

namespace {

class ZeroProvider : public ContextProvider {
 public:
  explicit ZeroProvider(std::size_t dim) : dim_(dim) {}
  Vec raw_for(const Scene&, std::size_t) const override { return Vec(dim_, 0.0); }
  std::size_t dim() const override { return dim_; }

 private:
  std::size_t dim_;
};

class FileProvider : public ContextProvider {
 public:
  FileProvider(std::map<std::string, Vec> features, std::size_t dim)
      : features_(std::move(features)), dim_(dim) {}

  Vec raw_for(const Scene& scene, std::size_t) const override {
    auto it = features_.find(scene.scene_id);
    if (it == features_.end()) {
      throw_data("no context features for scene '" + scene.scene_id + "'");
    }
    return it->second;
  }
  std::size_t dim() const override { return dim_; }

 private:
  std::map<std::string, Vec> features_;
  std::size_t dim_;
};

class SceneProvider : public ContextProvider {
 public:
  explicit SceneProvider(std::size_t dim) : dim_(dim) {}

  Vec raw_for(const Scene& scene, std::size_t t_obs) const override {
    if (!scene.context_raw) {
      throw_data("scene '" + scene.scene_id + "' carries no embedded context features");
    }
    const auto& raw = *scene.context_raw;
    std::size_t frames = std::min<std::size_t>(t_obs, raw.size());
    if (frames == 0) throw_data("scene '" + scene.scene_id + "': no observed context frames");
    if (raw.front().size() != dim_) {
      throw_data("scene '" + scene.scene_id + "': context dimension " +
                 std::to_string(raw.front().size()) + ", expected " + std::to_string(dim_));
    }
    Vec mean(dim_, 0.0);
    for (std::size_t t = 0; t < frames; ++t) {
      for (std::size_t i = 0; i < dim_; ++i) mean[i] += raw[t][i];
    }
    double inv = 1.0 / static_cast<double>(frames);
    for (double& v : mean) v *= inv;
    return mean;
  }
  std::size_t dim() const override { return dim_; }

 private:
  std::size_t dim_;
};

}  // namespace

std::unique_ptr<ContextProvider> zero_context_provider(std::size_t dim) {
  return std::make_unique<ZeroProvider>(dim);
}

std::unique_ptr<ContextProvider> scene_context_provider(std::size_t dim) {
  return std::make_unique<SceneProvider>(dim);
}

std::map<std::string, Vec> parse_context_features(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw_data(std::string("context features: invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.empty()) {
    throw_data("context features: expected a non-empty object of scene_id -> numbers");
  }
  std::map<std::string, Vec> features;
  std::size_t dim = 0;
  for (const auto& [id, value] : doc.items()) {
    if (!value.is_array() || value.empty()) {
      throw_data("context features: entry '" + id + "' must be a non-empty array");
    }
    Vec v;
    for (const auto& num : value) {
      if (!num.is_number()) throw_data("context features: entry '" + id + "' holds a non-number");
      v.push_back(num.get<double>());
      if (!std::isfinite(v.back())) {
        throw_data("context features: entry '" + id + "' holds a non-finite value");
      }
    }
    if (dim == 0) {
      dim = v.size();
    } else if (v.size() != dim) {
      throw_data("context features: entry '" + id + "' has dimension " +
                 std::to_string(v.size()) + ", expected " + std::to_string(dim));
    }
    features.emplace(id, std::move(v));
  }
  return features;
}

std::string serialize_context_features(const std::map<std::string, Vec>& features) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [id, v] : features) doc[id] = v;
  return doc.dump(1) + "\n";
}

void save_context_features(const std::map<std::string, Vec>& features, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_data("cannot write context feature file '" + path + "'");
  out << serialize_context_features(features);
}

std::unique_ptr<ContextProvider> load_context_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("cannot open context feature file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  auto features = parse_context_features(buf.str());
  std::size_t dim = features.begin()->second.size();
  return std::make_unique<FileProvider>(std::move(features), dim);
}

std::unique_ptr<ContextProvider> make_context_provider(const std::string& spec, std::size_t dim) {
  if (spec == "zero" || spec.empty()) return zero_context_provider(dim);
  if (spec == "scene") return scene_context_provider(dim);
  auto provider = load_context_features(spec);
  if (provider->dim() != dim) {
    throw_usage("context feature file '" + spec + "' has dimension " +
                std::to_string(provider->dim()) + ", expected " + std::to_string(dim));
  }
  return provider;
}

}  // namespace smf
