#include "core/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/metrics.hpp"

namespace smf {

namespace {

constexpr char kMagic[8] = {'S', 'M', 'F', 'C', 'K', 'P', 'T', '\n'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  put_u64(out, bits);
}

class Reader {
 public:
  Reader(const std::string& data, const std::string& path) : data_(data), path_(path) {}

  std::uint32_t u32() { return static_cast<std::uint32_t>(u64_bytes(4)); }
  std::uint64_t u64() { return u64_bytes(8); }

  double f64() {
    std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }

  std::string bytes(std::size_t n) {
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  void expect_end() const {
    if (pos_ != data_.size()) {
      throw_data("checkpoint '" + path_ + "': trailing bytes after the last record");
    }
  }

 private:
  std::uint64_t u64_bytes(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  void need(std::size_t n) const {
    if (pos_ + n > data_.size()) {
      throw_data("checkpoint '" + path_ + "': truncated file");
    }
  }

  const std::string& data_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string config_to_text(const ModelConfig& config) {
  nlohmann::ordered_json doc;
  doc["t_obs"] = config.t_obs;
  doc["t_pred"] = config.t_pred;
  doc["joints"] = config.joints;
  doc["dims"] = config.dims;
  doc["hidden"] = config.hidden;
  doc["context_out"] = config.context_out;
  doc["context_raw"] = config.context_raw;
  doc["pooling"] = pooling_name(config.pooling);
  doc["variant"] = variant_name(config.variant);
  doc["motion_rule"] = motion_rule_name(config.motion_rule);
  doc["dropout_p"] = config.dropout_p;
  doc["lr"] = config.lr;
  doc["lr_decay"] = config.lr_decay;
  doc["batch_size"] = config.batch_size;
  doc["max_epochs"] = config.max_epochs;
  doc["patience"] = config.patience;
  doc["seed"] = config.seed;
  return doc.dump();
}

ModelConfig config_from_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw_data(std::string("model config: invalid JSON: ") + e.what());
  }
  ModelConfig config;
  try {
    config.t_obs = doc.at("t_obs").get<std::size_t>();
    config.t_pred = doc.at("t_pred").get<std::size_t>();
    config.joints = doc.at("joints").get<std::size_t>();
    config.dims = doc.at("dims").get<std::size_t>();
    config.hidden = doc.at("hidden").get<std::size_t>();
    config.context_out = doc.at("context_out").get<std::size_t>();
    config.context_raw = doc.at("context_raw").get<std::size_t>();
    config.pooling = parse_pooling(doc.at("pooling").get<std::string>());
    config.variant = parse_variant(doc.at("variant").get<std::string>());
    config.motion_rule = parse_motion_rule(doc.at("motion_rule").get<std::string>());
    config.dropout_p = doc.at("dropout_p").get<double>();
    config.lr = doc.at("lr").get<double>();
    config.lr_decay = doc.at("lr_decay").get<double>();
    config.batch_size = doc.at("batch_size").get<std::size_t>();
    config.max_epochs = doc.at("max_epochs").get<std::size_t>();
    config.patience = doc.at("patience").get<std::size_t>();
    config.seed = doc.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw_data(std::string("model config: ") + e.what());
  }
  config.validate();
  return config;
}

std::string Checkpoint::history_csv() const {
  std::string text = "epoch,train_loss,val_loss,lr\n";
  for (const EpochRecord& rec : history) {
    text += std::to_string(rec.epoch) + "," + format_double(rec.train_loss) + "," +
            format_double(rec.val_loss) + "," + format_double(rec.lr) + "\n";
  }
  return text;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put_u32(out, kVersion);

  std::string config_text = config_to_text(checkpoint.config);
  put_u32(out, static_cast<std::uint32_t>(config_text.size()));
  out += config_text;

  put_u32(out, static_cast<std::uint32_t>(checkpoint.history.size()));
  for (const EpochRecord& rec : checkpoint.history) {
    put_u32(out, rec.epoch);
    put_f64(out, rec.train_loss);
    put_f64(out, rec.val_loss);
    put_f64(out, rec.lr);
  }
  put_u32(out, checkpoint.best_epoch);

  put_u32(out, static_cast<std::uint32_t>(checkpoint.params.size()));
  for (const std::string& name : checkpoint.params.names()) {
    const Tensor& t = checkpoint.params.at(name);
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put_u32(out, static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.shape()) put_u64(out, d);
    for (double v : t.values()) put_f64(out, v);
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw_data("cannot write checkpoint '" + path + "'");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw_data("failed writing checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw_data("cannot open checkpoint '" + path + "'");
  std::ostringstream buf;
  buf << file.rdbuf();
  std::string data = buf.str();

  Reader reader(data, path);
  std::string magic = reader.bytes(sizeof(kMagic));
  if (std::memcmp(magic.data(), kMagic, sizeof(kMagic)) != 0) {
    throw_data("checkpoint '" + path + "': bad magic, not a checkpoint file");
  }
  std::uint32_t version = reader.u32();
  if (version != kVersion) {
    throw_data("checkpoint '" + path + "': format version " + std::to_string(version) +
               ", expected " + std::to_string(kVersion));
  }

  Checkpoint checkpoint;
  std::uint32_t config_len = reader.u32();
  checkpoint.config = config_from_text(reader.bytes(config_len));

  std::uint32_t epochs = reader.u32();
  for (std::uint32_t i = 0; i < epochs; ++i) {
    EpochRecord rec;
    rec.epoch = reader.u32();
    rec.train_loss = reader.f64();
    rec.val_loss = reader.f64();
    rec.lr = reader.f64();
    checkpoint.history.push_back(rec);
  }
  checkpoint.best_epoch = reader.u32();

  auto inventory = param_inventory(checkpoint.config);
  std::uint32_t count = reader.u32();
  if (count != inventory.size()) {
    throw_data("checkpoint '" + path + "': holds " + std::to_string(count) +
               " parameters, config expects " + std::to_string(inventory.size()));
  }
  for (const auto& [expected_name, expected_shape] : inventory) {
    std::uint32_t name_len = reader.u32();
    std::string name = reader.bytes(name_len);
    if (name != expected_name) {
      throw_data("checkpoint '" + path + "': parameter '" + name + "' where '" + expected_name +
                 "' was expected");
    }
    std::uint32_t rank = reader.u32();
    std::vector<std::size_t> shape(rank);
    for (std::uint32_t d = 0; d < rank; ++d) shape[d] = static_cast<std::size_t>(reader.u64());
    if (shape != expected_shape) {
      throw_data("checkpoint '" + path + "': parameter '" + name + "' has shape " +
                 shape_str(shape) + ", expected " + shape_str(expected_shape));
    }
    std::size_t volume = 1;
    for (std::size_t d : shape) volume *= d;
    std::vector<double> values(volume);
    for (std::size_t i = 0; i < volume; ++i) values[i] = reader.f64();
    checkpoint.params.add(name, Tensor::from_data(shape, std::move(values)));
  }
  reader.expect_end();
  return checkpoint;
}

}  // namespace smf
