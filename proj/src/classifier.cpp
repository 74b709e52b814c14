#include "rnlu/classifier.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "rnlu/error.hpp"
#include "rnlu/rng.hpp"

namespace rnlu {

namespace {

double margin_score(std::span<const double> w, const FeatureVector& x) {
  double s = w.back();  // always-on bias feature
  for (uint32_t j : x.active) s += w[j];
  return s;
}

}  // namespace

double hinge_objective(std::span<const double> w, const FeatureVector& x, double y,
                       double lambda) {
  double norm2 = 0.0;
  for (double c : w) norm2 += c * c;
  double slack = 1.0 - y * margin_score(w, x);
  return 0.5 * lambda * norm2 + (slack > 0.0 ? slack : 0.0);
}

std::vector<double> hinge_subgradient(std::span<const double> w, const FeatureVector& x, double y,
                                      double lambda) {
  std::vector<double> g(w.begin(), w.end());
  for (double& c : g) c *= lambda;
  if (y * margin_score(w, x) < 1.0) {
    for (uint32_t j : x.active) g[j] -= y;
    g.back() -= y;
  }
  return g;
}

Model train_model(const std::vector<TrainingExample>& data, const Vocabulary& vocab,
                  const Hyperparams& hp, std::string gazetteer_fingerprint) {
  if (data.empty()) throw ValidationError("cannot train on an empty data set");
  if (hp.lambda <= 0.0) throw ValidationError("lambda must be positive");
  if (hp.epochs < 1) throw ValidationError("epochs must be at least 1");

  Model model;
  model.vocabulary = vocab;
  model.gazetteer_fingerprint = std::move(gazetteer_fingerprint);

  std::unordered_map<std::string, size_t> category_index;
  std::vector<size_t> labels(data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    if (data[i].features.dimension != vocab.size())
      throw ValidationError("feature vector dimension does not match the vocabulary");
    auto [it, inserted] =
        category_index.try_emplace(data[i].category, model.categories.size());
    if (inserted) model.categories.push_back(data[i].category);
    labels[i] = it->second;
  }

  const size_t n_categories = model.categories.size();
  const size_t dim = vocab.size() + 1;
  model.weights.assign(n_categories, std::vector<double>(dim, 0.0));

  std::mt19937_64 rng(hp.seed);
  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  uint64_t t = 0;
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    deterministic_shuffle(order, rng);
    for (size_t i : order) {
      ++t;
      const FeatureVector& x = data[i].features;
      const double eta = 1.0 / (hp.lambda * static_cast<double>(t));
      const double decay = 1.0 - 1.0 / static_cast<double>(t);  // == 1 - eta*lambda
      for (size_t c = 0; c < n_categories; ++c) {
        std::vector<double>& w = model.weights[c];
        const double y = labels[i] == c ? 1.0 : -1.0;
        const bool violated = y * margin_score(w, x) < 1.0;
        for (double& wj : w) wj *= decay;
        if (violated) {
          const double step = eta * y;
          for (uint32_t j : x.active) w[j] += step;
          w.back() += step;
        }
      }
    }
  }
  return model;
}

ScoreVector score(const Model& model, const FeatureVector& v) {
  if (v.dimension != model.vocabulary.size())
    throw ValidationError("feature vector dimension does not match the model vocabulary");
  ScoreVector scores(model.categories.size());
  for (size_t c = 0; c < model.categories.size(); ++c)
    scores[c] = margin_score(model.weights[c], v);
  return scores;
}

std::pair<CategoryId, ScoreVector> predict(const Model& model, const FeatureVector& v) {
  ScoreVector scores = score(model, v);
  size_t best = 0;
  for (size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best] ||
        (scores[c] == scores[best] && model.categories[c] < model.categories[best]))
      best = c;
  }
  return {model.categories[best], std::move(scores)};
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr char kMagic[4] = {'R', 'N', 'L', 'U'};

const std::array<uint32_t, 256>& crc_table() {
  static const std::array<uint32_t, 256> table = [] {
    std::array<uint32_t, 256> t{};
    for (uint32_t i = 0; i < 256; ++i) {
      uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  return table;
}

uint32_t crc32(const std::string& data) {
  uint32_t c = 0xFFFFFFFFu;
  for (unsigned char byte : data) c = crc_table()[(c ^ byte) & 0xFF] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<uint64_t>(v)); }

void put_string(std::string& out, const std::string& s) {
  put_u32(out, static_cast<uint32_t>(s.size()));
  out += s;
}

class PayloadReader {
 public:
  explicit PayloadReader(const std::string& data) : data_(data) {}

  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }

  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  std::string str() {
    uint32_t len = u32();
    need(len);
    std::string s = data_.substr(pos_, len);
    pos_ += len;
    return s;
  }

  bool exhausted() const { return pos_ == data_.size(); }

 private:
  void need(size_t n) const {
    if (pos_ + n > data_.size()) throw FormatError("model file payload is truncated");
  }
  const std::string& data_;
  size_t pos_ = 0;
};

}  // namespace

size_t save_model(const Model& model, std::ostream& out) {
  std::string payload;
  put_u32(payload, model.vocabulary.size());
  for (const std::string& token : model.vocabulary.tokens()) put_string(payload, token);
  put_u32(payload, static_cast<uint32_t>(model.categories.size()));
  for (const CategoryId& c : model.categories) put_string(payload, c);
  put_string(payload, model.gazetteer_fingerprint);
  put_u64(payload, model.dimension());
  for (const auto& w : model.weights) {
    if (w.size() != model.dimension())
      throw ValidationError("model weight matrix has inconsistent dimensions");
    for (double v : w) put_f64(payload, v);
  }

  std::string header(kMagic, sizeof kMagic);
  put_u32(header, Model::kFormatVersion);
  put_u32(header, crc32(payload));
  put_u64(header, payload.size());

  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw FormatError("failed to write model file");
  return header.size() + payload.size();
}

Model load_model(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError("not a model file (bad magic)");

  char fixed[16];
  if (!in.read(fixed, 16)) throw FormatError("model file header is truncated");
  auto u32_at = [&](int off) {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<uint32_t>(static_cast<unsigned char>(fixed[off + i])) << (8 * i);
    return v;
  };
  uint32_t version = u32_at(0);
  if (version != Model::kFormatVersion)
    throw FormatError("unsupported model format version " + std::to_string(version));
  uint32_t expected_crc = u32_at(4);
  uint64_t payload_size = 0;
  for (int i = 0; i < 8; ++i)
    payload_size |= static_cast<uint64_t>(static_cast<unsigned char>(fixed[8 + i])) << (8 * i);

  std::string payload(payload_size, '\0');
  if (!in.read(payload.data(), static_cast<std::streamsize>(payload_size)))
    throw FormatError("model file is truncated");
  if (crc32(payload) != expected_crc)
    throw FormatError("model file checksum mismatch (corrupted file)");

  PayloadReader reader(payload);
  Model model;
  uint32_t vocab_size = reader.u32();
  for (uint32_t i = 0; i < vocab_size; ++i) model.vocabulary.add(reader.str());
  if (model.vocabulary.size() != vocab_size)
    throw FormatError("model vocabulary contains duplicate tokens");
  uint32_t n_categories = reader.u32();
  if (n_categories == 0) throw FormatError("model has no categories");
  for (uint32_t i = 0; i < n_categories; ++i) model.categories.push_back(reader.str());
  model.gazetteer_fingerprint = reader.str();
  uint64_t dim = reader.u64();
  if (dim != uint64_t(vocab_size) + 1) throw FormatError("model dimension mismatch");
  model.weights.assign(n_categories, std::vector<double>(dim));
  for (auto& w : model.weights)
    for (double& v : w) {
      v = reader.f64();
      if (!std::isfinite(v)) throw FormatError("model contains non-finite weights");
    }
  if (!reader.exhausted()) throw FormatError("model file has trailing payload bytes");
  return model;
}

void save_model_file(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  save_model(model, out);
  out.flush();
  if (!out) throw FormatError("failed to write '" + path + "'");
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open model file '" + path + "'");
  return load_model(in);
}

}  // namespace rnlu
