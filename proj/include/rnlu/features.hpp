#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace rnlu {

// Token -> feature index bijection, built from the training utterances only.
// Indices follow first occurrence order, which keeps model files reproducible.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Returns the token's index, inserting it if new.
  uint32_t add(const std::string& token);

  std::optional<uint32_t> lookup(const std::string& token) const;
  const std::string& token_at(uint32_t index) const { return tokens_[index]; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  uint32_t size() const { return static_cast<uint32_t>(tokens_.size()); }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::unordered_map<std::string, uint32_t> index_;
  std::vector<std::string> tokens_;
};

// Sparse binary unigram vector: sorted unique indices of present tokens.
struct FeatureVector {
  std::vector<uint32_t> active;
  uint32_t dimension = 0;
  bool operator==(const FeatureVector&) const = default;
};

// Vocabulary over all distinct tokens of the training utterances. Throws
// ValidationError on an empty training set.
Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& token_lists);

// Binary presence vector; out-of-vocabulary tokens are dropped.
FeatureVector vectorize(const std::vector<std::string>& tokens, const Vocabulary& vocab);

}  // namespace rnlu
