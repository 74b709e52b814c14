#include "rnlu/features.hpp"

#include <algorithm>

#include "rnlu/error.hpp"

namespace rnlu {

uint32_t Vocabulary::add(const std::string& token) {
  auto [it, inserted] = index_.try_emplace(token, static_cast<uint32_t>(tokens_.size()));
  if (inserted) tokens_.push_back(token);
  return it->second;
}

std::optional<uint32_t> Vocabulary::lookup(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& token_lists) {
  if (token_lists.empty()) throw ValidationError("cannot build a vocabulary from no utterances");
  Vocabulary vocab;
  for (const auto& tokens : token_lists)
    for (const std::string& t : tokens) vocab.add(t);
  return vocab;
}

FeatureVector vectorize(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
  FeatureVector v;
  v.dimension = vocab.size();
  v.active.reserve(tokens.size());
  for (const std::string& t : tokens)
    if (auto idx = vocab.lookup(t)) v.active.push_back(*idx);
  std::sort(v.active.begin(), v.active.end());
  v.active.erase(std::unique(v.active.begin(), v.active.end()), v.active.end());
  return v;
}

}  // namespace rnlu
