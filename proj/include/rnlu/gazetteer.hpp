#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rnlu/corpus.hpp"

namespace rnlu {

// One dictionary hit over a token stream. Spans are half-open token indices;
// surface is the joined input tokens of the span.
struct EntityMatch {
  std::string tag;
  size_t start = 0;
  size_t end = 0;
  std::string surface;
  bool operator==(const EntityMatch&) const = default;
};

// Aho-Corasick automaton over a token alphabet: one symbol per normalized
// token, so dictionary surfaces match whole words only. Patterns and query
// tokens are compared case-insensitively; build once, match from any thread.
class Automaton {
 public:
  Automaton() { nodes_.emplace_back(); }
  explicit Automaton(const std::vector<GazetteerEntry>& entries);

  // All occurrences of all patterns, sorted by (start, longer first, entry
  // order). Tokens are folded to match keys internally. step_count, when
  // given, accumulates goto/failure steps for the linear-time check.
  std::vector<EntityMatch> find_matches(std::span<const std::string> tokens,
                                        size_t* step_count = nullptr) const;

  const std::vector<GazetteerEntry>& entries() const { return entries_; }
  const std::unordered_set<std::string>& tags() const { return tags_; }
  bool has_patterns() const { return !entries_.empty(); }

  // Canonical content hash of the entry set; stored in model files so the
  // inference side can verify it loads the same dictionary.
  static std::string fingerprint(const std::vector<GazetteerEntry>& entries);

 private:
  struct Node {
    std::unordered_map<int32_t, int32_t> next;  // symbol -> state
    int32_t fail = 0;
    std::vector<int32_t> out;  // pattern ids ending here (failure-merged)
  };

  int32_t symbol_of(const std::string& key) const;

  std::vector<GazetteerEntry> entries_;
  std::unordered_set<std::string> tags_;
  std::unordered_map<std::string, int32_t> symbols_;
  std::vector<Node> nodes_;
  std::vector<size_t> pattern_length_;  // per pattern id (== entry index)
};

// Leftmost-longest arbitration: scan matches sorted by (start, longer first)
// and keep each one that does not overlap a previously kept match.
std::vector<EntityMatch> resolve_overlaps(std::vector<EntityMatch> matches);

struct TaggedTokens {
  std::vector<std::string> tokens;
  std::vector<std::pair<std::string, std::string>> bindings;  // (tag, original surface)
};

// Collapses each matched span to its tag token and records bindings with the
// original (pre-normalization) surface. Unmatched tokens pass through, except
// that a raw token equal to a reserved tag is escaped with '^' so user input
// cannot forge entity tags.
TaggedTokens apply_tags(std::span<const std::string> tokens,
                        std::span<const std::string> original_tokens,
                        const std::vector<EntityMatch>& matches,
                        const std::unordered_set<std::string>& reserved_tags);

}  // namespace rnlu
