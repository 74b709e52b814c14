#include "rnlu/gazetteer.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>

#include "rnlu/error.hpp"
#include "rnlu/text.hpp"

namespace rnlu {

namespace {

// Pattern keys: the surface terms re-tokenized and case-folded, so dictionary
// entries and query tokens go through the same normalization.
std::vector<std::string> pattern_keys(const GazetteerEntry& entry) {
  std::vector<std::string> keys;
  for (const std::string& term : entry.surface)
    for (const std::string& tok : tokenize_preserving(term)) keys.push_back(fold_case(tok));
  return keys;
}

}  // namespace

Automaton::Automaton(const std::vector<GazetteerEntry>& entries) : entries_(entries) {
  nodes_.emplace_back();  // root
  pattern_length_.resize(entries_.size(), 0);

  for (size_t id = 0; id < entries_.size(); ++id) {
    const GazetteerEntry& entry = entries_[id];
    std::vector<std::string> keys = pattern_keys(entry);
    if (keys.empty())
      throw ValidationError("dictionary surface for tag '" + entry.tag +
                            "' contains no matchable words");
    tags_.insert(entry.tag);
    pattern_length_[id] = keys.size();
    int32_t state = 0;
    for (const std::string& key : keys) {
      auto [it, inserted] = symbols_.try_emplace(key, static_cast<int32_t>(symbols_.size()));
      int32_t sym = it->second;
      auto found = nodes_[state].next.find(sym);
      if (found == nodes_[state].next.end()) {
        nodes_.emplace_back();
        found = nodes_[state].next.emplace(sym, static_cast<int32_t>(nodes_.size() - 1)).first;
      }
      state = found->second;
    }
    nodes_[state].out.push_back(static_cast<int32_t>(id));
  }

  // BFS failure links; outputs are merged from the failure state, which is
  // already final because it sits at a strictly smaller depth.
  std::deque<int32_t> queue;
  for (auto& [sym, child] : nodes_[0].next) {
    nodes_[child].fail = 0;
    queue.push_back(child);
  }
  while (!queue.empty()) {
    int32_t state = queue.front();
    queue.pop_front();
    for (auto& [sym, child] : nodes_[state].next) {
      int32_t f = nodes_[state].fail;
      while (f != 0 && !nodes_[f].next.count(sym)) f = nodes_[f].fail;
      auto hop = nodes_[f].next.find(sym);
      nodes_[child].fail = hop != nodes_[f].next.end() ? hop->second : 0;
      const auto& merged = nodes_[nodes_[child].fail].out;
      nodes_[child].out.insert(nodes_[child].out.end(), merged.begin(), merged.end());
      queue.push_back(child);
    }
  }
}

int32_t Automaton::symbol_of(const std::string& key) const {
  auto it = symbols_.find(key);
  return it == symbols_.end() ? -1 : it->second;
}

std::vector<EntityMatch> Automaton::find_matches(std::span<const std::string> tokens,
                                                 size_t* step_count) const {
  std::vector<EntityMatch> matches;
  if (entries_.empty()) return matches;

  struct RawHit {
    size_t start, end;
    int32_t id;
  };
  std::vector<RawHit> hits;

  int32_t state = 0;
  for (size_t i = 0; i < tokens.size(); ++i) {
    int32_t sym = symbol_of(fold_case(tokens[i]));
    if (step_count) ++*step_count;
    if (sym < 0) {
      state = 0;  // symbol unseen in any pattern: no state can extend
      continue;
    }
    for (;;) {
      auto it = nodes_[state].next.find(sym);
      if (it != nodes_[state].next.end()) {
        state = it->second;
        break;
      }
      if (state == 0) break;
      state = nodes_[state].fail;
      if (step_count) ++*step_count;
    }
    for (int32_t id : nodes_[state].out) {
      size_t len = pattern_length_[id];
      hits.push_back({i + 1 - len, i + 1, id});
    }
  }

  std::sort(hits.begin(), hits.end(), [](const RawHit& a, const RawHit& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end > b.end;  // longer first
    return a.id < b.id;                        // dictionary order
  });

  matches.reserve(hits.size());
  for (const RawHit& h : hits) {
    EntityMatch m;
    m.tag = entries_[h.id].tag;
    m.start = h.start;
    m.end = h.end;
    std::vector<std::string> span(tokens.begin() + h.start, tokens.begin() + h.end);
    m.surface = join_tokens(span);
    matches.push_back(std::move(m));
  }
  return matches;
}

std::string Automaton::fingerprint(const std::vector<GazetteerEntry>& entries) {
  // Order-independent: canonical lines, sorted, FNV-1a over the concatenation.
  std::vector<std::string> lines;
  lines.reserve(entries.size());
  for (const GazetteerEntry& e : entries) {
    std::string line = e.tag;
    for (const std::string& term : e.surface)
      for (const std::string& tok : tokenize_preserving(term)) line += "\x1f" + fold_case(tok);
    lines.push_back(std::move(line));
  }
  std::sort(lines.begin(), lines.end());
  uint64_t hash = 14695981039346656037ull;
  for (const std::string& line : lines) {
    for (char c : line) {
      hash ^= static_cast<unsigned char>(c);
      hash *= 1099511628211ull;
    }
    hash ^= 0x1e;
    hash *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::vector<EntityMatch> resolve_overlaps(std::vector<EntityMatch> matches) {
  std::vector<EntityMatch> kept;
  size_t last_end = 0;
  for (EntityMatch& m : matches) {
    if (kept.empty() || m.start >= last_end) {
      last_end = m.end;
      kept.push_back(std::move(m));
    }
  }
  return kept;
}

TaggedTokens apply_tags(std::span<const std::string> tokens,
                        std::span<const std::string> original_tokens,
                        const std::vector<EntityMatch>& matches,
                        const std::unordered_set<std::string>& reserved_tags) {
  TaggedTokens result;
  result.tokens.reserve(tokens.size());
  size_t next_match = 0;
  for (size_t i = 0; i < tokens.size();) {
    if (next_match < matches.size() && matches[next_match].start == i) {
      const EntityMatch& m = matches[next_match];
      std::vector<std::string> span(original_tokens.begin() + m.start,
                                    original_tokens.begin() + m.end);
      result.tokens.push_back(m.tag);
      result.bindings.emplace_back(m.tag, join_tokens(span));
      i = m.end;
      ++next_match;
    } else {
      // Reserved tags cannot be forged from raw text.
      if (reserved_tags.count(tokens[i]))
        result.tokens.push_back("^" + tokens[i]);
      else
        result.tokens.push_back(tokens[i]);
      ++i;
    }
  }
  return result;
}

}  // namespace rnlu
