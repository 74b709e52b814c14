#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rnlu {

// Category label automatically assigned to an interaction, e.g. "agent_7".
using CategoryId = std::string;

// One training interaction: a group of utterances that paraphrase each other,
// paired with the answers any of them may receive.
struct Interaction {
  std::vector<std::string> utterances;
  std::vector<std::string> answers;
  bool operator==(const Interaction&) const = default;
};

struct Corpus {
  std::vector<Interaction> interactions;
  size_t utterance_count() const;
  bool operator==(const Corpus&) const = default;
};

// One dictionary row: TAG w1 ... wn. The tag is uppercased on parse; the
// surface keeps its original spelling.
struct GazetteerEntry {
  std::string tag;
  std::vector<std::string> surface;
  bool operator==(const GazetteerEntry&) const = default;
};

// category -> answers, from the optional "category answer" file.
struct AnswerTable {
  std::map<CategoryId, std::vector<std::string>> rows;
  bool operator==(const AnswerTable&) const = default;
};

// Parses the training utterances file. Root <corpus> holds <interaction>
// elements, each with <utterances>/<u>+ and <answers>/<a>+. Utterance and
// answer text is whitespace-normalized. Throws ParseError (with line number)
// on malformed XML and ValidationError on structural violations.
Corpus parse_corpus(const std::string& xml_text);

// Canonical writer; parse_corpus(corpus_to_xml(c)) == c.
std::string corpus_to_xml(const Corpus& corpus);

// Parses the dictionary file: one "TAG w1 ... wn" per line, '#' comments and
// blank lines ignored, duplicate entries collapsed.
std::vector<GazetteerEntry> parse_dictionary(const std::string& text);

// Parses the answers file: one "category answer" per line, split on the first
// whitespace run. Categories are validated against the corpus (prefix_index).
AnswerTable parse_answers(const std::string& text, const Corpus& corpus,
                          const std::string& prefix = "agent");

// Same format, validated against an explicit category list (used when a
// trained model stands in for the corpus).
AnswerTable parse_answers_for(const std::string& text,
                              const std::vector<CategoryId>& valid_categories);

CategoryId category_for_index(const std::string& prefix, size_t index);

// Pairs every utterance with the category of its interaction: interaction i
// gets "<prefix>_i".
std::vector<std::pair<std::string, CategoryId>> assign_categories(
    const Corpus& corpus, const std::string& prefix = "agent");

}  // namespace rnlu
