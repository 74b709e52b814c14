#pragma once

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rnlu/classifier.hpp"
#include "rnlu/corpus.hpp"
#include "rnlu/gazetteer.hpp"

namespace rnlu {

// Result of running one utterance through NER + featurization + classifier.
struct Prediction {
  CategoryId category;
  ScoreVector scores;  // aligned with the model's category order
  std::vector<std::pair<std::string, std::string>> bindings;  // (tag, surface), left to right
  std::string tagged_utterance;
  double margin = 0.0;       // top1 - top2 score; 0 for a single-category model
  bool no_features = false;  // empty or all-OOV utterance: scores are biases only
};

// Instantiated answer template, e.g. WHO_ACTS_WITH_IN(Viggo Mortensen, ...).
struct LogicalForm {
  std::string predicate;
  std::vector<std::string> arguments;
  std::vector<std::string> unresolved;  // placeholders that found no binding, with '$'
  std::string render() const;
};

// Parsed answer template: PREDICATE(arg, ..., arg) where each arg is either a
// literal or a $TAG placeholder ($TAG2, $TAG3... select repeated bindings).
struct AnswerTemplate {
  struct Arg {
    bool is_placeholder = false;
    std::string text;     // literal text or the placeholder name without '$'
    std::string tag;      // placeholder base tag
    size_t ordinal = 1;   // 1-based occurrence of that tag
  };
  std::string predicate;
  std::vector<Arg> args;
};

// Returns nullopt when the answer is plain text. Throws ParseError when the
// answer is template-shaped (ALL_CAPS predicate + parentheses) but its
// arguments do not parse.
std::optional<AnswerTemplate> parse_template(const std::string& answer);

LogicalForm instantiate_logical_form(
    const std::string& template_text,
    const std::vector<std::pair<std::string, std::string>>& bindings);

// Trained NLU unit: classifier plus the optional NER automaton (present iff a
// dictionary was supplied at training time) and the answer table.
struct Pipeline {
  Model model;
  std::optional<Automaton> automaton;
  AnswerTable answers;
  std::string prefix = "agent";
};

// Full training flow: assign categories, NER-tag the training utterances when
// a dictionary is given, build the vocabulary, train the classifier and
// validate answer coverage. A supplied answer table replaces the corpus's
// embedded answers; otherwise the embedded ones are used.
Pipeline train_pipeline(const Corpus& corpus,
                        const std::vector<GazetteerEntry>* dictionary,
                        const AnswerTable* answers, const Hyperparams& hp,
                        const std::string& prefix = "agent",
                        std::vector<std::string>* warnings = nullptr);

// Rebuilds a pipeline around a loaded model. The dictionary must be present
// iff the model records a gazetteer fingerprint, and must hash to it.
Pipeline assemble_pipeline(Model model, const std::vector<GazetteerEntry>* dictionary,
                           AnswerTable answers, const std::string& prefix = "agent");

Prediction understand(const Pipeline& p, const std::string& utterance);

// Uniform seeded choice among the category's answers.
std::string select_answer(const Prediction& pred, const Pipeline& p, std::mt19937_64& rng);

// select_answer plus template instantiation: template answers come back as
// rendered logical forms, plain answers unchanged.
std::string respond(const Prediction& pred, const Pipeline& p, std::mt19937_64& rng);

}  // namespace rnlu
