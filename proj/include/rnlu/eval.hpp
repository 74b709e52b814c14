#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rnlu/classifier.hpp"
#include "rnlu/corpus.hpp"

namespace rnlu {

// Repeated random split protocol: train_ratio to train, the rest to test,
// once per fold seed.
struct SplitConfig {
  double train_ratio = 0.7;
  int folds = 5;
  std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};
};

SplitConfig default_split_config();

struct Misclassification {
  std::string utterance;
  CategoryId gold;
  CategoryId predicted;
};

struct EvalReport {
  std::vector<double> fold_accuracy;
  double average = 0.0;
  std::map<std::pair<CategoryId, CategoryId>, size_t> confusion;  // (gold, predicted) -> count
  std::vector<Misclassification> misclassified;
};

// Assembles a report from per-fold accuracies (average = arithmetic mean).
EvalReport make_report(std::vector<double> fold_accuracy);

using LabeledUtterance = std::pair<std::string, CategoryId>;

// Seeded per-category split: within each category the utterances are
// shuffled, ceil(ratio*k) go to train and the remainder to test. A category
// with a single utterance goes entirely to train.
std::pair<std::vector<LabeledUtterance>, std::vector<LabeledUtterance>> stratified_split(
    const std::vector<LabeledUtterance>& labeled, double ratio, uint64_t seed);

// One pipeline per fold, trained on the fold's train side and scored on its
// test side; accuracy is exact category match.
EvalReport run_folds(const Corpus& corpus, const std::vector<GazetteerEntry>* dictionary,
                     const Hyperparams& hp, const SplitConfig& cfg,
                     const std::string& prefix = "agent");

// Desk-scale stand-in corpus: each category owns private "core" tokens and
// each paraphrase mixes a random non-empty subset of them with shared
// distractor tokens. Deterministic per seed.
Corpus generate_synthetic_corpus(size_t categories, size_t paraphrases_per,
                                 size_t core_tokens_per, size_t distractor_vocab, uint64_t seed);

// Text table in the fold-columns + average layout.
std::string render_report_table(const EvalReport& report, const SplitConfig& cfg,
                                const std::string& corpus_name);

// Machine-readable key-value lines: fold_i <accuracy> per fold, then average;
// full precision.
std::string render_report_kv(const EvalReport& report);

}  // namespace rnlu
