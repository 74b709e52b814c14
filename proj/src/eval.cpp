#include "rnlu/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <unordered_map>

#include "rnlu/error.hpp"
#include "rnlu/pipeline.hpp"
#include "rnlu/rng.hpp"
#include "rnlu/text.hpp"

namespace rnlu {

namespace {

std::string format_two_decimals(double v) {
  char buf[32];
  snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Shortest decimal form that parses back to the same double.
std::string format_full(double v) {
  char buf[64];
  for (int precision = 15; precision <= 17; ++precision) {
    snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace

SplitConfig default_split_config() { return SplitConfig{}; }

EvalReport make_report(std::vector<double> fold_accuracy) {
  EvalReport report;
  report.fold_accuracy = std::move(fold_accuracy);
  double sum = 0.0;
  for (double a : report.fold_accuracy) sum += a;
  report.average =
      report.fold_accuracy.empty() ? 0.0 : sum / static_cast<double>(report.fold_accuracy.size());
  return report;
}

std::pair<std::vector<LabeledUtterance>, std::vector<LabeledUtterance>> stratified_split(
    const std::vector<LabeledUtterance>& labeled, double ratio, uint64_t seed) {
  if (labeled.empty()) throw ValidationError("cannot split an empty data set");
  if (!(ratio > 0.0 && ratio < 1.0)) throw ValidationError("split ratio must be in (0,1)");

  // Group by category, preserving first-occurrence order of categories.
  std::vector<CategoryId> order;
  std::unordered_map<CategoryId, std::vector<std::string>> groups;
  for (const auto& [utterance, category] : labeled) {
    auto [it, inserted] = groups.try_emplace(category);
    if (inserted) order.push_back(category);
    it->second.push_back(utterance);
  }

  std::mt19937_64 rng(seed);
  std::vector<LabeledUtterance> train, test;
  for (const CategoryId& category : order) {
    std::vector<std::string>& utterances = groups[category];
    deterministic_shuffle(utterances, rng);
    size_t k = utterances.size();
    size_t n_train = static_cast<size_t>(std::ceil(ratio * static_cast<double>(k)));
    n_train = std::min(std::max<size_t>(n_train, 1), k);
    for (size_t i = 0; i < k; ++i)
      (i < n_train ? train : test).emplace_back(utterances[i], category);
  }
  return {std::move(train), std::move(test)};
}

EvalReport run_folds(const Corpus& corpus, const std::vector<GazetteerEntry>* dictionary,
                     const Hyperparams& hp, const SplitConfig& cfg, const std::string& prefix) {
  if (cfg.folds < 1) throw ValidationError("folds must be at least 1");
  if (cfg.seeds.size() != static_cast<size_t>(cfg.folds))
    throw ValidationError("split config needs one seed per fold");

  auto labeled = assign_categories(corpus, prefix);
  std::unordered_map<CategoryId, size_t> interaction_of;
  for (size_t i = 0; i < corpus.interactions.size(); ++i)
    interaction_of[category_for_index(prefix, i)] = i;

  EvalReport report;
  for (int fold = 0; fold < cfg.folds; ++fold) {
    auto [train, test] = stratified_split(labeled, cfg.train_ratio, cfg.seeds[fold]);
    if (test.empty())
      throw ValidationError("fold " + std::to_string(fold + 1) +
                            " has an empty test set; use a larger corpus or more paraphrases");

    // Train-side sub-corpus keeps every interaction (each category retains at
    // least one utterance), so category ids line up with the full corpus.
    Corpus sub;
    sub.interactions.resize(corpus.interactions.size());
    for (size_t i = 0; i < corpus.interactions.size(); ++i)
      sub.interactions[i].answers = corpus.interactions[i].answers;
    for (const auto& [utterance, category] : train)
      sub.interactions[interaction_of.at(category)].utterances.push_back(utterance);

    Pipeline pipeline = train_pipeline(sub, dictionary, nullptr, hp, prefix);
    size_t correct = 0;
    for (const auto& [utterance, gold] : test) {
      Prediction pred = understand(pipeline, utterance);
      if (pred.category == gold) {
        ++correct;
      } else {
        report.misclassified.push_back({utterance, gold, pred.category});
      }
      ++report.confusion[{gold, pred.category}];
    }
    report.fold_accuracy.push_back(static_cast<double>(correct) /
                                   static_cast<double>(test.size()));
  }

  double sum = 0.0;
  for (double a : report.fold_accuracy) sum += a;
  report.average = sum / static_cast<double>(report.fold_accuracy.size());
  return report;
}

Corpus generate_synthetic_corpus(size_t categories, size_t paraphrases_per,
                                 size_t core_tokens_per, size_t distractor_vocab, uint64_t seed) {
  if (categories < 1 || paraphrases_per < 1 || core_tokens_per < 1)
    throw ValidationError("synthetic corpus counts must be at least 1");

  std::mt19937_64 rng(seed);
  Corpus corpus;
  corpus.interactions.reserve(categories);
  for (size_t c = 0; c < categories; ++c) {
    Interaction ia;
    for (size_t p = 0; p < paraphrases_per; ++p) {
      // One core token is always present; the rest appear with probability
      // 0.8, so paraphrases of one category share most of their words.
      std::vector<std::string> tokens;
      size_t forced = pick_index(rng, core_tokens_per);
      for (size_t j = 0; j < core_tokens_per; ++j)
        if (j == forced || pick_index(rng, 10) < 8)
          tokens.push_back("cat" + std::to_string(c) + "word" + std::to_string(j));
      if (distractor_vocab > 0) {
        size_t extra = 1 + pick_index(rng, 3);
        for (size_t j = 0; j < extra; ++j)
          tokens.push_back("filler" + std::to_string(pick_index(rng, distractor_vocab)));
      }
      deterministic_shuffle(tokens, rng);
      ia.utterances.push_back(join_tokens(tokens));
    }
    ia.answers.push_back("ans_" + std::to_string(c));
    corpus.interactions.push_back(std::move(ia));
  }
  return corpus;
}

std::string render_report_table(const EvalReport& report, const SplitConfig& cfg,
                                const std::string& corpus_name) {
  char ratio[32];
  snprintf(ratio, sizeof ratio, "%g/%g", cfg.train_ratio * 100.0,
           (1.0 - cfg.train_ratio) * 100.0);
  std::string out = "# stratified " + std::string(ratio) + " split, " +
                    std::to_string(report.fold_accuracy.size()) + " fold";
  if (report.fold_accuracy.size() != 1) out += "s";
  out += " (seeds ";
  for (size_t i = 0; i < cfg.seeds.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(cfg.seeds[i]);
  }
  out += ")\n";

  auto pad = [](std::string cell, size_t width) {
    if (cell.size() < width) cell.append(width - cell.size(), ' ');
    return cell;
  };
  size_t name_width = std::max<size_t>(corpus_name.size(), 6) + 2;
  out += pad("corpus", name_width);
  for (size_t i = 0; i < report.fold_accuracy.size(); ++i)
    out += pad("fold " + std::to_string(i + 1), 8);
  out += "average\n";
  out += pad(corpus_name, name_width);
  for (double a : report.fold_accuracy) out += pad(format_two_decimals(a), 8);
  out += format_two_decimals(report.average) + "\n";
  return out;
}

std::string render_report_kv(const EvalReport& report) {
  std::string out;
  for (size_t i = 0; i < report.fold_accuracy.size(); ++i)
    out += "fold_" + std::to_string(i + 1) + " " + format_full(report.fold_accuracy[i]) + "\n";
  out += "average " + format_full(report.average) + "\n";
  return out;
}

}  // namespace rnlu
