// Command-line surface for the NLU toolkit: train/predict/eval/chat/ner.
// Results go to stdout as tab-separated fields; diagnostics go to stderr.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rnlu/classifier.hpp"
#include "rnlu/corpus.hpp"
#include "rnlu/error.hpp"
#include "rnlu/eval.hpp"
#include "rnlu/gazetteer.hpp"
#include "rnlu/pipeline.hpp"
#include "rnlu/text.hpp"

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  if (!fs::exists(path)) throw rnlu::Error("no such file: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rnlu::Error("cannot read file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string format_double(double v) {
  char buf[64];
  snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string render_bindings(const std::vector<std::pair<std::string, std::string>>& bindings) {
  if (bindings.empty()) return "-";
  std::string out;
  for (size_t i = 0; i < bindings.size(); ++i) {
    if (i) out += "; ";
    out += bindings[i].first + "=" + bindings[i].second;
  }
  return out;
}

struct CliConfig {
  std::string corpus_path;
  std::string dictionary_path;
  std::string answers_path;
  std::string model_path;
  std::string report_path = "eval_report.txt";
  std::string prefix = "agent";
  uint64_t seed = 0;
  double train_ratio = 0.7;
  int folds = 5;
  rnlu::Hyperparams hp;
};

std::optional<std::vector<rnlu::GazetteerEntry>> load_dictionary(const CliConfig& cfg) {
  if (cfg.dictionary_path.empty()) return std::nullopt;
  return rnlu::parse_dictionary(read_file(cfg.dictionary_path));
}

// Answers for a loaded model: the --answers file when given, otherwise the
// corpus's embedded answers.
rnlu::AnswerTable answers_for_model(const CliConfig& cfg, const rnlu::Model& model) {
  if (!cfg.answers_path.empty())
    return rnlu::parse_answers_for(read_file(cfg.answers_path), model.categories);
  if (!cfg.corpus_path.empty()) {
    rnlu::Corpus corpus = rnlu::parse_corpus(read_file(cfg.corpus_path));
    rnlu::AnswerTable table;
    for (size_t i = 0; i < corpus.interactions.size(); ++i)
      table.rows[rnlu::category_for_index(cfg.prefix, i)] = corpus.interactions[i].answers;
    return table;
  }
  throw rnlu::Error("answers are needed: pass --answers or --corpus");
}

rnlu::Pipeline load_pipeline(const CliConfig& cfg) {
  rnlu::Model model = rnlu::load_model_file(cfg.model_path);
  auto dictionary = load_dictionary(cfg);
  rnlu::AnswerTable answers = answers_for_model(cfg, model);
  return rnlu::assemble_pipeline(std::move(model), dictionary ? &*dictionary : nullptr,
                                 std::move(answers), cfg.prefix);
}

int cmd_train(const CliConfig& cfg) {
  rnlu::Corpus corpus = rnlu::parse_corpus(read_file(cfg.corpus_path));
  auto dictionary = load_dictionary(cfg);
  std::optional<rnlu::AnswerTable> answers;
  if (!cfg.answers_path.empty())
    answers = rnlu::parse_answers(read_file(cfg.answers_path), corpus, cfg.prefix);

  rnlu::Hyperparams hp = cfg.hp;
  hp.seed = cfg.seed;
  std::vector<std::string> warnings;
  rnlu::Pipeline pipeline =
      rnlu::train_pipeline(corpus, dictionary ? &*dictionary : nullptr,
                           answers ? &*answers : nullptr, hp, cfg.prefix, &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";

  rnlu::save_model_file(pipeline.model, cfg.model_path);

  size_t correct = 0, total = 0;
  for (const auto& [utterance, category] : rnlu::assign_categories(corpus, cfg.prefix)) {
    if (rnlu::understand(pipeline, utterance).category == category) ++correct;
    ++total;
  }
  std::cout << "vocabulary_size\t" << pipeline.model.vocabulary.size() << "\n"
            << "categories\t" << pipeline.model.categories.size() << "\n"
            << "training_accuracy\t"
            << format_double(static_cast<double>(correct) / static_cast<double>(total)) << "\n";
  return 0;
}

void print_prediction(const rnlu::Prediction& pred, const std::string& answer) {
  std::cout << pred.category << "\t" << format_double(pred.margin) << "\t"
            << render_bindings(pred.bindings) << "\t" << answer << "\n";
}

int cmd_predict(const CliConfig& cfg, const std::string& utterance) {
  rnlu::Pipeline pipeline = load_pipeline(cfg);
  std::mt19937_64 rng(cfg.seed);
  rnlu::Prediction pred = rnlu::understand(pipeline, utterance);
  if (pred.no_features)
    std::cerr << "warning: utterance has no features known to the model; scores are biases only\n";
  print_prediction(pred, rnlu::respond(pred, pipeline, rng));
  return 0;
}

int cmd_eval(const CliConfig& cfg) {
  rnlu::Corpus corpus = rnlu::parse_corpus(read_file(cfg.corpus_path));
  auto dictionary = load_dictionary(cfg);

  rnlu::SplitConfig split;
  split.train_ratio = cfg.train_ratio;
  split.folds = cfg.folds;
  split.seeds.clear();
  for (int i = 1; i <= cfg.folds; ++i) split.seeds.push_back(cfg.seed + static_cast<uint64_t>(i));

  rnlu::Hyperparams hp = cfg.hp;
  hp.seed = cfg.seed;
  rnlu::EvalReport report =
      rnlu::run_folds(corpus, dictionary ? &*dictionary : nullptr, hp, split, cfg.prefix);

  std::cout << rnlu::render_report_table(report, split, fs::path(cfg.corpus_path).stem().string());
  std::ofstream out(cfg.report_path, std::ios::binary);
  if (!out) throw rnlu::Error("cannot write report file: " + cfg.report_path);
  out << rnlu::render_report_kv(report);

  if (!report.misclassified.empty()) {
    std::cerr << "# misclassified (" << report.misclassified.size() << ")\n";
    for (const auto& m : report.misclassified)
      std::cerr << m.gold << "\t" << m.predicted << "\t" << m.utterance << "\n";
  }
  return 0;
}

int cmd_chat(const CliConfig& cfg) {
  rnlu::Pipeline pipeline = load_pipeline(cfg);
  std::mt19937_64 rng(cfg.seed);
  bool debug = false;
  std::string line;
  std::cerr << "chat session (type :quit to leave, :debug to toggle diagnostics)\n";
  for (;;) {
    std::cerr << "> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    if (line == ":quit") break;
    if (line == ":debug") {
      debug = !debug;
      std::cerr << "debug " << (debug ? "on" : "off") << "\n";
      continue;
    }
    if (!line.empty() && line[0] == ':') {
      std::cerr << "warning: unknown command '" << line << "'\n";
      continue;
    }
    try {
      rnlu::Prediction pred = rnlu::understand(pipeline, line);
      if (pred.no_features)
        std::cerr << "warning: utterance has no features known to the model; scores are biases only\n";
      if (debug) {
        std::string scores;
        for (size_t i = 0; i < pred.scores.size(); ++i) {
          if (i) scores += ",";
          scores += format_double(pred.scores[i]);
        }
        std::cout << "debug\t" << pred.category << "\t" << format_double(pred.margin) << "\t"
                  << render_bindings(pred.bindings) << "\t" << scores << "\n";
      }
      std::cout << rnlu::respond(pred, pipeline, rng) << "\n";
    } catch (const rnlu::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
    }
  }
  return 0;
}

int cmd_ner(const CliConfig& cfg, const std::string& text) {
  auto entries = rnlu::parse_dictionary(read_file(cfg.dictionary_path));
  rnlu::Automaton automaton(entries);

  std::vector<std::string> original = rnlu::tokenize_preserving(text);
  std::vector<std::string> normalized(original.size());
  for (size_t i = 0; i < original.size(); ++i) normalized[i] = rnlu::normalize_token(original[i]);

  auto kept = rnlu::resolve_overlaps(automaton.find_matches(normalized));
  rnlu::TaggedTokens tagged = rnlu::apply_tags(normalized, original, kept, automaton.tags());

  std::cout << rnlu::join_tokens(tagged.tokens) << "\n";
  for (size_t i = 0; i < kept.size(); ++i)
    std::cout << kept[i].tag << "\t" << tagged.bindings[i].second << "\t" << kept[i].start << "\t"
              << kept[i].end << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trainable NLU toolkit: intent classification with optional gazetteer NER"};
  app.require_subcommand(1);

  CliConfig cfg;
  std::string utterance, text;

  auto add_hyperparams = [&](CLI::App* cmd) {
    cmd->add_option("--lambda", cfg.hp.lambda, "L2 regularization strength")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--epochs", cfg.hp.epochs, "training epochs")->check(CLI::PositiveNumber);
  };

  CLI::App* train = app.add_subcommand("train", "train a model from a corpus file");
  train->add_option("--corpus", cfg.corpus_path, "training utterances XML")->required();
  train->add_option("--model", cfg.model_path, "output model path")->required();
  train->add_option("--dictionary", cfg.dictionary_path, "gazetteer dictionary (enables NER)");
  train->add_option("--answers", cfg.answers_path, "category/answer file (overrides embedded)");
  train->add_option("--prefix", cfg.prefix, "category prefix");
  train->add_option("--seed", cfg.seed, "training seed");
  add_hyperparams(train);

  CLI::App* predict = app.add_subcommand("predict", "classify one utterance");
  predict->add_option("--model", cfg.model_path, "model path")->required();
  predict->add_option("--corpus", cfg.corpus_path, "corpus (for embedded answers)");
  predict->add_option("--answers", cfg.answers_path, "answers file");
  predict->add_option("--dictionary", cfg.dictionary_path, "dictionary used at training");
  predict->add_option("--prefix", cfg.prefix, "category prefix");
  predict->add_option("--seed", cfg.seed, "answer selection seed");
  predict->add_option("utterance", utterance, "utterance to classify")->required();

  CLI::App* eval = app.add_subcommand("eval", "repeated random-split evaluation");
  eval->add_option("--corpus", cfg.corpus_path, "corpus file")->required();
  eval->add_option("--dictionary", cfg.dictionary_path, "gazetteer dictionary");
  eval->add_option("--folds", cfg.folds, "number of folds")->check(CLI::PositiveNumber);
  eval->add_option("--train-ratio", cfg.train_ratio, "train fraction in (0,1)");
  eval->add_option("--seed", cfg.seed, "base seed; fold i uses seed+i");
  eval->add_option("--prefix", cfg.prefix, "category prefix");
  eval->add_option("--report", cfg.report_path, "machine-readable report path");
  add_hyperparams(eval);

  CLI::App* chat = app.add_subcommand("chat", "interactive session");
  chat->add_option("--model", cfg.model_path, "model path")->required();
  chat->add_option("--corpus", cfg.corpus_path, "corpus (for embedded answers)");
  chat->add_option("--answers", cfg.answers_path, "answers file");
  chat->add_option("--dictionary", cfg.dictionary_path, "dictionary used at training");
  chat->add_option("--prefix", cfg.prefix, "category prefix");
  chat->add_option("--seed", cfg.seed, "answer selection seed");

  CLI::App* ner = app.add_subcommand("ner", "tag entities in a text");
  ner->add_option("--dictionary", cfg.dictionary_path, "gazetteer dictionary")->required();
  ner->add_option("text", text, "text to tag")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(cfg);
    if (predict->parsed()) return cmd_predict(cfg, utterance);
    if (eval->parsed()) return cmd_eval(cfg);
    if (chat->parsed()) return cmd_chat(cfg);
    if (ner->parsed()) return cmd_ner(cfg, text);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
