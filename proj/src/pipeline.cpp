#include "rnlu/pipeline.hpp"

#include <algorithm>
#include <unordered_map>

#include "rnlu/error.hpp"
#include "rnlu/rng.hpp"
#include "rnlu/text.hpp"

namespace rnlu {

namespace {

bool is_predicate_name(const std::string& s) {
  if (s.empty() || !(s[0] >= 'A' && s[0] <= 'Z')) return false;
  for (char c : s)
    if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_')) return false;
  return true;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

// Splits "$NAME" into base tag and 1-based ordinal: trailing digits >= 2 are
// an occurrence index ($ACTOR2 is the second ACTOR) unless the full name is
// itself a tag that appears in the bindings at instantiation time; that case
// is resolved by the caller, which tries the exact name first.
void split_placeholder(const std::string& name, std::string& tag, size_t& ordinal) {
  size_t digits = name.size();
  while (digits > 0 && name[digits - 1] >= '0' && name[digits - 1] <= '9') --digits;
  if (digits > 0 && digits < name.size()) {
    unsigned long k = std::stoul(name.substr(digits));
    if (k >= 2) {
      tag = name.substr(0, digits);
      ordinal = k;
      return;
    }
  }
  tag = name;
  ordinal = 1;
}

// NER pass shared by training and inference.
struct TaggingResult {
  std::vector<std::string> tokens;
  std::vector<std::pair<std::string, std::string>> bindings;
};

TaggingResult tag_utterance(const std::string& utterance, const std::optional<Automaton>& aut) {
  std::vector<std::string> original = tokenize_preserving(utterance);
  std::vector<std::string> normalized(original.size());
  for (size_t i = 0; i < original.size(); ++i) normalized[i] = normalize_token(original[i]);

  TaggingResult result;
  if (!aut) {
    result.tokens = std::move(normalized);
    return result;
  }
  std::vector<EntityMatch> kept = resolve_overlaps(aut->find_matches(normalized));
  TaggedTokens tagged = apply_tags(normalized, original, kept, aut->tags());
  result.tokens = std::move(tagged.tokens);
  result.bindings = std::move(tagged.bindings);
  return result;
}

void validate_answers(const Model& model, const AnswerTable& answers) {
  for (const CategoryId& c : model.categories) {
    auto it = answers.rows.find(c);
    if (it == answers.rows.end() || it->second.empty())
      throw ValidationError("category '" + c + "' has no answer");
    for (const std::string& a : it->second) parse_template(a);  // throws on malformed templates
  }
}

}  // namespace

std::string LogicalForm::render() const {
  std::string out = predicate + "(";
  for (size_t i = 0; i < arguments.size(); ++i) {
    if (i) out += ", ";
    out += arguments[i];
  }
  out += ")";
  return out;
}

std::optional<AnswerTemplate> parse_template(const std::string& answer) {
  size_t open = answer.find('(');
  if (open == std::string::npos || answer.empty() || answer.back() != ')') return std::nullopt;
  std::string predicate = answer.substr(0, open);
  if (!is_predicate_name(predicate)) return std::nullopt;

  AnswerTemplate tmpl;
  tmpl.predicate = predicate;
  std::string body = answer.substr(open + 1, answer.size() - open - 2);
  if (body.find('(') != std::string::npos || body.find(')') != std::string::npos)
    throw ParseError("template '" + answer + "': nested parentheses are not supported");
  if (trim(body).empty()) return tmpl;  // zero-argument predicate

  size_t start = 0;
  for (;;) {
    size_t comma = body.find(',', start);
    std::string raw = trim(comma == std::string::npos ? body.substr(start)
                                                      : body.substr(start, comma - start));
    if (raw.empty())
      throw ParseError("template '" + answer + "': empty argument");
    AnswerTemplate::Arg arg;
    if (raw[0] == '$') {
      std::string name = raw.substr(1);
      if (!is_predicate_name(name))
        throw ParseError("template '" + answer + "': bad placeholder '" + raw + "'");
      arg.is_placeholder = true;
      arg.text = name;
      split_placeholder(name, arg.tag, arg.ordinal);
    } else {
      arg.text = raw;
    }
    tmpl.args.push_back(std::move(arg));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return tmpl;
}

LogicalForm instantiate_logical_form(
    const std::string& template_text,
    const std::vector<std::pair<std::string, std::string>>& bindings) {
  std::optional<AnswerTemplate> tmpl = parse_template(template_text);
  if (!tmpl) throw ParseError("'" + template_text + "' is not a template");

  LogicalForm lf;
  lf.predicate = tmpl->predicate;
  for (const AnswerTemplate::Arg& arg : tmpl->args) {
    if (!arg.is_placeholder) {
      lf.arguments.push_back(arg.text);
      continue;
    }
    // Exact tag name wins over the trailing-ordinal reading.
    std::string tag = arg.text;
    size_t ordinal = 1;
    bool exact = std::any_of(bindings.begin(), bindings.end(),
                             [&](const auto& b) { return b.first == arg.text; });
    if (!exact) {
      tag = arg.tag;
      ordinal = arg.ordinal;
    }
    size_t seen = 0;
    const std::string* surface = nullptr;
    for (const auto& [btag, bsurface] : bindings) {
      if (btag == tag && ++seen == ordinal) {
        surface = &bsurface;
        break;
      }
    }
    if (surface) {
      lf.arguments.push_back(*surface);
    } else {
      lf.arguments.push_back(arg.text);  // bare placeholder name marks the gap
      lf.unresolved.push_back("$" + arg.text);
    }
  }
  return lf;
}

Pipeline train_pipeline(const Corpus& corpus, const std::vector<GazetteerEntry>* dictionary,
                        const AnswerTable* answers, const Hyperparams& hp,
                        const std::string& prefix, std::vector<std::string>* warnings) {
  Pipeline p;
  p.prefix = prefix;
  if (dictionary) p.automaton.emplace(*dictionary);

  auto labeled = assign_categories(corpus, prefix);
  std::vector<std::vector<std::string>> token_lists;
  token_lists.reserve(labeled.size());
  for (const auto& [utterance, category] : labeled)
    token_lists.push_back(tag_utterance(utterance, p.automaton).tokens);

  Vocabulary vocab = build_vocabulary(token_lists);
  std::vector<TrainingExample> data;
  data.reserve(labeled.size());
  for (size_t i = 0; i < labeled.size(); ++i)
    data.push_back({vectorize(token_lists[i], vocab), labeled[i].second});

  std::string fingerprint = dictionary ? Automaton::fingerprint(*dictionary) : std::string{};
  p.model = train_model(data, vocab, hp, std::move(fingerprint));

  if (answers) {
    p.answers = *answers;
  } else {
    for (size_t i = 0; i < corpus.interactions.size(); ++i)
      p.answers.rows[category_for_index(prefix, i)] = corpus.interactions[i].answers;
  }
  validate_answers(p.model, p.answers);

  if (warnings && p.model.categories.size() == 1)
    warnings->push_back("corpus has a single interaction; the classifier output is constant");
  return p;
}

Pipeline assemble_pipeline(Model model, const std::vector<GazetteerEntry>* dictionary,
                           AnswerTable answers, const std::string& prefix) {
  Pipeline p;
  p.prefix = prefix;
  if (model.gazetteer_fingerprint.empty()) {
    if (dictionary)
      throw ValidationError("model was trained without a dictionary; do not supply one");
  } else {
    if (!dictionary)
      throw ValidationError("model was trained with a dictionary; supply it with --dictionary");
    if (Automaton::fingerprint(*dictionary) != model.gazetteer_fingerprint)
      throw ValidationError("dictionary does not match the one used for training");
    p.automaton.emplace(*dictionary);
  }
  p.model = std::move(model);
  p.answers = std::move(answers);
  validate_answers(p.model, p.answers);
  return p;
}

Prediction understand(const Pipeline& p, const std::string& utterance) {
  TaggingResult tagged = tag_utterance(utterance, p.automaton);

  Prediction pred;
  pred.tagged_utterance = join_tokens(tagged.tokens);
  pred.bindings = std::move(tagged.bindings);

  FeatureVector v = vectorize(tagged.tokens, p.model.vocabulary);
  pred.no_features = v.active.empty();
  auto [category, scores] = predict(p.model, v);
  pred.category = std::move(category);

  if (scores.size() >= 2) {
    double top1 = scores[0], top2 = scores[1];
    if (top2 > top1) std::swap(top1, top2);
    for (size_t c = 2; c < scores.size(); ++c) {
      if (scores[c] > top1) {
        top2 = top1;
        top1 = scores[c];
      } else if (scores[c] > top2) {
        top2 = scores[c];
      }
    }
    pred.margin = top1 - top2;
  }
  pred.scores = std::move(scores);
  return pred;
}

std::string select_answer(const Prediction& pred, const Pipeline& p, std::mt19937_64& rng) {
  auto it = p.answers.rows.find(pred.category);
  if (it == p.answers.rows.end() || it->second.empty())
    throw ValidationError("category '" + pred.category + "' has no answer");
  const std::vector<std::string>& options = it->second;
  return options[pick_index(rng, options.size())];
}

std::string respond(const Prediction& pred, const Pipeline& p, std::mt19937_64& rng) {
  std::string answer = select_answer(pred, p, rng);
  if (parse_template(answer)) return instantiate_logical_form(answer, pred.bindings).render();
  return answer;
}

}  // namespace rnlu
