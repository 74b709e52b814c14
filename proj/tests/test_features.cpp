#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "rnlu/error.hpp"
#include "rnlu/features.hpp"
#include "rnlu/rng.hpp"
#include "rnlu/text.hpp"

using namespace rnlu;

TEST_CASE("tokenizer basics") {
  CHECK(tokenize("As obras vão acabar quando?") ==
        std::vector<std::string>{"as", "obras", "vão", "acabar", "quando"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("Qual o elenco do filme MOVIE?") ==
        std::vector<std::string>{"qual", "o", "elenco", "do", "filme", "MOVIE"});
}

TEST_CASE("tokenizer case and punctuation handling") {
  // Single uppercase letters are ordinary words (sentence-initial articles).
  CHECK(tokenize("A obra é bonita") == std::vector<std::string>{"a", "obra", "é", "bonita"});
  // Uppercase-with-digit tags survive; punctuation splits; diacritics fold.
  CHECK(tokenize("ACTOR2, CONCLUSÃO!") == std::vector<std::string>{"ACTOR2", "CONCLUSÃO"});
  CHECK(tokenize("Héé... olá?! 123") == std::vector<std::string>{"héé", "olá", "123"});
  CHECK(tokenize_preserving("Robert de Niro!") ==
        std::vector<std::string>{"Robert", "de", "Niro"});
  CHECK(fold_case("SENHOR dos Anéis") == "senhor dos anéis");
  CHECK(upper_case("ações") == "AÇÕES");
}

TEST_CASE("tokenize is stable over its own output") {
  std::vector<std::string> samples = {
      "Há alguma data prevista para a conclusão das obras?",
      "Que actriz contracena com Viggo Mortensen no Senhor dos Anéis?",
      "gosto de ACTOR e de MOVIE",
  };
  for (const std::string& s : samples) {
    auto tokens = tokenize(s);
    CHECK(tokenize(join_tokens(tokens)) == tokens);
  }
}

TEST_CASE("vocabulary construction") {
  SUBCASE("single utterance dedups") {
    Vocabulary v = build_vocabulary({{"a", "b", "a"}});
    CHECK(v.size() == 2);
  }
  SUBCASE("repeated utterances") {
    Vocabulary v = build_vocabulary({{"x"}, {"x"}});
    CHECK(v.size() == 1);
  }
  SUBCASE("first-occurrence order") {
    Vocabulary v = build_vocabulary({{"c", "a"}, {"b", "a"}});
    CHECK(v.tokens() == std::vector<std::string>{"c", "a", "b"});
    CHECK(*v.lookup("b") == 2);
  }
  SUBCASE("empty training set is an error") {
    CHECK_THROWS_AS(build_vocabulary({}), ValidationError);
  }
}

TEST_CASE("vectorize") {
  Vocabulary v = build_vocabulary({{"as", "obras", "quando"}});
  SUBCASE("empty token list") { CHECK(vectorize({}, v).active.empty()); }
  SUBCASE("all out-of-vocabulary tokens are dropped") {
    CHECK(vectorize({"nunca", "visto"}, v).active.empty());
  }
  SUBCASE("known tokens set their bits, OOV silently dropped") {
    FeatureVector fv = vectorize({"as", "obras", "vão", "acabar", "quando"}, v);
    CHECK(fv.active == std::vector<uint32_t>{0, 1, 2});
    CHECK(fv.dimension == 3);
  }
}

TEST_CASE("binary features are idempotent in token multiplicity") {
  std::mt19937_64 rng(7);
  Vocabulary vocab = build_vocabulary({{"um", "dois", "três", "quatro", "cinco"}});
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> tokens;
    size_t n = 1 + pick_index(rng, 8);
    std::vector<std::string> pool = {"um", "dois", "três", "quatro", "cinco", "oov"};
    for (size_t i = 0; i < n; ++i) tokens.push_back(pool[pick_index(rng, pool.size())]);
    FeatureVector base = vectorize(tokens, vocab);
    // Duplicate one token anywhere.
    tokens.insert(tokens.begin() + static_cast<long>(pick_index(rng, tokens.size())),
                  tokens[pick_index(rng, tokens.size())]);
    CHECK(vectorize(tokens, vocab) == base);
    // Size bound.
    CHECK(base.active.size() <= std::min<size_t>(tokens.size(), vocab.size()));
    // Sorted unique.
    for (size_t i = 1; i < base.active.size(); ++i) CHECK(base.active[i - 1] < base.active[i]);
  }
}
