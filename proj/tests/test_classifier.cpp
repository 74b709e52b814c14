#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "rnlu/classifier.hpp"
#include "rnlu/error.hpp"
#include "rnlu/rng.hpp"

using namespace rnlu;

namespace {

Vocabulary toy_vocab(uint32_t size) {
  std::vector<std::string> tokens;
  for (uint32_t i = 0; i < size; ++i) tokens.push_back("t" + std::to_string(i));
  return build_vocabulary({tokens});
}

FeatureVector fv(std::vector<uint32_t> active, uint32_t dim) {
  return FeatureVector{std::move(active), dim};
}

double training_accuracy(const Model& model, const std::vector<TrainingExample>& data) {
  size_t correct = 0;
  for (const auto& ex : data)
    if (predict(model, ex.features).first == ex.category) ++correct;
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

Model random_model(std::mt19937_64& rng, size_t n_categories, uint32_t vocab_size) {
  Model m;
  m.vocabulary = toy_vocab(vocab_size);
  for (size_t c = 0; c < n_categories; ++c) {
    m.categories.push_back("agent_" + std::to_string(c));
    std::vector<double> w(vocab_size + 1);
    for (double& x : w) x = (static_cast<double>(rng() % 2000) - 1000.0) / 250.0;
    m.weights.push_back(std::move(w));
  }
  return m;
}

FeatureVector random_input(std::mt19937_64& rng, uint32_t vocab_size) {
  std::vector<uint32_t> active;
  for (uint32_t j = 0; j < vocab_size; ++j)
    if (pick_index(rng, 3) == 0) active.push_back(j);
  return fv(std::move(active), vocab_size);
}

}  // namespace

TEST_CASE("two disjoint single-feature categories separate") {
  Vocabulary vocab = toy_vocab(2);
  std::vector<TrainingExample> data = {{fv({0}, 2), "A"}, {fv({1}, 2), "B"}};
  Model model = train_model(data, vocab, {});
  CHECK(predict(model, fv({0}, 2)).first == "A");
  CHECK(predict(model, fv({1}, 2)).first == "B");
  CHECK(training_accuracy(model, data) == 1.0);
}

TEST_CASE("XOR-style data trains without error; a linear model may stay imperfect") {
  Vocabulary vocab = toy_vocab(2);
  std::vector<TrainingExample> data = {
      {fv({}, 2), "A"}, {fv({0, 1}, 2), "A"}, {fv({0}, 2), "B"}, {fv({1}, 2), "B"}};
  Model model = train_model(data, vocab, {});
  for (const auto& w : model.weights)
    for (double x : w) CHECK(std::isfinite(x));
  CHECK(training_accuracy(model, data) <= 1.0);
}

TEST_CASE("score is the per-category dot product plus bias") {
  Model m;
  m.vocabulary = toy_vocab(1);
  m.categories = {"A", "B"};
  m.weights = {{1.0, 0.0}, {-1.0, 0.0}};
  SUBCASE("hand-built margins") {
    ScoreVector s = score(m, fv({0}, 1));
    CHECK(s == ScoreVector{1.0, -1.0});
    CHECK(predict(m, fv({0}, 1)).first == "A");
  }
  SUBCASE("all-zero weights give all-zero scores") {
    m.weights = {{0.0, 0.0}, {0.0, 0.0}};
    CHECK(score(m, fv({0}, 1)) == ScoreVector{0.0, 0.0});
  }
  SUBCASE("empty active set returns the biases") {
    m.weights = {{5.0, 0.25}, {5.0, -0.75}};
    CHECK(score(m, fv({}, 1)) == ScoreVector{0.25, -0.75});
  }
  SUBCASE("dimension mismatch is an error") {
    CHECK_THROWS_AS(score(m, fv({0}, 7)), ValidationError);
  }
}

TEST_CASE("exact ties break to the lexicographically smallest category") {
  Model m;
  m.vocabulary = toy_vocab(1);
  m.categories = {"agent_2", "agent_10"};
  m.weights = {{0.0, 1.0}, {0.0, 1.0}};
  // "agent_10" < "agent_2" as strings.
  CHECK(predict(m, fv({}, 1)).first == "agent_10");
}

TEST_CASE("predict equals brute-force argmax on random models") {
  std::mt19937_64 rng(301);
  for (int trial = 0; trial < 1000; ++trial) {
    size_t n_categories = 2 + pick_index(rng, 5);
    uint32_t vocab_size = 1 + static_cast<uint32_t>(pick_index(rng, 8));
    Model m = random_model(rng, n_categories, vocab_size);
    FeatureVector x = random_input(rng, vocab_size);

    // Enumerate dot products straight off the weight matrix.
    size_t best = 0;
    double best_score = -1e300;
    for (size_t c = 0; c < m.categories.size(); ++c) {
      double s = m.weights[c].back();
      for (uint32_t j : x.active) s += m.weights[c][j];
      if (s > best_score || (s == best_score && m.categories[c] < m.categories[best])) {
        best = c;
        best_score = s;
      }
    }
    CHECK(predict(m, x).first == m.categories[best]);
  }
}

TEST_CASE("positive scaling never changes the argmax") {
  std::mt19937_64 rng(302);
  const double scales[] = {0.03125, 0.5, 2.0, 1024.0, 3.0};
  for (int trial = 0; trial < 100; ++trial) {
    Model m = random_model(rng, 3 + pick_index(rng, 4), 6);
    FeatureVector x = random_input(rng, 6);
    auto [category, scores] = predict(m, x);
    // Skip near-ties that double rounding could reorder under a non-dyadic scale.
    std::vector<double> sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    double gap = sorted[sorted.size() - 1] - sorted[sorted.size() - 2];
    if (gap < 1e-9) continue;
    for (double k : scales) {
      Model scaled = m;
      for (auto& w : scaled.weights)
        for (double& v : w) v *= k;
      CHECK(predict(scaled, x).first == category);
    }
  }
}

TEST_CASE("disjoint private feature sets reach training accuracy 1.0") {
  std::mt19937_64 rng(303);
  const size_t n_categories = 6, per_category = 4;
  const uint32_t features_per = 3;
  const uint32_t dim = n_categories * features_per;
  Vocabulary vocab = toy_vocab(dim);
  std::vector<TrainingExample> data;
  for (size_t c = 0; c < n_categories; ++c) {
    for (size_t p = 0; p < per_category; ++p) {
      std::vector<uint32_t> active;
      for (uint32_t j = 0; j < features_per; ++j)
        if (pick_index(rng, 2)) active.push_back(static_cast<uint32_t>(c) * features_per + j);
      if (active.empty()) active.push_back(static_cast<uint32_t>(c) * features_per);
      data.push_back({fv(std::move(active), dim), "cat_" + std::to_string(c)});
    }
  }
  Model model = train_model(data, vocab, {});
  CHECK(training_accuracy(model, data) == 1.0);
}

TEST_CASE("per-step update direction matches the analytic subgradient") {
  // Finite differences of the pointwise objective on a 1-feature problem,
  // evaluated away from the hinge kink.
  std::mt19937_64 rng(304);
  const double lambda = 0.3, h = 1e-6;
  int checked = 0;
  while (checked < 25) {
    std::vector<double> w = {(double(rng() % 2000) - 1000.0) / 400.0,
                             (double(rng() % 2000) - 1000.0) / 400.0};
    FeatureVector x = fv(pick_index(rng, 2) ? std::vector<uint32_t>{0} : std::vector<uint32_t>{},
                         1);
    double y = pick_index(rng, 2) ? 1.0 : -1.0;
    double s = w[1];
    for (uint32_t j : x.active) s += w[j];
    if (std::abs(1.0 - y * s) < 1e-3) continue;  // kink: subgradient not unique

    std::vector<double> g = hinge_subgradient(w, x, y, lambda);
    for (size_t i = 0; i < w.size(); ++i) {
      std::vector<double> wp = w, wm = w;
      wp[i] += h;
      wm[i] -= h;
      double fd = (hinge_objective(wp, x, y, lambda) - hinge_objective(wm, x, y, lambda)) /
                  (2.0 * h);
      double rel = std::abs(g[i] - fd) / std::max(1.0, std::abs(g[i]));
      CHECK(rel <= 1e-4);
    }
    ++checked;
  }
}

TEST_CASE("one training step descends the analytic subgradient") {
  // Single example, single epoch, starting from zero weights: the trained
  // vector must equal w0 - eta1 * g(w0) exactly (eta1 = 1/lambda at t = 1).
  Vocabulary vocab = toy_vocab(1);
  std::vector<TrainingExample> data = {{fv({0}, 1), "A"}};
  Hyperparams hp;
  hp.lambda = 0.5;
  hp.epochs = 1;
  Model model = train_model(data, vocab, hp);

  std::vector<double> w0 = {0.0, 0.0};
  std::vector<double> g = hinge_subgradient(w0, data[0].features, 1.0, hp.lambda);
  double eta1 = 1.0 / (hp.lambda * 1.0);
  REQUIRE(model.weights.size() == 1);
  for (size_t i = 0; i < w0.size(); ++i) CHECK(model.weights[0][i] == w0[i] - eta1 * g[i]);
}

TEST_CASE("training is deterministic: identical bytes from identical inputs") {
  std::mt19937_64 rng(305);
  Vocabulary vocab = toy_vocab(10);
  std::vector<TrainingExample> data;
  for (int i = 0; i < 40; ++i)
    data.push_back({random_input(rng, 10), "c" + std::to_string(i % 4)});
  Hyperparams hp;
  hp.seed = 99;
  Model a = train_model(data, vocab, hp, "fp");
  Model b = train_model(data, vocab, hp, "fp");
  std::ostringstream sa, sb;
  save_model(a, sa);
  save_model(b, sb);
  CHECK(sa.str() == sb.str());

  Hyperparams other = hp;
  other.seed = 100;
  std::ostringstream sc;
  save_model(train_model(data, vocab, other, "fp"), sc);
  CHECK(sa.str() != sc.str());
}

TEST_CASE("model serialization") {
  std::mt19937_64 rng(306);
  Vocabulary vocab = toy_vocab(5);
  std::vector<TrainingExample> data;
  for (int i = 0; i < 12; ++i)
    data.push_back({random_input(rng, 5), i % 2 ? "sim" : "não"});
  Model model = train_model(data, vocab, {}, "0123456789abcdef");

  std::ostringstream out;
  size_t written = save_model(model, out);
  std::string bytes = out.str();
  CHECK(written == bytes.size());

  SUBCASE("round trip is exact") {
    std::istringstream in(bytes);
    Model loaded = load_model(in);
    CHECK(loaded == model);
    std::ostringstream again;
    save_model(loaded, again);
    CHECK(again.str() == bytes);
  }
  SUBCASE("flipped magic is a format error") {
    std::string bad = bytes;
    bad[0] = 'X';
    std::istringstream in(bad);
    CHECK_THROWS_WITH_AS(load_model(in), doctest::Contains("magic"), FormatError);
  }
  SUBCASE("unsupported version is a format error") {
    std::string bad = bytes;
    bad[4] = 9;
    std::istringstream in(bad);
    CHECK_THROWS_WITH_AS(load_model(in), doctest::Contains("version"), FormatError);
  }
  SUBCASE("truncation is detected") {
    std::istringstream in(bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_AS(load_model(in), FormatError);
  }
  SUBCASE("payload corruption trips the checksum") {
    std::string bad = bytes;
    bad[bytes.size() - 3] ^= 0x40;
    std::istringstream in(bad);
    CHECK_THROWS_WITH_AS(load_model(in), doctest::Contains("checksum"), FormatError);
  }
}

TEST_CASE("training input validation") {
  Vocabulary vocab = toy_vocab(2);
  CHECK_THROWS_AS(train_model({}, vocab, {}), ValidationError);
  std::vector<TrainingExample> mismatched = {{fv({0}, 5), "A"}};
  CHECK_THROWS_AS(train_model(mismatched, vocab, {}), ValidationError);
  Hyperparams bad;
  bad.lambda = 0.0;
  std::vector<TrainingExample> ok = {{fv({0}, 2), "A"}};
  CHECK_THROWS_AS(train_model(ok, vocab, bad), ValidationError);
  // Single category is allowed; prediction is constant.
  Model constant = train_model(ok, vocab, {});
  CHECK(constant.categories.size() == 1);
  CHECK(predict(constant, fv({1}, 2)).first == "A");
}
