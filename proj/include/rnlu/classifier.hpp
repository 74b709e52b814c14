#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rnlu/corpus.hpp"
#include "rnlu/features.hpp"

namespace rnlu {

struct Hyperparams {
  double lambda = 1e-4;  // L2 regularization strength
  int epochs = 50;
  uint64_t seed = 0;
};

using ScoreVector = std::vector<double>;

// One linear separator per category, one-vs-rest. Weight vectors carry the
// bias as a trailing always-on feature, so their dimension is vocabulary
// size + 1. Immutable once trained or loaded.
struct Model {
  static constexpr uint32_t kFormatVersion = 1;

  std::vector<CategoryId> categories;          // first-occurrence order
  std::vector<std::vector<double>> weights;    // [category][vocab size + 1]
  Vocabulary vocabulary;
  std::string gazetteer_fingerprint;           // empty when trained without a dictionary

  uint32_t dimension() const { return vocabulary.size() + 1; }
  bool operator==(const Model&) const = default;
};

struct TrainingExample {
  FeatureVector features;
  CategoryId category;
};

// Seeded stochastic subgradient descent on the L2-regularized hinge loss,
// step size 1/(lambda*t), examples shuffled once per epoch. Deterministic
// given (data order, hyperparameters).
Model train_model(const std::vector<TrainingExample>& data, const Vocabulary& vocab,
                  const Hyperparams& hp, std::string gazetteer_fingerprint = {});

// Per-category margins <w_c, x> + bias_c.
ScoreVector score(const Model& model, const FeatureVector& v);

// Argmax of score; exact ties go to the lexicographically smallest category.
std::pair<CategoryId, ScoreVector> predict(const Model& model, const FeatureVector& v);

// Single-example regularized hinge objective and its subgradient, both over
// the augmented weight vector (bias last, implicit always-on feature). These
// are exactly what one training step descends.
double hinge_objective(std::span<const double> w, const FeatureVector& x, double y,
                       double lambda);
std::vector<double> hinge_subgradient(std::span<const double> w, const FeatureVector& x, double y,
                                      double lambda);

// Binary model file. Layout: magic "RNLU", format version, CRC-32 and length
// of the payload; payload holds the vocabulary, category table, gazetteer
// fingerprint and the weight matrix as little-endian doubles in category-major
// order. Round trips bit-exactly.
size_t save_model(const Model& model, std::ostream& out);
Model load_model(std::istream& in);
void save_model_file(const Model& model, const std::string& path);
Model load_model_file(const std::string& path);

}  // namespace rnlu
