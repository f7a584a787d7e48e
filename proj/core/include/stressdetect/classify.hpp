#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stressdetect/corpus.hpp"
#include "stressdetect/features.hpp"
#include "stressdetect/textprep.hpp"

namespace stressdetect {

struct TrainingExample {
  FeatureVector features;
  int label = 0;  // 1 = stressed
};

struct Prediction {
  // Probability of the stressed class for logistic regression and naive Bayes;
  // raw decision value for the SVM.
  double score = 0.0;
  int label = 0;
};

double sigmoid(double z);

// ---------------------------------------------------------------------------
// Logistic regression

struct LogisticHyper {
  double learning_rate = 0.1;
  std::size_t epochs = 500;
  double l2 = 1e-4;
  std::uint64_t seed = 42;  // recorded only; zero initialisation makes training seed-free
  int max_halvings = 8;
};

struct LogisticModel {
  double bias = 0.0;
  std::vector<double> weights;
  LogisticHyper hyper;
  double effective_learning_rate = 0.0;
  int halvings = 0;
  std::vector<double> loss_history;  // one entry per epoch plus the final loss; not persisted
};

struct LossGradient {
  double loss = 0.0;
  double bias_gradient = 0.0;
  std::vector<double> weight_gradient;
};

// Mean binary cross-entropy plus (l2 / 2) * ||weights||^2 (bias unpenalised),
// with its analytic gradient.
LossGradient logistic_loss_gradient(std::span<const TrainingExample> examples, double bias,
                                    std::span<const double> weights, double l2);
double logistic_loss(std::span<const TrainingExample> examples, double bias,
                     std::span<const double> weights, double l2);

// Full-batch gradient descent from zero weights. If the training loss ever
// increases the run restarts with half the learning rate, at most
// `max_halvings` times; the last attempt is kept either way.
LogisticModel train_logistic(std::span<const TrainingExample> examples, std::size_t dimension,
                             const LogisticHyper& hyper = {});

double predict_proba(const LogisticModel& model, const FeatureVector& x);
Prediction predict(const LogisticModel& model, const FeatureVector& x);

// ---------------------------------------------------------------------------
// Multinomial naive Bayes

struct NaiveBayesModel {
  double alpha = 1.0;
  std::array<double, 2> log_prior{};
  std::array<std::vector<double>, 2> log_likelihood;
};

NaiveBayesModel train_naive_bayes(std::span<const TrainingExample> examples, std::size_t dimension,
                                  double alpha = 1.0);
std::array<double, 2> nb_joint_log_likelihood(const NaiveBayesModel& model, const FeatureVector& x);
Prediction predict_nb(const NaiveBayesModel& model, const FeatureVector& x);

// ---------------------------------------------------------------------------
// Linear SVM

struct SvmHyper {
  double lambda = 1e-4;
  std::size_t epochs = 50;
  std::uint64_t seed = 42;
};

struct SvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  SvmHyper hyper;
};

// Pegasos-style stochastic subgradient descent on the L2-regularised hinge
// loss with step 1 / (lambda * t). The bias is an extra weight on a constant
// feature and is regularised with the rest. Each epoch visits every example
// once in an order drawn from a seeded mt19937_64.
SvmModel train_svm(std::span<const TrainingExample> examples, std::size_t dimension,
                   const SvmHyper& hyper = {});
double decision_value(const SvmModel& model, const FeatureVector& x);
Prediction predict_svm(const SvmModel& model, const FeatureVector& x);

// ---------------------------------------------------------------------------
// Complete models: preprocessing fingerprint + vocabulary + classifier.

enum class ClassifierKind { kLogistic, kNaiveBayes, kSvm };

std::string_view to_string(ClassifierKind kind);
ClassifierKind parse_classifier_kind(std::string_view name);

struct TrainedModel {
  FeatureKind feature_kind = FeatureKind::kBow;
  bool l2_normalize = false;
  std::string pipeline_fingerprint;
  Vocabulary vocabulary;
  std::variant<LogisticModel, NaiveBayesModel, SvmModel> classifier;

  ClassifierKind kind() const;
  FeatureVector featurize(std::string_view preprocessed_text) const;
  bool fingerprint_matches(const PipelineConfig& config) const;
};

Prediction predict(const TrainedModel& model, const FeatureVector& x);
Prediction predict_text(const TrainedModel& model, std::string_view raw_text, const PipelineConfig& config);

struct TrainOptions {
  ClassifierKind classifier = ClassifierKind::kLogistic;
  FeatureKind features = FeatureKind::kBow;
  bool l2_normalize = false;
  VocabularyOptions vocabulary;
  LogisticHyper logistic;
  double nb_alpha = 1.0;
  SvmHyper svm;
};

// Preprocesses, fits the vocabulary, vectorises and trains. Throws
// SingleClassCorpus unless both labels occur.
TrainedModel train_model(std::span<const LabeledExample> examples, const PipelineConfig& config,
                         const TrainOptions& options);

inline constexpr int kModelFormatVersion = 1;

std::string serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(std::string_view text);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace stressdetect
