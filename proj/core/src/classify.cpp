#include "stressdetect/classify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "stressdetect/error.hpp"

namespace stressdetect {
namespace {

void check_training_set(std::span<const TrainingExample> examples, std::size_t dimension) {
  bool seen[2] = {false, false};
  for (const auto& example : examples) {
    if (example.label != 0 && example.label != 1) {
      throw Error(ErrorCode::kInvalidArgument, "training labels must be 0 or 1");
    }
    seen[example.label] = true;
    if (!example.features.empty() && example.features.entries.back().first >= dimension) {
      throw Error(ErrorCode::kDimensionMismatch, "feature index exceeds the vocabulary size");
    }
  }
  if (!seen[0] || !seen[1]) {
    throw Error(ErrorCode::kSingleClassCorpus, "training data must contain both stressed and non-stressed examples");
  }
}

void check_dimension(const FeatureVector& x, std::size_t dimension) {
  if (!x.empty() && x.entries.back().first >= dimension) {
    throw Error(ErrorCode::kDimensionMismatch, "feature index " + std::to_string(x.entries.back().first) +
                                                   " outside model dimension " + std::to_string(dimension));
  }
}

// log(1 + e^z) without overflow.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// ---------------------------------------------------------------------------
// Logistic regression

LossGradient logistic_loss_gradient(std::span<const TrainingExample> examples, double bias,
                                    std::span<const double> weights, double l2) {
  LossGradient out;
  out.weight_gradient.assign(weights.size(), 0.0);
  const double n = static_cast<double>(examples.size());
  double loss = 0.0;
  for (const auto& example : examples) {
    const double z = bias + example.features.dot(weights);
    const double y = example.label;
    loss += softplus(z) - y * z;
    const double residual = sigmoid(z) - y;
    out.bias_gradient += residual;
    for (const auto& [index, value] : example.features.entries) {
      out.weight_gradient[index] += residual * value;
    }
  }
  double norm2 = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    norm2 += weights[i] * weights[i];
    out.weight_gradient[i] = out.weight_gradient[i] / n + l2 * weights[i];
  }
  out.bias_gradient /= n;
  out.loss = loss / n + 0.5 * l2 * norm2;
  return out;
}

double logistic_loss(std::span<const TrainingExample> examples, double bias, std::span<const double> weights,
                     double l2) {
  const double n = static_cast<double>(examples.size());
  double loss = 0.0;
  for (const auto& example : examples) {
    const double z = bias + example.features.dot(weights);
    loss += softplus(z) - example.label * z;
  }
  double norm2 = 0.0;
  for (double w : weights) norm2 += w * w;
  return loss / n + 0.5 * l2 * norm2;
}

LogisticModel train_logistic(std::span<const TrainingExample> examples, std::size_t dimension,
                             const LogisticHyper& hyper) {
  check_training_set(examples, dimension);

  LogisticModel model;
  model.hyper = hyper;
  double rate = hyper.learning_rate;
  for (int attempt = 0;; ++attempt) {
    model.bias = 0.0;
    model.weights.assign(dimension, 0.0);
    model.loss_history.clear();
    model.effective_learning_rate = rate;
    model.halvings = attempt;

    bool monotone = true;
    for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
      const auto step = logistic_loss_gradient(examples, model.bias, model.weights, hyper.l2);
      if (!model.loss_history.empty()) {
        const double previous = model.loss_history.back();
        // Tolerance absorbs rounding noise once the loss has flattened out.
        if (step.loss > previous + 1e-12 * std::max(1.0, std::abs(previous))) {
          monotone = false;
          break;
        }
      }
      model.loss_history.push_back(step.loss);
      model.bias -= rate * step.bias_gradient;
      for (std::size_t i = 0; i < dimension; ++i) {
        model.weights[i] -= rate * step.weight_gradient[i];
      }
    }
    if (monotone) {
      const double final_loss = logistic_loss(examples, model.bias, model.weights, hyper.l2);
      if (!model.loss_history.empty() &&
          final_loss > model.loss_history.back() + 1e-12 * std::max(1.0, std::abs(model.loss_history.back()))) {
        monotone = false;
      } else {
        model.loss_history.push_back(final_loss);
      }
    }
    if (monotone || attempt >= hyper.max_halvings) {
      break;
    }
    rate *= 0.5;
  }
  return model;
}

double predict_proba(const LogisticModel& model, const FeatureVector& x) {
  check_dimension(x, model.weights.size());
  return sigmoid(model.bias + x.dot(model.weights));
}

Prediction predict(const LogisticModel& model, const FeatureVector& x) {
  const double p = predict_proba(model, x);
  return {p, p >= 0.5 ? 1 : 0};
}

// ---------------------------------------------------------------------------
// Multinomial naive Bayes

NaiveBayesModel train_naive_bayes(std::span<const TrainingExample> examples, std::size_t dimension,
                                  double alpha) {
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "naive Bayes smoothing must be positive");
  }
  check_training_set(examples, dimension);

  NaiveBayesModel model;
  model.alpha = alpha;
  std::array<std::vector<double>, 2> counts{std::vector<double>(dimension, 0.0),
                                            std::vector<double>(dimension, 0.0)};
  std::array<double, 2> docs{0.0, 0.0};
  std::array<double, 2> totals{0.0, 0.0};
  for (const auto& example : examples) {
    docs[example.label] += 1.0;
    for (const auto& [index, value] : example.features.entries) {
      counts[example.label][index] += value;
      totals[example.label] += value;
    }
  }
  const double n = static_cast<double>(examples.size());
  const double v = static_cast<double>(dimension);
  for (int c = 0; c < 2; ++c) {
    model.log_prior[c] = std::log(docs[c] / n);
    const double denominator = std::log(totals[c] + alpha * v);
    model.log_likelihood[c].resize(dimension);
    for (std::size_t i = 0; i < dimension; ++i) {
      model.log_likelihood[c][i] = std::log(counts[c][i] + alpha) - denominator;
    }
  }
  return model;
}

std::array<double, 2> nb_joint_log_likelihood(const NaiveBayesModel& model, const FeatureVector& x) {
  check_dimension(x, model.log_likelihood[0].size());
  return {model.log_prior[0] + x.dot(model.log_likelihood[0]),
          model.log_prior[1] + x.dot(model.log_likelihood[1])};
}

Prediction predict_nb(const NaiveBayesModel& model, const FeatureVector& x) {
  const auto joint = nb_joint_log_likelihood(model, x);
  return {sigmoid(joint[1] - joint[0]), joint[1] >= joint[0] ? 1 : 0};
}

// ---------------------------------------------------------------------------
// Linear SVM

SvmModel train_svm(std::span<const TrainingExample> examples, std::size_t dimension, const SvmHyper& hyper) {
  if (!(hyper.lambda > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "SVM regularisation must be positive");
  }
  check_training_set(examples, dimension);

  // w = scale * v keeps the per-step shrink O(1) on sparse inputs.
  std::vector<double> v(dimension, 0.0);
  double v_bias = 0.0;
  double scale = 1.0;
  std::mt19937_64 rng(hyper.seed);
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::uint64_t t = 0;
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }
    for (const std::size_t idx : order) {
      ++t;
      const auto& example = examples[idx];
      const double y = example.label == 1 ? 1.0 : -1.0;
      const double eta = 1.0 / (hyper.lambda * static_cast<double>(t));
      const double margin = y * scale * (example.features.dot(v) + v_bias);

      const double shrink = 1.0 - eta * hyper.lambda;
      if (shrink <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        v_bias = 0.0;
        scale = 1.0;
      } else {
        scale *= shrink;
      }
      if (margin < 1.0) {
        const double step = eta * y / scale;
        for (const auto& [index, value] : example.features.entries) v[index] += step * value;
        v_bias += step;
      }
      if (scale < 1e-9) {
        for (auto& w : v) w *= scale;
        v_bias *= scale;
        scale = 1.0;
      }
    }
  }

  SvmModel model;
  model.hyper = hyper;
  model.weights.resize(dimension);
  for (std::size_t i = 0; i < dimension; ++i) model.weights[i] = scale * v[i];
  model.bias = scale * v_bias;
  return model;
}

double decision_value(const SvmModel& model, const FeatureVector& x) {
  check_dimension(x, model.weights.size());
  return x.dot(model.weights) + model.bias;
}

Prediction predict_svm(const SvmModel& model, const FeatureVector& x) {
  const double f = decision_value(model, x);
  return {f, f >= 0.0 ? 1 : 0};
}

// ---------------------------------------------------------------------------
// Complete models

std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kLogistic: return "logistic";
    case ClassifierKind::kNaiveBayes: return "naive_bayes";
    case ClassifierKind::kSvm: return "svm";
  }
  return "unknown";
}

ClassifierKind parse_classifier_kind(std::string_view name) {
  if (name == "logistic") return ClassifierKind::kLogistic;
  if (name == "naive_bayes" || name == "nb") return ClassifierKind::kNaiveBayes;
  if (name == "svm") return ClassifierKind::kSvm;
  throw Error(ErrorCode::kInvalidArgument, "unknown classifier '" + std::string(name) + "'");
}

ClassifierKind TrainedModel::kind() const {
  return static_cast<ClassifierKind>(classifier.index());
}

FeatureVector TrainedModel::featurize(std::string_view preprocessed_text) const {
  return vectorize(preprocessed_text, vocabulary, feature_kind, l2_normalize);
}

bool TrainedModel::fingerprint_matches(const PipelineConfig& config) const {
  return pipeline_fingerprint == config.fingerprint();
}

Prediction predict(const TrainedModel& model, const FeatureVector& x) {
  return std::visit(
      [&](const auto& m) -> Prediction {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LogisticModel>) {
          return predict(m, x);
        } else if constexpr (std::is_same_v<M, NaiveBayesModel>) {
          return predict_nb(m, x);
        } else {
          return predict_svm(m, x);
        }
      },
      model.classifier);
}

Prediction predict_text(const TrainedModel& model, std::string_view raw_text, const PipelineConfig& config) {
  return predict(model, model.featurize(preprocess(raw_text, config)));
}

TrainedModel train_model(std::span<const LabeledExample> examples, const PipelineConfig& config,
                         const TrainOptions& options) {
  std::vector<std::string> docs;
  docs.reserve(examples.size());
  for (const auto& example : examples) docs.push_back(preprocess(example.text, config));

  TrainedModel model;
  model.feature_kind = options.features;
  model.l2_normalize = options.l2_normalize;
  model.pipeline_fingerprint = config.fingerprint();
  model.vocabulary = fit_vocabulary(docs, options.vocabulary);

  std::vector<TrainingExample> data;
  data.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    data.push_back({model.featurize(docs[i]), examples[i].label});
  }
  const std::size_t dimension = model.vocabulary.size();
  switch (options.classifier) {
    case ClassifierKind::kLogistic:
      model.classifier = train_logistic(data, dimension, options.logistic);
      break;
    case ClassifierKind::kNaiveBayes:
      model.classifier = train_naive_bayes(data, dimension, options.nb_alpha);
      break;
    case ClassifierKind::kSvm:
      model.classifier = train_svm(data, dimension, options.svm);
      break;
  }
  return model;
}

}  // namespace stressdetect
