#include <cmath>
#include <fstream>

#include "json.hpp"
#include "stressdetect/classify.hpp"
#include "stressdetect/csv.hpp"
#include "stressdetect/error.hpp"

namespace stressdetect {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void corrupt(const std::string& what) {
  throw Error(ErrorCode::kCorruptFile, "model file: " + what);
}

const Json& field(const Json& object, const char* key) {
  if (!object.is_object()) corrupt("expected an object around '" + std::string(key) + "'");
  const auto it = object.find(key);
  if (it == object.end()) corrupt("missing '" + std::string(key) + "'");
  return *it;
}

double finite_number(const Json& value, const char* what) {
  if (!value.is_number()) corrupt(std::string(what) + " is not a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) corrupt(std::string(what) + " is not finite");
  return x;
}

std::vector<double> number_array(const Json& value, std::size_t expected, const char* what) {
  if (!value.is_array() || value.size() != expected) {
    corrupt(std::string(what) + " must be an array of " + std::to_string(expected) + " numbers");
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& item : value) out.push_back(finite_number(item, what));
  return out;
}

template <typename T>
T get_as(const Json& value, const char* what) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception&) {
    corrupt(std::string(what) + " has the wrong type");
  }
}

}  // namespace

std::string serialize_model(const TrainedModel& model) {
  Json j;
  j["format_version"] = kModelFormatVersion;
  j["kind"] = to_string(model.kind());
  j["feature_kind"] = to_string(model.feature_kind);
  j["l2_normalize"] = model.l2_normalize;

  Json hyper = Json::object();
  Json params = Json::object();
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LogisticModel>) {
          hyper["learning_rate"] = m.hyper.learning_rate;
          hyper["epochs"] = m.hyper.epochs;
          hyper["l2"] = m.hyper.l2;
          hyper["seed"] = m.hyper.seed;
          hyper["max_halvings"] = m.hyper.max_halvings;
          hyper["effective_learning_rate"] = m.effective_learning_rate;
          hyper["halvings"] = m.halvings;
          params["bias"] = m.bias;
          params["weights"] = m.weights;
        } else if constexpr (std::is_same_v<M, NaiveBayesModel>) {
          hyper["alpha"] = m.alpha;
          params["log_prior"] = m.log_prior;
          params["log_likelihood"] = m.log_likelihood;
        } else {
          hyper["lambda"] = m.hyper.lambda;
          hyper["epochs"] = m.hyper.epochs;
          hyper["seed"] = m.hyper.seed;
          params["bias"] = m.bias;
          params["weights"] = m.weights;
        }
      },
      model.classifier);
  j["hyperparameters"] = std::move(hyper);
  j["pipeline_fingerprint"] = model.pipeline_fingerprint;
  j["vocabulary"] = {{"tokens", model.vocabulary.tokens()},
                     {"df", model.vocabulary.document_frequencies()},
                     {"n_docs", model.vocabulary.n_docs()}};
  j["parameters"] = std::move(params);
  return j.dump() + "\n";
}

TrainedModel deserialize_model(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    corrupt(std::string("not valid JSON (") + e.what() + ")");
  }
  const auto version = get_as<int>(field(j, "format_version"), "format_version");
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch, "model format version " + std::to_string(version) +
                                                 " is not supported (expected " +
                                                 std::to_string(kModelFormatVersion) + ")");
  }

  TrainedModel model;
  const auto kind_name = get_as<std::string>(field(j, "kind"), "kind");
  ClassifierKind kind{};
  try {
    kind = parse_classifier_kind(kind_name);
    model.feature_kind = parse_feature_kind(get_as<std::string>(field(j, "feature_kind"), "feature_kind"));
  } catch (const Error& e) {
    corrupt(e.what());
  }
  model.l2_normalize = get_as<bool>(field(j, "l2_normalize"), "l2_normalize");
  model.pipeline_fingerprint = get_as<std::string>(field(j, "pipeline_fingerprint"), "pipeline_fingerprint");

  const auto& vocab = field(j, "vocabulary");
  try {
    model.vocabulary = Vocabulary::from_parts(get_as<std::vector<std::string>>(field(vocab, "tokens"), "tokens"),
                                              get_as<std::vector<std::size_t>>(field(vocab, "df"), "df"),
                                              get_as<std::size_t>(field(vocab, "n_docs"), "n_docs"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCorruptFile) throw;
    corrupt(e.what());
  }
  const std::size_t dimension = model.vocabulary.size();

  const auto& hyper = field(j, "hyperparameters");
  const auto& params = field(j, "parameters");
  switch (kind) {
    case ClassifierKind::kLogistic: {
      LogisticModel m;
      m.hyper.learning_rate = finite_number(field(hyper, "learning_rate"), "learning_rate");
      m.hyper.epochs = get_as<std::size_t>(field(hyper, "epochs"), "epochs");
      m.hyper.l2 = finite_number(field(hyper, "l2"), "l2");
      m.hyper.seed = get_as<std::uint64_t>(field(hyper, "seed"), "seed");
      m.hyper.max_halvings = get_as<int>(field(hyper, "max_halvings"), "max_halvings");
      m.effective_learning_rate = finite_number(field(hyper, "effective_learning_rate"), "effective_learning_rate");
      m.halvings = get_as<int>(field(hyper, "halvings"), "halvings");
      m.bias = finite_number(field(params, "bias"), "bias");
      m.weights = number_array(field(params, "weights"), dimension, "weights");
      model.classifier = std::move(m);
      break;
    }
    case ClassifierKind::kNaiveBayes: {
      NaiveBayesModel m;
      m.alpha = finite_number(field(hyper, "alpha"), "alpha");
      const auto prior = number_array(field(params, "log_prior"), 2, "log_prior");
      m.log_prior = {prior[0], prior[1]};
      const auto& likelihood = field(params, "log_likelihood");
      if (!likelihood.is_array() || likelihood.size() != 2) corrupt("log_likelihood must hold two rows");
      m.log_likelihood[0] = number_array(likelihood[0], dimension, "log_likelihood");
      m.log_likelihood[1] = number_array(likelihood[1], dimension, "log_likelihood");
      model.classifier = std::move(m);
      break;
    }
    case ClassifierKind::kSvm: {
      SvmModel m;
      m.hyper.lambda = finite_number(field(hyper, "lambda"), "lambda");
      m.hyper.epochs = get_as<std::size_t>(field(hyper, "epochs"), "epochs");
      m.hyper.seed = get_as<std::uint64_t>(field(hyper, "seed"), "seed");
      m.bias = finite_number(field(params, "bias"), "bias");
      m.weights = number_array(field(params, "weights"), dimension, "weights");
      model.classifier = std::move(m);
      break;
    }
  }
  return model;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << serialize_model(model);
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  return deserialize_model(csv::read_text_file(path));
}

}  // namespace stressdetect
