// stressdetect: train, apply and summarise stress classifiers over Reddit-style corpora.
//
// Exit codes: 0 success, 2 data error, 64 usage error.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stressdetect/annotate.hpp"
#include "stressdetect/classify.hpp"
#include "stressdetect/corpus.hpp"
#include "stressdetect/csv.hpp"
#include "stressdetect/emotion.hpp"
#include "stressdetect/error.hpp"
#include "stressdetect/eval.hpp"
#include "stressdetect/report.hpp"
#include "stressdetect/textprep.hpp"

namespace fs = std::filesystem;
namespace sd = stressdetect;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::uint64_t seed = 42;
  unsigned jobs = 1;
  std::string stopwords;
  std::string stemmer = "porter";
  std::string format;
};

struct TrainArgs {
  std::string train_path;
  std::string test_path;
  std::string model_out;
  std::string metrics_out;
  std::string load_summary;
  std::string classifier = "logistic";
  std::string features = "bow";
  bool l2_normalize = false;
  std::vector<std::string> columns;
  double learning_rate = 0.1;
  std::size_t epochs = 500;
  double l2 = 1e-4;
  double nb_alpha = 1.0;
  double svm_lambda = 1e-4;
  std::size_t svm_epochs = 50;
  std::size_t min_df = 1;
  std::size_t max_features = 0;
  bool skip_bad_rows = false;
};

struct PredictArgs {
  std::string model;
  std::string posts;
  std::string out;
  std::vector<std::string> columns;
};

struct AnalyzeArgs {
  std::string model;
  std::string posts;
  std::string groups;
  bool group_by_community = false;
  std::string lexicon = STRESSDETECT_DEFAULT_LEXICON;
  bool no_emotions = false;
  bool all_emotions = false;
  std::string out_dir;
  std::size_t top_n = 10;
  std::string median = "mean-of-two";
  std::vector<std::string> columns;
  std::string load_summary;
  bool skip_bad_rows = false;
};

struct AnnotateArgs {
  std::string scores;
  std::string weights;
  double threshold = 0.40;
  std::string out_dir;
  std::string model;
};

struct EmotionsArgs {
  std::string input;
  std::string lexicon = STRESSDETECT_DEFAULT_LEXICON;
  std::string out;
  bool plain = false;
  std::vector<std::string> columns;
};

struct StatsArgs {
  std::string posts;
  std::vector<std::string> columns;
  std::string load_summary;
  bool skip_bad_rows = false;
};

void require_file(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) {
    throw sd::Error(sd::ErrorCode::kIo, std::string(what) + " not found: " + path);
  }
}

template <typename Schema>
Schema schema_from(const std::vector<std::string>& overrides) {
  Schema schema;
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw UsageError("--col expects field=column, got '" + item + "'");
    }
    try {
      schema.apply(std::string_view(item).substr(0, eq), std::string_view(item).substr(eq + 1));
    } catch (const sd::Error& e) {
      throw UsageError(e.what());
    }
  }
  return schema;
}

sd::PipelineConfig pipeline(const GlobalOptions& g) {
  sd::PipelineConfig config = sd::PipelineConfig::defaults();
  try {
    config.stemmer = sd::parse_stemmer(g.stemmer);
  } catch (const sd::Error& e) {
    throw UsageError(e.what());
  }
  if (!g.stopwords.empty()) {
    require_file(g.stopwords, "stopword file");
    config.stopwords = sd::load_stopwords(g.stopwords);
  }
  return config;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) throw sd::Error(sd::ErrorCode::kIo, "cannot write " + path);
}

void report_load(const sd::LoadSummary& summary, const std::string& path) {
  for (const auto& w : summary.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& e : summary.errors) std::cerr << "skipped: " << e << "\n";
  if (!path.empty()) write_text(path, summary.to_json());
}

std::string now_utc() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::atoll(epoch));
  return sd::format_timestamp(std::chrono::sys_seconds{std::chrono::seconds{t}});
}

void warn_fingerprint(const sd::TrainedModel& model, const sd::PipelineConfig& config) {
  if (!model.fingerprint_matches(config)) {
    std::cerr << "warning: FingerprintMismatch: model was trained with pipeline " << model.pipeline_fingerprint
              << ", current pipeline is " << config.fingerprint() << "\n";
  }
}

std::vector<int> labels_of(const std::vector<sd::LabeledExample>& examples) {
  std::vector<int> labels;
  labels.reserve(examples.size());
  for (const auto& e : examples) labels.push_back(e.label);
  return labels;
}

int run_train(const GlobalOptions& g, const TrainArgs& a) {
  sd::TrainOptions options;
  try {
    options.classifier = sd::parse_classifier_kind(a.classifier);
    options.features = sd::parse_feature_kind(a.features);
  } catch (const sd::Error& e) {
    throw UsageError(e.what());
  }
  const auto schema = schema_from<sd::LabeledSchema>(a.columns);
  const auto config = pipeline(g);
  require_file(a.train_path, "training file");
  if (!a.test_path.empty()) require_file(a.test_path, "test file");

  options.l2_normalize = a.l2_normalize;
  options.vocabulary.min_df = a.min_df;
  options.vocabulary.max_features = a.max_features;
  options.logistic.learning_rate = a.learning_rate;
  options.logistic.epochs = a.epochs;
  options.logistic.l2 = a.l2;
  options.logistic.seed = g.seed;
  options.nb_alpha = a.nb_alpha;
  options.svm.lambda = a.svm_lambda;
  options.svm.epochs = a.svm_epochs;
  options.svm.seed = g.seed;

  const sd::LoadOptions load{a.skip_bad_rows};
  const auto train = sd::load_labeled(a.train_path, schema, load);
  report_load(train.summary, a.load_summary);
  const auto model = sd::train_model(train.records, config, options);
  sd::save_model(model, a.model_out);
  std::cerr << "trained " << sd::to_string(options.classifier) << " on " << train.records.size()
            << " examples, vocabulary " << model.vocabulary.size() << ", model written to " << a.model_out << "\n";

  if (!a.test_path.empty()) {
    const auto test = sd::load_labeled(a.test_path, schema, load);
    for (const auto& w : test.summary.warnings) std::cerr << "warning: " << w << "\n";
    std::vector<int> predicted;
    predicted.reserve(test.records.size());
    for (const auto& e : test.records) predicted.push_back(sd::predict_text(model, e.text, config).label);
    const auto report = sd::metrics(sd::confusion(predicted, labels_of(test.records)));
    std::cout << sd::format_metrics_table(report, std::string(sd::to_string(options.features)),
                                          std::string(sd::to_string(options.classifier)));
    if (!a.metrics_out.empty()) write_text(a.metrics_out, sd::metrics_to_json(report));
  }
  return kExitOk;
}

int run_predict(const GlobalOptions& g, const PredictArgs& a) {
  const auto schema = schema_from<sd::PostSchema>(a.columns);
  const auto config = pipeline(g);
  require_file(a.model, "model file");
  require_file(a.posts, "posts file");
  const auto model = sd::load_model(a.model);
  warn_fingerprint(model, config);

  const auto table = sd::csv::read_file(a.posts);
  const auto text_col = table.column(schema.text);
  if (!text_col) throw sd::Error(sd::ErrorCode::kMissingColumn, "column '" + schema.text + "' not found");
  const auto title_col = table.column(schema.title);

  std::vector<sd::PostRecord> posts(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (*text_col < row.size()) posts[r].body = row[*text_col];
    if (title_col && *title_col < row.size()) posts[r].title = row[*title_col];
  }
  sd::ClassifyOptions options;
  options.jobs = g.jobs;
  const auto classified = sd::classify_corpus(model, posts, config, options);

  std::ostringstream out;
  auto header = table.header;
  header.emplace_back("label");
  header.emplace_back("probability");
  sd::csv::write_row(out, header);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    auto row = table.rows[r];
    row.resize(table.header.size());
    row.push_back(std::to_string(classified[r].label));
    char score[32];
    std::snprintf(score, sizeof score, "%.17g", classified[r].score);
    row.emplace_back(score);
    sd::csv::write_row(out, row);
  }
  if (a.out.empty() || a.out == "-") {
    std::cout << out.str();
  } else {
    write_text(a.out, out.str());
  }
  return kExitOk;
}

int run_analyze(const GlobalOptions& g, const AnalyzeArgs& a) {
  const std::string format = g.format.empty() ? "all" : g.format;
  std::vector<sd::ReportFormat> formats;
  if (format == "all") {
    formats = {sd::ReportFormat::kJson, sd::ReportFormat::kCsv};
  } else {
    try {
      formats = {sd::parse_report_format(format)};
    } catch (const sd::Error& e) {
      throw UsageError(std::string(e.what()) + "; analyze also accepts 'all'");
    }
  }
  sd::MedianConvention median = sd::MedianConvention::kMeanOfTwo;
  if (a.median == "lower-middle") {
    median = sd::MedianConvention::kLowerMiddle;
  } else if (a.median != "mean-of-two") {
    throw UsageError("--median must be mean-of-two or lower-middle");
  }
  if (a.group_by_community && !a.groups.empty()) throw UsageError("--groups and --group-by-community are exclusive");
  const auto schema = schema_from<sd::PostSchema>(a.columns);
  const auto config = pipeline(g);

  require_file(a.model, "model file");
  require_file(a.posts, "posts file");
  if (!a.groups.empty()) require_file(a.groups, "group map");
  if (!a.no_emotions) require_file(a.lexicon, "emotion lexicon");

  const auto model = sd::load_model(a.model);
  warn_fingerprint(model, config);
  const auto posts = sd::load_posts(a.posts, schema, sd::LoadOptions{a.skip_bad_rows});
  report_load(posts.summary, a.load_summary);
  const auto groups = a.group_by_community ? sd::GroupMap::per_community()
                      : a.groups.empty()   ? sd::GroupMap::academic_levels()
                                           : sd::GroupMap::load(a.groups);
  std::optional<sd::EmotionLexicon> lexicon;
  if (!a.no_emotions) {
    lexicon = sd::load_lexicon(a.lexicon);
    for (const auto& w : lexicon->warnings) std::cerr << "warning: " << w << "\n";
  }

  sd::ClassifyOptions classify;
  classify.lexicon = lexicon ? &*lexicon : nullptr;
  classify.emotions_for_all = a.all_emotions;
  classify.jobs = g.jobs;
  const auto classified = sd::classify_corpus(model, posts.records, config, classify);

  sd::ReportOptions options;
  options.top_n = a.top_n;
  options.median = median;
  options.generated_at = now_utc();
  options.lexicon_version = lexicon ? lexicon->version : "";
  options.seed = g.seed;
  options.emotions_for_all = a.all_emotions;
  auto report = sd::build_report(classified, groups, config, options);
  report.model_kind = std::string(sd::to_string(model.kind()));
  report.model_fingerprint = model.pipeline_fingerprint;
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";

  for (const auto f : formats) sd::emit_report(report, f, a.out_dir);
  std::cout << sd::format_summary_table(report);
  return kExitOk;
}

int run_annotate(const GlobalOptions& g, const AnnotateArgs& a) {
  if (!(a.threshold > 0.0 && a.threshold <= 1.0)) throw UsageError("--threshold must lie in (0, 1]");
  const auto config = pipeline(g);
  require_file(a.scores, "annotation file");
  if (!a.weights.empty()) require_file(a.weights, "weights file");
  if (!a.model.empty()) require_file(a.model, "model file");

  const auto matrix = sd::load_annotations(
      a.scores, a.weights.empty() ? std::nullopt : std::optional<fs::path>(a.weights));
  const auto summary = sd::summarize_annotations(matrix, a.threshold);

  auto json = nlohmann::ordered_json::parse(sd::annotation_summary_json(summary));
  json["threshold"] = a.threshold;
  if (!a.model.empty()) {
    const auto model = sd::load_model(a.model);
    warn_fingerprint(model, config);
    std::vector<int> predicted, consensus;
    for (std::size_t j = 0; j < matrix.items.size(); ++j) {
      predicted.push_back(sd::predict_text(model, matrix.items[j].text, config).label);
      consensus.push_back(summary.consensus.items[j].label);
    }
    const auto report = sd::metrics(sd::confusion(predicted, consensus));
    json["model_vs_consensus"] = nlohmann::ordered_json::parse(sd::metrics_to_json(report));
    std::cout << "model accuracy against consensus: " << report.accuracy * 100.0 << "%\n";
  }

  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec) throw sd::Error(sd::ErrorCode::kIo, "cannot create " + a.out_dir);
  std::ostringstream consensus_csv;
  sd::write_consensus_csv(consensus_csv, summary.consensus);
  write_text((fs::path(a.out_dir) / "consensus.csv").string(), consensus_csv.str());
  write_text((fs::path(a.out_dir) / "annotation_summary.json").string(), json.dump(2) + "\n");

  for (const auto& w : summary.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "items: " << matrix.items.size() << ", annotators: " << matrix.annotators.size()
            << ", retained: " << summary.exclusion.matrix.annotators.size() << "\n";
  for (const auto& r : summary.exclusion.excluded) {
    std::cout << "excluded " << r.annotator << " (outlier rate " << r.rate << ")\n";
  }
  std::cout << "Fleiss kappa (retained): " << summary.kappa.kappa
            << ", all annotators: " << summary.kappa_all_annotators.kappa << "\n";
  return kExitOk;
}

int run_emotions(const GlobalOptions&, const EmotionsArgs& a) {
  require_file(a.input, "input file");
  require_file(a.lexicon, "emotion lexicon");
  const auto lexicon = sd::load_lexicon(a.lexicon);
  for (const auto& w : lexicon.warnings) std::cerr << "warning: " << w << "\n";

  std::vector<sd::EmotionRow> rows;
  if (a.plain) {
    std::istringstream in(sd::csv::read_text_file(a.input));
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      rows.push_back({std::to_string(n), sd::score_emotions(line, lexicon)});
    }
  } else {
    const auto schema = schema_from<sd::PostSchema>(a.columns);
    const auto table = sd::csv::read_file(a.input);
    const auto text_col = table.column(schema.text);
    if (!text_col && !table.header.empty()) {
      throw sd::Error(sd::ErrorCode::kMissingColumn, "column '" + schema.text + "' not found");
    }
    const auto title_col = table.column(schema.title);
    const auto id_col = table.column(schema.id);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      sd::PostRecord post;
      if (*text_col < row.size()) post.body = row[*text_col];
      if (title_col && *title_col < row.size()) post.title = row[*title_col];
      const std::string id = id_col && *id_col < row.size() ? row[*id_col] : std::to_string(table.line_of[r]);
      rows.push_back({id, sd::score_emotions(post.classification_text(), lexicon)});
    }
  }
  std::ostringstream out;
  sd::write_emotion_csv(out, rows);
  if (a.out.empty() || a.out == "-") {
    std::cout << out.str();
  } else {
    write_text(a.out, out.str());
  }
  return kExitOk;
}

int run_stats(const GlobalOptions& g, const StatsArgs& a) {
  const auto schema = schema_from<sd::PostSchema>(a.columns);
  const auto config = pipeline(g);
  require_file(a.posts, "posts file");
  const auto posts = sd::load_posts(a.posts, schema, sd::LoadOptions{a.skip_bad_rows});
  report_load(posts.summary, a.load_summary);
  std::cout << sd::corpus_stats(posts.records, config).to_json() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stress detection for academic Reddit communities"};
  app.set_version_flag("--version", STRESSDETECT_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for all randomness (SVM shuffling)")->capture_default_str();
  app.add_option("--jobs", global.jobs, "Worker threads for document classification")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  app.add_option("--stopwords", global.stopwords, "Stopword file replacing the built-in English list");
  app.add_option("--stemmer", global.stemmer, "porter or none")->capture_default_str();
  app.add_option("--format", global.format, "analyze output: json, csv or all (default all)");

  const auto add_columns = [](CLI::App* cmd, std::vector<std::string>& columns) {
    cmd->add_option("--col", columns, "Column override field=column (repeatable)");
  };

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a classifier on a labeled CSV");
  train_cmd->add_option("train", train.train_path, "Labeled training CSV")->required();
  train_cmd->add_option("--test", train.test_path, "Held-out labeled CSV; prints the metrics table");
  train_cmd->add_option("-o,--model-out", train.model_out, "Model JSON output")->required();
  train_cmd->add_option("--metrics-out", train.metrics_out, "Write test metrics as JSON");
  train_cmd->add_option("--classifier", train.classifier, "logistic, naive_bayes or svm")
      ->check(CLI::IsMember({"logistic", "naive_bayes", "nb", "svm"}))
      ->capture_default_str();
  train_cmd->add_option("--features", train.features, "bow or tfidf")
      ->check(CLI::IsMember({"bow", "tfidf"}))
      ->capture_default_str();
  train_cmd->add_flag("--l2-normalize", train.l2_normalize, "L2-normalise TF-IDF vectors");
  train_cmd->add_option("--learning-rate", train.learning_rate)->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--epochs", train.epochs)->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--l2", train.l2, "Logistic L2 penalty")->check(CLI::NonNegativeNumber)->capture_default_str();
  train_cmd->add_option("--nb-alpha", train.nb_alpha)->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--svm-lambda", train.svm_lambda)->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--svm-epochs", train.svm_epochs)->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--min-df", train.min_df)->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--max-features", train.max_features, "0 keeps every token")->capture_default_str();
  train_cmd->add_option("--load-summary", train.load_summary, "Write the training-file load summary as JSON");
  train_cmd->add_flag("--skip-bad-rows", train.skip_bad_rows, "Skip malformed rows instead of failing");
  add_columns(train_cmd, train.columns);

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "Append label,probability columns to a posts CSV");
  predict_cmd->add_option("--model", predict.model, "Model JSON")->required();
  predict_cmd->add_option("posts", predict.posts, "Posts CSV")->required();
  predict_cmd->add_option("-o,--out", predict.out, "Output CSV (default stdout)");
  add_columns(predict_cmd, predict.columns);

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Classify a post corpus and write the stress report");
  analyze_cmd->add_option("--model", analyze.model, "Model JSON")->required();
  analyze_cmd->add_option("posts", analyze.posts, "Posts CSV")->required();
  analyze_cmd->add_option("--groups", analyze.groups, "CSV community,group (default: academic levels)");
  analyze_cmd->add_flag("--group-by-community", analyze.group_by_community, "One group per community");
  analyze_cmd->add_option("--lexicon", analyze.lexicon, "Emotion lexicon (word<TAB>affect<TAB>flag)")
      ->capture_default_str();
  analyze_cmd->add_flag("--no-emotions", analyze.no_emotions, "Skip emotion scoring");
  analyze_cmd->add_flag("--all-emotions", analyze.all_emotions, "Score emotions for every post, not only stressed");
  analyze_cmd->add_option("-o,--out-dir", analyze.out_dir, "Report directory")->required();
  analyze_cmd->add_option("--top-n", analyze.top_n, "Top words per group")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze_cmd->add_option("--median", analyze.median, "mean-of-two or lower-middle")->capture_default_str();
  analyze_cmd->add_option("--load-summary", analyze.load_summary, "Write the posts load summary as JSON");
  analyze_cmd->add_flag("--skip-bad-rows", analyze.skip_bad_rows, "Skip malformed rows instead of failing");
  add_columns(analyze_cmd, analyze.columns);

  AnnotateArgs annotate;
  auto* annotate_cmd = app.add_subcommand("annotate", "Outlier exclusion, consensus and agreement");
  annotate_cmd->add_option("scores", annotate.scores, "CSV item_id,text,<annotator>...")->required();
  annotate_cmd->add_option("--weights", annotate.weights, "CSV annotator_id,weight");
  annotate_cmd->add_option("--threshold", annotate.threshold, "Outlier-rate exclusion threshold in (0, 1]")
      ->capture_default_str();
  annotate_cmd->add_option("-o,--out-dir", annotate.out_dir, "Output directory")->required();
  annotate_cmd->add_option("--model", annotate.model, "Score this model against the consensus labels");

  EmotionsArgs emotions;
  auto* emotions_cmd = app.add_subcommand("emotions", "Per-document NRC affect frequencies");
  emotions_cmd->add_option("input", emotions.input, "Posts CSV, or plain text with --plain")->required();
  emotions_cmd->add_option("--lexicon", emotions.lexicon, "Emotion lexicon")->capture_default_str();
  emotions_cmd->add_flag("--plain", emotions.plain, "Treat each non-blank input line as a document");
  emotions_cmd->add_option("-o,--out", emotions.out, "Output CSV (default stdout)");
  add_columns(emotions_cmd, emotions.columns);

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics for a posts CSV");
  stats_cmd->add_option("posts", stats.posts, "Posts CSV")->required();
  stats_cmd->add_option("--load-summary", stats.load_summary, "Write the load summary as JSON");
  stats_cmd->add_flag("--skip-bad-rows", stats.skip_bad_rows, "Skip malformed rows instead of failing");
  add_columns(stats_cmd, stats.columns);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*train_cmd) return run_train(global, train);
    if (*predict_cmd) return run_predict(global, predict);
    if (*analyze_cmd) return run_analyze(global, analyze);
    if (*annotate_cmd) return run_annotate(global, annotate);
    if (*emotions_cmd) return run_emotions(global, emotions);
    if (*stats_cmd) return run_stats(global, stats);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const sd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
