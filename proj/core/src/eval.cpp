#include "stressdetect/eval.hpp"

#include <cstdio>

#include "json.hpp"
#include "stressdetect/error.hpp"

namespace stressdetect {

ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> actual) {
  if (predicted.size() != actual.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(predicted.size()) + " predictions vs " +
                                                std::to_string(actual.size()) + " labels");
  }
  if (predicted.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no prediction/label pairs");
  }
  ConfusionMatrix m;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == 1;
    const bool a = actual[i] == 1;
    if (p && a) ++m.tp;
    else if (p) ++m.fp;
    else if (a) ++m.fn;
    else ++m.tn;
  }
  return m;
}

MetricsReport metrics(const ConfusionMatrix& matrix) {
  MetricsReport r;
  r.matrix = matrix;
  const auto total = static_cast<double>(matrix.total());
  const auto tp = static_cast<double>(matrix.tp);
  r.accuracy = total > 0 ? static_cast<double>(matrix.tp + matrix.tn) / total : 0.0;

  if (matrix.tp + matrix.fp == 0) {
    r.precision_degenerate = true;
  } else {
    r.precision = tp / static_cast<double>(matrix.tp + matrix.fp);
  }
  if (matrix.tp + matrix.fn == 0) {
    r.recall_degenerate = true;
  } else {
    r.recall = tp / static_cast<double>(matrix.tp + matrix.fn);
  }
  if (r.precision + r.recall == 0.0) {
    r.f1_degenerate = true;
  } else {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  }
  return r;
}

std::string format_metrics_table(const MetricsReport& report, const std::string& features,
                                 const std::string& classifier) {
  char line[256];
  std::string out;
  std::snprintf(line, sizeof line, "%-9s | %-20s | %10s | %9s | %9s | %9s\n", "Features", "ML", "Accuracy,%",
                "Precision", "Recall", "F score");
  out += line;
  out += std::string(82, '-') + "\n";
  std::snprintf(line, sizeof line, "%-9s | %-20s | %10.2f | %9.4f | %9.4f | %9.4f\n", features.c_str(),
                classifier.c_str(), 100.0 * report.accuracy, report.precision, report.recall, report.f1);
  out += line;
  std::snprintf(line, sizeof line, "TP=%zu FP=%zu TN=%zu FN=%zu\n", report.matrix.tp, report.matrix.fp,
                report.matrix.tn, report.matrix.fn);
  out += line;
  return out;
}

std::string metrics_to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["accuracy"] = report.accuracy;
  j["precision"] = report.precision;
  j["recall"] = report.recall;
  j["f1"] = report.f1;
  j["accuracy_pct"] = report.accuracy * 100.0;
  j["degenerate"] = {{"precision", report.precision_degenerate},
                     {"recall", report.recall_degenerate},
                     {"f1", report.f1_degenerate}};
  j["confusion"] = {{"tp", report.matrix.tp}, {"fp", report.matrix.fp}, {"tn", report.matrix.tn},
                    {"fn", report.matrix.fn}};
  return j.dump(2);
}

}  // namespace stressdetect
