#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace stressdetect {

// Positive class is 1 (stressed).
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

// Throws LengthMismatch or EmptyInput.
ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> actual);

// Metrics whose denominator is zero are reported as 0 with the matching
// degenerate flag set.
struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;
  ConfusionMatrix matrix;
};

MetricsReport metrics(const ConfusionMatrix& matrix);

// One-row table laid out like the usual classifier comparison table:
// accuracy as a percentage (2 decimals), the rest as fractions (4 decimals).
std::string format_metrics_table(const MetricsReport& report, const std::string& features,
                                 const std::string& classifier);
std::string metrics_to_json(const MetricsReport& report);

}  // namespace stressdetect
