#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stressdetect {

inline constexpr int kMinAnnotationScore = -5;  // strong stress
inline constexpr int kMaxAnnotationScore = 5;   // not stressed at all

struct AnnotationItem {
  std::string id;
  std::string text;
};

struct Annotator {
  std::string id;
  double weight = 1.0;
};

// Items x annotators scores on the 11-point scale; missing judgments are nullopt.
struct AnnotationMatrix {
  std::vector<AnnotationItem> items;
  std::vector<Annotator> annotators;
  std::vector<std::vector<std::optional<int>>> scores;  // [item][annotator]

  // Throws InvalidArgument on ragged rows, out-of-range scores or
  // non-positive weights.
  void validate() const;
};

using OutlierFlags = std::vector<std::vector<bool>>;  // [item][annotator]

// A(i,j) is an outlier when |A(i,j) - mean of the other annotators' scores for
// item j| > population standard deviation of all scores for item j. Weights do
// not enter this rule. Throws TooFewScores for items with fewer than 2 scores.
OutlierFlags detect_outliers(const AnnotationMatrix& matrix);

struct AnnotatorOutlierRate {
  std::string annotator;
  std::size_t flagged = 0;
  std::size_t present = 0;
  double rate = 0.0;
};

struct ExclusionResult {
  AnnotationMatrix matrix;  // survivors only
  std::vector<AnnotatorOutlierRate> rates;     // every annotator, input order
  std::vector<AnnotatorOutlierRate> excluded;  // removed annotators
};

// Single pass: rates are computed once from `flags` and every annotator with
// flagged / present >= threshold is removed. Throws InvalidArgument when the
// threshold is outside (0, 1] and AllExcluded when nobody survives.
ExclusionResult exclude_annotators(const AnnotationMatrix& matrix, const OutlierFlags& flags,
                                   double threshold = 0.40);

// Stressed iff the weighted mean is strictly below the neutral midpoint 0.
int binarize_score(double weighted_mean);

struct ConsensusItem {
  std::string id;
  double weighted_mean = 0.0;
  int label = 0;
  std::size_t n_scores = 0;
};

struct ConsensusResult {
  std::vector<ConsensusItem> items;
};

// Per item sum(w_i * A(i,j)) / sum(w_i) over present scores. Throws EmptyItem
// when an item has no scores left.
ConsensusResult weighted_consensus(const AnnotationMatrix& matrix);

struct KappaResult {
  double kappa = 0.0;
  std::size_t raters = 0;
  std::size_t items_used = 0;
  std::size_t items_dropped = 0;  // items without exactly `raters` ratings
  bool degenerate_marginals = false;  // expected agreement is 1; kappa reported as 1
};

// Fleiss' kappa. Every row holds one item's categorical ratings; the rater
// count n is the row width and rows with missing ratings are dropped. When
// `categories` is empty the category set is inferred from the data. Throws
// NoValidItems when no complete row remains or n < 2.
KappaResult fleiss_kappa(const std::vector<std::vector<std::optional<int>>>& ratings,
                         std::span<const int> categories = {});

// binarize_score applied per judgment.
std::vector<std::vector<std::optional<int>>> binarized_labels(const AnnotationMatrix& matrix);

struct CorrelationMatrix {
  std::vector<std::string> annotators;
  // Pearson correlation over jointly rated items; nullopt when a pair shares
  // fewer than 3 items or either side has zero variance there.
  std::vector<std::vector<std::optional<double>>> values;
};

CorrelationMatrix annotator_correlation(const AnnotationMatrix& matrix);

struct AnnotationSummary {
  ExclusionResult exclusion;
  ConsensusResult consensus;
  KappaResult kappa;                 // retained annotators, binarized labels
  KappaResult kappa_all_annotators;  // before exclusion, binarized labels
  CorrelationMatrix correlations;    // all annotators, raw scores
  std::vector<std::string> warnings;
};

AnnotationSummary summarize_annotations(const AnnotationMatrix& matrix, double threshold = 0.40);

// CSV header `item_id,text,<annotator_id>...`; blank cell = missing score.
// The optional weights file is CSV `annotator_id,weight` (default weight 1).
AnnotationMatrix load_annotations(const std::filesystem::path& scores_path,
                                  const std::optional<std::filesystem::path>& weights_path = std::nullopt);

void write_consensus_csv(std::ostream& out, const ConsensusResult& consensus);
std::string annotation_summary_json(const AnnotationSummary& summary);

}  // namespace stressdetect
