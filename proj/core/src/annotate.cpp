#include "stressdetect/annotate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>

#include "json.hpp"
#include "stressdetect/csv.hpp"
#include "stressdetect/error.hpp"

namespace stressdetect {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string format_number(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

nlohmann::ordered_json kappa_json(const KappaResult& k) {
  return {{"value", k.kappa},
          {"raters", k.raters},
          {"items_used", k.items_used},
          {"items_dropped", k.items_dropped},
          {"degenerate_marginals", k.degenerate_marginals}};
}

}  // namespace

void AnnotationMatrix::validate() const {
  if (scores.size() != items.size()) {
    throw Error(ErrorCode::kInvalidArgument, "score rows do not match the item count");
  }
  for (const auto& annotator : annotators) {
    if (!(annotator.weight > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "annotator '" + annotator.id + "' has a non-positive weight");
    }
  }
  for (const auto& row : scores) {
    if (row.size() != annotators.size()) {
      throw Error(ErrorCode::kInvalidArgument, "score row width does not match the annotator count");
    }
    for (const auto& score : row) {
      if (score && (*score < kMinAnnotationScore || *score > kMaxAnnotationScore)) {
        throw Error(ErrorCode::kInvalidArgument, "score " + std::to_string(*score) + " outside [-5, 5]");
      }
    }
  }
}

OutlierFlags detect_outliers(const AnnotationMatrix& matrix) {
  matrix.validate();
  OutlierFlags flags(matrix.items.size(), std::vector<bool>(matrix.annotators.size(), false));
  for (std::size_t j = 0; j < matrix.items.size(); ++j) {
    const auto& row = matrix.scores[j];
    long long k = 0, sum = 0, sum_sq = 0;
    for (const auto& score : row) {
      if (!score) continue;
      ++k;
      sum += *score;
      sum_sq += static_cast<long long>(*score) * *score;
    }
    if (k < 2) {
      throw Error(ErrorCode::kTooFewScores,
                  "item '" + matrix.items[j].id + "' has " + std::to_string(k) + " score(s); need at least 2");
    }
    // |a - loo_mean| > pop_std, squared and scaled to integers:
    // (k*a - S)^2 * k^2 > (k*Q - S^2) * (k-1)^2.
    const long long variance_scaled = k * sum_sq - sum * sum;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!row[i]) continue;
      const long long deviation = k * *row[i] - sum;
      flags[j][i] = deviation * deviation * k * k > variance_scaled * (k - 1) * (k - 1);
    }
  }
  return flags;
}

ExclusionResult exclude_annotators(const AnnotationMatrix& matrix, const OutlierFlags& flags, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "exclusion threshold must lie in (0, 1]");
  }
  matrix.validate();
  if (flags.size() != matrix.items.size()) {
    throw Error(ErrorCode::kInvalidArgument, "outlier flags do not match the matrix shape");
  }

  ExclusionResult result;
  std::vector<bool> keep(matrix.annotators.size(), true);
  for (std::size_t i = 0; i < matrix.annotators.size(); ++i) {
    AnnotatorOutlierRate rate;
    rate.annotator = matrix.annotators[i].id;
    for (std::size_t j = 0; j < matrix.items.size(); ++j) {
      if (!matrix.scores[j][i]) continue;
      ++rate.present;
      if (flags[j].at(i)) ++rate.flagged;
    }
    rate.rate = rate.present ? static_cast<double>(rate.flagged) / static_cast<double>(rate.present) : 0.0;
    if (rate.present > 0 && rate.rate >= threshold) {
      keep[i] = false;
      result.excluded.push_back(rate);
    }
    result.rates.push_back(std::move(rate));
  }
  if (std::none_of(keep.begin(), keep.end(), [](bool k) { return k; })) {
    throw Error(ErrorCode::kAllExcluded, "every annotator reached the outlier threshold");
  }

  result.matrix.items = matrix.items;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) result.matrix.annotators.push_back(matrix.annotators[i]);
  }
  for (const auto& row : matrix.scores) {
    std::vector<std::optional<int>> kept;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      if (keep[i]) kept.push_back(row[i]);
    }
    result.matrix.scores.push_back(std::move(kept));
  }
  return result;
}

int binarize_score(double weighted_mean) { return weighted_mean < 0.0 ? 1 : 0; }

ConsensusResult weighted_consensus(const AnnotationMatrix& matrix) {
  matrix.validate();
  ConsensusResult result;
  for (std::size_t j = 0; j < matrix.items.size(); ++j) {
    double numerator = 0.0;
    double denominator = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < matrix.annotators.size(); ++i) {
      if (const auto& score = matrix.scores[j][i]) {
        numerator += matrix.annotators[i].weight * *score;
        denominator += matrix.annotators[i].weight;
        ++n;
      }
    }
    if (n == 0) {
      throw Error(ErrorCode::kEmptyItem, "item '" + matrix.items[j].id + "' has no remaining scores");
    }
    const double mean = numerator / denominator;
    result.items.push_back({matrix.items[j].id, mean, binarize_score(mean), n});
  }
  return result;
}

KappaResult fleiss_kappa(const std::vector<std::vector<std::optional<int>>>& ratings,
                         std::span<const int> categories) {
  KappaResult result;
  result.raters = ratings.empty() ? 0 : ratings.front().size();
  std::vector<int> cats(categories.begin(), categories.end());
  if (cats.empty()) {
    for (const auto& row : ratings) {
      for (const auto& r : row) {
        if (r) cats.push_back(*r);
      }
    }
  }
  std::sort(cats.begin(), cats.end());
  cats.erase(std::unique(cats.begin(), cats.end()), cats.end());

  const std::size_t n = result.raters;
  std::vector<std::vector<std::size_t>> counts;
  for (const auto& row : ratings) {
    if (row.size() != n || std::any_of(row.begin(), row.end(), [](const auto& r) { return !r.has_value(); })) {
      ++result.items_dropped;
      continue;
    }
    std::vector<std::size_t> c(cats.size(), 0);
    for (const auto& r : row) {
      const auto it = std::lower_bound(cats.begin(), cats.end(), *r);
      if (it == cats.end() || *it != *r) {
        throw Error(ErrorCode::kInvalidArgument, "rating " + std::to_string(*r) + " is not a listed category");
      }
      ++c[static_cast<std::size_t>(it - cats.begin())];
    }
    counts.push_back(std::move(c));
  }
  if (counts.empty() || n < 2) {
    throw Error(ErrorCode::kNoValidItems, "no item has complete ratings from at least two raters");
  }
  result.items_used = counts.size();

  const double big_n = static_cast<double>(counts.size());
  const double raters = static_cast<double>(n);
  double p_bar = 0.0;
  std::vector<double> category_totals(cats.size(), 0.0);
  for (const auto& c : counts) {
    double squares = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      squares += static_cast<double>(c[k] * c[k]);
      category_totals[k] += static_cast<double>(c[k]);
    }
    p_bar += (squares - raters) / (raters * (raters - 1.0));
  }
  p_bar /= big_n;
  double p_e = 0.0;
  for (double total : category_totals) {
    const double p = total / (big_n * raters);
    p_e += p * p;
  }
  if (p_e >= 1.0) {
    result.degenerate_marginals = true;
    result.kappa = 1.0;
  } else {
    result.kappa = (p_bar - p_e) / (1.0 - p_e);
  }
  return result;
}

std::vector<std::vector<std::optional<int>>> binarized_labels(const AnnotationMatrix& matrix) {
  std::vector<std::vector<std::optional<int>>> labels;
  labels.reserve(matrix.scores.size());
  for (const auto& row : matrix.scores) {
    std::vector<std::optional<int>> out;
    for (const auto& score : row) {
      out.push_back(score ? std::optional<int>(binarize_score(*score)) : std::nullopt);
    }
    labels.push_back(std::move(out));
  }
  return labels;
}

CorrelationMatrix annotator_correlation(const AnnotationMatrix& matrix) {
  matrix.validate();
  const std::size_t m = matrix.annotators.size();
  CorrelationMatrix result;
  for (const auto& a : matrix.annotators) result.annotators.push_back(a.id);
  result.values.assign(m, std::vector<std::optional<double>>(m));
  for (std::size_t a = 0; a < m; ++a) {
    result.values[a][a] = 1.0;
    for (std::size_t b = a + 1; b < m; ++b) {
      std::vector<double> xs, ys;
      for (const auto& row : matrix.scores) {
        if (row[a] && row[b]) {
          xs.push_back(*row[a]);
          ys.push_back(*row[b]);
        }
      }
      if (xs.size() < 3) continue;
      const double k = static_cast<double>(xs.size());
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
      }
      mx /= k;
      my /= k;
      double sxy = 0.0, sxx = 0.0, syy = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
      }
      if (sxx == 0.0 || syy == 0.0) continue;
      const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
      result.values[a][b] = r;
      result.values[b][a] = r;
    }
  }
  return result;
}

AnnotationSummary summarize_annotations(const AnnotationMatrix& matrix, double threshold) {
  AnnotationSummary summary;
  const auto flags = detect_outliers(matrix);
  summary.exclusion = exclude_annotators(matrix, flags, threshold);
  summary.consensus = weighted_consensus(summary.exclusion.matrix);
  summary.correlations = annotator_correlation(matrix);

  const std::vector<int> binary = {0, 1};
  summary.kappa_all_annotators = fleiss_kappa(binarized_labels(matrix), binary);
  if (summary.exclusion.matrix.annotators.size() >= 2) {
    summary.kappa = fleiss_kappa(binarized_labels(summary.exclusion.matrix), binary);
  } else {
    summary.warnings.push_back("fewer than two annotators retained; kappa reported over all annotators");
    summary.kappa = summary.kappa_all_annotators;
  }
  if (summary.kappa.items_dropped > 0) {
    summary.warnings.push_back(std::to_string(summary.kappa.items_dropped) +
                               " item(s) with missing ratings dropped from Fleiss' kappa");
  }
  for (std::size_t a = 0; a < summary.correlations.annotators.size(); ++a) {
    for (std::size_t b = a + 1; b < summary.correlations.annotators.size(); ++b) {
      if (!summary.correlations.values[a][b]) {
        summary.warnings.push_back("InsufficientOverlap: no correlation for " + summary.correlations.annotators[a] +
                                   " / " + summary.correlations.annotators[b]);
      }
    }
  }
  return summary;
}

AnnotationMatrix load_annotations(const std::filesystem::path& scores_path,
                                  const std::optional<std::filesystem::path>& weights_path) {
  const auto table = csv::read_file(scores_path);
  if (table.header.size() < 3) {
    throw Error(ErrorCode::kMissingColumn, "annotation file needs item_id, text and at least one annotator column");
  }
  AnnotationMatrix matrix;
  for (std::size_t c = 2; c < table.header.size(); ++c) {
    matrix.annotators.push_back({table.header[c], 1.0});
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto cell = [&](std::size_t c) { return c < row.size() ? std::string_view(row[c]) : std::string_view(); };
    matrix.items.push_back({std::string(cell(0)), std::string(cell(1))});
    std::vector<std::optional<int>> scores;
    for (std::size_t c = 2; c < table.header.size(); ++c) {
      const auto text = trim(cell(c));
      if (text.empty()) {
        scores.emplace_back();
        continue;
      }
      int value = 0;
      const auto* begin = text.data() + (text.front() == '+' ? 1 : 0);
      const auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size() || value < kMinAnnotationScore ||
          value > kMaxAnnotationScore) {
        throw Error(ErrorCode::kBadRow, "score '" + std::string(text) + "' is not an integer in [-5, 5]",
                    table.line_of[r]);
      }
      scores.emplace_back(value);
    }
    matrix.scores.push_back(std::move(scores));
  }

  if (weights_path) {
    const auto weights = csv::read_file(*weights_path);
    std::map<std::string, double, std::less<>> by_id;
    for (std::size_t r = 0; r < weights.rows.size(); ++r) {
      const auto& row = weights.rows[r];
      if (row.size() < 2) throw Error(ErrorCode::kBadRow, "expected annotator_id,weight", weights.line_of[r]);
      const auto text = trim(row[1]);
      char* end = nullptr;
      const std::string number(text);
      const double w = std::strtod(number.c_str(), &end);
      if (number.empty() || end != number.c_str() + number.size() || !(w > 0.0) || !std::isfinite(w)) {
        throw Error(ErrorCode::kBadRow, "weight '" + number + "' is not a positive number", weights.line_of[r]);
      }
      by_id[std::string(trim(row[0]))] = w;
    }
    for (auto& annotator : matrix.annotators) {
      if (const auto it = by_id.find(annotator.id); it != by_id.end()) annotator.weight = it->second;
    }
  }
  matrix.validate();
  return matrix;
}

void write_consensus_csv(std::ostream& out, const ConsensusResult& consensus) {
  csv::write_row(out, {"item_id", "weighted_mean", "label", "n_scores"});
  for (const auto& item : consensus.items) {
    csv::write_row(out, {item.id, format_number(item.weighted_mean), std::to_string(item.label),
                         std::to_string(item.n_scores)});
  }
}

std::string annotation_summary_json(const AnnotationSummary& summary) {
  using Json = nlohmann::ordered_json;
  Json j;
  Json rates = Json::array();
  for (const auto& r : summary.exclusion.rates) {
    rates.push_back({{"annotator", r.annotator}, {"flagged", r.flagged}, {"present", r.present}, {"rate", r.rate}});
  }
  Json excluded = Json::array();
  for (const auto& r : summary.exclusion.excluded) {
    excluded.push_back({{"annotator", r.annotator}, {"rate", r.rate}});
  }
  j["excluded"] = std::move(excluded);
  j["outlier_rates"] = std::move(rates);
  j["retained"] = Json::array();
  for (const auto& a : summary.exclusion.matrix.annotators) {
    j["retained"].push_back({{"annotator", a.id}, {"weight", a.weight}});
  }
  j["kappa"] = summary.kappa.kappa;
  j["kappa_detail"] = kappa_json(summary.kappa);
  j["kappa_all_annotators"] = kappa_json(summary.kappa_all_annotators);
  j["kappa_basis"] = "binarized labels (score < 0 => stressed), retained annotators";
  Json matrix = Json::array();
  for (const auto& row : summary.correlations.values) {
    Json out = Json::array();
    for (const auto& v : row) out.push_back(v ? Json(*v) : Json(nullptr));
    matrix.push_back(std::move(out));
  }
  j["correlations"] = {{"annotators", summary.correlations.annotators}, {"matrix", std::move(matrix)}};
  j["warnings"] = summary.warnings;
  return j.dump(2);
}

}  // namespace stressdetect
