#include "stressdetect/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "stressdetect/error.hpp"
#include "stressdetect/textprep.hpp"

namespace stressdetect {

double FeatureVector::sum() const {
  double total = 0.0;
  for (const auto& [index, w] : entries) total += w;
  return total;
}

double FeatureVector::weight(std::uint32_t index) const {
  const auto it = std::lower_bound(entries.begin(), entries.end(), index,
                                   [](const auto& entry, std::uint32_t i) { return entry.first < i; });
  return (it != entries.end() && it->first == index) ? it->second : 0.0;
}

double FeatureVector::dot(std::span<const double> dense) const {
  double total = 0.0;
  for (const auto& [index, w] : entries) total += dense[index] * w;
  return total;
}

Vocabulary Vocabulary::from_parts(std::vector<std::string> tokens, std::vector<std::size_t> df,
                                  std::size_t n_docs) {
  if (tokens.size() != df.size()) {
    throw Error(ErrorCode::kInvalidArgument, "vocabulary token and df arrays differ in length");
  }
  Vocabulary vocab;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && !(tokens[i - 1] < tokens[i])) {
      throw Error(ErrorCode::kInvalidArgument, "vocabulary tokens are not strictly sorted");
    }
    if (df[i] < 1 || df[i] > n_docs) {
      throw Error(ErrorCode::kInvalidArgument, "document frequency out of range for '" + tokens[i] + "'");
    }
    vocab.index_.emplace(tokens[i], static_cast<std::uint32_t>(i));
  }
  vocab.tokens_ = std::move(tokens);
  vocab.df_ = std::move(df);
  vocab.n_docs_ = n_docs;
  return vocab;
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double Vocabulary::idf(std::uint32_t index) const {
  return std::log((1.0 + static_cast<double>(n_docs_)) / (1.0 + static_cast<double>(df_[index]))) + 1.0;
}

Vocabulary fit_vocabulary(std::span<const std::string> docs, const VocabularyOptions& options) {
  if (docs.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "cannot fit a vocabulary on zero documents");
  }
  std::map<std::string, std::size_t, std::less<>> counts;
  for (const auto& doc : docs) {
    auto tokens = tokenize(doc);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& token : tokens) ++counts[std::move(token)];
  }

  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [token, df] : counts) {
    if (df >= options.min_df) kept.emplace_back(token, df);
  }
  if (options.max_features > 0 && kept.size() > options.max_features) {
    std::stable_sort(kept.begin(), kept.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    kept.resize(options.max_features);
    std::sort(kept.begin(), kept.end());
  }

  Vocabulary vocab;
  vocab.n_docs_ = docs.size();
  vocab.tokens_.reserve(kept.size());
  vocab.df_.reserve(kept.size());
  for (auto& [token, df] : kept) {
    vocab.index_.emplace(token, static_cast<std::uint32_t>(vocab.tokens_.size()));
    vocab.tokens_.push_back(std::move(token));
    vocab.df_.push_back(df);
  }
  return vocab;
}

std::string_view to_string(FeatureKind kind) {
  return kind == FeatureKind::kBow ? "bow" : "tfidf";
}

FeatureKind parse_feature_kind(std::string_view name) {
  if (name == "bow") return FeatureKind::kBow;
  if (name == "tfidf") return FeatureKind::kTfidf;
  throw Error(ErrorCode::kInvalidArgument, "unknown feature kind '" + std::string(name) + "'");
}

FeatureVector vectorize_bow(std::string_view doc, const Vocabulary& vocab) {
  std::map<std::uint32_t, double> counts;
  for (const auto& token : tokenize(doc)) {
    if (const auto index = vocab.index_of(token)) counts[*index] += 1.0;
  }
  FeatureVector v;
  v.entries.assign(counts.begin(), counts.end());
  return v;
}

FeatureVector vectorize_tfidf(std::string_view doc, const Vocabulary& vocab, bool l2_normalize) {
  FeatureVector v = vectorize_bow(doc, vocab);
  for (auto& [index, w] : v.entries) w *= vocab.idf(index);
  if (l2_normalize && !v.empty()) {
    double norm = 0.0;
    for (const auto& [index, w] : v.entries) norm += w * w;
    norm = std::sqrt(norm);
    for (auto& [index, w] : v.entries) w /= norm;
  }
  return v;
}

FeatureVector vectorize(std::string_view doc, const Vocabulary& vocab, FeatureKind kind, bool l2_normalize) {
  return kind == FeatureKind::kBow ? vectorize_bow(doc, vocab) : vectorize_tfidf(doc, vocab, l2_normalize);
}

}  // namespace stressdetect
