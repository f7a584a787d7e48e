#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stressdetect {

// Sparse non-negative weights sorted by index; zero weights are never stored.
struct FeatureVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  double sum() const;
  double weight(std::uint32_t index) const;
  double dot(std::span<const double> dense) const;

  bool operator==(const FeatureVector&) const = default;
};

struct VocabularyOptions {
  std::size_t min_df = 1;
  std::size_t max_features = 0;  // 0 = unbounded
};

class Vocabulary {
 public:
  Vocabulary() = default;

  // Rebuilds a vocabulary from serialized parts. Throws InvalidArgument when the
  // tokens are not strictly sorted or a document frequency lies outside [1, n_docs].
  static Vocabulary from_parts(std::vector<std::string> tokens, std::vector<std::size_t> df,
                               std::size_t n_docs);

  std::size_t size() const { return tokens_.size(); }
  std::size_t n_docs() const { return n_docs_; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::size_t>& document_frequencies() const { return df_; }

  std::optional<std::uint32_t> index_of(std::string_view token) const;
  std::size_t df(std::uint32_t index) const { return df_[index]; }

  // Smoothed inverse document frequency: ln((1 + N) / (1 + df)) + 1.
  double idf(std::uint32_t index) const;

  bool operator==(const Vocabulary& other) const {
    return tokens_ == other.tokens_ && df_ == other.df_ && n_docs_ == other.n_docs_;
  }

 private:
  friend Vocabulary fit_vocabulary(std::span<const std::string>, const VocabularyOptions&);

  std::vector<std::string> tokens_;
  std::vector<std::size_t> df_;
  std::size_t n_docs_ = 0;
  std::map<std::string, std::uint32_t, std::less<>> index_;
};

// Documents are preprocessed, space-separated token strings. Tokens are indexed
// in lexicographic order. Throws EmptyCorpus for an empty document list.
Vocabulary fit_vocabulary(std::span<const std::string> docs, const VocabularyOptions& options = {});

enum class FeatureKind { kBow, kTfidf };

std::string_view to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view name);

FeatureVector vectorize_bow(std::string_view doc, const Vocabulary& vocab);
FeatureVector vectorize_tfidf(std::string_view doc, const Vocabulary& vocab, bool l2_normalize = false);
FeatureVector vectorize(std::string_view doc, const Vocabulary& vocab, FeatureKind kind,
                        bool l2_normalize = false);

}  // namespace stressdetect
