#pragma once

#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace stressdetect {

using TokenList = std::vector<std::string>;
using StopwordSet = std::set<std::string, std::less<>>;

enum class Stemmer { kPorter, kNone };

std::string_view to_string(Stemmer stemmer);
Stemmer parse_stemmer(std::string_view name);

// Identifies the character class removed by strip_noncharacters. Bump when the
// class changes so saved models detect the mismatch through the fingerprint.
inline constexpr std::string_view kRemovalClassVersion = "keep-letter-digit-space-apostrophe/v1";

struct PipelineConfig {
  StopwordSet stopwords;
  Stemmer stemmer = Stemmer::kPorter;

  // Vendored English stopword list with Porter stemming.
  static PipelineConfig defaults();

  // Stable hex digest of (stopword content, stemmer, removal class version).
  std::string fingerprint() const;
};

// One token per line, '#' starts a comment, blank lines ignored. Entries are
// lowercased.
StopwordSet parse_stopwords(std::string_view text);
StopwordSet load_stopwords(const std::filesystem::path& path);
const StopwordSet& default_stopwords();

// Pipeline stages, applied in this order by preprocess().
std::string lowercase(std::string_view text);
std::string strip_noncharacters(std::string_view text);
TokenList tokenize(std::string_view text);
TokenList remove_stopwords(TokenList tokens, const PipelineConfig& config);
TokenList stem(TokenList tokens, const PipelineConfig& config);

TokenList preprocess_tokens(std::string_view text, const PipelineConfig& config);
std::string preprocess(std::string_view text, const PipelineConfig& config);

// lowercase -> strip -> tokenize, without stopword removal or stemming. Used
// for surface-form lookups such as emotion lexicons.
TokenList surface_tokens(std::string_view text);

std::string join_tokens(const TokenList& tokens);

}  // namespace stressdetect
