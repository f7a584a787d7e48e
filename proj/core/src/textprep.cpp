#include "stressdetect/textprep.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>

#include "stressdetect/csv.hpp"
#include "stressdetect/error.hpp"
#include "stressdetect/porter.hpp"
#include "unicode.hpp"

namespace stressdetect {

namespace detail {
extern const std::string_view kDefaultStopwordsText;
}  // namespace detail

namespace {

using detail::decode_utf8;

std::uint64_t fnv1a(std::string_view data, std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Removes <...> spans that contain no nested '<'. An unmatched '<' is left in
// place for the character filter to drop.
std::string remove_tags(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '<') {
      const auto close = text.find_first_of("<>", i + 1);
      if (close != std::string_view::npos && text[close] == '>') {
        out.push_back(' ');
        i = close + 1;
        continue;
      }
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

}  // namespace

std::string_view to_string(Stemmer stemmer) {
  return stemmer == Stemmer::kPorter ? "porter" : "none";
}

Stemmer parse_stemmer(std::string_view name) {
  if (name == "porter") return Stemmer::kPorter;
  if (name == "none") return Stemmer::kNone;
  throw Error(ErrorCode::kInvalidArgument, "unknown stemmer '" + std::string(name) + "'");
}

StopwordSet parse_stopwords(std::string_view text) {
  StopwordSet words;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    while (!line.empty() && is_ascii_space(line.front())) line.remove_prefix(1);
    while (!line.empty() && is_ascii_space(line.back())) line.remove_suffix(1);
    if (!line.empty()) {
      words.insert(lowercase(line));
    }
    start = end + 1;
  }
  return words;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  return parse_stopwords(csv::read_text_file(path));
}

const StopwordSet& default_stopwords() {
  static const StopwordSet words = parse_stopwords(detail::kDefaultStopwordsText);
  return words;
}

PipelineConfig PipelineConfig::defaults() {
  PipelineConfig config;
  config.stopwords = default_stopwords();
  return config;
}

std::string PipelineConfig::fingerprint() const {
  std::uint64_t hash = fnv1a("stopwords:");
  for (const auto& word : stopwords) {
    hash = fnv1a(word, hash);
    hash = fnv1a("\n", hash);
  }
  hash = fnv1a("|stemmer:", hash);
  hash = fnv1a(to_string(stemmer), hash);
  hash = fnv1a("|removal:", hash);
  hash = fnv1a(kRemovalClassVersion, hash);
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

std::string lowercase(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto d = decode_utf8(text, pos);
    if (!d.valid) {
      out.push_back(text[pos]);
    } else {
      detail::append_utf8(out, detail::simple_lowercase(d.code_point));
    }
    pos += d.length;
  }
  return out;
}

std::string strip_noncharacters(std::string_view text) {
  const std::string untagged = remove_tags(text);
  const std::string_view view(untagged);
  std::string out;
  out.reserve(untagged.size());
  bool pending_space = false;
  std::size_t pos = 0;
  while (pos < view.size()) {
    const auto d = decode_utf8(view, pos);
    pos += d.length;
    char32_t cp = d.code_point;
    if (cp == 0x2019) cp = '\'';  // typographic apostrophe
    const bool keep =
        d.valid && (detail::is_letter(cp) || detail::is_digit(cp) || cp == '\'');
    if (!keep) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) {
      out.push_back(' ');
    }
    pending_space = false;
    detail::append_utf8(out, cp);
  }
  return out;
}

TokenList tokenize(std::string_view text) {
  TokenList tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ascii_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_ascii_space(text[i])) ++i;
    if (i > start) {
      tokens.emplace_back(text.substr(start, i - start));
    }
  }
  return tokens;
}

TokenList remove_stopwords(TokenList tokens, const PipelineConfig& config) {
  std::erase_if(tokens, [&](const std::string& token) { return config.stopwords.contains(token); });
  return tokens;
}

TokenList stem(TokenList tokens, const PipelineConfig& config) {
  if (config.stemmer == Stemmer::kPorter) {
    for (auto& token : tokens) {
      token = porter_stem(token);
    }
  }
  return tokens;
}

TokenList surface_tokens(std::string_view text) {
  return tokenize(strip_noncharacters(lowercase(text)));
}

TokenList preprocess_tokens(std::string_view text, const PipelineConfig& config) {
  return stem(remove_stopwords(surface_tokens(text), config), config);
}

std::string join_tokens(const TokenList& tokens) {
  std::string out;
  for (const auto& token : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

std::string preprocess(std::string_view text, const PipelineConfig& config) {
  return join_tokens(preprocess_tokens(text, config));
}

}  // namespace stressdetect
