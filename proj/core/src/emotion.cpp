#include "stressdetect/emotion.hpp"

#include <cstdio>
#include <ostream>

#include "stressdetect/csv.hpp"
#include "stressdetect/error.hpp"
#include "stressdetect/textprep.hpp"

namespace stressdetect {
namespace {

constexpr std::array<std::string_view, kAffectCount> kAffectNames = {
    "anger", "anticipation", "disgust", "fear", "joy", "negative", "positive", "sadness", "surprise", "trust"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string format_frequency(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

}  // namespace

std::string_view to_string(Affect affect) { return kAffectNames[static_cast<std::size_t>(affect)]; }

std::optional<Affect> parse_affect(std::string_view name) {
  for (std::size_t i = 0; i < kAffectCount; ++i) {
    if (kAffectNames[i] == name) return static_cast<Affect>(i);
  }
  return std::nullopt;
}

AffectMask EmotionLexicon::lookup(std::string_view word) const {
  const auto it = words.find(word);
  return it == words.end() ? 0 : it->second;
}

EmotionLexicon parse_lexicon(std::string_view text) {
  EmotionLexicon lexicon;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    auto line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view() : text.substr(eol + 1);
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view kVersion = "# version:";
      if (line.starts_with(kVersion)) lexicon.version = std::string(trim(line.substr(kVersion.size())));
      continue;
    }
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string_view::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string_view::npos || line.find('\t', tab2 + 1) != std::string_view::npos) {
      throw Error(ErrorCode::kBadRow, "expected word<TAB>affect<TAB>flag", line_no);
    }
    const auto word = line.substr(0, tab1);
    const auto affect_name = line.substr(tab1 + 1, tab2 - tab1 - 1);
    const auto flag = line.substr(tab2 + 1);
    if (word.empty()) throw Error(ErrorCode::kBadRow, "empty word", line_no);
    const auto affect = parse_affect(affect_name);
    if (!affect) throw Error(ErrorCode::kBadRow, "unknown affect '" + std::string(affect_name) + "'", line_no);
    if (flag != "0" && flag != "1") {
      throw Error(ErrorCode::kBadRow, "flag '" + std::string(flag) + "' is not 0 or 1", line_no);
    }
    ++rows;
    if (flag == "1") {
      lexicon.words[lowercase(word)] |= static_cast<AffectMask>(1u << static_cast<unsigned>(*affect));
    }
  }
  if (rows == 0) lexicon.warnings.push_back("EmptyLexicon: no lexicon rows; every profile will be zero");
  return lexicon;
}

EmotionLexicon load_lexicon(const std::filesystem::path& path) { return parse_lexicon(csv::read_text_file(path)); }

EmotionProfile score_emotions(std::string_view text, const EmotionLexicon& lexicon) {
  EmotionProfile profile;
  std::array<std::size_t, kAffectCount> hits{};
  for (const auto& token : surface_tokens(text)) {
    const AffectMask mask = lexicon.lookup(token);
    for (std::size_t a = 0; a < kAffectCount; ++a) {
      if (mask & (1u << a)) {
        ++hits[a];
        ++profile.total_hits;
      }
    }
  }
  if (profile.total_hits > 0) {
    for (std::size_t a = 0; a < kAffectCount; ++a) {
      profile.frequency[a] = static_cast<double>(hits[a]) / static_cast<double>(profile.total_hits);
    }
  }
  return profile;
}

std::optional<Affect> prevailing_emotion(const EmotionProfile& profile, std::span<const Affect> affects) {
  std::optional<Affect> best;
  for (const Affect a : affects) {
    const double f = profile[a];
    if (f <= 0.0) continue;
    if (!best || f > profile[*best] || (f == profile[*best] && a < *best)) best = a;
  }
  return best;
}

void write_emotion_csv(std::ostream& out, std::span<const EmotionRow> rows) {
  constexpr std::array<Affect, 5> kColumns = {Affect::kAnger, Affect::kFear, Affect::kSadness, Affect::kDisgust,
                                              Affect::kSurprise};
  csv::write_row(out, {"id", "anger", "fear", "sadness", "disgust", "surprise", "prevailing"});
  for (const auto& row : rows) {
    std::vector<std::string> cells{row.id};
    for (const Affect a : kColumns) cells.push_back(format_frequency(row.profile[a]));
    const auto prevailing = prevailing_emotion(row.profile);
    cells.emplace_back(prevailing ? to_string(*prevailing) : "none");
    csv::write_row(out, cells);
  }
}

}  // namespace stressdetect
