#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stressdetect {

// Alphabetical; the enumerator value doubles as the tie-break rank.
enum class Affect : std::uint8_t {
  kAnger,
  kAnticipation,
  kDisgust,
  kFear,
  kJoy,
  kNegative,
  kPositive,
  kSadness,
  kSurprise,
  kTrust,
};

inline constexpr std::size_t kAffectCount = 10;
inline constexpr std::array<Affect, kAffectCount> kAllAffects = {
    Affect::kAnger, Affect::kAnticipation, Affect::kDisgust,  Affect::kFear,     Affect::kJoy,
    Affect::kNegative, Affect::kPositive, Affect::kSadness, Affect::kSurprise, Affect::kTrust};
inline constexpr std::array<Affect, 5> kNegativeAffects = {Affect::kAnger, Affect::kDisgust, Affect::kFear,
                                                           Affect::kSadness, Affect::kSurprise};

std::string_view to_string(Affect affect);
std::optional<Affect> parse_affect(std::string_view name);

using AffectMask = std::uint16_t;

struct EmotionLexicon {
  std::map<std::string, AffectMask, std::less<>> words;
  std::string version;  // from a `# version:` header line, empty if none
  std::vector<std::string> warnings;

  AffectMask lookup(std::string_view word) const;
};

// Tab-separated `word<TAB>affect<TAB>flag` rows; blank lines and `#` comments
// are skipped. Throws BadRow with the line number on malformed rows.
EmotionLexicon parse_lexicon(std::string_view text);
EmotionLexicon load_lexicon(const std::filesystem::path& path);

struct EmotionProfile {
  std::array<double, kAffectCount> frequency{};
  std::size_t total_hits = 0;

  double operator[](Affect a) const { return frequency[static_cast<std::size_t>(a)]; }
  bool operator==(const EmotionProfile&) const = default;
};

// Surface tokens (no stopword removal, no stemming) looked up in the lexicon.
// Each (token, affect) match is one hit; frequencies are hits / total hits.
EmotionProfile score_emotions(std::string_view text, const EmotionLexicon& lexicon);

std::optional<Affect> prevailing_emotion(const EmotionProfile& profile,
                                         std::span<const Affect> affects = kNegativeAffects);

struct EmotionRow {
  std::string id;
  EmotionProfile profile;
};

// CSV `id,anger,fear,sadness,disgust,surprise,prevailing`.
void write_emotion_csv(std::ostream& out, std::span<const EmotionRow> rows);

}  // namespace stressdetect
