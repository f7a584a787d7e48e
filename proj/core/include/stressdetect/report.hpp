#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stressdetect/classify.hpp"
#include "stressdetect/corpus.hpp"
#include "stressdetect/emotion.hpp"
#include "stressdetect/textprep.hpp"

namespace stressdetect {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr std::array<std::string_view, 12> kAcademicMonths = {"Sep", "Oct", "Nov", "Dec", "Jan", "Feb",
                                                                     "Mar", "Apr", "May", "Jun", "Jul", "Aug"};

struct ClassifiedPost {
  PostRecord post;
  int label = 0;
  double score = 0.0;  // probability for logistic and NB, margin for SVM
  std::optional<EmotionProfile> emotions;
};

struct ClassifyOptions {
  const EmotionLexicon* lexicon = nullptr;  // no emotion profiles when null
  bool emotions_for_all = false;            // default: stressed posts only
  unsigned jobs = 1;
};

// Order-preserving; the output does not depend on `jobs`.
std::vector<ClassifiedPost> classify_corpus(const TrainedModel& model, std::span<const PostRecord> posts,
                                            const PipelineConfig& config, const ClassifyOptions& options = {});

// Community -> group. Keys are matched case-insensitively with any leading
// "r/" removed; unmapped communities fall into "other".
class GroupMap {
 public:
  static constexpr std::string_view kOther = "other";

  static GroupMap academic_levels();  // csMajors, EngineeringStudents, GradSchool, PhD, Professors
  static GroupMap per_community();    // every community is its own group
  static GroupMap parse(std::string_view csv_text);
  static GroupMap load(const std::filesystem::path& path);

  void add(std::string_view community, std::string_view group);
  std::string group_of(std::string_view community) const;
  bool is_mapped(std::string_view community) const;
  // Groups in declaration order followed by "other"; per_community maps sort
  // alphabetically.
  std::vector<std::string> order(std::span<const std::string> present) const;

 private:
  bool identity_ = false;
  std::map<std::string, std::string, std::less<>> groups_;
  std::vector<std::string> declared_;
};

std::string normalize_community(std::string_view community);

struct StressRow {
  std::string group;
  std::size_t total = 0;
  std::size_t stressed = 0;
  int stressed_tenths = 0;  // stressed percentage x 10, rounded half up
  double stressed_pct() const { return stressed_tenths / 10.0; }
  double not_stressed_pct() const { return (1000 - stressed_tenths) / 10.0; }
};

// 100 * stressed / total rounded half up to one decimal, in tenths.
int stress_tenths(std::size_t stressed, std::size_t total);
// Unweighted mean of the given percentages (in tenths), rounded half up to a
// whole percent.
int mean_stress_percent(std::span<const int> tenths);

struct MonthlySeries {
  std::array<std::size_t, 12> stressed{};  // Sep .. Aug
  std::size_t unknown = 0;                 // stressed posts without a date
};

// 0 for September through 11 for August.
std::size_t academic_month_index(Timestamp ts);

enum class MedianConvention { kMeanOfTwo, kLowerMiddle };

struct UpvoteStats {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;  // population
  bool operator==(const UpvoteStats&) const = default;
};

std::optional<UpvoteStats> upvote_stats(std::span<const long long> scores,
                                        MedianConvention convention = MedianConvention::kMeanOfTwo);

using WordCounts = std::vector<std::pair<std::string, std::size_t>>;

// Count descending, ties alphabetical, at most n entries.
WordCounts top_words(std::span<const std::string> stressed_texts, std::size_t n, const PipelineConfig& config);

struct WhiskerStats {
  std::size_t count = 0;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
  double lower_whisker = 0.0, upper_whisker = 0.0;  // extreme values inside the 1.5 x IQR fences
  std::size_t outliers = 0;
  bool operator==(const WhiskerStats&) const = default;
};

// Linear-interpolation quantile (R type 7) on sorted data.
double quantile_sorted(std::span<const double> sorted, double p);
std::optional<WhiskerStats> whisker_stats(std::span<const double> values);
// true where a value lies outside [q1 - 1.5 IQR, q3 + 1.5 IQR].
std::vector<bool> flag_outliers(std::span<const double> values);

struct GroupEmotions {
  // [month][negative affect], nullopt when the month has no profiled posts.
  std::array<std::array<std::optional<double>, 5>, 12> monthly{};
  std::array<std::optional<WhiskerStats>, 5> whisker{};
  bool operator==(const GroupEmotions&) const = default;
};

struct GroupReport {
  StressRow summary;
  MonthlySeries monthly;
  std::optional<UpvoteStats> upvotes_stressed;
  std::optional<UpvoteStats> upvotes_not_stressed;
  WordCounts top_words;
  GroupEmotions emotions;
};

struct ReportMetadata {
  std::string generated_at;  // excluded from determinism checks
  std::string lexicon_version;
  unsigned long long seed = 42;
  bool emotions_for_all = false;
  MedianConvention median = MedianConvention::kMeanOfTwo;
};

struct StressReport {
  int schema_version = kReportSchemaVersion;
  std::string model_kind;
  std::string model_fingerprint;
  std::vector<GroupReport> groups;
  std::optional<int> mean_stress_pct;
  ReportMetadata metadata;
  std::vector<std::string> warnings;
};

bool operator==(const StressReport& a, const StressReport& b);

struct ReportOptions {
  std::size_t top_n = 10;
  MedianConvention median = MedianConvention::kMeanOfTwo;
  std::string generated_at;
  std::string lexicon_version;
  unsigned long long seed = 42;
  bool emotions_for_all = false;
};

StressReport build_report(std::span<const ClassifiedPost> classified, const GroupMap& groups,
                          const PipelineConfig& config, const ReportOptions& options = {});

enum class ReportFormat { kJson, kCsv };
ReportFormat parse_report_format(std::string_view name);  // throws InvalidArgument

std::string report_to_json(const StressReport& report);
StressReport report_from_json(std::string_view text);

std::string summary_csv(const StressReport& report);
std::string monthly_csv(const StressReport& report);
std::string upvotes_csv(const StressReport& report);
std::string top_words_csv(const StressReport& report);
std::string emotions_csv(const StressReport& report);

// JSON writes <dir>/report.json; CSV writes the five table files. Returns the
// paths written. Throws Io on write failure.
std::vector<std::filesystem::path> emit_report(const StressReport& report, ReportFormat format,
                                               const std::filesystem::path& dir);

// Plain-text group table for the terminal.
std::string format_summary_table(const StressReport& report);

}  // namespace stressdetect
