#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stressdetect/csv.hpp"
#include "stressdetect/textprep.hpp"

namespace stressdetect {

using Timestamp = std::chrono::sys_seconds;

struct LabeledExample {
  std::string id;
  std::string text;
  int label = 0;  // 1 = stressed
  std::string domain;

  bool operator==(const LabeledExample&) const = default;
};

enum class PostKind { kPost, kComment };

std::string_view to_string(PostKind kind);

struct PostRecord {
  std::string id;
  std::optional<Timestamp> date;  // absent when the date cell is empty
  std::string title;
  std::string body;
  long long score = 0;
  std::optional<std::string> tag;
  std::string community;
  PostKind kind = PostKind::kPost;

  // Text fed to the classifier: title and body joined with one space.
  std::string classification_text() const;

  bool operator==(const PostRecord&) const = default;
};

// Logical field -> column name. id and domain are optional: when their column
// is absent ids are generated from the row number and domains left empty.
struct LabeledSchema {
  std::string id = "id";
  std::string text = "text";
  std::string label = "label";
  std::string domain = "domain";
  std::vector<std::string> truthy = {"1"};
  std::vector<std::string> falsy = {"0"};

  // Applies "field=column" overrides; throws InvalidArgument on unknown fields.
  void apply(std::string_view field, std::string_view column);
};

// date, text and community columns are required; the rest are optional.
struct PostSchema {
  std::string id = "id";
  std::string date = "date";
  std::string title = "title";
  std::string text = "text";
  std::string score = "score";
  std::string tag = "tag";
  std::string community = "community";
  std::string kind = "kind";

  void apply(std::string_view field, std::string_view column);
};

struct LoadOptions {
  // When false (default) the first bad row aborts the load with an Error.
  // When true bad rows are skipped and listed in the summary.
  bool skip_bad_rows = false;
};

struct LoadSummary {
  std::size_t rows_read = 0;
  std::size_t rows_kept = 0;
  std::size_t rows_skipped = 0;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

template <typename Record>
struct LoadResult {
  std::vector<Record> records;
  LoadSummary summary;
};

LoadResult<LabeledExample> labeled_from_table(const csv::Table& table, const LabeledSchema& schema,
                                              const LoadOptions& options = {});
LoadResult<LabeledExample> load_labeled(const std::filesystem::path& path,
                                        const LabeledSchema& schema = {},
                                        const LoadOptions& options = {});

LoadResult<PostRecord> posts_from_table(const csv::Table& table, const PostSchema& schema,
                                        const LoadOptions& options = {});
LoadResult<PostRecord> load_posts(const std::filesystem::path& path, const PostSchema& schema = {},
                                  const LoadOptions& options = {});

void write_labeled(std::ostream& out, const std::vector<LabeledExample>& examples);
void write_posts(std::ostream& out, const std::vector<PostRecord>& posts);

// ISO-8601 ("2023-06-02", "2023-06-02T10:20:30Z", "2023-06-02 10:20:30+02:00")
// or epoch seconds ("1685664000", "1685664000.5"). Returns nullopt when neither
// form parses.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

struct CorpusStats {
  std::size_t record_count = 0;
  std::map<std::string, std::size_t> per_community;
  std::map<std::string, std::size_t> per_tag;  // absent tags counted as "Untagged"
  std::map<std::string, std::size_t> per_kind;
  std::size_t unique_word_count = 0;

  std::string to_json() const;
};

CorpusStats corpus_stats(const std::vector<PostRecord>& records,
                         const PipelineConfig& config = PipelineConfig::defaults());

}  // namespace stressdetect
