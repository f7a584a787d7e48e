#include "stressdetect/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <set>

#include "json.hpp"
#include "stressdetect/error.hpp"

namespace stressdetect {
namespace {

using namespace std::chrono;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' ||
                        s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

template <typename Int>
bool parse_int(std::string_view s, Int& value) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_fixed_digits(std::string_view s, std::size_t pos, std::size_t count, int& value) {
  if (pos + count > s.size()) return false;
  value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    value = value * 10 + (s[i] - '0');
  }
  return true;
}

std::optional<Timestamp> parse_iso8601(std::string_view s) {
  int y = 0, mo = 0, d = 0;
  if (!parse_fixed_digits(s, 0, 4, y) || s.size() < 10 || s[4] != '-' ||
      !parse_fixed_digits(s, 5, 2, mo) || s[7] != '-' || !parse_fixed_digits(s, 8, 2, d)) {
    return std::nullopt;
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  Timestamp ts{sys_days{ymd}};
  std::size_t pos = 10;
  if (pos == s.size()) return ts;

  if (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' ') return std::nullopt;
  ++pos;
  int hh = 0, mm = 0, ss = 0;
  if (!parse_fixed_digits(s, pos, 2, hh) || pos + 2 >= s.size() || s[pos + 2] != ':' ||
      !parse_fixed_digits(s, pos + 3, 2, mm)) {
    return std::nullopt;
  }
  pos += 5;
  if (pos < s.size() && s[pos] == ':') {
    if (!parse_fixed_digits(s, pos + 1, 2, ss)) return std::nullopt;
    pos += 3;
    if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
      ++pos;
      const std::size_t start = pos;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
      if (pos == start) return std::nullopt;
    }
  }
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  ts += hours{hh} + minutes{mm} + seconds{ss};

  if (pos == s.size()) return ts;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    return pos + 1 == s.size() ? std::optional(ts) : std::nullopt;
  }
  if (s[pos] != '+' && s[pos] != '-') return std::nullopt;
  const int sign = s[pos] == '+' ? 1 : -1;
  ++pos;
  int oh = 0, om = 0;
  if (!parse_fixed_digits(s, pos, 2, oh)) return std::nullopt;
  pos += 2;
  if (pos < s.size() && s[pos] == ':') ++pos;
  if (pos < s.size()) {
    if (!parse_fixed_digits(s, pos, 2, om)) return std::nullopt;
    pos += 2;
  }
  if (pos != s.size() || oh > 23 || om > 59) return std::nullopt;
  ts -= sign * (hours{oh} + minutes{om});
  return ts;
}

std::optional<Timestamp> parse_epoch(std::string_view s) {
  std::string_view whole = s;
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    whole = s.substr(0, dot);
    const auto frac = s.substr(dot + 1);
    if (frac.empty() || !std::all_of(frac.begin(), frac.end(),
                                     [](char c) { return c >= '0' && c <= '9'; })) {
      return std::nullopt;
    }
  }
  long long secs = 0;
  if (whole.empty() || whole == "-" || !parse_int(whole, secs)) return std::nullopt;
  return Timestamp{seconds{secs}};
}

struct RowContext {
  const csv::Table& table;
  std::size_t index;

  std::size_t line() const { return table.line_of[index]; }

  std::string_view cell(std::optional<std::size_t> column) const {
    if (!column) return {};
    const auto& row = table.rows[index];
    return *column < row.size() ? std::string_view(row[*column]) : std::string_view();
  }
};

std::size_t require_column(const csv::Table& table, const std::string& name, std::string_view field) {
  const auto column = table.column(name);
  if (!column) {
    throw Error(ErrorCode::kMissingColumn,
                "column '" + name + "' (" + std::string(field) + ") not found in header");
  }
  return *column;
}

template <typename Record, typename BuildRow>
LoadResult<Record> load_rows(const csv::Table& table, const LoadOptions& options, BuildRow&& build) {
  LoadResult<Record> result;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ++result.summary.rows_read;
    try {
      std::optional<Record> record = build(RowContext{table, i}, result.summary);
      if (record) {
        result.records.push_back(std::move(*record));
        ++result.summary.rows_kept;
      } else {
        ++result.summary.rows_skipped;
      }
    } catch (const Error& e) {
      if (!options.skip_bad_rows) throw;
      result.summary.errors.emplace_back(e.what());
      ++result.summary.rows_skipped;
    }
  }
  return result;
}

void apply_field(std::string_view field, std::string_view column,
                 std::initializer_list<std::pair<std::string_view, std::string*>> fields) {
  for (const auto& [name, target] : fields) {
    if (name == field) {
      *target = std::string(column);
      return;
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown schema field '" + std::string(field) + "'");
}

}  // namespace

std::string_view to_string(PostKind kind) {
  return kind == PostKind::kPost ? "post" : "comment";
}

std::string PostRecord::classification_text() const {
  if (title.empty()) return body;
  if (body.empty()) return title;
  return title + " " + body;
}

void LabeledSchema::apply(std::string_view field, std::string_view column) {
  apply_field(field, column, {{"id", &id}, {"text", &text}, {"label", &label}, {"domain", &domain}});
}

void PostSchema::apply(std::string_view field, std::string_view column) {
  apply_field(field, column,
              {{"id", &id},
               {"date", &date},
               {"title", &title},
               {"text", &text},
               {"score", &score},
               {"tag", &tag},
               {"community", &community},
               {"kind", &kind}});
}

std::string LoadSummary::to_json() const {
  nlohmann::ordered_json j;
  j["rows_read"] = rows_read;
  j["rows_kept"] = rows_kept;
  j["rows_skipped"] = rows_skipped;
  j["errors"] = errors;
  j["warnings"] = warnings;
  return j.dump();
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (auto iso = parse_iso8601(text)) return iso;
  return parse_epoch(text);
}

std::string format_timestamp(Timestamp ts) {
  const auto day_point = floor<days>(ts);
  const year_month_day ymd{day_point};
  const hh_mm_ss<seconds> tod{ts - day_point};
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return buffer;
}

LoadResult<LabeledExample> labeled_from_table(const csv::Table& table, const LabeledSchema& schema,
                                              const LoadOptions& options) {
  const auto text_col = require_column(table, schema.text, "text");
  const auto label_col = require_column(table, schema.label, "label");
  const auto id_col = table.column(schema.id);
  const auto domain_col = table.column(schema.domain);

  return load_rows<LabeledExample>(
      table, options, [&](const RowContext& row, LoadSummary& summary) -> std::optional<LabeledExample> {
        LabeledExample example;
        const auto label_cell = trim(row.cell(label_col));
        const auto matches = [&](const std::vector<std::string>& values) {
          return std::find(values.begin(), values.end(), label_cell) != values.end();
        };
        if (matches(schema.truthy)) {
          example.label = 1;
        } else if (matches(schema.falsy)) {
          example.label = 0;
        } else {
          throw Error(ErrorCode::kBadLabel,
                      "label '" + std::string(label_cell) + "' is not a recognised 0/1 value",
                      row.line());
        }
        example.text = std::string(row.cell(text_col));
        if (trim(example.text).empty()) {
          summary.warnings.push_back("EmptyText (row " + std::to_string(row.line()) + "): skipped");
          return std::nullopt;
        }
        example.id = id_col ? std::string(row.cell(id_col)) : std::to_string(row.index + 1);
        example.domain = std::string(row.cell(domain_col));
        return example;
      });
}

LoadResult<LabeledExample> load_labeled(const std::filesystem::path& path, const LabeledSchema& schema,
                                        const LoadOptions& options) {
  return labeled_from_table(csv::read_file(path), schema, options);
}

LoadResult<PostRecord> posts_from_table(const csv::Table& table, const PostSchema& schema,
                                        const LoadOptions& options) {
  const auto date_col = require_column(table, schema.date, "date");
  const auto text_col = require_column(table, schema.text, "text");
  const auto community_col = require_column(table, schema.community, "community");
  const auto score_col = table.column(schema.score);
  const auto id_col = table.column(schema.id);
  const auto title_col = table.column(schema.title);
  const auto tag_col = table.column(schema.tag);
  const auto kind_col = table.column(schema.kind);

  return load_rows<PostRecord>(
      table, options, [&](const RowContext& row, LoadSummary& summary) -> std::optional<PostRecord> {
        PostRecord post;
        const auto date_cell = trim(row.cell(date_col));
        if (!date_cell.empty()) {
          post.date = parse_timestamp(date_cell);
          if (!post.date) {
            throw Error(ErrorCode::kBadDate, "unparseable date '" + std::string(date_cell) + "'",
                        row.line());
          }
        }
        const auto score_cell = trim(row.cell(score_col));
        if (!score_cell.empty() && !parse_int(score_cell, post.score)) {
          throw Error(ErrorCode::kBadScore, "score '" + std::string(score_cell) + "' is not an integer",
                      row.line());
        }
        const auto kind_cell = ascii_lower(trim(row.cell(kind_col)));
        if (kind_cell.empty() || kind_cell == "post") {
          post.kind = PostKind::kPost;
        } else if (kind_cell == "comment") {
          post.kind = PostKind::kComment;
        } else {
          throw Error(ErrorCode::kBadRow, "kind '" + kind_cell + "' is neither post nor comment",
                      row.line());
        }
        post.community = std::string(trim(row.cell(community_col)));
        if (post.community.empty()) {
          throw Error(ErrorCode::kBadRow, "empty community", row.line());
        }
        post.title = std::string(row.cell(title_col));
        post.body = std::string(row.cell(text_col));
        if (trim(post.title).empty() && trim(post.body).empty()) {
          summary.warnings.push_back("EmptyText (row " + std::to_string(row.line()) + "): skipped");
          return std::nullopt;
        }
        const auto tag_cell = trim(row.cell(tag_col));
        if (!tag_cell.empty()) post.tag = std::string(tag_cell);
        post.id = id_col ? std::string(row.cell(id_col)) : std::to_string(row.index + 1);
        return post;
      });
}

LoadResult<PostRecord> load_posts(const std::filesystem::path& path, const PostSchema& schema,
                                  const LoadOptions& options) {
  return posts_from_table(csv::read_file(path), schema, options);
}

void write_labeled(std::ostream& out, const std::vector<LabeledExample>& examples) {
  csv::write_row(out, {"id", "text", "label", "domain"});
  for (const auto& e : examples) {
    csv::write_row(out, {e.id, e.text, std::to_string(e.label), e.domain});
  }
}

void write_posts(std::ostream& out, const std::vector<PostRecord>& posts) {
  csv::write_row(out, {"id", "date", "title", "text", "score", "tag", "community", "kind"});
  for (const auto& p : posts) {
    csv::write_row(out, {p.id, p.date ? format_timestamp(*p.date) : std::string(), p.title, p.body,
                         std::to_string(p.score), p.tag.value_or(""), p.community,
                         std::string(to_string(p.kind))});
  }
}

std::string CorpusStats::to_json() const {
  nlohmann::ordered_json j;
  j["record_count"] = record_count;
  j["per_community"] = per_community;
  j["per_tag"] = per_tag;
  j["per_kind"] = per_kind;
  j["unique_word_count"] = unique_word_count;
  return j.dump(2);
}

CorpusStats corpus_stats(const std::vector<PostRecord>& records, const PipelineConfig& config) {
  CorpusStats stats;
  std::set<std::string, std::less<>> vocabulary;
  for (const auto& record : records) {
    ++stats.record_count;
    ++stats.per_community[record.community];
    ++stats.per_tag[record.tag.value_or("Untagged")];
    ++stats.per_kind[std::string(to_string(record.kind))];
    for (auto& token : preprocess_tokens(record.classification_text(), config)) {
      vocabulary.insert(std::move(token));
    }
  }
  stats.unique_word_count = vocabulary.size();
  return stats;
}

}  // namespace stressdetect
