#include "stressdetect/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "stressdetect/csv.hpp"
#include "stressdetect/error.hpp"

namespace stressdetect {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 5> kNegativeNames = {"anger", "disgust", "fear", "sadness", "surprise"};

std::string decimal(double x) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
  return std::string(buffer, ec == std::errc() ? end : buffer);
}

std::string tenths_text(int tenths) {
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

std::string_view to_string(MedianConvention c) {
  return c == MedianConvention::kMeanOfTwo ? "mean-of-two" : "lower-middle";
}

[[noreturn]] void corrupt(const std::string& what) { throw Error(ErrorCode::kCorruptFile, "report JSON: " + what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) corrupt(std::string("missing '") + key + "'");
  return j.at(key);
}

Json upvotes_json(const std::optional<UpvoteStats>& s) {
  if (!s) return nullptr;
  return {{"count", s->count}, {"mean", s->mean}, {"median", s->median}, {"std", s->std}};
}

std::optional<UpvoteStats> upvotes_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return UpvoteStats{field(j, "count").get<std::size_t>(), field(j, "mean").get<double>(),
                     field(j, "median").get<double>(), field(j, "std").get<double>()};
}

Json whisker_json(const std::optional<WhiskerStats>& w) {
  if (!w) return nullptr;
  return {{"count", w->count},          {"min", w->min},
          {"q1", w->q1},                {"median", w->median},
          {"q3", w->q3},                {"max", w->max},
          {"lower_whisker", w->lower_whisker}, {"upper_whisker", w->upper_whisker},
          {"outliers", w->outliers}};
}

std::optional<WhiskerStats> whisker_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  WhiskerStats w;
  w.count = field(j, "count").get<std::size_t>();
  w.min = field(j, "min").get<double>();
  w.q1 = field(j, "q1").get<double>();
  w.median = field(j, "median").get<double>();
  w.q3 = field(j, "q3").get<double>();
  w.max = field(j, "max").get<double>();
  w.lower_whisker = field(j, "lower_whisker").get<double>();
  w.upper_whisker = field(j, "upper_whisker").get<double>();
  w.outliers = field(j, "outliers").get<std::size_t>();
  return w;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

}  // namespace

std::vector<ClassifiedPost> classify_corpus(const TrainedModel& model, std::span<const PostRecord> posts,
                                            const PipelineConfig& config, const ClassifyOptions& options) {
  std::vector<ClassifiedPost> out(posts.size());
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto& c = out[i];
      c.post = posts[i];
      const auto text = posts[i].classification_text();
      const auto prediction = predict_text(model, text, config);
      c.label = prediction.label;
      c.score = prediction.score;
      if (options.lexicon && (c.label == 1 || options.emotions_for_all)) {
        c.emotions = score_emotions(text, *options.lexicon);
      }
    }
  };

  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(1, posts.size()));
  if (jobs == 1) {
    work(0, posts.size());
    return out;
  }
  std::vector<std::thread> threads;
  const std::size_t chunk = (posts.size() + jobs - 1) / jobs;
  for (std::size_t begin = 0; begin < posts.size(); begin += chunk) {
    threads.emplace_back(work, begin, std::min(posts.size(), begin + chunk));
  }
  for (auto& t : threads) t.join();
  return out;
}

std::string normalize_community(std::string_view community) {
  if (community.size() >= 2 && (community[0] == 'r' || community[0] == 'R') && community[1] == '/') {
    community.remove_prefix(2);
  }
  std::string key(community);
  for (auto& ch : key) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return key;
}

GroupMap GroupMap::academic_levels() {
  GroupMap map;
  map.add("csMajors", "Bachelor");
  map.add("EngineeringStudents", "Bachelor");
  map.add("GradSchool", "Graduate");
  map.add("PhD", "PhD");
  map.add("Professors", "Professors");
  return map;
}

GroupMap GroupMap::per_community() {
  GroupMap map;
  map.identity_ = true;
  return map;
}

GroupMap GroupMap::parse(std::string_view csv_text) {
  const auto table = csv::parse(csv_text);
  const auto community = table.column("community");
  const auto group = table.column("group");
  if (!community || !group) throw Error(ErrorCode::kMissingColumn, "group map needs 'community' and 'group' columns");
  GroupMap map;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (*community >= row.size() || *group >= row.size() || row[*community].empty() || row[*group].empty()) {
      throw Error(ErrorCode::kBadRow, "empty community or group", table.line_of[r]);
    }
    map.add(row[*community], row[*group]);
  }
  return map;
}

GroupMap GroupMap::load(const std::filesystem::path& path) { return parse(csv::read_text_file(path)); }

void GroupMap::add(std::string_view community, std::string_view group) {
  groups_[normalize_community(community)] = std::string(group);
  if (std::find(declared_.begin(), declared_.end(), group) == declared_.end()) declared_.emplace_back(group);
}

std::string GroupMap::group_of(std::string_view community) const {
  if (identity_) return std::string(community);
  const auto it = groups_.find(normalize_community(community));
  return it == groups_.end() ? std::string(kOther) : it->second;
}

bool GroupMap::is_mapped(std::string_view community) const {
  return identity_ || groups_.count(normalize_community(community)) > 0;
}

std::vector<std::string> GroupMap::order(std::span<const std::string> present) const {
  std::vector<std::string> result;
  const auto has = [&](const std::string& g) { return std::find(present.begin(), present.end(), g) != present.end(); };
  if (identity_) {
    result.assign(present.begin(), present.end());
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
  }
  for (const auto& g : declared_) {
    if (has(g)) result.push_back(g);
  }
  if (has(std::string(kOther)) && std::find(result.begin(), result.end(), kOther) == result.end()) {
    result.emplace_back(kOther);
  }
  return result;
}

int stress_tenths(std::size_t stressed, std::size_t total) {
  if (total == 0) return 0;
  return static_cast<int>((2000 * static_cast<unsigned long long>(stressed) + total) / (2 * total));
}

int mean_stress_percent(std::span<const int> tenths) {
  if (tenths.empty()) throw Error(ErrorCode::kEmptyInput, "no group percentages");
  long long sum = 0;
  for (int t : tenths) sum += t;
  const long long k = static_cast<long long>(tenths.size());
  return static_cast<int>((2 * sum + 10 * k) / (20 * k));
}

std::size_t academic_month_index(Timestamp ts) {
  const std::chrono::year_month_day ymd{std::chrono::floor<std::chrono::days>(ts)};
  const unsigned month = static_cast<unsigned>(ymd.month());
  return (month + 3) % 12;
}

std::optional<UpvoteStats> upvote_stats(std::span<const long long> scores, MedianConvention convention) {
  if (scores.empty()) return std::nullopt;
  UpvoteStats s;
  s.count = scores.size();
  const double n = static_cast<double>(scores.size());
  long double sum = 0;
  for (long long v : scores) sum += v;
  s.mean = static_cast<double>(sum / n);
  long double squares = 0;
  for (long long v : scores) squares += (v - static_cast<long double>(s.mean)) * (v - static_cast<long double>(s.mean));
  s.std = static_cast<double>(std::sqrt(squares / n));
  std::vector<long long> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  if (sorted.size() % 2 == 1) {
    s.median = static_cast<double>(sorted[mid]);
  } else if (convention == MedianConvention::kLowerMiddle) {
    s.median = static_cast<double>(sorted[mid - 1]);
  } else {
    s.median = (static_cast<double>(sorted[mid - 1]) + static_cast<double>(sorted[mid])) / 2.0;
  }
  return s;
}

WordCounts top_words(std::span<const std::string> stressed_texts, std::size_t n, const PipelineConfig& config) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "top word count must be at least 1");
  std::map<std::string, std::size_t, std::less<>> counts;
  for (const auto& text : stressed_texts) {
    for (auto& token : preprocess_tokens(text, config)) ++counts[std::move(token)];
  }
  WordCounts words(counts.begin(), counts.end());
  std::stable_sort(words.begin(), words.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (words.size() > n) words.resize(n);
  return words;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::kEmptyInput, "quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::optional<WhiskerStats> whisker_stats(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  WhiskerStats w;
  w.count = sorted.size();
  w.min = sorted.front();
  w.max = sorted.back();
  w.q1 = quantile_sorted(sorted, 0.25);
  w.median = quantile_sorted(sorted, 0.5);
  w.q3 = quantile_sorted(sorted, 0.75);
  const double iqr = w.q3 - w.q1;
  const double low_fence = w.q1 - 1.5 * iqr;
  const double high_fence = w.q3 + 1.5 * iqr;
  w.lower_whisker = w.max;
  w.upper_whisker = w.min;
  for (double v : sorted) {
    if (v < low_fence || v > high_fence) {
      ++w.outliers;
    } else {
      w.lower_whisker = std::min(w.lower_whisker, v);
      w.upper_whisker = std::max(w.upper_whisker, v);
    }
  }
  return w;
}

std::vector<bool> flag_outliers(std::span<const double> values) {
  std::vector<bool> flags(values.size(), false);
  const auto w = whisker_stats(values);
  if (!w) return flags;
  const double iqr = w->q3 - w->q1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    flags[i] = values[i] < w->q1 - 1.5 * iqr || values[i] > w->q3 + 1.5 * iqr;
  }
  return flags;
}

bool operator==(const StressReport& a, const StressReport& b) {
  const auto group_eq = [](const GroupReport& x, const GroupReport& y) {
    return x.summary.group == y.summary.group && x.summary.total == y.summary.total &&
           x.summary.stressed == y.summary.stressed && x.summary.stressed_tenths == y.summary.stressed_tenths &&
           x.monthly.stressed == y.monthly.stressed && x.monthly.unknown == y.monthly.unknown &&
           x.upvotes_stressed == y.upvotes_stressed && x.upvotes_not_stressed == y.upvotes_not_stressed &&
           x.top_words == y.top_words && x.emotions == y.emotions;
  };
  return a.schema_version == b.schema_version && a.model_kind == b.model_kind &&
         a.model_fingerprint == b.model_fingerprint && a.mean_stress_pct == b.mean_stress_pct &&
         a.metadata.generated_at == b.metadata.generated_at &&
         a.metadata.lexicon_version == b.metadata.lexicon_version && a.metadata.seed == b.metadata.seed &&
         a.metadata.emotions_for_all == b.metadata.emotions_for_all && a.metadata.median == b.metadata.median &&
         a.warnings == b.warnings &&
         std::equal(a.groups.begin(), a.groups.end(), b.groups.begin(), b.groups.end(), group_eq);
}

StressReport build_report(std::span<const ClassifiedPost> classified, const GroupMap& groups,
                          const PipelineConfig& config, const ReportOptions& options) {
  StressReport report;
  report.metadata.generated_at = options.generated_at;
  report.metadata.lexicon_version = options.lexicon_version;
  report.metadata.seed = options.seed;
  report.metadata.emotions_for_all = options.emotions_for_all;
  report.metadata.median = options.median;

  std::vector<std::string> group_of(classified.size());
  std::vector<std::string> present;
  std::map<std::string, std::size_t> unmapped;
  for (std::size_t i = 0; i < classified.size(); ++i) {
    const auto& community = classified[i].post.community;
    group_of[i] = groups.group_of(community);
    if (!groups.is_mapped(community)) ++unmapped[community];
    if (std::find(present.begin(), present.end(), group_of[i]) == present.end()) present.push_back(group_of[i]);
  }
  for (const auto& [community, count] : unmapped) {
    report.warnings.push_back("UnmappedCommunity: '" + community + "' (" + std::to_string(count) +
                              " post(s)) routed to group 'other'");
  }

  std::vector<int> tenths;
  for (const auto& name : groups.order(present)) {
    GroupReport g;
    g.summary.group = name;
    std::vector<long long> stressed_scores, calm_scores;
    std::vector<std::string> stressed_texts;
    std::array<std::array<std::vector<double>, 5>, 12> monthly_values;
    std::array<std::vector<double>, 5> all_values;
    for (std::size_t i = 0; i < classified.size(); ++i) {
      if (group_of[i] != name) continue;
      const auto& c = classified[i];
      ++g.summary.total;
      if (c.label != 1) {
        calm_scores.push_back(c.post.score);
        continue;
      }
      ++g.summary.stressed;
      stressed_scores.push_back(c.post.score);
      stressed_texts.push_back(c.post.classification_text());
      std::optional<std::size_t> month;
      if (c.post.date) {
        month = academic_month_index(*c.post.date);
        ++g.monthly.stressed[*month];
      } else {
        ++g.monthly.unknown;
      }
      if (c.emotions) {
        for (std::size_t a = 0; a < kNegativeAffects.size(); ++a) {
          const double f = (*c.emotions)[kNegativeAffects[a]];
          all_values[a].push_back(f);
          if (month) monthly_values[*month][a].push_back(f);
        }
      }
    }
    g.summary.stressed_tenths = stress_tenths(g.summary.stressed, g.summary.total);
    g.upvotes_stressed = upvote_stats(stressed_scores, options.median);
    g.upvotes_not_stressed = upvote_stats(calm_scores, options.median);
    g.top_words = top_words(stressed_texts, options.top_n, config);
    for (std::size_t m = 0; m < 12; ++m) {
      for (std::size_t a = 0; a < 5; ++a) {
        const auto& v = monthly_values[m][a];
        if (v.empty()) continue;
        double sum = 0.0;
        for (double x : v) sum += x;
        g.emotions.monthly[m][a] = sum / static_cast<double>(v.size());
      }
    }
    for (std::size_t a = 0; a < 5; ++a) g.emotions.whisker[a] = whisker_stats(all_values[a]);
    tenths.push_back(g.summary.stressed_tenths);
    report.groups.push_back(std::move(g));
  }
  if (!tenths.empty()) report.mean_stress_pct = mean_stress_percent(tenths);
  return report;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  throw Error(ErrorCode::kInvalidArgument, "unknown report format '" + std::string(name) + "' (json, csv)");
}

std::string report_to_json(const StressReport& report) {
  Json j;
  j["schema_version"] = report.schema_version;
  j["model"] = {{"kind", report.model_kind}, {"fingerprint", report.model_fingerprint}};
  Json groups = Json::array();
  for (const auto& g : report.groups) {
    Json top = Json::array();
    for (const auto& [token, count] : g.top_words) top.push_back(Json::array({token, count}));
    Json monthly_emotions = Json::object();
    for (std::size_t m = 0; m < 12; ++m) {
      Json row = Json::object();
      for (std::size_t a = 0; a < 5; ++a) {
        const auto& v = g.emotions.monthly[m][a];
        row[std::string(kNegativeNames[a])] = v ? Json(*v) : Json(nullptr);
      }
      monthly_emotions[std::string(kAcademicMonths[m])] = std::move(row);
    }
    Json whisker = Json::object();
    for (std::size_t a = 0; a < 5; ++a) whisker[std::string(kNegativeNames[a])] = whisker_json(g.emotions.whisker[a]);
    groups.push_back({{"name", g.summary.group},
                      {"total", g.summary.total},
                      {"stressed", g.summary.stressed},
                      {"stressed_pct", g.summary.stressed_pct()},
                      {"not_stressed_pct", g.summary.not_stressed_pct()},
                      {"monthly", g.monthly.stressed},
                      {"monthly_unknown", g.monthly.unknown},
                      {"upvotes",
                       {{"stressed", upvotes_json(g.upvotes_stressed)},
                        {"not_stressed", upvotes_json(g.upvotes_not_stressed)}}},
                      {"top_words", std::move(top)},
                      {"emotions", {{"monthly", std::move(monthly_emotions)}, {"whisker", std::move(whisker)}}}});
  }
  j["groups"] = std::move(groups);
  j["overall"] = {{"mean_stress_pct", report.mean_stress_pct ? Json(*report.mean_stress_pct) : Json(nullptr)}};
  j["warnings"] = report.warnings;
  j["metadata"] = {
      {"generated_at", report.metadata.generated_at},
      {"lexicon_version", report.metadata.lexicon_version},
      {"seed", report.metadata.seed},
      {"conventions",
       {{"classification_text", "title + ' ' + body"},
        {"percent_rounding", "half up to 0.1"},
        {"overall_mean", "unweighted mean of group percentages, half up to whole percent"},
        {"month_order", "Sep..Aug, undated posts counted in monthly_unknown"},
        {"median", to_string(report.metadata.median)},
        {"std", "population"},
        {"quartiles", "linear interpolation (type 7), outliers beyond 1.5 x IQR"},
        {"emotions_scope", report.metadata.emotions_for_all ? "all posts" : "stressed posts"}}}};
  return j.dump(2) + "\n";
}

StressReport report_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    corrupt(e.what());
  }
  try {
    StressReport r;
    r.schema_version = field(j, "schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw Error(ErrorCode::kVersionMismatch, "report schema " + std::to_string(r.schema_version));
    }
    r.model_kind = field(field(j, "model"), "kind").get<std::string>();
    r.model_fingerprint = field(field(j, "model"), "fingerprint").get<std::string>();
    for (const auto& gj : field(j, "groups")) {
      GroupReport g;
      g.summary.group = field(gj, "name").get<std::string>();
      g.summary.total = field(gj, "total").get<std::size_t>();
      g.summary.stressed = field(gj, "stressed").get<std::size_t>();
      g.summary.stressed_tenths = static_cast<int>(std::llround(field(gj, "stressed_pct").get<double>() * 10.0));
      g.monthly.stressed = field(gj, "monthly").get<std::array<std::size_t, 12>>();
      g.monthly.unknown = field(gj, "monthly_unknown").get<std::size_t>();
      g.upvotes_stressed = upvotes_from(field(field(gj, "upvotes"), "stressed"));
      g.upvotes_not_stressed = upvotes_from(field(field(gj, "upvotes"), "not_stressed"));
      for (const auto& pair : field(gj, "top_words")) {
        g.top_words.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::size_t>());
      }
      const auto& emotions = field(gj, "emotions");
      for (std::size_t m = 0; m < 12; ++m) {
        const auto& row = field(field(emotions, "monthly"), std::string(kAcademicMonths[m]).c_str());
        for (std::size_t a = 0; a < 5; ++a) {
          const auto& v = field(row, std::string(kNegativeNames[a]).c_str());
          if (!v.is_null()) g.emotions.monthly[m][a] = v.get<double>();
        }
      }
      for (std::size_t a = 0; a < 5; ++a) {
        g.emotions.whisker[a] = whisker_from(field(field(emotions, "whisker"), std::string(kNegativeNames[a]).c_str()));
      }
      r.groups.push_back(std::move(g));
    }
    const auto& mean = field(field(j, "overall"), "mean_stress_pct");
    if (!mean.is_null()) r.mean_stress_pct = mean.get<int>();
    if (j.contains("warnings")) r.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (j.contains("metadata")) {
      const auto& m = j.at("metadata");
      r.metadata.generated_at = field(m, "generated_at").get<std::string>();
      r.metadata.lexicon_version = field(m, "lexicon_version").get<std::string>();
      r.metadata.seed = field(m, "seed").get<unsigned long long>();
      const auto& conventions = field(m, "conventions");
      r.metadata.median = field(conventions, "median").get<std::string>() == "lower-middle"
                              ? MedianConvention::kLowerMiddle
                              : MedianConvention::kMeanOfTwo;
      r.metadata.emotions_for_all = field(conventions, "emotions_scope").get<std::string>() == "all posts";
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    corrupt(e.what());
  }
}

std::string summary_csv(const StressReport& report) {
  std::ostringstream out;
  csv::write_row(out, {"group", "total", "stressed", "stressed_pct", "not_stressed_pct"});
  for (const auto& g : report.groups) {
    csv::write_row(out, {g.summary.group, std::to_string(g.summary.total), std::to_string(g.summary.stressed),
                         tenths_text(g.summary.stressed_tenths), tenths_text(1000 - g.summary.stressed_tenths)});
  }
  if (report.mean_stress_pct) {
    csv::write_row(out, {"overall (mean of groups)", "", "", std::to_string(*report.mean_stress_pct), ""});
  }
  return out.str();
}

std::string monthly_csv(const StressReport& report) {
  std::ostringstream out;
  csv::Row header{"group"};
  for (auto m : kAcademicMonths) header.emplace_back(m);
  header.emplace_back("unknown");
  csv::write_row(out, header);
  for (const auto& g : report.groups) {
    csv::Row row{g.summary.group};
    for (auto v : g.monthly.stressed) row.push_back(std::to_string(v));
    row.push_back(std::to_string(g.monthly.unknown));
    csv::write_row(out, row);
  }
  return out.str();
}

std::string upvotes_csv(const StressReport& report) {
  std::ostringstream out;
  csv::write_row(out, {"group", "class", "count", "mean", "median", "std"});
  for (const auto& g : report.groups) {
    for (const auto& [name, stats] : {std::pair{"stressed", &g.upvotes_stressed},
                                      std::pair{"not_stressed", &g.upvotes_not_stressed}}) {
      if (*stats) {
        csv::write_row(out, {g.summary.group, name, std::to_string((*stats)->count), decimal((*stats)->mean),
                             decimal((*stats)->median), decimal((*stats)->std)});
      } else {
        csv::write_row(out, {g.summary.group, name, "0", "", "", ""});
      }
    }
  }
  return out.str();
}

std::string top_words_csv(const StressReport& report) {
  std::ostringstream out;
  csv::write_row(out, {"group", "rank", "token", "count"});
  for (const auto& g : report.groups) {
    for (std::size_t i = 0; i < g.top_words.size(); ++i) {
      csv::write_row(out, {g.summary.group, std::to_string(i + 1), g.top_words[i].first,
                           std::to_string(g.top_words[i].second)});
    }
  }
  return out.str();
}

std::string emotions_csv(const StressReport& report) {
  std::ostringstream out;
  csv::Row header{"group", "section", "key"};
  for (auto a : kNegativeNames) header.emplace_back(a);
  csv::write_row(out, header);
  for (const auto& g : report.groups) {
    for (std::size_t m = 0; m < 12; ++m) {
      csv::Row row{g.summary.group, "monthly_mean", std::string(kAcademicMonths[m])};
      for (const auto& v : g.emotions.monthly[m]) row.push_back(v ? decimal(*v) : "");
      csv::write_row(out, row);
    }
    using Getter = double (*)(const WhiskerStats&);
    const std::array<std::pair<const char*, Getter>, 9> stats = {{
        {"count", [](const WhiskerStats& w) { return static_cast<double>(w.count); }},
        {"min", [](const WhiskerStats& w) { return w.min; }},
        {"q1", [](const WhiskerStats& w) { return w.q1; }},
        {"median", [](const WhiskerStats& w) { return w.median; }},
        {"q3", [](const WhiskerStats& w) { return w.q3; }},
        {"max", [](const WhiskerStats& w) { return w.max; }},
        {"lower_whisker", [](const WhiskerStats& w) { return w.lower_whisker; }},
        {"upper_whisker", [](const WhiskerStats& w) { return w.upper_whisker; }},
        {"outliers", [](const WhiskerStats& w) { return static_cast<double>(w.outliers); }},
    }};
    for (const auto& [key, get] : stats) {
      csv::Row row{g.summary.group, "whisker", key};
      for (const auto& w : g.emotions.whisker) row.push_back(w ? decimal(get(*w)) : "");
      csv::write_row(out, row);
    }
  }
  return out.str();
}

std::vector<std::filesystem::path> emit_report(const StressReport& report, ReportFormat format,
                                               const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  const auto emit = [&](const char* name, const std::string& content) {
    written.push_back(dir / name);
    write_file(written.back(), content);
  };
  if (format == ReportFormat::kJson) {
    emit("report.json", report_to_json(report));
  } else {
    emit("summary.csv", summary_csv(report));
    emit("monthly.csv", monthly_csv(report));
    emit("upvotes.csv", upvotes_csv(report));
    emit("top_words.csv", top_words_csv(report));
    emit("emotions.csv", emotions_csv(report));
  }
  return written;
}

std::string format_summary_table(const StressReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-24s %10s %10s %10s %14s\n", "Group", "Total", "Stressed", "Stressed%",
                "Not stressed%");
  out << line;
  for (const auto& g : report.groups) {
    std::snprintf(line, sizeof line, "%-24s %10zu %10zu %10s %14s\n", g.summary.group.c_str(), g.summary.total,
                  g.summary.stressed, tenths_text(g.summary.stressed_tenths).c_str(),
                  tenths_text(1000 - g.summary.stressed_tenths).c_str());
    out << line;
  }
  if (report.mean_stress_pct) out << "Mean stress level: " << *report.mean_stress_pct << "%\n";
  return out.str();
}

}  // namespace stressdetect
