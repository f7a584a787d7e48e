#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "stressdetect/csv.hpp"
#include "stressdetect/error.hpp"
#include "stressdetect/report.hpp"

namespace sd = stressdetect;
using namespace std::chrono;

namespace {

sd::ClassifiedPost post(std::string community, int label, std::optional<sys_days> day, long long score,
                        std::string text = "") {
  sd::ClassifiedPost c;
  c.post.community = std::move(community);
  c.post.body = std::move(text);
  c.post.score = score;
  if (day) c.post.date = sd::Timestamp{*day};
  c.label = label;
  return c;
}

sd::EmotionProfile sadness(double f) {
  sd::EmotionProfile p;
  p.frequency[static_cast<std::size_t>(sd::Affect::kSadness)] = f;
  p.frequency[static_cast<std::size_t>(sd::Affect::kNegative)] = 1.0 - f;
  p.total_hits = 2;
  return p;
}

std::vector<sd::ClassifiedPost> sample() {
  std::vector<sd::ClassifiedPost> v = {
      post("csMajors", 1, sys_days{2023y / September / 15d}, 3, "exam stress exam"),
      post("r/csmajors", 0, sys_days{2023y / October / 1d}, 2, "fine day"),
      post("EngineeringStudents", 1, sys_days{2024y / May / 3d}, 10, "exam deadline"),
      post("PhD", 1, std::nullopt, 5, "advisor stress"),
      post("PhD", 0, sys_days{2024y / August / 31d}, 3, "lab coffee"),
      post("Gardening", 0, sys_days{2024y / January / 1d}, 1, "tomatoes"),
  };
  v[0].emotions = sadness(0.5);
  v[2].emotions = sadness(0.25);
  return v;
}

std::vector<sd::LabeledExample> training() {
  return {{"1", "exam panic deadline stress", 1, ""}, {"2", "panic attack before exam", 1, ""},
          {"3", "deadline stress again tonight", 1, ""}, {"4", "lovely walk in the park", 0, ""},
          {"5", "park picnic with friends", 0, ""},        {"6", "friends and coffee lovely day", 0, ""}};
}

}  // namespace

TEST(StressSummary, PaperRounding) {
  EXPECT_EQ(sd::stress_tenths(5389, 18381), 293);
  const std::vector<int> groups = {293, 311, 248, 305};
  EXPECT_EQ(sd::mean_stress_percent(groups), 29);
  EXPECT_EQ(sd::stress_tenths(0, 10), 0);
  EXPECT_EQ(sd::stress_tenths(1, 8), 125);   // 12.5 exactly
  EXPECT_EQ(sd::stress_tenths(1, 16), 63);   // 6.25 rounds half up
  const std::vector<int> half = {5, 10};     // 0.5% and 1.0% average to 0.75% -> 1
  EXPECT_EQ(sd::mean_stress_percent(half), 1);
}

TEST(StressSummary, SingleGroupNothingStressed) {
  const std::vector<sd::ClassifiedPost> v = {post("PhD", 0, std::nullopt, 1), post("PhD", 0, std::nullopt, 2)};
  const auto r = sd::build_report(v, sd::GroupMap::academic_levels(), sd::PipelineConfig::defaults());
  ASSERT_EQ(r.groups.size(), 1u);
  EXPECT_EQ(r.groups[0].summary.stressed_pct(), 0.0);
  EXPECT_EQ(r.groups[0].summary.not_stressed_pct(), 100.0);
  EXPECT_EQ(r.mean_stress_pct, 0);
}

TEST(Monthly, AcademicOrdering) {
  EXPECT_EQ(sd::academic_month_index(sd::Timestamp{sys_days{2023y / September / 15d}}), 0u);
  EXPECT_EQ(sd::academic_month_index(sd::Timestamp{sys_days{2024y / May / 15d}}), 8u);
  EXPECT_EQ(sd::academic_month_index(sd::Timestamp{sys_days{2024y / August / 31d} + 23h}), 11u);
  EXPECT_EQ(sd::academic_month_index(sd::Timestamp{sys_days{2024y / January / 1d}}), 4u);
}

TEST(Upvotes, Statistics) {
  const std::vector<long long> three = {3, 1, 2};
  const auto s = sd::upvote_stats(three);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->mean, 2.0);
  EXPECT_EQ(s->median, 2.0);
  EXPECT_NEAR(s->std, std::sqrt(2.0 / 3.0), 1e-15);
  const std::vector<long long> two = {3, 2};
  EXPECT_EQ(sd::upvote_stats(two)->median, 2.5);
  EXPECT_EQ(sd::upvote_stats(two, sd::MedianConvention::kLowerMiddle)->median, 2.0);
  EXPECT_FALSE(sd::upvote_stats({}));
}

TEST(TopWords, CountsAndTies) {
  auto config = sd::PipelineConfig::defaults();
  const std::vector<std::string> texts = {"work work time", "work"};
  EXPECT_EQ(sd::top_words(texts, 10, config), (sd::WordCounts{{"work", 3}, {"time", 1}}));
  EXPECT_EQ(sd::top_words(texts, 1, config), (sd::WordCounts{{"work", 3}}));
  const std::vector<std::string> tie = {"zeta alpha", "mid"};
  EXPECT_EQ(sd::top_words(tie, 10, config), (sd::WordCounts{{"alpha", 1}, {"mid", 1}, {"zeta", 1}}));
  EXPECT_THROW(sd::top_words(texts, 0, config), sd::Error);
}

TEST(TopWords, ShuffleInvariant) {
  std::mt19937_64 rng(2);
  std::vector<std::string> texts;
  for (int i = 0; i < 60; ++i) texts.push_back("w" + std::to_string(rng() % 9) + " w" + std::to_string(rng() % 5));
  const auto config = sd::PipelineConfig::defaults();
  const auto base = sd::top_words(texts, 10, config);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(texts.begin(), texts.end(), rng);
    EXPECT_EQ(sd::top_words(texts, 10, config), base);
  }
}

TEST(Whiskers, OutlierBeyondIqr) {
  const std::vector<double> v = {0, 0, 0, 0, 1};
  EXPECT_EQ(sd::flag_outliers(v), (std::vector<bool>{false, false, false, false, true}));
  const auto w = sd::whisker_stats(v);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->q1, 0.0);
  EXPECT_EQ(w->q3, 0.0);
  EXPECT_EQ(w->max, 1.0);
  EXPECT_EQ(w->upper_whisker, 0.0);
  EXPECT_EQ(w->outliers, 1u);
  const std::vector<double> quart = {1, 2, 3, 4};
  EXPECT_EQ(sd::quantile_sorted(quart, 0.25), 1.75);
  EXPECT_EQ(sd::quantile_sorted(quart, 0.5), 2.5);
  EXPECT_FALSE(sd::whisker_stats({}));
}

TEST(GroupMap, MatchingAndOrder) {
  const auto map = sd::GroupMap::academic_levels();
  EXPECT_EQ(map.group_of("r/csMajors"), "Bachelor");
  EXPECT_EQ(map.group_of("GRADSCHOOL"), "Graduate");
  EXPECT_EQ(map.group_of("Gardening"), "other");
  const std::vector<std::string> present = {"other", "PhD", "Bachelor"};
  EXPECT_EQ(map.order(present), (std::vector<std::string>{"Bachelor", "PhD", "other"}));
  const auto parsed = sd::GroupMap::parse("community,group\nr/A,G1\nB,G2\n");
  EXPECT_EQ(parsed.group_of("a"), "G1");
  EXPECT_THROW(sd::GroupMap::parse("name,group\nA,B\n"), sd::Error);
}

TEST(Report, InvariantsOnSample) {
  const auto v = sample();
  const auto r = sd::build_report(v, sd::GroupMap::academic_levels(), sd::PipelineConfig::defaults());
  ASSERT_EQ(r.groups.size(), 3u);
  EXPECT_EQ(r.groups[0].summary.group, "Bachelor");
  EXPECT_EQ(r.groups[1].summary.group, "PhD");
  EXPECT_EQ(r.groups[2].summary.group, "other");
  EXPECT_EQ(r.warnings.size(), 1u);

  const auto& bachelor = r.groups[0];
  EXPECT_EQ(bachelor.summary.total, 3u);
  EXPECT_EQ(bachelor.summary.stressed, 2u);
  EXPECT_EQ(bachelor.summary.stressed_tenths, 667);
  EXPECT_EQ(bachelor.monthly.stressed[0], 1u);
  EXPECT_EQ(bachelor.monthly.stressed[8], 1u);
  EXPECT_EQ(bachelor.upvotes_stressed->median, 6.5);
  EXPECT_EQ(bachelor.top_words.front(), (std::pair<std::string, std::size_t>{"exam", 3}));
  EXPECT_EQ(bachelor.emotions.monthly[0][3], 0.5);  // sadness is index 3 of anger, disgust, fear, sadness, surprise
  EXPECT_EQ(bachelor.emotions.monthly[8][3], 0.25);
  EXPECT_FALSE(bachelor.emotions.monthly[1][3]);
  EXPECT_EQ(r.groups[1].monthly.unknown, 1u);

  for (const auto& g : r.groups) {
    EXPECT_LE(g.summary.stressed, g.summary.total);
    std::size_t sum = g.monthly.unknown;
    for (auto n : g.monthly.stressed) sum += n;
    EXPECT_EQ(sum, g.summary.stressed);
    EXPECT_NEAR(g.summary.stressed_pct() + g.summary.not_stressed_pct(), 100.0, 1e-9);
  }
}

TEST(Report, JsonRoundTripAndCsvConsistency) {
  auto r = sd::build_report(sample(), sd::GroupMap::academic_levels(), sd::PipelineConfig::defaults(),
                            {10, sd::MedianConvention::kMeanOfTwo, "2024-01-01T00:00:00Z", "v1", 42, false});
  r.model_kind = "logistic";
  r.model_fingerprint = "abc";
  const auto text = sd::report_to_json(r);
  const auto back = sd::report_from_json(text);
  EXPECT_TRUE(back == r);
  EXPECT_EQ(sd::report_to_json(back), text);

  const auto summary = sd::csv::parse(sd::summary_csv(r));
  ASSERT_GE(summary.rows.size(), 3u);
  EXPECT_EQ(summary.rows[0], (sd::csv::Row{"Bachelor", "3", "2", "66.7", "33.3"}));
  EXPECT_NE(text.find("\"stressed_pct\": 66.7"), std::string::npos);

  EXPECT_THROW(sd::report_from_json("{\"schema_version\": 1"), sd::Error);
}

TEST(Report, UnknownFormatRejected) {
  EXPECT_EQ(sd::parse_report_format("csv"), sd::ReportFormat::kCsv);
  EXPECT_THROW(sd::parse_report_format("xml"), sd::Error);
}

TEST(Report, EmitWritesTables) {
  const auto dir = std::filesystem::temp_directory_path() / "stressdetect_report_test";
  std::filesystem::remove_all(dir);
  const auto r = sd::build_report(sample(), sd::GroupMap::academic_levels(), sd::PipelineConfig::defaults());
  EXPECT_EQ(sd::emit_report(r, sd::ReportFormat::kCsv, dir).size(), 5u);
  for (auto name : {"summary.csv", "monthly.csv", "upvotes.csv", "top_words.csv", "emotions.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
  }
  EXPECT_EQ(sd::emit_report(r, sd::ReportFormat::kJson, dir).size(), 1u);
}

TEST(ClassifyCorpus, PartitionOrderAndJobs) {
  const auto config = sd::PipelineConfig::defaults();
  const auto model = sd::train_model(training(), config, {});
  EXPECT_TRUE(sd::classify_corpus(model, {}, config).empty());

  std::vector<sd::PostRecord> posts(37);
  for (std::size_t i = 0; i < posts.size(); ++i) {
    posts[i].id = std::to_string(i);
    posts[i].title = i % 3 ? "exam" : "";
    posts[i].body = i % 2 ? "panic deadline" : "lovely park";
  }
  const auto one = sd::classify_corpus(model, posts, config);
  sd::ClassifyOptions options;
  options.jobs = 4;
  const auto four = sd::classify_corpus(model, posts, config, options);
  ASSERT_EQ(one.size(), posts.size());
  std::size_t stressed = 0;
  for (std::size_t i = 0; i < posts.size(); ++i) {
    EXPECT_EQ(one[i].post.id, posts[i].id);
    EXPECT_EQ(one[i].score, four[i].score);
    EXPECT_EQ(one[i].label, four[i].label);
    EXPECT_EQ(one[i].label, sd::predict_text(model, posts[i].classification_text(), config).label);
    stressed += one[i].label;
  }
  EXPECT_GT(stressed, 0u);
  EXPECT_LT(stressed, posts.size());
}

TEST(ClassifyCorpus, EmotionsOnlyForStressedByDefault) {
  const auto config = sd::PipelineConfig::defaults();
  const auto model = sd::train_model(training(), config, {});
  const auto lexicon = sd::parse_lexicon("panic\tfear\t1\nlovely\tjoy\t1\n");
  std::vector<sd::PostRecord> posts(2);
  posts[0].body = "panic deadline stress";
  posts[1].body = "lovely park picnic";
  sd::ClassifyOptions options;
  options.lexicon = &lexicon;
  auto out = sd::classify_corpus(model, posts, config, options);
  ASSERT_EQ(out[0].label, 1);
  ASSERT_EQ(out[1].label, 0);
  EXPECT_TRUE(out[0].emotions);
  EXPECT_FALSE(out[1].emotions);
  options.emotions_for_all = true;
  out = sd::classify_corpus(model, posts, config, options);
  EXPECT_TRUE(out[1].emotions);
}
