#include <gtest/gtest.h>

#include <fstream>
#include <string>

#include "stressdetect/porter.hpp"

TEST(Porter, ReferenceVocabulary) {
  std::ifstream voc(STRESSDETECT_TEST_DATA_DIR "/porter/voc.txt");
  std::ifstream out(STRESSDETECT_TEST_DATA_DIR "/porter/output.txt");
  ASSERT_TRUE(voc && out);
  std::string word, expected;
  std::size_t n = 0, mismatches = 0;
  while (std::getline(voc, word)) {
    ASSERT_TRUE(std::getline(out, expected)) << "output file shorter than vocabulary";
    if (stressdetect::porter_stem(word) != expected) {
      if (++mismatches <= 10) ADD_FAILURE() << word << " -> " << stressdetect::porter_stem(word) << ", want " << expected;
    }
    ++n;
  }
  EXPECT_EQ(n, 23531u);
  EXPECT_EQ(mismatches, 0u);
}

TEST(Porter, ShortWordsUnchanged) {
  EXPECT_EQ(stressdetect::porter_stem("is"), "is");
  EXPECT_EQ(stressdetect::porter_stem("a"), "a");
  EXPECT_EQ(stressdetect::porter_stem(""), "");
}

TEST(Porter, Examples) {
  EXPECT_EQ(stressdetect::porter_stem("caresses"), "caress");
  EXPECT_EQ(stressdetect::porter_stem("relational"), "relat");
  EXPECT_EQ(stressdetect::porter_stem("city"), "citi");
  EXPECT_EQ(stressdetect::porter_stem("changing"), "chang");
}
