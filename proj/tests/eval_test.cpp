/* Copyright 2026 The Scenetext Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "scenetext/errors.hpp"
#include "scenetext/eval.hpp"
#include "scenetext/rng.hpp"

namespace scenetext::eval {
namespace {

QuadBox box(double x0, double y0, double x1, double y1,
            std::optional<std::string> text = std::nullopt) {
  QuadBox q = QuadBox::axis_aligned(x0, y0, x1, y1);
  q.transcription = std::move(text);
  q.dont_care = q.transcription && *q.transcription == "###";
  return q;
}

TEST(Iou, Examples) {
  const QuadBox a = box(0, 0, 10, 10);
  EXPECT_DOUBLE_EQ(polygon_iou(a, a), 1.0);
  EXPECT_DOUBLE_EQ(polygon_iou(a, box(20, 20, 30, 30)), 0.0);
  EXPECT_NEAR(polygon_iou(a, box(5, 0, 15, 10)), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(polygon_iou(box(1, 1, 1, 1), box(1, 1, 1, 1)), 0.0);
}

TEST(Iou, SymmetricAndBounded) {
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    QuadBox a, b;
    for (auto* q : {&a, &b}) {
      const double cx = rng.uniform(0, 20), cy = rng.uniform(0, 20);
      const double w = rng.uniform(1, 10), h = rng.uniform(1, 10);
      const double th = rng.uniform(0, 3.14159);
      const double c = std::cos(th), s = std::sin(th);
      const double dx[] = {-w, w, w, -w}, dy[] = {-h, -h, h, h};
      for (int k = 0; k < 4; ++k) {
        q->vertices[k] = {cx + c * dx[k] - s * dy[k], cy + s * dx[k] + c * dy[k]};
      }
    }
    const double ab = polygon_iou(a, b);
    EXPECT_NEAR(ab, polygon_iou(b, a), 1e-12);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0 + 1e-12);
    EXPECT_NEAR(polygon_iou(a, a), 1.0, 1e-12);
  }
}

TEST(Matching, PerfectDetections) {
  const std::vector<QuadBox> gts{box(0, 0, 10, 10, "a"), box(20, 0, 30, 10, "b")};
  const Matching m = match_detections(gts, gts);
  EXPECT_EQ(m.pairs.size(), 2u);
  const auto r = report_from_counts(counts_of(m));
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.recall, 1.0);
}

TEST(Matching, DetectionInDontCareIgnored) {
  const std::vector<QuadBox> gts{box(0, 0, 10, 10, "a"), box(50, 50, 90, 90, "###")};
  const std::vector<QuadBox> dets{box(0, 0, 10, 10), box(60, 60, 70, 70)};
  const Matching m = match_detections(gts, dets);
  EXPECT_TRUE(m.det_ignored[1]);
  EXPECT_TRUE(m.gt_ignored[1]);
  EXPECT_EQ(counts_of(m), (Counts{1, 1, 1}));
}

TEST(Matching, HigherIouWins) {
  const std::vector<QuadBox> gts{box(0, 0, 10, 10)};
  // IoU 0.9 and 0.6 against the GT.
  const std::vector<QuadBox> dets{box(0, 0, 10, 6), box(0, 0, 10, 9)};
  ASSERT_NEAR(polygon_iou(gts[0], dets[0]), 0.6, 1e-12);
  ASSERT_NEAR(polygon_iou(gts[0], dets[1]), 0.9, 1e-12);
  const Matching m = match_detections(gts, dets);
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_EQ(m.pairs[0], (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_EQ(counts_of(m), (Counts{1, 1, 2}));
}

TEST(Matching, OneToOneAboveThreshold) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<QuadBox> gts, dets;
    for (int i = 0; i < 6; ++i) {
      const double x = rng.uniform(0, 40), y = rng.uniform(0, 40);
      gts.push_back(box(x, y, x + rng.uniform(2, 10), y + rng.uniform(2, 10)));
      const double u = rng.uniform(0, 40), v = rng.uniform(0, 40);
      dets.push_back(box(u, v, u + rng.uniform(2, 10), v + rng.uniform(2, 10)));
    }
    const Matching m = match_detections(gts, dets);
    std::vector<int> g_used(6), d_used(6);
    for (auto [g, d] : m.pairs) {
      EXPECT_EQ(g_used[g]++, 0);
      EXPECT_EQ(d_used[d]++, 0);
      EXPECT_GE(polygon_iou(gts[g], dets[d]), 0.5);
    }
  }
}

TEST(Matching, RemovingUntouchedDontCareKeepsScores) {
  const std::vector<QuadBox> with{box(0, 0, 10, 10, "a"), box(30, 30, 40, 40, "###"),
                                  box(60, 0, 70, 10, "b")};
  const std::vector<QuadBox> without{with[0], with[2]};
  const std::vector<QuadBox> dets{box(0, 0, 10, 10), box(80, 80, 90, 90)};
  EXPECT_EQ(counts_of(match_detections(with, dets)),
            counts_of(match_detections(without, dets)));
}

TEST(Localization, HandArithmetic) {
  const auto r = report_from_counts({1, 3, 2});
  EXPECT_DOUBLE_EQ(r.precision, 0.5);
  EXPECT_DOUBLE_EQ(r.recall, 1.0 / 3.0);
  EXPECT_NEAR(r.f_measure, 0.4, 1e-15);
  const auto empty = localization_metrics({});
  EXPECT_EQ(empty.precision, 1.0);
  EXPECT_EQ(empty.recall, 1.0);
  EXPECT_EQ(empty.f_measure, 1.0);
}

TEST(FMeasure, PublishedRows) {
  EXPECT_NEAR(f_measure(0.724, 0.5696), 0.6376, 5e-4);
  EXPECT_NEAR(f_measure(0.7746, 0.3674), 0.4984, 5e-4);
  EXPECT_EQ(f_measure(1.0, 1.0), 1.0);
  EXPECT_EQ(f_measure(0.0, 0.0), 0.0);
}

TEST(FMeasure, FixtureFile) {
  std::ifstream in(std::string(SCENETEXT_TEST_DATA) + "/published_metrics.txt");
  ASSERT_TRUE(in);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string part; std::getline(ss, part, '|');) f.push_back(part);
    ASSERT_EQ(f.size(), 6u) << line;
    EXPECT_NEAR(f_measure(std::stod(f[3]), std::stod(f[4])), std::stod(f[5]), 5e-4) << line;
    ++rows;
  }
  EXPECT_GT(rows, 0);
}

TEST(WordMetrics, Examples) {
  using P = std::pair<std::string, std::string>;
  const std::vector<P> same{{"cat", "cat"}};
  auto r = word_metrics(same);
  EXPECT_EQ(r.ted, 0u);
  EXPECT_EQ(r.crw, 1.0);

  const std::vector<P> cased{{"Cat", "cat"}};
  r = word_metrics(cased);
  EXPECT_EQ(r.ted, 1u);
  EXPECT_EQ(r.crw, 0.0);
  EXPECT_EQ(r.ted_upper, 0u);
  EXPECT_EQ(r.crw_upper, 1.0);

  const std::vector<P> two{{"ab", "ax"}, {"cd", "cd"}};
  r = word_metrics(two);
  EXPECT_EQ(r.ted, 1u);
  EXPECT_EQ(r.crw, 0.5);
  EXPECT_DOUBLE_EQ(r.ted_normalized, 0.5);

  EXPECT_THROW(word_metrics({}), InvalidArgument);
}

TEST(WordMetrics, UppercaseNeverIncreasesDistance) {
  Rng rng(3);
  const std::string letters = "aAbBc";
  for (int i = 0; i < 300; ++i) {
    std::string g, p;
    for (int k = rng.uniform_int(0, 5); k > 0; --k) g += letters[rng.uniform_int(0, 4)];
    for (int k = rng.uniform_int(0, 5); k > 0; --k) p += letters[rng.uniform_int(0, 4)];
    const std::vector<std::pair<std::string, std::string>> pairs{{g, p}};
    const auto r = word_metrics(pairs);
    EXPECT_LE(r.ted_upper, r.ted);
    EXPECT_EQ(r.crw == 1.0, r.ted == 0);
  }
}

TEST(EndToEnd, TextMustAgree) {
  const std::vector<QuadBox> gts{box(0, 0, 10, 10, "Shop")};
  EXPECT_EQ(e2e_counts(gts, std::vector<QuadBox>{box(0, 0, 10, 10, "shop ")}),
            (Counts{1, 1, 1}));
  EXPECT_EQ(e2e_counts(gts, std::vector<QuadBox>{box(0, 0, 10, 10, "shoe")}),
            (Counts{0, 1, 1}));
  EXPECT_THROW(e2e_counts(gts, std::vector<QuadBox>{box(0, 0, 10, 10)}), InvalidArgument);
}

TEST(EndToEnd, HalfCorrect) {
  const std::vector<QuadBox> gts{box(0, 0, 10, 10, "one"), box(20, 0, 30, 10, "two")};
  const std::vector<QuadBox> dets{box(0, 0, 10, 10, "ONE"), box(20, 0, 30, 10, "too")};
  const auto r = report_from_counts(e2e_counts(gts, dets));
  EXPECT_DOUBLE_EQ(r.precision, 0.5);
  EXPECT_DOUBLE_EQ(r.recall, 0.5);
  EXPECT_DOUBLE_EQ(r.f_measure, 0.5);
}

TEST(Dataset, MissingResultsCountAsEmpty) {
  std::map<std::string, ImageAnnotation> gt, res;
  gt["1"] = {"1", {box(0, 0, 10, 10, "a")}};
  gt["2"] = {"2", {box(0, 0, 10, 10, "b")}};
  res["1"] = {"1", {box(0, 0, 10, 10)}};
  res["9"] = {"9", {box(0, 0, 10, 10)}};
  const auto ev = evaluate_localization(gt, res);
  EXPECT_EQ(ev.missing_results, std::vector<std::string>{"2"});
  EXPECT_EQ(ev.unknown_results, std::vector<std::string>{"9"});
  EXPECT_DOUBLE_EQ(ev.report.precision, 1.0);
  EXPECT_DOUBLE_EQ(ev.report.recall, 0.5);
}

TEST(WordTranscriptions, RoundTripWithEscapes) {
  const std::map<std::string, std::string> words{
      {"word_1.png", "plain"}, {"word_2.png", "say \"hi\""}, {"word_3.png", "back\\slash, comma"}};
  EXPECT_EQ(parse_word_transcriptions(format_word_transcriptions(words)), words);
  EXPECT_EQ(parse_word_transcriptions("\xef\xbb\xbfw1.png, \"A\"\n"),
            (std::map<std::string, std::string>{{"w1.png", "A"}}));
  EXPECT_EQ(parse_word_transcriptions("w1.png, bare\n").at("w1.png"), "bare");
  EXPECT_THROW(parse_word_transcriptions("w1.png \"A\"\n"), ParseError);
  EXPECT_THROW(parse_word_transcriptions("w1.png, \"A\"\nw1.png, \"B\"\n"), ParseError);
}

TEST(Reports, KeyValueFormatting) {
  const auto r = report_from_counts({1, 2, 1});
  const std::string text = format_key_values(key_values(r));
  EXPECT_NE(text.find("precision=1"), std::string::npos);
  EXPECT_NE(text.find("recall=0.5"), std::string::npos);
  EXPECT_FALSE(format_table(key_values(r)).empty());
}

}  // namespace
}  // namespace scenetext::eval
