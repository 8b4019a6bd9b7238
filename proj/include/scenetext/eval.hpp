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

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scenetext/dataset.hpp"
#include "scenetext/geometry.hpp"

namespace scenetext::eval {

inline constexpr double kDefaultIouThreshold = 0.5;
// A detection covering more than this fraction of its own area with a
// don't-care region is ignored.
inline constexpr double kDontCareOverlap = 0.5;

// Exact intersection area; non-convex quads are replaced by their hulls.
double intersection_area(const QuadBox& a, const QuadBox& b);
// 0 when the union has zero area.
double polygon_iou(const QuadBox& a, const QuadBox& b);

struct Matching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (gt, det)
  std::vector<bool> gt_ignored;
  std::vector<bool> det_ignored;

  std::size_t counted_gt() const;
  std::size_t counted_dets() const;
};

// Greedy one-to-one matching by descending IoU; equal IoUs are taken in
// (gt index, det index) order. Zero-area detections never match.
Matching match_detections(std::span<const QuadBox> gts,
                          std::span<const QuadBox> dets,
                          double iou_thresh = kDefaultIouThreshold);

// Per-image tallies; dataset totals are plain sums.
struct Counts {
  std::size_t matched = 0;
  std::size_t gt = 0;
  std::size_t det = 0;

  Counts& operator+=(const Counts& o) {
    matched += o.matched;
    gt += o.gt;
    det += o.det;
    return *this;
  }
  friend bool operator==(const Counts&, const Counts&) = default;
};

Counts counts_of(const Matching& m);

double f_measure(double precision, double recall);

struct LocalizationReport {
  double precision = 1.0;
  double recall = 1.0;
  double f_measure = 1.0;
  Counts counts;
};

// Precision is 1 with no counted detections, recall 1 with no counted GT.
LocalizationReport report_from_counts(const Counts& totals);
LocalizationReport localization_metrics(std::span<const Matching> matchings);

struct WordRecognitionReport {
  std::size_t words = 0;
  std::size_t ted = 0;
  double crw = 0.0;
  std::size_t ted_upper = 0;
  double crw_upper = 0.0;
  // Sum of distances divided by max(|gt|, |pred|) per word.
  double ted_normalized = 0.0;
  double ted_upper_normalized = 0.0;
};

// Pairs are (ground truth, prediction). Throws InvalidArgument when empty.
WordRecognitionReport word_metrics(
    std::span<const std::pair<std::string, std::string>> pairs);

// True when the words agree after trimming surrounding whitespace and
// uppercasing ASCII letters.
bool transcriptions_match(std::string_view gt, std::string_view det);

// End-to-end tallies for one image: a match counts only when the
// transcriptions agree. Throws InvalidArgument for a detection without
// transcription.
Counts e2e_counts(std::span<const QuadBox> gts, std::span<const QuadBox> dets,
                  double iou_thresh = kDefaultIouThreshold);

struct EndToEndReport {
  std::map<VocabSetting, LocalizationReport> rows;
};

// Dataset-level evaluation over annotations keyed by image id. Images with
// ground truth but no result count as having no detections; result-only
// ids are listed in `unknown_results` and ignored.
struct DatasetEvaluation {
  LocalizationReport report;
  std::vector<std::string> missing_results;
  std::vector<std::string> unknown_results;
};
DatasetEvaluation evaluate_localization(
    const std::map<std::string, ImageAnnotation>& gt,
    const std::map<std::string, ImageAnnotation>& results,
    double iou_thresh = kDefaultIouThreshold);
DatasetEvaluation evaluate_end_to_end(
    const std::map<std::string, ImageAnnotation>& gt,
    const std::map<std::string, ImageAnnotation>& results,
    double iou_thresh = kDefaultIouThreshold);

// Cropped-word transcription lists: one `id, "text"` line per word; quotes
// and backslashes inside the text are backslash-escaped.
std::map<std::string, std::string> parse_word_transcriptions(
    std::string_view text);
std::string format_word_transcriptions(
    const std::map<std::string, std::string>& words);

// Ordered key=value report lines.
using KeyValues = std::vector<std::pair<std::string, std::string>>;
KeyValues key_values(const LocalizationReport& r, std::string_view prefix = {});
KeyValues key_values(const WordRecognitionReport& r);
KeyValues key_values(const EndToEndReport& r);
std::string format_key_values(const KeyValues& kv);
// Aligned two-column table for the console.
std::string format_table(const KeyValues& kv);

}  // namespace scenetext::eval
