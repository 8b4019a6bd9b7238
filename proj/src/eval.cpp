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

#include "scenetext/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <tuple>

#include "scenetext/errors.hpp"
#include "scenetext/lexicon.hpp"

namespace scenetext::eval {

namespace {

Polygon convex_outline(const QuadBox& q) {
  Polygon p = q.polygon();
  if (is_convex(p)) {
    if (signed_area(p) < 0.0) std::reverse(p.begin(), p.end());
    return p;
  }
  return convex_hull(std::move(p));
}

double convex_area(const QuadBox& q) { return polygon_area(convex_outline(q)); }

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

double intersection_area(const QuadBox& a, const QuadBox& b) {
  const Polygon pa = convex_outline(a);
  const Polygon pb = convex_outline(b);
  if (pa.size() < 3 || pb.size() < 3) return 0.0;
  return polygon_area(clip_convex(pa, pb));
}

double polygon_iou(const QuadBox& a, const QuadBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = convex_area(a) + convex_area(b) - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

std::size_t Matching::counted_gt() const {
  return static_cast<std::size_t>(
      std::count(gt_ignored.begin(), gt_ignored.end(), false));
}

std::size_t Matching::counted_dets() const {
  return static_cast<std::size_t>(
      std::count(det_ignored.begin(), det_ignored.end(), false));
}

Matching match_detections(std::span<const QuadBox> gts,
                          std::span<const QuadBox> dets, double iou_thresh) {
  if (!(iou_thresh > 0.0 && iou_thresh <= 1.0)) {
    throw InvalidArgument("match_detections: iou threshold must be in (0, 1]");
  }
  Matching m;
  m.gt_ignored.resize(gts.size());
  m.det_ignored.resize(dets.size());
  for (std::size_t g = 0; g < gts.size(); ++g) m.gt_ignored[g] = gts[g].dont_care;

  std::vector<double> det_area(dets.size());
  for (std::size_t d = 0; d < dets.size(); ++d) {
    det_area[d] = convex_area(dets[d]);
    if (det_area[d] <= 0.0) continue;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (gts[g].dont_care &&
          intersection_area(gts[g], dets[d]) / det_area[d] > kDontCareOverlap) {
        m.det_ignored[d] = true;
        break;
      }
    }
  }

  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (m.gt_ignored[g]) continue;
    for (std::size_t d = 0; d < dets.size(); ++d) {
      if (m.det_ignored[d] || det_area[d] <= 0.0) continue;
      const double iou = polygon_iou(gts[g], dets[d]);
      if (iou >= iou_thresh) candidates.emplace_back(iou, g, d);
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) {
                     return std::get<0>(a) > std::get<0>(b);
                   });
  std::vector<bool> gt_used(gts.size()), det_used(dets.size());
  for (const auto& [iou, g, d] : candidates) {
    if (gt_used[g] || det_used[d]) continue;
    gt_used[g] = det_used[d] = true;
    m.pairs.emplace_back(g, d);
  }
  return m;
}

Counts counts_of(const Matching& m) {
  return {m.pairs.size(), m.counted_gt(), m.counted_dets()};
}

double f_measure(double precision, double recall) {
  const double s = precision + recall;
  return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

LocalizationReport report_from_counts(const Counts& totals) {
  LocalizationReport r;
  r.counts = totals;
  r.precision = totals.det == 0 ? 1.0
                                : static_cast<double>(totals.matched) /
                                      static_cast<double>(totals.det);
  r.recall = totals.gt == 0 ? 1.0
                            : static_cast<double>(totals.matched) /
                                  static_cast<double>(totals.gt);
  r.f_measure = f_measure(r.precision, r.recall);
  return r;
}

LocalizationReport localization_metrics(std::span<const Matching> matchings) {
  Counts totals;
  for (const Matching& m : matchings) totals += counts_of(m);
  return report_from_counts(totals);
}

WordRecognitionReport word_metrics(
    std::span<const std::pair<std::string, std::string>> pairs) {
  if (pairs.empty()) throw InvalidArgument("word_metrics: no words to score");
  WordRecognitionReport r;
  r.words = pairs.size();
  std::size_t exact = 0, exact_upper = 0;
  for (const auto& [gt, pred] : pairs) {
    const std::u32string g = utf8_decode(gt), p = utf8_decode(pred);
    const std::u32string gu = utf8_decode(to_upper(gt)), pu = utf8_decode(to_upper(pred));
    const std::size_t d = edit_distance(g, p);
    const std::size_t du = edit_distance(gu, pu);
    const double len = static_cast<double>(std::max(g.size(), p.size()));
    r.ted += d;
    r.ted_upper += du;
    if (len > 0.0) {
      r.ted_normalized += static_cast<double>(d) / len;
      r.ted_upper_normalized += static_cast<double>(du) / len;
    }
    exact += d == 0 ? 1 : 0;
    exact_upper += du == 0 ? 1 : 0;
  }
  r.crw = static_cast<double>(exact) / static_cast<double>(pairs.size());
  r.crw_upper = static_cast<double>(exact_upper) / static_cast<double>(pairs.size());
  return r;
}

bool transcriptions_match(std::string_view gt, std::string_view det) {
  return to_upper(trim(gt)) == to_upper(trim(det));
}

Counts e2e_counts(std::span<const QuadBox> gts, std::span<const QuadBox> dets,
                  double iou_thresh) {
  for (std::size_t d = 0; d < dets.size(); ++d) {
    if (!dets[d].transcription) {
      throw InvalidArgument("end-to-end detection " + std::to_string(d) +
                            " has no transcription");
    }
  }
  const Matching m = match_detections(gts, dets, iou_thresh);
  Counts c{0, m.counted_gt(), m.counted_dets()};
  for (auto [g, d] : m.pairs) {
    const std::string& truth = gts[g].transcription ? *gts[g].transcription : std::string{};
    if (transcriptions_match(truth, *dets[d].transcription)) ++c.matched;
  }
  return c;
}

namespace {

template <typename CountFn>
DatasetEvaluation evaluate_dataset(
    const std::map<std::string, ImageAnnotation>& gt,
    const std::map<std::string, ImageAnnotation>& results, CountFn count) {
  DatasetEvaluation out;
  Counts totals;
  for (const auto& [id, ann] : gt) {
    auto it = results.find(id);
    if (it == results.end()) {
      out.missing_results.push_back(id);
      totals += count(ann.boxes, std::span<const QuadBox>{});
    } else {
      totals += count(ann.boxes, it->second.boxes);
    }
  }
  for (const auto& [id, ann] : results) {
    if (!gt.contains(id)) out.unknown_results.push_back(id);
  }
  out.report = report_from_counts(totals);
  return out;
}

}  // namespace

DatasetEvaluation evaluate_localization(
    const std::map<std::string, ImageAnnotation>& gt,
    const std::map<std::string, ImageAnnotation>& results, double iou_thresh) {
  return evaluate_dataset(gt, results,
                          [&](std::span<const QuadBox> g, std::span<const QuadBox> d) {
                            return counts_of(match_detections(g, d, iou_thresh));
                          });
}

DatasetEvaluation evaluate_end_to_end(
    const std::map<std::string, ImageAnnotation>& gt,
    const std::map<std::string, ImageAnnotation>& results, double iou_thresh) {
  return evaluate_dataset(gt, results,
                          [&](std::span<const QuadBox> g, std::span<const QuadBox> d) {
                            return e2e_counts(g, d, iou_thresh);
                          });
}

std::map<std::string, std::string> parse_word_transcriptions(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError(line_no, "expected `id, \"text\"`");
    }
    const std::string id(trim(line.substr(0, comma)));
    std::string_view value = trim(line.substr(comma + 1));
    if (id.empty()) throw ParseError(line_no, "empty word id");
    std::string word;
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (value[i] == '\\' && i + 1 < value.size() &&
            (value[i + 1] == '"' || value[i + 1] == '\\')) {
          ++i;
        }
        word.push_back(value[i]);
      }
    } else {
      word = value;
    }
    if (!out.emplace(id, std::move(word)).second) {
      throw ParseError(line_no, "duplicate word id " + id);
    }
  }
  return out;
}

std::string format_word_transcriptions(const std::map<std::string, std::string>& words) {
  std::string out;
  for (const auto& [id, word] : words) {
    out += id;
    out += ", \"";
    for (char c : word) {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    out += "\"\n";
  }
  return out;
}

KeyValues key_values(const LocalizationReport& r, std::string_view prefix) {
  const std::string p(prefix);
  return {{p + "precision", format_number(r.precision)},
          {p + "recall", format_number(r.recall)},
          {p + "hmean", format_number(r.f_measure)},
          {p + "matched", std::to_string(r.counts.matched)},
          {p + "gt", std::to_string(r.counts.gt)},
          {p + "det", std::to_string(r.counts.det)}};
}

KeyValues key_values(const WordRecognitionReport& r) {
  return {{"words", std::to_string(r.words)},
          {"ted", std::to_string(r.ted)},
          {"crw", format_number(r.crw)},
          {"ted_upper", std::to_string(r.ted_upper)},
          {"crw_upper", format_number(r.crw_upper)},
          {"ted_normalized", format_number(r.ted_normalized)},
          {"ted_upper_normalized", format_number(r.ted_upper_normalized)}};
}

KeyValues key_values(const EndToEndReport& r) {
  KeyValues out;
  for (const auto& [setting, row] : r.rows) {
    auto kv = key_values(row, to_string(setting) + ".");
    out.insert(out.end(), kv.begin(), kv.end());
  }
  return out;
}

std::string format_key_values(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string format_table(const KeyValues& kv) {
  std::size_t width = 0;
  for (const auto& [k, v] : kv) width = std::max(width, k.size());
  std::string out;
  for (const auto& [k, v] : kv) {
    std::string value = v;
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec == std::errc{} && ptr == v.data() + v.size() &&
        v.find('.') != std::string::npos) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", x);
      value = buf;
    }
    out += k + std::string(width - k.size() + 2, ' ') + value + "\n";
  }
  return out;
}

}  // namespace scenetext::eval
