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

#include "scenetext/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "scenetext/errors.hpp"
#include "scenetext/font.hpp"
#include "scenetext/rng.hpp"

namespace scenetext {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::string_view strip_bom(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  return text;
}

double parse_coordinate(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() ||
      !std::isfinite(v)) {
    throw ParseError(line, "non-numeric coordinate '" + std::string(field) + "'");
  }
  return v;
}

ImageAnnotation parse_annotation(std::string_view text, std::string image_id,
                                 bool require_text) {
  text = strip_bom(text);
  ImageAnnotation ann;
  ann.image_id = std::move(image_id);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    std::vector<std::string_view> fields;
    std::optional<std::string_view> rest;
    std::size_t start = 0;
    while (fields.size() < 8) {
      const auto comma = line.find(',', start);
      if (comma == std::string_view::npos) break;
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() == 8) {
      rest = line.substr(start);
    } else if (fields.size() == 7) {
      fields.push_back(line.substr(start));
    }
    if (fields.size() < 8 || (require_text && !rest)) {
      throw ParseError(line_no, "expected 8 coordinates" +
                                    std::string(require_text ? " and a transcription" : ""));
    }
    QuadBox box;
    for (std::size_t v = 0; v < 4; ++v) {
      box.vertices[v] = {parse_coordinate(fields[2 * v], line_no),
                         parse_coordinate(fields[2 * v + 1], line_no)};
    }
    if (rest) {
      box.transcription = std::string(*rest);
      box.dont_care = *rest == kDontCareText;
    }
    ann.boxes.push_back(std::move(box));
  }
  return ann;
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << body;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

ImageAnnotation parse_gt_file(std::string_view text, std::string image_id) {
  return parse_annotation(text, std::move(image_id), true);
}

ImageAnnotation parse_result_file(std::string_view text, std::string image_id) {
  return parse_annotation(text, std::move(image_id), false);
}

std::string format_results(const ImageAnnotation& ann, bool with_text) {
  std::string out;
  for (const QuadBox& box : ann.boxes) {
    for (std::size_t v = 0; v < 4; ++v) {
      if (v) out += ',';
      out += format_real(box.vertices[v].x);
      out += ',';
      out += format_real(box.vertices[v].y);
    }
    if (with_text) {
      out += ',';
      if (box.transcription) {
        out += *box.transcription;
      } else if (box.dont_care) {
        out += kDontCareText;
      }
    }
    out += '\n';
  }
  return out;
}

std::string result_file_name(std::string_view image_id) {
  return "res_" + std::string(image_id) + ".txt";
}

std::string gt_file_name(std::string_view image_id) {
  return "gt_" + std::string(image_id) + ".txt";
}

void write_results(const std::filesystem::path& dir, const ImageAnnotation& ann,
                   bool with_text) {
  write_file(dir / result_file_name(ann.image_id), format_results(ann, with_text));
}

void write_gt(const std::filesystem::path& dir, const ImageAnnotation& ann) {
  write_file(dir / gt_file_name(ann.image_id), format_results(ann, true));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, ImageAnnotation> read_annotation_dir(
    const std::filesystem::path& dir, bool ground_truth) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("not a directory: " + dir.string());
  }
  const std::string prefix = ground_truth ? "gt_" : "res_";
  std::map<std::string, ImageAnnotation> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() <= prefix.size() + 4 || name.rfind(prefix, 0) != 0 ||
        name.substr(name.size() - 4) != ".txt")
      continue;
    std::string id = name.substr(prefix.size(), name.size() - prefix.size() - 4);
    const std::string text = read_text_file(entry.path());
    try {
      out.emplace(id, ground_truth ? parse_gt_file(text, id)
                                   : parse_result_file(text, id));
    } catch (const ParseError& e) {
      throw ParseError(e.line(), entry.path().string() + ": " + e.what());
    }
  }
  return out;
}

TrainingMask rasterize_mask(const ImageAnnotation& ann, std::size_t height,
                            std::size_t width) {
  if (height == 0 || width == 0) {
    throw InvalidArgument("rasterize_mask: size must be positive");
  }
  TrainingMask m{Tensor({height, width}), Tensor({height, width})};
  for (const QuadBox& box : ann.boxes) {
    const Envelope e = box.envelope();
    const long x0 = std::max(0L, static_cast<long>(std::ceil(e.min_x)));
    const long y0 = std::max(0L, static_cast<long>(std::ceil(e.min_y)));
    const long x1 = std::min(static_cast<long>(width) - 1,
                             static_cast<long>(std::floor(e.max_x)));
    const long y1 = std::min(static_cast<long>(height) - 1,
                             static_cast<long>(std::floor(e.max_y)));
    Tensor& target = box.dont_care ? m.ignore : m.mask;
    for (long y = y0; y <= y1; ++y) {
      for (long x = x0; x <= x1; ++x) {
        if (point_in_polygon({static_cast<double>(x), static_cast<double>(y)},
                             box.vertices)) {
          target.at(static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = 1.0;
        }
      }
    }
  }
  return m;
}

// ---------------------------------------------------------------- vocab

std::string to_string(VocabSetting setting) {
  switch (setting) {
    case VocabSetting::kStrong:
      return "strong";
    case VocabSetting::kWeak:
      return "weak";
    case VocabSetting::kGeneric:
      return "generic";
  }
  return "unknown";
}

VocabSetting vocab_setting_from_string(std::string_view name) {
  if (name == "strong") return VocabSetting::kStrong;
  if (name == "weak") return VocabSetting::kWeak;
  if (name == "generic") return VocabSetting::kGeneric;
  throw InvalidArgument("unknown vocabulary setting '" + std::string(name) +
                        "' (expected strong, weak or generic)");
}

const Lexicon& Vocabulary::for_image(const std::string& image_id) const {
  if (setting_ != VocabSetting::kStrong) return shared_;
  auto it = per_image_.find(image_id);
  if (it == per_image_.end()) {
    throw InvalidArgument("no strong lexicon loaded for image '" + image_id + "'");
  }
  return it->second;
}

Vocabulary load_vocab(VocabSetting setting,
                      const std::filesystem::path& vocab_dir,
                      std::span<const std::string> image_ids) {
  auto require = [](const std::filesystem::path& p) {
    if (!std::filesystem::is_regular_file(p)) {
      throw IoError("missing vocabulary file " + p.string());
    }
    return load_lexicon_file(p);
  };
  switch (setting) {
    case VocabSetting::kStrong: {
      std::map<std::string, Lexicon> per_image;
      for (const std::string& id : image_ids) {
        per_image.emplace(id, require(vocab_dir / "strong" / (id + ".txt")));
      }
      return Vocabulary(setting, Lexicon{}, std::move(per_image));
    }
    case VocabSetting::kWeak:
      return Vocabulary(setting, require(vocab_dir / "weak.txt"), {});
    case VocabSetting::kGeneric:
      return Vocabulary(setting, require(vocab_dir / "generic.txt"), {});
  }
  throw InvalidArgument("unknown vocabulary setting");
}

// ---------------------------------------------------------------- synthetic

const std::vector<std::string>& builtin_vocabulary() {
  static const std::vector<std::string> words = {
      "stop", "exit", "open", "sale", "bus",  "taxi", "cafe", "bank", "park",
      "hotel", "shop", "road", "way",  "inn",  "bar",  "pub",  "gym",  "spa",
      "tea",  "art",  "zoo",  "map",  "no",   "go",   "up",   "in",   "out",
      "wc",   "atm",  "24",   "7",    "100",  "50",   "car",  "sun",  "box",
      "king", "city", "mall", "food", "gate", "east", "west", "north", "hall",
      "bar5", "a1",   "k9",   "lift", "push", "pull", "free", "wifi", "live"};
  return words;
}

namespace {

int draw_noise(Rng& rng, int amplitude) {
  return amplitude > 0 ? rng.uniform_int(-amplitude, amplitude) : 0;
}

}  // namespace

SynthDataset synth_generate(const SynthConfig& cfg, std::size_t count) {
  if (!cfg.seed) throw InvalidArgument("synth: a seed is required");
  if (cfg.width < 8 || cfg.height < 8 || cfg.min_words < 0 ||
      cfg.max_words < cfg.min_words || cfg.min_scale < 1 ||
      cfg.max_scale < cfg.min_scale || cfg.noise < 0.0 || cfg.noise > 1.0) {
    throw InvalidArgument("synth: invalid configuration");
  }
  const auto& vocab =
      cfg.vocabulary.empty() ? builtin_vocabulary() : cfg.vocabulary;
  Rng rng = Rng::stream(*cfg.seed, "synth");
  const int amplitude = static_cast<int>(std::lround(cfg.noise * 255.0));
  SynthDataset ds;
  for (std::size_t n = 0; n < count; ++n) {
    char id[32];
    std::snprintf(id, sizeof id, "synth_%04zu", n);
    SynthSample sample;
    sample.image_id = id;
    sample.annotation.image_id = id;
    const int bg = rng.uniform_int(0, 80);
    const int ink = rng.uniform_int(170, 255);
    std::vector<int> level(static_cast<std::size_t>(cfg.width) * cfg.height, bg);

    const int words = rng.uniform_int(cfg.min_words, cfg.max_words);
    for (int w = 0; w < words; ++w) {
      const std::string& text =
          vocab[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(vocab.size()) - 1))];
      const int scale = rng.uniform_int(cfg.min_scale, cfg.max_scale);
      const font::Bitmap bm = font::render(text, scale);
      bool placed = false;
      for (int attempt = 0; attempt < cfg.attempts_per_word && !placed; ++attempt) {
        // quad spans [x0 - 1, x0 + width] so it must stay inside the image
        const int max_x = cfg.width - 1 - bm.width;
        const int max_y = cfg.height - 1 - bm.height;
        if (max_x < 1 || max_y < 1) break;
        const int x0 = rng.uniform_int(1, max_x);
        const int y0 = rng.uniform_int(1, max_y);
        const double qx0 = x0 - 1, qy0 = y0 - 1, qx1 = x0 + bm.width,
                     qy1 = y0 + bm.height;
        bool clear = true;
        for (const QuadBox& other : sample.annotation.boxes) {
          const Envelope e = other.envelope();
          if (!(qx0 > e.max_x + 2 || qx1 < e.min_x - 2 || qy0 > e.max_y + 2 ||
                qy1 < e.min_y - 2)) {
            clear = false;
            break;
          }
        }
        if (!clear) continue;
        for (int y = 0; y < bm.height; ++y) {
          for (int x = 0; x < bm.width; ++x) {
            if (bm.at(x, y)) {
              level[static_cast<std::size_t>(y0 + y) * cfg.width + x0 + x] = ink;
            }
          }
        }
        QuadBox box = QuadBox::axis_aligned(qx0, qy0, qx1, qy1);
        box.transcription = text;
        sample.annotation.boxes.push_back(std::move(box));
        placed = true;
      }
      if (!placed) ++ds.skipped_words;
    }

    sample.image = Tensor({1, static_cast<std::size_t>(cfg.height),
                           static_cast<std::size_t>(cfg.width)});
    for (std::size_t i = 0; i < level.size(); ++i) {
      const int v = std::clamp(level[i] + draw_noise(rng, amplitude), 0, 255);
      sample.image[i] = v / 255.0;
    }
    ds.samples.push_back(std::move(sample));
  }
  return ds;
}

std::vector<SynthWord> synth_word_images(std::span<const std::string> words,
                                         const SynthWordConfig& cfg) {
  if (!cfg.seed) throw InvalidArgument("synth: a seed is required");
  if (cfg.min_scale < 1 || cfg.max_scale < cfg.min_scale || cfg.max_jitter < 0) {
    throw InvalidArgument("synth: invalid word configuration");
  }
  Rng rng = Rng::stream(*cfg.seed, "synth-words");
  const int amplitude = static_cast<int>(std::lround(cfg.noise * 255.0));
  std::vector<SynthWord> out;
  for (const std::string& text : words) {
    const int scale = rng.uniform_int(cfg.min_scale, cfg.max_scale);
    const font::Bitmap bm = font::render(text, scale);
    const int left = scale + rng.uniform_int(0, cfg.max_jitter);
    const int right = scale + rng.uniform_int(0, cfg.max_jitter);
    const int top = scale;
    const int w = bm.width + left + right;
    const int h = bm.height + 2 * top;
    const int bg = rng.uniform_int(0, 80);
    const int ink = rng.uniform_int(170, 255);
    Tensor img({1, static_cast<std::size_t>(h), static_cast<std::size_t>(w)});
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int bx = x - left, by = y - top;
        const bool on = bx >= 0 && by >= 0 && bx < bm.width && by < bm.height &&
                        bm.at(bx, by);
        const int v = std::clamp((on ? ink : bg) + draw_noise(rng, amplitude), 0, 255);
        img.at(0, static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = v / 255.0;
      }
    }
    out.push_back({text, std::move(img)});
  }
  return out;
}

}  // namespace scenetext
