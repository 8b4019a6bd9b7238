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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenetext/geometry.hpp"
#include "scenetext/lexicon.hpp"
#include "scenetext/tensor.hpp"

namespace scenetext {

struct ImageAnnotation {
  std::string image_id;
  std::vector<QuadBox> boxes;
  friend bool operator==(const ImageAnnotation&, const ImageAnnotation&) = default;
};

inline constexpr std::string_view kDontCareText = "###";

// Lines "x1,y1,x2,y2,x3,y3,x4,y4,transcription". Only the first eight
// commas split fields, so transcriptions may contain commas. An optional
// UTF-8 BOM is skipped. Throws ParseError with the 1-based line number.
ImageAnnotation parse_gt_file(std::string_view text,
                              std::string image_id = {});
// Results may omit the transcription (localization submissions).
ImageAnnotation parse_result_file(std::string_view text,
                                  std::string image_id = {});

// Result file body: one line per box, transcription appended when
// `with_text` is set. Never writes a BOM.
std::string format_results(const ImageAnnotation& ann, bool with_text);
std::string result_file_name(std::string_view image_id);  // res_<id>.txt
std::string gt_file_name(std::string_view image_id);      // gt_<id>.txt
void write_results(const std::filesystem::path& dir,
                   const ImageAnnotation& ann, bool with_text);
void write_gt(const std::filesystem::path& dir, const ImageAnnotation& ann);

std::string read_text_file(const std::filesystem::path& path);

// Reads every gt_<id>.txt (or res_<id>.txt) in a directory, sorted by id.
std::map<std::string, ImageAnnotation> read_annotation_dir(
    const std::filesystem::path& dir, bool ground_truth);

struct TrainingMask {
  Tensor mask;    // [H, W], 1 where a pixel centre is inside a counted quad
  Tensor ignore;  // [H, W], 1 inside don't-care quads
};

// Pixel (x, y) has its centre at integer coordinates (x, y); quad
// boundaries count as inside.
TrainingMask rasterize_mask(const ImageAnnotation& ann, std::size_t height,
                            std::size_t width);

enum class VocabSetting { kStrong, kWeak, kGeneric };
std::string to_string(VocabSetting setting);
VocabSetting vocab_setting_from_string(std::string_view name);

// Lexicons for one end-to-end setting. Layout under `vocab_dir`:
// strong/<id>.txt per image, weak.txt, generic.txt.
class Vocabulary {
 public:
  Vocabulary(VocabSetting setting, Lexicon shared,
             std::map<std::string, Lexicon> per_image)
      : setting_(setting),
        shared_(std::move(shared)),
        per_image_(std::move(per_image)) {}

  VocabSetting setting() const { return setting_; }
  const Lexicon& for_image(const std::string& image_id) const;

 private:
  VocabSetting setting_;
  Lexicon shared_;
  std::map<std::string, Lexicon> per_image_;
};

Vocabulary load_vocab(VocabSetting setting,
                      const std::filesystem::path& vocab_dir,
                      std::span<const std::string> image_ids);

// ---------------------------------------------------------------- synthetic

struct SynthConfig {
  int width = 64;
  int height = 64;
  int min_words = 1;
  int max_words = 3;
  int min_scale = 1;
  int max_scale = 2;
  double noise = 0.05;  // uniform noise amplitude in intensity units
  std::optional<std::uint64_t> seed;
  std::vector<std::string> vocabulary;  // empty -> built-in word list
  int attempts_per_word = 20;
};

struct SynthSample {
  std::string image_id;
  Tensor image;  // [1, H, W]
  ImageAnnotation annotation;
};

struct SynthDataset {
  std::vector<SynthSample> samples;
  std::size_t skipped_words = 0;
};

// Renders words with the embedded bitmap font at random non-touching
// positions. Ground-truth quads enclose the ink with a one-pixel margin.
// Every value derives from integer RNG draws, so a seed reproduces the
// dataset exactly on any platform.
SynthDataset synth_generate(const SynthConfig& cfg, std::size_t count);

// Single-word crops for recognizer training: the word is rendered at a
// random scale with horizontal jitter and noise.
struct SynthWordConfig {
  int min_scale = 2;
  int max_scale = 3;
  int max_jitter = 3;
  double noise = 0.05;
  std::optional<std::uint64_t> seed;
};
struct SynthWord {
  std::string text;
  Tensor image;  // [1, h, w]
};
std::vector<SynthWord> synth_word_images(std::span<const std::string> words,
                                         const SynthWordConfig& cfg);

const std::vector<std::string>& builtin_vocabulary();

}  // namespace scenetext
