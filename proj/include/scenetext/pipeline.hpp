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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scenetext/ctc.hpp"
#include "scenetext/dataset.hpp"
#include "scenetext/detector.hpp"
#include "scenetext/lexicon.hpp"
#include "scenetext/recognizer.hpp"

namespace scenetext::pipeline {

struct ImageInput {
  std::string image_id;
  std::filesystem::path path;
};

// Every .pgm/.ppm/.pnm file in `dir`, id = file stem, sorted by id.
std::vector<ImageInput> list_images(const std::filesystem::path& dir);

// Pixels whose centres lie inside the box's axis-aligned envelope. Returns
// a null tensor when no pixel centre is covered.
Tensor envelope_crop(const Tensor& image, const QuadBox& box);

// Word crops and label sequences for every transcribed, non-don't-care
// box whose text the alphabet can spell.
std::vector<recognizer::RecognizerSample> word_samples(
    const Tensor& image, const ImageAnnotation& ann,
    const ctc::Alphabet& alphabet);

struct RecognizeConfig {
  recognizer::DecodeConfig decode;
  CorrectionPolicy policy;
};

// Adds a transcription to every box and returns the recognitions in box
// order. `lexicon` (may be null) drives correction, and supplies the word
// list when decoding in lexicon mode.
std::vector<recognizer::Recognition> transcribe_boxes(const Tensor& image, std::vector<QuadBox>& boxes,
                      const recognizer::RecognizerModel& model,
                      const ctc::Alphabet& alphabet,
                      const RecognizeConfig& cfg, const Lexicon* lexicon);

struct E2EConfig {
  detector::DetectConfig detect;
  RecognizeConfig recognize;
};

ImageAnnotation e2e_image(const std::string& image_id, const Tensor& image,
                          const detector::DetectorModel& detector,
                          const recognizer::RecognizerModel& recognizer,
                          const ctc::Alphabet& alphabet, const E2EConfig& cfg,
                          const Lexicon* lexicon);

struct RunSummary {
  std::vector<std::string> written;  // image ids with a result file
  std::vector<std::pair<std::string, std::string>> failures;  // id, reason
  // Per image id, the recognitions behind its result file (recognition runs).
  std::vector<std::pair<std::string, std::vector<recognizer::Recognition>>> recognitions;
  bool ok() const { return failures.empty(); }
};

// Detection only; writes localization result files.
RunSummary run_detect(std::span<const ImageInput> images,
                      const detector::DetectorModel& detector,
                      const detector::DetectConfig& cfg,
                      const std::filesystem::path& out_dir);

// Reads res_<id>.txt boxes from `boxes_dir` and writes them back with
// transcriptions into `out_dir`.
RunSummary run_recognize(std::span<const ImageInput> images,
                         const std::filesystem::path& boxes_dir,
                         const recognizer::RecognizerModel& recognizer,
                         const ctc::Alphabet& alphabet,
                         const RecognizeConfig& cfg, const Vocabulary* vocab,
                         const std::filesystem::path& out_dir);

// Detect, crop, recognize and correct; one end-to-end result file per
// image. An unreadable image is recorded and the run continues.
RunSummary run_e2e(std::span<const ImageInput> images,
                   const detector::DetectorModel& detector,
                   const recognizer::RecognizerModel& recognizer,
                   const ctc::Alphabet& alphabet, const E2EConfig& cfg,
                   const Vocabulary* vocab,
                   const std::filesystem::path& out_dir);

}  // namespace scenetext::pipeline
