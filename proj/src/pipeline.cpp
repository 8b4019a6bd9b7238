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

#include "scenetext/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scenetext/errors.hpp"
#include "scenetext/image.hpp"

namespace scenetext::pipeline {

namespace fs = std::filesystem;

std::vector<ImageInput> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<ImageInput> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") {
      out.push_back({entry.path().stem().string(), entry.path()});
    }
  }
  std::sort(out.begin(), out.end(), [](const ImageInput& a, const ImageInput& b) {
    return a.image_id < b.image_id;
  });
  return out;
}

Tensor envelope_crop(const Tensor& image, const QuadBox& box) {
  const Envelope e = box.envelope();
  const long x0 = std::max(0L, static_cast<long>(std::ceil(e.min_x)));
  const long y0 = std::max(0L, static_cast<long>(std::ceil(e.min_y)));
  const long x1 = std::min(static_cast<long>(image.dim(2)),
                           static_cast<long>(std::floor(e.max_x)) + 1);
  const long y1 = std::min(static_cast<long>(image.dim(1)),
                           static_cast<long>(std::floor(e.max_y)) + 1);
  if (x1 <= x0 || y1 <= y0) return {};
  return crop(image, x0, y0, x1, y1);
}

std::vector<recognizer::RecognizerSample> word_samples(
    const Tensor& image, const ImageAnnotation& ann, const ctc::Alphabet& alphabet) {
  std::vector<recognizer::RecognizerSample> out;
  for (const QuadBox& box : ann.boxes) {
    if (box.dont_care || !box.transcription) continue;
    auto target = alphabet.encode(*box.transcription);
    const Tensor region = envelope_crop(image, box);
    if (!target || target->empty() || region.empty()) continue;
    out.push_back({recognizer::normalize_word_image(region), std::move(*target)});
  }
  return out;
}

std::vector<recognizer::Recognition> transcribe_boxes(const Tensor& image, std::vector<QuadBox>& boxes,
                      const recognizer::RecognizerModel& model,
                      const ctc::Alphabet& alphabet, const RecognizeConfig& cfg,
                      const Lexicon* lexicon) {
  recognizer::DecodeConfig decode = cfg.decode;
  if (decode.mode == recognizer::DecodeMode::kLexicon) {
    if (!lexicon || lexicon->empty()) {
      throw InvalidArgument("lexicon decoding needs a non-empty lexicon");
    }
    decode.lexicon = lexicon->words();
  }
  const recognizer::CorrectionConfig correction{lexicon, cfg.policy};
  std::vector<recognizer::Recognition> out;
  for (QuadBox& box : boxes) {
    recognizer::Recognition r;
    r.log_score = -std::numeric_limits<double>::infinity();
    const Tensor region = envelope_crop(image, box);
    if (!region.empty()) {
      try {
        r = recognizer::recognize_word(region, model, alphabet, decode,
                                       lexicon && !lexicon->empty() ? &correction : nullptr);
      } catch (const ctc::NoLexiconMatch&) {
        // no lexicon word fits this crop; leave it unread
      }
    }
    box.transcription = r.corrected_text;
    out.push_back(std::move(r));
  }
  return out;
}

ImageAnnotation e2e_image(const std::string& image_id, const Tensor& image,
                          const detector::DetectorModel& detector,
                          const recognizer::RecognizerModel& recognizer,
                          const ctc::Alphabet& alphabet, const E2EConfig& cfg,
                          const Lexicon* lexicon) {
  ImageAnnotation ann{image_id, detector::detect(image, detector, cfg.detect)};
  transcribe_boxes(image, ann.boxes, recognizer, alphabet, cfg.recognize, lexicon);
  return ann;
}

namespace {

const Lexicon* lexicon_for(const Vocabulary* vocab, const std::string& id) {
  return vocab ? &vocab->for_image(id) : nullptr;
}

template <typename Fn>
RunSummary for_each_image(std::span<const ImageInput> images, const fs::path& out_dir,
                          Fn fn) {
  fs::create_directories(out_dir);
  std::vector<ImageInput> sorted(images.begin(), images.end());
  std::sort(sorted.begin(), sorted.end(), [](const ImageInput& a, const ImageInput& b) {
    return a.image_id < b.image_id;
  });
  RunSummary summary;
  for (const ImageInput& in : sorted) {
    try {
      fn(in);
      summary.written.push_back(in.image_id);
    } catch (const std::exception& e) {
      summary.failures.emplace_back(in.image_id, e.what());
    }
  }
  return summary;
}

}  // namespace

RunSummary run_detect(std::span<const ImageInput> images,
                      const detector::DetectorModel& detector,
                      const detector::DetectConfig& cfg, const fs::path& out_dir) {
  return for_each_image(images, out_dir, [&](const ImageInput& in) {
    const Tensor image = read_image(in.path);
    const ImageAnnotation ann{in.image_id, detector::detect(image, detector, cfg)};
    write_results(out_dir, ann, false);
  });
}

RunSummary run_recognize(std::span<const ImageInput> images, const fs::path& boxes_dir,
                         const recognizer::RecognizerModel& recognizer,
                         const ctc::Alphabet& alphabet, const RecognizeConfig& cfg,
                         const Vocabulary* vocab, const fs::path& out_dir) {
  std::vector<std::pair<std::string, std::vector<recognizer::Recognition>>> recognitions;
  RunSummary summary = for_each_image(images, out_dir, [&](const ImageInput& in) {
    const Tensor image = read_image(in.path);
    ImageAnnotation ann = parse_result_file(
        read_text_file(boxes_dir / result_file_name(in.image_id)), in.image_id);
    auto words = transcribe_boxes(image, ann.boxes, recognizer, alphabet, cfg,
                                  lexicon_for(vocab, in.image_id));
    write_results(out_dir, ann, true);
    recognitions.emplace_back(in.image_id, std::move(words));
  });
  summary.recognitions = std::move(recognitions);
  return summary;
}

RunSummary run_e2e(std::span<const ImageInput> images,
                   const detector::DetectorModel& detector,
                   const recognizer::RecognizerModel& recognizer,
                   const ctc::Alphabet& alphabet, const E2EConfig& cfg,
                   const Vocabulary* vocab, const fs::path& out_dir) {
  return for_each_image(images, out_dir, [&](const ImageInput& in) {
    const Tensor image = read_image(in.path);
    write_results(out_dir,
                  e2e_image(in.image_id, image, detector, recognizer, alphabet, cfg,
                            lexicon_for(vocab, in.image_id)),
                  true);
  });
}

}  // namespace scenetext::pipeline
