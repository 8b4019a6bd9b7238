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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scenetext/ctc.hpp"
#include "scenetext/lexicon.hpp"
#include "scenetext/nn/layers.hpp"
#include "scenetext/nn/lstm.hpp"
#include "scenetext/nn/optim.hpp"
#include "scenetext/nn/serialize.hpp"
#include "scenetext/rng.hpp"

namespace scenetext::recognizer {

inline constexpr std::size_t kWordHeight = 32;
inline constexpr std::size_t kMinWordWidth = 4;
inline constexpr std::size_t kFrameStride = 4;

// Grayscale word crop [1, 32, W] with W >= 4 and values in [0, 1].
struct WordImage {
  Tensor pixels;
  std::size_t width() const { return pixels.dim(2); }
};

// Bilinear rescale to height 32 preserving aspect ratio; narrow results are
// edge-padded to width 4. Throws InvalidArgument for an empty crop.
WordImage normalize_word_image(const Tensor& crop);

// conv3x3(16)+ReLU+pool2x2, conv3x3(16)+ReLU+pool2x2, conv3x3(32)+ReLU+
// pool(2x1), then a full-height 4x1 conv yielding one frame per 4 input
// columns. A bidirectional LSTM runs over the frames and a linear layer
// projects both directions to per-frame class logits.
class RecognizerModel {
 public:
  struct Widths {
    std::size_t conv1 = 16;
    std::size_t conv2 = 16;
    std::size_t conv3 = 32;
    std::size_t frame = 64;
    std::size_t hidden = 64;
  };

  static RecognizerModel init(Rng& rng, std::size_t num_classes,
                              const Widths& widths);
  static RecognizerModel init(Rng& rng, std::size_t num_classes) {
    return init(rng, num_classes, Widths{});
  }
  RecognizerModel zeros_like() const;

  nn::ModelFile to_file() const;
  static RecognizerModel from_file(const nn::ModelFile& file);

  std::vector<Tensor*> tensors();
  std::vector<const Tensor*> tensors() const;

  std::size_t num_classes() const { return projection.out_features(); }
  static std::size_t frame_count(std::size_t width) {
    return (width + kFrameStride - 1) / kFrameStride;
  }

  struct Cache {
    std::array<nn::Conv2d::Cache, 3> conv;
    std::array<nn::Relu::Cache, 3> relu;
    std::array<nn::MaxPool2d::Cache, 3> pool;
    nn::Conv2d::Cache collapse;
    nn::LstmSequenceCache forward_seq, backward_seq;
    nn::Linear::Cache projection;
    std::size_t padded_width = 0;
  };

  // [T, D] frame features.
  Tensor frames(const WordImage& image, Cache* cache = nullptr) const;
  // [T, K] per-frame class logits.
  Tensor logits(const WordImage& image, Cache* cache = nullptr) const;
  void backward(const Cache& cache, const Tensor& grad_logits,
                RecognizerModel& grads) const;

  std::array<nn::Conv2d, 3> convs;
  nn::Conv2d collapse;
  nn::LstmCell forward_lstm;
  nn::LstmCell backward_lstm;
  nn::Linear projection;
};

Tensor extract_frames(const WordImage& image, const RecognizerModel& model);
ctc::FrameProbs frame_probs(const WordImage& image,
                            const RecognizerModel& model);

enum class DecodeMode { kGreedy, kBeam, kLexicon };

struct DecodeConfig {
  DecodeMode mode = DecodeMode::kGreedy;
  int beam_width = ctc::kDefaultBeamWidth;
  std::vector<std::string> lexicon;  // required for kLexicon
};

struct CorrectionConfig {
  const Lexicon* lexicon = nullptr;
  CorrectionPolicy policy;
};

struct Recognition {
  std::string raw_text;
  std::string corrected_text;
  double log_score = 0.0;
};

Recognition recognize_word(const Tensor& crop, const RecognizerModel& model,
                           const ctc::Alphabet& alphabet,
                           const DecodeConfig& decode,
                           const CorrectionConfig* correction = nullptr);

struct RecognizerSample {
  WordImage image;
  ctc::LabelSeq target;
};

struct RecognizerTrainConfig {
  int epochs = 2000;
  double lr = 1e-3;
  nn::OptimizerKind optimizer = nn::OptimizerKind::kAdam;
  double clip_norm = 5.0;
  std::uint64_t seed = 0;  // shuffling stream
  // Check training exact-match every `eval_every` epochs and stop once it
  // reaches 1.0; 0 disables the check.
  int eval_every = 10;
};

// Mean CTC loss; throws InvalidArgument naming the first infeasible sample.
double recognizer_loss(const RecognizerModel& model,
                       std::span<const RecognizerSample> samples);

// Fraction of samples whose greedy decoding equals the target exactly.
double exact_match_rate(const RecognizerModel& model,
                        std::span<const RecognizerSample> samples);

RecognizerModel train_recognizer(std::span<const RecognizerSample> samples,
                                 const RecognizerTrainConfig& cfg,
                                 RecognizerModel model,
                                 nn::TrainingLog* log = nullptr);

}  // namespace scenetext::recognizer
