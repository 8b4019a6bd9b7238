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
#include <span>
#include <vector>

#include "scenetext/dataset.hpp"
#include "scenetext/geometry.hpp"
#include "scenetext/nn/layers.hpp"
#include "scenetext/nn/optim.hpp"
#include "scenetext/nn/serialize.hpp"
#include "scenetext/rng.hpp"
#include "scenetext/tensor.hpp"

namespace scenetext::detector {

// Per-pixel text probability, [H, W] with values in [0, 1].
struct ProbMap {
  Tensor grid;
};

// [H, W] with values exactly 0 or 1.
struct BinaryMask {
  Tensor grid;
};

struct PixelCoord {
  int x;
  int y;
  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

// Connected set of foreground pixels.
struct Region {
  std::vector<PixelCoord> pixels;  // raster order
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;

  std::size_t area() const { return pixels.size(); }
};

enum class BoxMode { kAxisAligned, kMinAreaRect };
enum class Connectivity { kFour = 4, kEight = 8 };

// Encoder-decoder FCN: three conv3x3+ReLU+maxpool2 stages (x8 down), three
// nearest-upsample x2 + conv3x3+ReLU stages with the matching encoder
// activation added before each decoder conv, and a 1x1 conv logit head.
class DetectorModel {
 public:
  static constexpr std::size_t kDownsample = 8;

  struct Widths {
    std::array<std::size_t, 3> encoder{8, 16, 32};
    std::array<std::size_t, 3> decoder{16, 8, 8};
  };

  static DetectorModel init(Rng& rng, const Widths& widths);
  static DetectorModel init(Rng& rng) { return init(rng, Widths{}); }
  // Same layout with every weight and bias zero.
  DetectorModel zeros_like() const;

  nn::ModelFile to_file() const;
  static DetectorModel from_file(const nn::ModelFile& file);

  std::vector<Tensor*> tensors();
  std::vector<const Tensor*> tensors() const;

  struct Cache {
    std::array<nn::Conv2d::Cache, 3> enc_conv, dec_conv;
    std::array<nn::Relu::Cache, 3> enc_relu, dec_relu;
    std::array<nn::MaxPool2d::Cache, 3> pool;
    nn::Conv2d::Cache head;
  };

  // Logits [1, H, W] for an input [1, H, W] whose sides are multiples of
  // kDownsample. Throws NumericError naming the first non-finite layer.
  Tensor forward_logits(const Tensor& image, Cache* cache = nullptr) const;
  // Accumulates parameter gradients into `grads` (same layout).
  void backward(const Cache& cache, const Tensor& grad_logits,
                DetectorModel& grads) const;

  std::array<nn::Conv2d, 3> encoder;
  std::array<nn::Conv2d, 3> decoder;
  nn::Conv2d head;
};

// Any image size: edge-replicates up to a multiple of the downsampling
// factor, then crops the map back to H x W.
ProbMap fcn_forward(const Tensor& image, const DetectorModel& model);

struct DetectorSample {
  Tensor image;         // [1, H, W]
  TrainingMask target;  // mask and ignore, [H, W]
};

DetectorSample make_detector_sample(const Tensor& image,
                                    const ImageAnnotation& ann);

struct DetectorTrainConfig {
  int epochs = 300;
  double lr = 3e-3;
  nn::OptimizerKind optimizer = nn::OptimizerKind::kAdam;
  std::uint64_t seed = 0;  // shuffling stream
};

using nn::TrainingLog;

// Mean binary cross-entropy over non-ignored pixels of all samples.
double detector_loss(const DetectorModel& model,
                     std::span<const DetectorSample> samples);

// Per-sample updates in a seeded shuffled order. Zero epochs returns the
// initial model unchanged.
DetectorModel train_detector(std::span<const DetectorSample> samples,
                             const DetectorTrainConfig& cfg,
                             DetectorModel model, TrainingLog* log = nullptr);

// mask = 1 iff probability >= threshold.
BinaryMask binarize(const ProbMap& map, double threshold);

// Connected components of the 1-pixels, dropping those smaller than
// `min_area`, ordered by the raster position of their first pixel.
std::vector<Region> partition(const BinaryMask& mask, int min_area,
                              Connectivity connectivity = Connectivity::kFour);

// Pixel (x, y) covers the unit square centred on (x, y), so boxes trace the
// outer pixel edges.
QuadBox region_box(const Region& region, BoxMode mode);
std::vector<QuadBox> regions_to_boxes(std::span<const Region> regions,
                                      BoxMode mode);

struct DetectConfig {
  double threshold = 0.5;
  int min_area = 8;
  BoxMode mode = BoxMode::kAxisAligned;
  Connectivity connectivity = Connectivity::kFour;
};

std::vector<QuadBox> detect(const Tensor& image, const DetectorModel& model,
                            const DetectConfig& cfg);

// Fraction of non-ignored pixels where (prob >= 0.5) equals the mask.
double pixel_accuracy(const DetectorModel& model,
                      std::span<const DetectorSample> samples);

}  // namespace scenetext::detector
