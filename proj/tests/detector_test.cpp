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

#include <cmath>

#include "oracles.hpp"
#include "scenetext/detector.hpp"
#include "scenetext/errors.hpp"
#include "scenetext/eval.hpp"
#include "scenetext/nn/gradcheck.hpp"

namespace scenetext::detector {
namespace {

BinaryMask mask_from(std::size_t h, std::size_t w, const std::vector<PixelCoord>& on) {
  BinaryMask m{Tensor({h, w})};
  for (const PixelCoord& p : on) m.grid.at(p.y, p.x) = 1.0;
  return m;
}

Region region_of(const std::vector<PixelCoord>& pixels) {
  BinaryMask m = mask_from(40, 40, pixels);
  auto regions = partition(m, 1, Connectivity::kEight);
  EXPECT_EQ(regions.size(), 1u);
  return regions.at(0);
}

TEST(Fcn, ShapeContract) {
  Rng rng(1);
  const DetectorModel model = DetectorModel::init(rng);
  EXPECT_EQ(fcn_forward(Tensor({1, 64, 64}, 0.5), model).grid.shape(),
            (std::vector<std::size_t>{64, 64}));
  // Sides that are not multiples of 8 are padded and cropped back.
  const ProbMap odd = fcn_forward(Tensor({1, 13, 21}, 0.5), model);
  EXPECT_EQ(odd.grid.shape(), (std::vector<std::size_t>{13, 21}));
  for (double v : odd.grid.data()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_THROW(model.forward_logits(Tensor({1, 12, 16})), InvalidArgument);
}

TEST(Fcn, ZeroModelGivesHalf) {
  Rng rng(2);
  const DetectorModel zero = DetectorModel::init(rng).zeros_like();
  const ProbMap map = fcn_forward(Tensor({1, 16, 16}, 0.7), zero);
  EXPECT_EQ(map.grid, Tensor({16, 16}, 0.5));
  DetectConfig cfg;
  cfg.threshold = 0.6;
  EXPECT_TRUE(detect(Tensor({1, 16, 16}, 0.7), zero, cfg).empty());
}

TEST(Fcn, ModelFileRoundTrip) {
  Rng rng(3);
  const DetectorModel model = DetectorModel::init(rng);
  const DetectorModel back = DetectorModel::from_file(model.to_file());
  const Tensor img({1, 16, 24}, 0.3);
  EXPECT_EQ(fcn_forward(img, back).grid, fcn_forward(img, model).grid);
  nn::ModelFile wrong = model.to_file();
  wrong.model_kind = "recognizer";
  EXPECT_THROW(DetectorModel::from_file(wrong), InvalidArgument);
}

TEST(Fcn, GradientsAwayFromKinks) {
  Rng rng(4);
  DetectorModel::Widths widths;
  widths.encoder = {2, 3, 4};
  widths.decoder = {3, 2, 2};
  DetectorModel model = DetectorModel::init(rng, widths);
  Tensor img({1, 8, 8});
  for (double& v : img.data()) v = rng.uniform();
  DetectorModel::Cache cache;
  const Tensor logits = model.forward_logits(img, &cache);
  Tensor w(logits.shape());
  for (double& v : w.data()) v = rng.uniform(-1.0, 1.0);
  DetectorModel grads = model.zeros_like();
  model.backward(cache, w, grads);

  std::vector<nn::CheckedTensor> checked;
  auto params = model.tensors();
  auto g = std::as_const(grads).tensors();
  for (std::size_t i = 0; i < params.size(); ++i) {
    checked.push_back({"p" + std::to_string(i), params[i], g[i]});
  }
  const auto base = testing::pattern_of(cache);
  auto loss = [&]() -> std::optional<double> {
    DetectorModel::Cache c;
    const Tensor y = model.forward_logits(img, &c);
    if (testing::pattern_of(c) != base) return std::nullopt;
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * w[i];
    return s;
  };
  const auto r = nn::finite_diff_check_piecewise(loss, checked, 1e-5);
  EXPECT_LT(r.max_rel_err, 1e-4) << r.worst;
  EXPECT_LE(r.skipped * 20, r.checked);
}

TEST(Binarize, ThresholdInclusive) {
  EXPECT_EQ(binarize({Tensor({3, 3})}, 0.5).grid, Tensor({3, 3}));
  ProbMap map{Tensor({1, 3}, {0.49, 0.5, 0.51})};
  EXPECT_EQ(binarize(map, 0.5).grid, Tensor({1, 3}, {0, 1, 1}));
}

TEST(Binarize, TwoBlobs) {
  ProbMap map{Tensor({6, 8}, 0.1)};
  for (std::size_t y = 1; y < 3; ++y) {
    for (std::size_t x = 1; x < 3; ++x) map.grid.at(y, x) = 0.9;
  }
  for (std::size_t y = 3; y < 5; ++y) {
    for (std::size_t x = 5; x < 7; ++x) map.grid.at(y, x) = 0.9;
  }
  const BinaryMask m = binarize(map, 0.5);
  for (std::size_t i = 0; i < m.grid.size(); ++i) {
    EXPECT_EQ(m.grid[i], map.grid[i] > 0.5 ? 1.0 : 0.0);
  }
  EXPECT_EQ(partition(m, 1).size(), 2u);
}

TEST(Partition, Fixtures) {
  EXPECT_TRUE(partition(BinaryMask{Tensor({4, 4})}, 1).empty());

  std::vector<PixelCoord> blocks;
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 3; ++x) {
      blocks.push_back({x, y});
      blocks.push_back({x + 5, y + 2});
    }
  }
  const auto regions = partition(mask_from(6, 9, blocks), 1);
  ASSERT_EQ(regions.size(), 2u);
  EXPECT_EQ(regions[0].area(), 9u);
  EXPECT_EQ(regions[1].area(), 9u);
  EXPECT_EQ(regions[1].min_x, 5);
  EXPECT_EQ(regions[1].max_y, 4);

  const BinaryMask diag = mask_from(2, 2, {{0, 0}, {1, 1}});
  EXPECT_EQ(partition(diag, 1, Connectivity::kFour).size(), 2u);
  EXPECT_EQ(partition(diag, 1, Connectivity::kEight).size(), 1u);
  EXPECT_TRUE(partition(diag, 2, Connectivity::kFour).empty());
}

TEST(RegionBox, PixelEdges) {
  const QuadBox single = region_box(region_of({{3, 4}}), BoxMode::kAxisAligned);
  EXPECT_EQ(single.vertices[0], (Point{2.5, 3.5}));
  EXPECT_EQ(single.vertices[2], (Point{3.5, 4.5}));
  EXPECT_DOUBLE_EQ(single.area(), 1.0);

  std::vector<PixelCoord> block;
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 5; ++x) block.push_back({10 + x, 7 + y});
  }
  const Envelope e = region_box(region_of(block), BoxMode::kAxisAligned).envelope();
  EXPECT_DOUBLE_EQ(e.max_x - e.min_x, 5.0);
  EXPECT_DOUBLE_EQ(e.max_y - e.min_y, 2.0);
  const QuadBox rot = region_box(region_of(block), BoxMode::kMinAreaRect);
  EXPECT_NEAR(rot.area(), 10.0, 1e-9);
}

TEST(RegionBox, RotatedBarTighter) {
  std::vector<PixelCoord> bar;
  for (int i = 0; i < 20; ++i) {
    bar.push_back({5 + i, 5 + i});
    bar.push_back({6 + i, 5 + i});
  }
  const Region r = region_of(bar);
  const double axis = region_box(r, BoxMode::kAxisAligned).area();
  const double rect = region_box(r, BoxMode::kMinAreaRect).area();
  EXPECT_LT(rect, axis);
  EXPECT_GE(rect, static_cast<double>(r.area()) - 1e-9);
}

TEST(Detect, ComposesStagedCalls) {
  Rng rng(5);
  const DetectorModel model = DetectorModel::init(rng);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor img({1, 16, 24});
    for (double& v : img.data()) v = rng.uniform();
    DetectConfig cfg;
    cfg.threshold = rng.uniform(0.3, 0.7);
    cfg.min_area = rng.uniform_int(1, 4);
    cfg.mode = trial % 2 ? BoxMode::kMinAreaRect : BoxMode::kAxisAligned;
    const auto regions =
        partition(binarize(fcn_forward(img, model), cfg.threshold), cfg.min_area, cfg.connectivity);
    EXPECT_EQ(detect(img, model, cfg), regions_to_boxes(regions, cfg.mode));
  }
}

TEST(DetectorTrain, ZeroEpochsUnchanged) {
  Rng rng(6);
  const DetectorModel model = DetectorModel::init(rng);
  const std::vector<DetectorSample> samples{
      make_detector_sample(Tensor({1, 8, 8}), ImageAnnotation{})};
  DetectorTrainConfig cfg;
  cfg.epochs = 0;
  const DetectorModel out = train_detector(samples, cfg, model);
  EXPECT_EQ(out.to_file(), model.to_file());
}

TEST(DetectorTrain, BackgroundOnlyImageGoesDark) {
  Rng rng(7);
  DetectorModel model = DetectorModel::init(rng);
  const std::vector<DetectorSample> samples{
      make_detector_sample(Tensor({1, 16, 16}, 0.2), ImageAnnotation{})};
  DetectorTrainConfig cfg;
  cfg.epochs = 60;
  nn::TrainingLog log;
  model = train_detector(samples, cfg, model, &log);
  double mean = 0.0;
  for (double v : fcn_forward(samples[0].image, model).grid.data()) mean += v;
  mean /= 256.0;
  EXPECT_LT(mean, 0.05);
  EXPECT_LT(log.final_loss, log.initial_loss);
  EXPECT_EQ(log.epochs_run, 60);
}

TEST(DetectorTrain, OverfitOneRectangle) {
  Tensor img({1, 32, 32}, 0.1);
  ImageAnnotation ann;
  ann.boxes.push_back(QuadBox::axis_aligned(7.5, 9.5, 22.5, 17.5));
  ann.boxes[0].transcription = "x";
  for (std::size_t y = 10; y <= 17; ++y) {
    for (std::size_t x = 8; x <= 22; ++x) img.at(0, y, x) = 0.9;
  }
  const std::vector<DetectorSample> samples{make_detector_sample(img, ann)};
  Rng rng(8);
  DetectorTrainConfig cfg;
  cfg.epochs = 150;
  const DetectorModel model = train_detector(samples, cfg, DetectorModel::init(rng));
  EXPECT_GT(pixel_accuracy(model, samples), 0.99);
  const auto boxes = detect(img, model, DetectConfig{});
  ASSERT_EQ(boxes.size(), 1u);
  EXPECT_GE(eval::polygon_iou(boxes[0], ann.boxes[0]), 0.7);
}

}  // namespace
}  // namespace scenetext::detector
