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

#include "scenetext/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "scenetext/errors.hpp"
#include "scenetext/image.hpp"

namespace scenetext::detector {
namespace {

constexpr const char* kEncoderNames[3] = {"encoder1", "encoder2", "encoder3"};
constexpr const char* kDecoderNames[3] = {"decoder3", "decoder2", "decoder1"};

// BCE of sigmoid(logit) against a 0/1 target, written to stay finite for
// large |logit|.
double bce_with_logit(double logit, double target) {
  return std::max(logit, 0.0) - logit * target +
         std::log1p(std::exp(-std::abs(logit)));
}

}  // namespace

DetectorModel DetectorModel::init(Rng& rng, const Widths& widths) {
  DetectorModel m;
  std::size_t in = 1;
  for (std::size_t i = 0; i < 3; ++i) {
    m.encoder[i] = nn::Conv2d::init(in, widths.encoder[i], 3, 3, 1, 1, 1, rng);
    in = widths.encoder[i];
  }
  // decoder[0] works at 1/4 scale on up(bottleneck) + encoder[2], etc.
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t skip = widths.encoder[2 - i];
    if (in != skip) {
      throw InvalidArgument(
          "detector: decoder input width must equal the skip encoder width");
    }
    m.decoder[i] = nn::Conv2d::init(in, widths.decoder[i], 3, 3, 1, 1, 1, rng);
    in = widths.decoder[i];
  }
  m.head = nn::Conv2d::init(in, 1, 1, 1, 1, 0, 0, rng);
  return m;
}

DetectorModel DetectorModel::zeros_like() const {
  DetectorModel z = *this;
  for (Tensor* t : z.tensors()) *t = Tensor::zeros_like(*t);
  return z;
}

std::vector<Tensor*> DetectorModel::tensors() {
  std::vector<Tensor*> out;
  for (auto& c : encoder) out.insert(out.end(), {&c.weight, &c.bias});
  for (auto& c : decoder) out.insert(out.end(), {&c.weight, &c.bias});
  out.insert(out.end(), {&head.weight, &head.bias});
  return out;
}

std::vector<const Tensor*> DetectorModel::tensors() const {
  std::vector<const Tensor*> out;
  for (const auto& c : encoder) out.insert(out.end(), {&c.weight, &c.bias});
  for (const auto& c : decoder) out.insert(out.end(), {&c.weight, &c.bias});
  out.insert(out.end(), {&head.weight, &head.bias});
  return out;
}

nn::ModelFile DetectorModel::to_file() const {
  nn::ModelFile f;
  f.model_kind = "detector";
  for (const auto& c : encoder) f.layers.push_back(c.to_params());
  for (const auto& c : decoder) f.layers.push_back(c.to_params());
  f.layers.push_back(head.to_params());
  return f;
}

DetectorModel DetectorModel::from_file(const nn::ModelFile& file) {
  if (file.model_kind != "detector" || file.layers.size() != 7) {
    throw InvalidArgument("model file does not hold a detector");
  }
  DetectorModel m;
  for (std::size_t i = 0; i < 3; ++i) {
    m.encoder[i] = nn::Conv2d::from_params(file.layers[i]);
    m.decoder[i] = nn::Conv2d::from_params(file.layers[3 + i]);
  }
  m.head = nn::Conv2d::from_params(file.layers[6]);
  std::size_t in = 1;
  for (const auto& c : m.encoder) {
    if (c.in_channels() != in) throw InvalidArgument("detector: channel mismatch");
    in = c.out_channels();
  }
  for (const auto& c : m.decoder) {
    if (c.in_channels() != in) throw InvalidArgument("detector: channel mismatch");
    in = c.out_channels();
  }
  if (m.head.in_channels() != in || m.head.out_channels() != 1) {
    throw InvalidArgument("detector: head must map to one channel");
  }
  return m;
}

Tensor DetectorModel::forward_logits(const Tensor& image, Cache* cache) const {
  if (image.rank() != 3 || image.dim(0) != 1 || image.dim(1) % kDownsample ||
      image.dim(2) % kDownsample) {
    throw InvalidArgument("detector: expected [1,H,W] with H, W multiples of " +
                          std::to_string(kDownsample) + ", got " +
                          shape_string(image.shape()));
  }
  Cache local;
  Cache& c = cache ? *cache : local;
  const nn::Relu relu;
  const nn::MaxPool2d pool{2, 2};
  const nn::Upsample2x up;

  std::array<Tensor, 3> skips;
  Tensor x = image;
  for (std::size_t i = 0; i < 3; ++i) {
    x = relu.forward(encoder[i].forward(x, c.enc_conv[i]), c.enc_relu[i]);
    nn::check_finite(x, kEncoderNames[i]);
    skips[i] = x;
    x = pool.forward(x, c.pool[i]);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    Tensor u = up.forward(x);
    axpy(u, skips[2 - i]);
    x = relu.forward(decoder[i].forward(u, c.dec_conv[i]), c.dec_relu[i]);
    nn::check_finite(x, kDecoderNames[i]);
  }
  Tensor logits = head.forward(x, c.head);
  nn::check_finite(logits, "head");
  return logits;
}

void DetectorModel::backward(const Cache& c, const Tensor& grad_logits,
                             DetectorModel& grads) const {
  const nn::Relu relu;
  const nn::MaxPool2d pool{2, 2};
  const nn::Upsample2x up;
  Tensor g = head.backward(c.head, grad_logits, grads.head);
  std::array<Tensor, 3> skip_grads;
  for (std::size_t i = 3; i-- > 0;) {
    g = relu.backward(c.dec_relu[i], g);
    g = decoder[i].backward(c.dec_conv[i], g, grads.decoder[i]);
    skip_grads[2 - i] = g;  // the sum feeds both the skip and the upsample
    g = up.backward(g);
  }
  for (std::size_t i = 3; i-- > 0;) {
    g = pool.backward(c.pool[i], g);
    axpy(g, skip_grads[i]);
    g = relu.backward(c.enc_relu[i], g);
    g = encoder[i].backward(c.enc_conv[i], g, grads.encoder[i]);
  }
}

ProbMap fcn_forward(const Tensor& image, const DetectorModel& model) {
  if (image.rank() != 3 || image.dim(0) != 1) {
    throw InvalidArgument("fcn_forward: expected [1,H,W] image, got " +
                          shape_string(image.shape()));
  }
  const std::size_t H = image.dim(1), W = image.dim(2);
  const std::size_t f = DetectorModel::kDownsample;
  const std::size_t ph = (H + f - 1) / f * f, pw = (W + f - 1) / f * f;
  const Tensor input = (ph == H && pw == W) ? image : pad_edge(image, ph, pw);
  const Tensor logits = model.forward_logits(input);
  ProbMap map{Tensor({H, W})};
  for (std::size_t y = 0; y < H; ++y) {
    for (std::size_t x = 0; x < W; ++x) {
      map.grid.at(y, x) = nn::sigmoid(logits.at(0, y, x));
    }
  }
  return map;
}

DetectorSample make_detector_sample(const Tensor& image,
                                    const ImageAnnotation& ann) {
  return {image, rasterize_mask(ann, image.dim(1), image.dim(2))};
}

namespace {

// Loss summed over counted pixels; optionally fills dL/dlogits.
double sample_loss(const Tensor& logits, const DetectorSample& s,
                   Tensor* grad, double grad_scale) {
  double total = 0.0;
  const std::size_t n = s.target.mask.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (s.target.ignore[i] > 0.0) continue;
    const double z = logits[i];
    const double y = s.target.mask[i];
    total += bce_with_logit(z, y);
    if (grad) (*grad)[i] = (nn::sigmoid(z) - y) * grad_scale;
  }
  return total;
}

std::size_t counted_pixels(const DetectorSample& s) {
  std::size_t n = 0;
  for (double v : s.target.ignore.data()) n += v > 0.0 ? 0 : 1;
  return n;
}

void check_sample(const DetectorSample& s) {
  if (s.image.rank() != 3 || s.image.dim(0) != 1) {
    throw InvalidArgument("detector sample: image must be [1,H,W]");
  }
  const std::vector<std::size_t> hw{s.image.dim(1), s.image.dim(2)};
  s.target.mask.expect_shape(hw, "detector sample mask");
  s.target.ignore.expect_shape(hw, "detector sample ignore mask");
  if (s.image.dim(1) % DetectorModel::kDownsample ||
      s.image.dim(2) % DetectorModel::kDownsample) {
    throw InvalidArgument("detector training images must have sides that are "
                          "multiples of 8");
  }
}

}  // namespace

double detector_loss(const DetectorModel& model,
                     std::span<const DetectorSample> samples) {
  double total = 0.0;
  std::size_t count = 0;
  for (const DetectorSample& s : samples) {
    check_sample(s);
    total += sample_loss(model.forward_logits(s.image), s, nullptr, 0.0);
    count += counted_pixels(s);
  }
  return count ? total / static_cast<double>(count) : 0.0;
}

DetectorModel train_detector(std::span<const DetectorSample> samples,
                             const DetectorTrainConfig& cfg,
                             DetectorModel model, TrainingLog* log) {
  if (samples.empty()) throw InvalidArgument("train_detector: empty dataset");
  if (cfg.epochs < 0 || !(cfg.lr > 0.0)) {
    throw InvalidArgument("train_detector: epochs must be >= 0 and lr > 0");
  }
  for (const DetectorSample& s : samples) check_sample(s);
  if (log) {
    log->epoch_loss.clear();
    log->initial_loss = detector_loss(model, samples);
  }
  std::size_t total_pixels = 0;
  for (const DetectorSample& s : samples) total_pixels += counted_pixels(s);
  const double mean_pixels =
      static_cast<double>(total_pixels) / static_cast<double>(samples.size());

  Rng rng = Rng::stream(cfg.seed, "detector-shuffle");
  nn::Optimizer opt(cfg.optimizer, cfg.lr);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1],
                order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
    }
    double epoch_total = 0.0;
    for (std::size_t idx : order) {
      const DetectorSample& s = samples[idx];
      DetectorModel::Cache cache;
      const Tensor logits = model.forward_logits(s.image, &cache);
      Tensor grad = Tensor::zeros_like(logits);
      epoch_total += sample_loss(logits, s, &grad, 1.0 / mean_pixels);
      DetectorModel grads = model.zeros_like();
      model.backward(cache, grad, grads);
      opt.step(model, grads);
    }
    if (log) {
      log->epoch_loss.push_back(epoch_total / static_cast<double>(total_pixels));
      log->epochs_run = epoch + 1;
    }
  }
  if (log) log->final_loss = detector_loss(model, samples);
  return model;
}

double pixel_accuracy(const DetectorModel& model,
                      std::span<const DetectorSample> samples) {
  std::size_t correct = 0, total = 0;
  for (const DetectorSample& s : samples) {
    const ProbMap map = fcn_forward(s.image, model);
    for (std::size_t i = 0; i < map.grid.size(); ++i) {
      if (s.target.ignore[i] > 0.0) continue;
      const bool predicted = map.grid[i] >= 0.5;
      correct += predicted == (s.target.mask[i] > 0.5) ? 1 : 0;
      ++total;
    }
  }
  return total ? static_cast<double>(correct) / static_cast<double>(total) : 1.0;
}

BinaryMask binarize(const ProbMap& map, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidArgument("binarize: threshold must lie in [0,1]");
  }
  BinaryMask mask{Tensor::zeros_like(map.grid)};
  for (std::size_t i = 0; i < map.grid.size(); ++i) {
    mask.grid[i] = map.grid[i] >= threshold ? 1.0 : 0.0;
  }
  return mask;
}

std::vector<Region> partition(const BinaryMask& mask, int min_area,
                              Connectivity connectivity) {
  if (min_area < 1) throw InvalidArgument("partition: min_area must be >= 1");
  if (mask.grid.rank() != 2) {
    throw InvalidArgument("partition: expected [H,W] mask");
  }
  const int H = static_cast<int>(mask.grid.dim(0));
  const int W = static_cast<int>(mask.grid.dim(1));
  std::vector<int> label(static_cast<std::size_t>(H) * W, -1);
  std::vector<Region> regions;
  std::vector<PixelCoord> stack;
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * W + x;
      if (mask.grid[idx] < 0.5 || label[idx] >= 0) continue;
      Region r;
      r.min_x = r.max_x = x;
      r.min_y = r.max_y = y;
      const int id = static_cast<int>(regions.size());
      label[idx] = id;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const PixelCoord p = stack.back();
        stack.pop_back();
        r.pixels.push_back(p);
        r.min_x = std::min(r.min_x, p.x);
        r.max_x = std::max(r.max_x, p.x);
        r.min_y = std::min(r.min_y, p.y);
        r.max_y = std::max(r.max_y, p.y);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            if (connectivity == Connectivity::kFour && dx != 0 && dy != 0) continue;
            const int nx = p.x + dx, ny = p.y + dy;
            if (nx < 0 || ny < 0 || nx >= W || ny >= H) continue;
            const std::size_t n = static_cast<std::size_t>(ny) * W + nx;
            if (mask.grid[n] < 0.5 || label[n] >= 0) continue;
            label[n] = id;
            stack.push_back({nx, ny});
          }
        }
      }
      std::sort(r.pixels.begin(), r.pixels.end(),
                [](PixelCoord a, PixelCoord b) {
                  return a.y < b.y || (a.y == b.y && a.x < b.x);
                });
      regions.push_back(std::move(r));
    }
  }
  std::erase_if(regions, [min_area](const Region& r) {
    return r.area() < static_cast<std::size_t>(min_area);
  });
  return regions;
}

QuadBox region_box(const Region& region, BoxMode mode) {
  if (region.pixels.empty()) throw InvalidArgument("region_box: empty region");
  if (mode == BoxMode::kAxisAligned) {
    return QuadBox::axis_aligned(region.min_x - 0.5, region.min_y - 0.5,
                                 region.max_x + 0.5, region.max_y + 0.5);
  }
  // Row extremes are enough for the hull of the pixel squares.
  std::vector<Point> corners;
  std::size_t i = 0;
  while (i < region.pixels.size()) {
    std::size_t j = i;
    while (j + 1 < region.pixels.size() &&
           region.pixels[j + 1].y == region.pixels[i].y)
      ++j;
    for (const PixelCoord p : {region.pixels[i], region.pixels[j]}) {
      const double x = p.x, y = p.y;
      corners.insert(corners.end(), {{x - 0.5, y - 0.5}, {x + 0.5, y - 0.5},
                                     {x + 0.5, y + 0.5}, {x - 0.5, y + 0.5}});
    }
    i = j + 1;
  }
  QuadBox box;
  box.vertices = min_area_rect(std::move(corners));
  return box;
}

std::vector<QuadBox> regions_to_boxes(std::span<const Region> regions,
                                      BoxMode mode) {
  std::vector<QuadBox> boxes;
  boxes.reserve(regions.size());
  for (const Region& r : regions) boxes.push_back(region_box(r, mode));
  return boxes;
}

std::vector<QuadBox> detect(const Tensor& image, const DetectorModel& model,
                            const DetectConfig& cfg) {
  const ProbMap map = fcn_forward(image, model);
  const BinaryMask mask = binarize(map, cfg.threshold);
  const std::vector<Region> regions =
      partition(mask, cfg.min_area, cfg.connectivity);
  return regions_to_boxes(regions, cfg.mode);
}

}  // namespace scenetext::detector
