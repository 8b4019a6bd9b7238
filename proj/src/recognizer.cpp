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

#include "scenetext/recognizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scenetext/errors.hpp"
#include "scenetext/image.hpp"

namespace scenetext::recognizer {

WordImage normalize_word_image(const Tensor& crop) {
  if (crop.empty() || crop.rank() != 3 || crop.dim(0) != 1) {
    throw InvalidArgument("normalize_word_image: expected a non-empty [1,h,w] crop");
  }
  const std::size_t h = crop.dim(1), w = crop.dim(2);
  const auto new_w = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(static_cast<double>(w) * kWordHeight /
                                              static_cast<double>(h))));
  Tensor out = (h == kWordHeight && w == new_w)
                   ? crop
                   : resize_bilinear(crop, kWordHeight, new_w);
  if (new_w < kMinWordWidth) out = pad_edge(out, kWordHeight, kMinWordWidth);
  for (double& v : out.data()) v = std::clamp(v, 0.0, 1.0);
  return WordImage{std::move(out)};
}

RecognizerModel RecognizerModel::init(Rng& rng, std::size_t num_classes,
                                      const Widths& widths) {
  if (num_classes < 2) throw InvalidArgument("recognizer: need >= 2 classes");
  RecognizerModel m;
  m.convs[0] = nn::Conv2d::init(1, widths.conv1, 3, 3, 1, 1, 1, rng);
  m.convs[1] = nn::Conv2d::init(widths.conv1, widths.conv2, 3, 3, 1, 1, 1, rng);
  m.convs[2] = nn::Conv2d::init(widths.conv2, widths.conv3, 3, 3, 1, 1, 1, rng);
  m.collapse = nn::Conv2d::init(widths.conv3, widths.frame, kWordHeight / 8, 1,
                                1, 0, 0, rng);
  m.forward_lstm = nn::LstmCell::init(widths.frame, widths.hidden, rng);
  m.backward_lstm = nn::LstmCell::init(widths.frame, widths.hidden, rng);
  m.projection = nn::Linear::init(2 * widths.hidden, num_classes, rng);
  return m;
}

RecognizerModel RecognizerModel::zeros_like() const {
  RecognizerModel z = *this;
  for (Tensor* t : z.tensors()) *t = Tensor::zeros_like(*t);
  return z;
}

std::vector<Tensor*> RecognizerModel::tensors() {
  std::vector<Tensor*> out;
  for (auto& c : convs) out.insert(out.end(), {&c.weight, &c.bias});
  out.insert(out.end(), {&collapse.weight, &collapse.bias});
  for (Tensor* t : forward_lstm.tensors()) out.push_back(t);
  for (Tensor* t : backward_lstm.tensors()) out.push_back(t);
  out.insert(out.end(), {&projection.weight, &projection.bias});
  return out;
}

std::vector<const Tensor*> RecognizerModel::tensors() const {
  auto mut = const_cast<RecognizerModel*>(this)->tensors();
  return {mut.begin(), mut.end()};
}

nn::ModelFile RecognizerModel::to_file() const {
  nn::ModelFile f;
  f.model_kind = "recognizer";
  f.attributes["word_height"] = static_cast<int>(kWordHeight);
  for (const auto& c : convs) f.layers.push_back(c.to_params());
  f.layers.push_back(collapse.to_params());
  f.layers.push_back(forward_lstm.to_params());
  f.layers.push_back(backward_lstm.to_params());
  f.layers.push_back(projection.to_params());
  return f;
}

RecognizerModel RecognizerModel::from_file(const nn::ModelFile& file) {
  if (file.model_kind != "recognizer" || file.layers.size() != 7) {
    throw InvalidArgument("model file does not hold a recognizer");
  }
  auto it = file.attributes.find("word_height");
  if (it == file.attributes.end() || it->second != static_cast<int>(kWordHeight)) {
    throw InvalidArgument("recognizer: unsupported word height");
  }
  RecognizerModel m;
  for (std::size_t i = 0; i < 3; ++i) m.convs[i] = nn::Conv2d::from_params(file.layers[i]);
  m.collapse = nn::Conv2d::from_params(file.layers[3]);
  m.forward_lstm = nn::LstmCell::from_params(file.layers[4]);
  m.backward_lstm = nn::LstmCell::from_params(file.layers[5]);
  m.projection = nn::Linear::from_params(file.layers[6]);
  const bool chained =
      m.convs[0].in_channels() == 1 &&
      m.convs[1].in_channels() == m.convs[0].out_channels() &&
      m.convs[2].in_channels() == m.convs[1].out_channels() &&
      m.collapse.in_channels() == m.convs[2].out_channels() &&
      m.collapse.kernel_h() == kWordHeight / 8 && m.collapse.kernel_w() == 1 &&
      m.forward_lstm.input_size() == m.collapse.out_channels() &&
      m.backward_lstm.input_size() == m.collapse.out_channels() &&
      m.backward_lstm.hidden_size() == m.forward_lstm.hidden_size() &&
      m.projection.in_features() == 2 * m.forward_lstm.hidden_size();
  if (!chained) throw InvalidArgument("recognizer: inconsistent layer shapes");
  return m;
}

Tensor RecognizerModel::frames(const WordImage& image, Cache* cache) const {
  const Tensor& px = image.pixels;
  if (px.rank() != 3 || px.dim(0) != 1 || px.dim(1) != kWordHeight) {
    throw InvalidArgument("recognizer: expected [1,32,W] word image, got " +
                          shape_string(px.shape()));
  }
  if (px.dim(2) < kMinWordWidth) {
    throw InvalidArgument("recognizer: word image width " +
                          std::to_string(px.dim(2)) + " is below " +
                          std::to_string(kMinWordWidth));
  }
  Cache local;
  Cache& c = cache ? *cache : local;
  const std::size_t T = frame_count(px.dim(2));
  c.padded_width = T * kFrameStride;
  Tensor x = c.padded_width == px.dim(2) ? px : pad_edge(px, kWordHeight, c.padded_width);
  const nn::Relu relu;
  const nn::MaxPool2d pools[3] = {{2, 2}, {2, 2}, {2, 1}};
  static constexpr const char* kNames[3] = {"conv1", "conv2", "conv3"};
  for (std::size_t i = 0; i < 3; ++i) {
    x = relu.forward(convs[i].forward(x, c.conv[i]), c.relu[i]);
    nn::check_finite(x, kNames[i]);
    x = pools[i].forward(x, c.pool[i]);
  }
  x = collapse.forward(x, c.collapse);  // [D, 1, T]
  nn::check_finite(x, "collapse");
  const std::size_t D = x.dim(0);
  Tensor f({T, D});
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t d = 0; d < D; ++d) f.at(t, d) = x.at(d, 0, t);
  }
  return f;
}

Tensor RecognizerModel::logits(const WordImage& image, Cache* cache) const {
  Cache local;
  Cache& c = cache ? *cache : local;
  const Tensor f = frames(image, &c);
  const Tensor hf = nn::lstm_sequence_forward(forward_lstm, f, false, &c.forward_seq);
  const Tensor hb = nn::lstm_sequence_forward(backward_lstm, f, true, &c.backward_seq);
  const std::size_t T = f.dim(0), H = forward_lstm.hidden_size();
  Tensor both({T, 2 * H});
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t j = 0; j < H; ++j) {
      both.at(t, j) = hf.at(t, j);
      both.at(t, H + j) = hb.at(t, j);
    }
  }
  nn::check_finite(both, "lstm");
  Tensor out = projection.forward(both, c.projection);
  nn::check_finite(out, "projection");
  return out;
}

void RecognizerModel::backward(const Cache& c, const Tensor& grad_logits,
                               RecognizerModel& grads) const {
  const Tensor g_both = projection.backward(c.projection, grad_logits, grads.projection);
  const std::size_t T = g_both.dim(0), H = forward_lstm.hidden_size();
  Tensor gf({T, H}), gb({T, H});
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t j = 0; j < H; ++j) {
      gf.at(t, j) = g_both.at(t, j);
      gb.at(t, j) = g_both.at(t, H + j);
    }
  }
  Tensor g_frames =
      nn::lstm_sequence_backward(forward_lstm, c.forward_seq, gf, grads.forward_lstm);
  axpy(g_frames, nn::lstm_sequence_backward(backward_lstm, c.backward_seq, gb,
                                            grads.backward_lstm));
  const std::size_t D = g_frames.dim(1);
  Tensor g({D, 1, T});
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t d = 0; d < D; ++d) g.at(d, 0, t) = g_frames.at(t, d);
  }
  g = collapse.backward(c.collapse, g, grads.collapse);
  const nn::Relu relu;
  const nn::MaxPool2d pools[3] = {{2, 2}, {2, 2}, {2, 1}};
  for (std::size_t i = 3; i-- > 0;) {
    g = pools[i].backward(c.pool[i], g);
    g = relu.backward(c.relu[i], g);
    g = convs[i].backward(c.conv[i], g, grads.convs[i]);
  }
}

Tensor extract_frames(const WordImage& image, const RecognizerModel& model) {
  return model.frames(image);
}

ctc::FrameProbs frame_probs(const WordImage& image, const RecognizerModel& model) {
  return ctc::FrameProbs(nn::softmax(model.logits(image)));
}

Recognition recognize_word(const Tensor& crop, const RecognizerModel& model,
                           const ctc::Alphabet& alphabet,
                           const DecodeConfig& decode,
                           const CorrectionConfig* correction) {
  if (alphabet.num_classes() != model.num_classes()) {
    throw InvalidArgument("recognize_word: alphabet does not match the model");
  }
  const WordImage word = normalize_word_image(crop);
  const ctc::FrameProbs probs = frame_probs(word, model);
  Recognition r;
  switch (decode.mode) {
    case DecodeMode::kGreedy: {
      const ctc::DecodeResult d = ctc::greedy_decode(probs);
      r.raw_text = alphabet.decode(d.labels);
      r.log_score = d.log_score;
      break;
    }
    case DecodeMode::kBeam: {
      const auto results = ctc::beam_decode(probs, decode.beam_width);
      r.raw_text = alphabet.decode(results.front().labels);
      r.log_score = results.front().log_score;
      break;
    }
    case DecodeMode::kLexicon: {
      if (decode.lexicon.empty()) {
        throw InvalidArgument("recognize_word: lexicon mode needs a lexicon");
      }
      const auto hit = ctc::lexicon_decode(probs, decode.lexicon, alphabet);
      r.raw_text = decode.lexicon[hit.index];
      r.log_score = hit.result.log_score;
      break;
    }
  }
  r.corrected_text = correction && correction->lexicon
                         ? correct(r.raw_text, *correction->lexicon, correction->policy)
                         : r.raw_text;
  return r;
}

namespace {

void check_feasible(const RecognizerSample& s, std::size_t index) {
  const std::size_t T = RecognizerModel::frame_count(s.image.width());
  if (ctc::min_frames(s.target) > T) {
    throw InvalidArgument("recognizer sample " + std::to_string(index) +
                          ": target needs " + std::to_string(ctc::min_frames(s.target)) +
                          " frames but the image yields " + std::to_string(T));
  }
}

}  // namespace

double recognizer_loss(const RecognizerModel& model,
                       std::span<const RecognizerSample> samples) {
  if (samples.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    check_feasible(samples[i], i);
    const Tensor lp = nn::log_softmax(model.logits(samples[i].image));
    total += ctc::ctc_loss_from_log_probs(lp, samples[i].target).loss;
  }
  return total / static_cast<double>(samples.size());
}

double exact_match_rate(const RecognizerModel& model,
                        std::span<const RecognizerSample> samples) {
  if (samples.empty()) return 1.0;
  std::size_t hits = 0;
  for (const RecognizerSample& s : samples) {
    const ctc::DecodeResult d = ctc::greedy_decode(frame_probs(s.image, model));
    hits += d.labels == s.target ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

RecognizerModel train_recognizer(std::span<const RecognizerSample> samples,
                                 const RecognizerTrainConfig& cfg,
                                 RecognizerModel model, nn::TrainingLog* log) {
  if (samples.empty()) throw InvalidArgument("train_recognizer: empty dataset");
  if (cfg.epochs < 0 || !(cfg.lr > 0.0)) {
    throw InvalidArgument("train_recognizer: epochs must be >= 0 and lr > 0");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) check_feasible(samples[i], i);
  if (log) {
    log->epoch_loss.clear();
    log->initial_loss = recognizer_loss(model, samples);
    log->epochs_run = 0;
  }
  Rng rng = Rng::stream(cfg.seed, "recognizer-shuffle");
  nn::Optimizer opt(cfg.optimizer, cfg.lr);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(
                                  rng.uniform_int(0, static_cast<int>(i) - 1))]);
    }
    double epoch_total = 0.0;
    for (std::size_t idx : order) {
      const RecognizerSample& s = samples[idx];
      RecognizerModel::Cache cache;
      const Tensor logits = model.logits(s.image, &cache);
      double loss = 0.0;
      auto grad = ctc::ctc_logit_gradient(nn::log_softmax(logits), s.target, &loss);
      if (!grad) continue;  // zero-probability target; nothing to follow
      epoch_total += loss;
      RecognizerModel grads = model.zeros_like();
      model.backward(cache, *grad, grads);
      if (cfg.clip_norm > 0.0) nn::clip_grad_norm(grads, cfg.clip_norm);
      opt.step(model, grads);
    }
    if (log) {
      log->epoch_loss.push_back(epoch_total / static_cast<double>(samples.size()));
      log->epochs_run = epoch + 1;
    }
    if (cfg.eval_every > 0 && (epoch + 1) % cfg.eval_every == 0 &&
        exact_match_rate(model, samples) == 1.0) {
      break;
    }
  }
  if (log) log->final_loss = recognizer_loss(model, samples);
  return model;
}

}  // namespace scenetext::recognizer
