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

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scenetext/tensor.hpp"

namespace scenetext::ctc {

inline constexpr int kBlank = 0;
inline constexpr int kDefaultBeamWidth = 16;

// Non-blank class indices; class i + 1 is character i of the alphabet.
using LabelSeq = std::vector<int>;

// Ordered character set; class 0 is the blank.
class Alphabet {
 public:
  explicit Alphabet(std::string chars);

  // a-z then 0-9.
  static Alphabet alphanumeric();

  std::size_t num_classes() const { return chars_.size() + 1; }
  const std::string& chars() const { return chars_; }

  std::optional<int> index_of(char c) const;
  // Lowercases ASCII letters first; nullopt if any character is missing.
  std::optional<LabelSeq> encode(std::string_view word) const;
  std::string decode(std::span<const int> labels) const;

 private:
  std::string chars_;
  int lookup_[256];
};

// Validated T x K matrix of per-frame class probabilities.
class FrameProbs {
 public:
  explicit FrameProbs(Tensor probs);

  std::size_t frames() const { return probs_.dim(0); }
  std::size_t classes() const { return probs_.dim(1); }
  double operator()(std::size_t t, std::size_t k) const {
    return probs_.at(t, k);
  }
  const Tensor& tensor() const { return probs_; }
  Tensor log_probs() const;

 private:
  Tensor probs_;
};

// "T K" header then T rows of K reals.
FrameProbs read_frame_probs(std::istream& in);
void write_frame_probs(std::ostream& out, const FrameProbs& probs);

struct DecodeResult {
  LabelSeq labels;
  double log_score = 0.0;
};

// Merge consecutive repeats, then drop blanks.
LabelSeq collapse(std::span<const int> path);

// Minimum number of frames a label sequence needs: one per label plus a
// separating blank between equal neighbours.
std::size_t min_frames(std::span<const int> labels);

enum class LossStatus { kOk, kInfeasible };

struct LossResult {
  LossStatus status = LossStatus::kOk;
  double loss = 0.0;  // +inf when infeasible
  // Log-space forward/backward tables over the blank-augmented target,
  // shape [T, 2L + 1]. beta excludes the emission at its own frame, so
  // alpha + beta is the log mass of paths through (t, s).
  Tensor log_alpha;
  Tensor log_beta;
  double log_likelihood = 0.0;

  bool feasible() const { return status == LossStatus::kOk; }
};

LossResult ctc_loss(const FrameProbs& probs, std::span<const int> target);
// Same recursion over log-probabilities [T, K] (e.g. a log_softmax output).
LossResult ctc_loss_from_log_probs(const Tensor& log_probs,
                                   std::span<const int> target);

// dLoss/dprobs; nullopt when the target is infeasible.
std::optional<Tensor> ctc_gradient(const FrameProbs& probs,
                                   std::span<const int> target);

// dLoss/dlogits for probs = softmax(logits): probs - state occupancy.
// `log_probs` is log_softmax(logits); nullopt when infeasible.
std::optional<Tensor> ctc_logit_gradient(const Tensor& log_probs,
                                         std::span<const int> target,
                                         double* loss = nullptr);

DecodeResult greedy_decode(const FrameProbs& probs);

// Prefix beam search keeping blank- and non-blank-ending masses per
// collapsed prefix. Results sorted by descending total log-probability;
// equal scores are ordered by label sequence.
std::vector<DecodeResult> beam_decode(const FrameProbs& probs, int beam_width);

class NoLexiconMatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LexiconDecodeResult {
  std::size_t index;  // position of the chosen word in the lexicon
  DecodeResult result;
};

// Scores each word by its exact CTC sequence probability. Words outside the
// alphabet or too long for T frames are skipped; ties keep lexicon order.
LexiconDecodeResult lexicon_decode(const FrameProbs& probs,
                                   std::span<const std::string> lexicon,
                                   const Alphabet& alphabet);

}  // namespace scenetext::ctc
