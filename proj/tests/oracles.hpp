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

// Independent reference implementations used only by tests.

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "scenetext/ctc.hpp"
#include "scenetext/detector.hpp"
#include "scenetext/recognizer.hpp"
#include "scenetext/rng.hpp"
#include "scenetext/tensor.hpp"

namespace scenetext::testing {

// Random row-stochastic [T, K] matrix with entries bounded away from zero.
inline Tensor random_probs(Rng& rng, std::size_t T, std::size_t K) {
  Tensor p({T, K});
  for (std::size_t t = 0; t < T; ++t) {
    double sum = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      p.at(t, k) = 0.05 + rng.uniform();
      sum += p.at(t, k);
    }
    for (std::size_t k = 0; k < K; ++k) p.at(t, k) /= sum;
  }
  return p;
}

// Probability of every collapsed label sequence, by enumerating all K^T
// frame paths.
inline std::map<ctc::LabelSeq, double> path_sums(const Tensor& probs) {
  const std::size_t T = probs.dim(0), K = probs.dim(1);
  std::map<ctc::LabelSeq, double> out;
  std::vector<int> path(T, 0);
  while (true) {
    double p = 1.0;
    for (std::size_t t = 0; t < T; ++t) p *= probs.at(t, static_cast<std::size_t>(path[t]));
    ctc::LabelSeq labels;
    int prev = -1;
    for (int k : path) {
      if (k != prev && k != ctc::kBlank) labels.push_back(k);
      prev = k;
    }
    out[labels] += p;
    std::size_t i = 0;
    while (i < T && ++path[i] == static_cast<int>(K)) path[i++] = 0;
    if (i == T) break;
  }
  return out;
}

// All sequences of length 0..max_len over labels 1..K-1.
inline std::vector<ctc::LabelSeq> all_label_seqs(std::size_t K, std::size_t max_len) {
  std::vector<ctc::LabelSeq> out{{}};
  std::vector<ctc::LabelSeq> frontier{{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<ctc::LabelSeq> next;
    for (const auto& s : frontier) {
      for (std::size_t k = 1; k < K; ++k) {
        auto e = s;
        e.push_back(static_cast<int>(k));
        next.push_back(e);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

// Textbook Wagner-Fischer table over bytes.
inline std::size_t levenshtein_table(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      d[i][j] = std::min(std::min(d[i - 1][j] + 1, d[i][j - 1] + 1), sub);
    }
  }
  return d[a.size()][b.size()];
}

inline std::string random_word(Rng& rng, std::string_view letters, int min_len, int max_len) {
  const int n = rng.uniform_int(min_len, max_len);
  std::string w;
  for (int i = 0; i < n; ++i) {
    w.push_back(letters[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(letters.size()) - 1))]);
  }
  return w;
}

// Which side of every ReLU and which max-pool winner a forward pass used;
// two passes with equal patterns lie in the same linear region.
struct ActivationPattern {
  std::vector<bool> relu_on;
  std::vector<std::size_t> pool_winners;
  friend bool operator==(const ActivationPattern&, const ActivationPattern&) = default;
};

template <typename ReluCaches, typename PoolCaches>
ActivationPattern pattern_of(const ReluCaches& relus, const PoolCaches& pools) {
  ActivationPattern p;
  for (const auto& r : relus) {
    for (double v : r.input.data()) p.relu_on.push_back(v > 0.0);
  }
  for (const auto& pc : pools) {
    p.pool_winners.insert(p.pool_winners.end(), pc.argmax.begin(), pc.argmax.end());
  }
  return p;
}

inline ActivationPattern pattern_of(const recognizer::RecognizerModel::Cache& c) {
  return pattern_of(c.relu, c.pool);
}

inline ActivationPattern pattern_of(const detector::DetectorModel::Cache& c) {
  ActivationPattern p = pattern_of(c.enc_relu, c.pool);
  const ActivationPattern dec = pattern_of(c.dec_relu, std::vector<nn::MaxPool2d::Cache>{});
  p.relu_on.insert(p.relu_on.end(), dec.relu_on.begin(), dec.relu_on.end());
  return p;
}

}  // namespace scenetext::testing
