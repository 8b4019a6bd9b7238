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

#include "scenetext/ctc.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include "scenetext/errors.hpp"

namespace scenetext::ctc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

std::vector<int> augment(std::span<const int> target) {
  std::vector<int> ext(2 * target.size() + 1, kBlank);
  for (std::size_t i = 0; i < target.size(); ++i) ext[2 * i + 1] = target[i];
  return ext;
}

}  // namespace

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet(std::string chars) : chars_(std::move(chars)) {
  std::fill(std::begin(lookup_), std::end(lookup_), -1);
  for (std::size_t i = 0; i < chars_.size(); ++i) {
    auto& slot = lookup_[static_cast<unsigned char>(chars_[i])];
    if (slot != -1) {
      throw InvalidArgument(std::string("alphabet: duplicate character '") +
                            chars_[i] + "'");
    }
    slot = static_cast<int>(i) + 1;
  }
}

Alphabet Alphabet::alphanumeric() {
  return Alphabet("abcdefghijklmnopqrstuvwxyz0123456789");
}

std::optional<int> Alphabet::index_of(char c) const {
  const int idx = lookup_[static_cast<unsigned char>(c)];
  if (idx < 0) return std::nullopt;
  return idx;
}

std::optional<LabelSeq> Alphabet::encode(std::string_view word) const {
  LabelSeq labels;
  labels.reserve(word.size());
  for (char c : word) {
    const char folded = (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    auto idx = index_of(folded);
    if (!idx) return std::nullopt;
    labels.push_back(*idx);
  }
  return labels;
}

std::string Alphabet::decode(std::span<const int> labels) const {
  std::string out;
  out.reserve(labels.size());
  for (int l : labels) {
    if (l <= 0 || static_cast<std::size_t>(l) > chars_.size()) {
      throw InvalidArgument("alphabet: label " + std::to_string(l) +
                            " out of range");
    }
    out.push_back(chars_[static_cast<std::size_t>(l - 1)]);
  }
  return out;
}

// ---------------------------------------------------------------- FrameProbs

FrameProbs::FrameProbs(Tensor probs) : probs_(std::move(probs)) {
  if (probs_.rank() != 2 || probs_.dim(1) < 2) {
    throw InvalidArgument("frame probs must be [T, K] with K >= 2, got " +
                          shape_string(probs_.shape()));
  }
  for (std::size_t t = 0; t < frames(); ++t) {
    double sum = 0.0;
    for (std::size_t k = 0; k < classes(); ++k) {
      const double p = probs_.at(t, k);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("frame probs: entry outside [0,1] at frame " +
                              std::to_string(t));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw InvalidArgument("frame probs: row " + std::to_string(t) +
                            " does not sum to 1");
    }
  }
}

Tensor FrameProbs::log_probs() const {
  Tensor lp = probs_;
  for (double& v : lp.data()) v = safe_log(v);
  return lp;
}

FrameProbs read_frame_probs(std::istream& in) {
  std::size_t T = 0, K = 0;
  if (!(in >> T >> K) || T == 0 || K < 2) {
    throw ParseError(1, "expected header 'T K' with T >= 1, K >= 2");
  }
  std::vector<double> data(T * K);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!(in >> data[i])) {
      throw ParseError(2 + i / K, "expected " + std::to_string(K) + " reals");
    }
  }
  return FrameProbs(Tensor({T, K}, std::move(data)));
}

void write_frame_probs(std::ostream& out, const FrameProbs& probs) {
  const auto precision = out.precision(17);
  out << probs.frames() << ' ' << probs.classes() << '\n';
  for (std::size_t t = 0; t < probs.frames(); ++t) {
    for (std::size_t k = 0; k < probs.classes(); ++k) {
      out << (k ? " " : "") << probs(t, k);
    }
    out << '\n';
  }
  out.precision(precision);
}

// ---------------------------------------------------------------- loss

LabelSeq collapse(std::span<const int> path) {
  LabelSeq out;
  int prev = -1;
  for (int c : path) {
    if (c != prev && c != kBlank) out.push_back(c);
    prev = c;
  }
  return out;
}

std::size_t min_frames(std::span<const int> labels) {
  std::size_t n = labels.size();
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] == labels[i - 1]) ++n;
  }
  return n;
}

LossResult ctc_loss_from_log_probs(const Tensor& log_probs,
                                   std::span<const int> target) {
  if (log_probs.rank() != 2) {
    throw InvalidArgument("ctc: expected [T, K] log-probabilities");
  }
  const std::size_t T = log_probs.dim(0);
  const std::size_t K = log_probs.dim(1);
  for (int l : target) {
    if (l <= kBlank || static_cast<std::size_t>(l) >= K) {
      throw InvalidArgument("ctc: target label " + std::to_string(l) +
                            " outside 1.." + std::to_string(K - 1));
    }
  }
  LossResult r;
  if (min_frames(target) > T) {
    r.status = LossStatus::kInfeasible;
    r.loss = std::numeric_limits<double>::infinity();
    r.log_likelihood = kNegInf;
    return r;
  }
  const std::vector<int> ext = augment(target);
  const std::size_t S = ext.size();
  auto lp = [&](std::size_t t, std::size_t s) {
    return log_probs.at(t, static_cast<std::size_t>(ext[s]));
  };
  auto can_skip = [&](std::size_t s) {  // transition s-2 -> s allowed
    return s >= 2 && ext[s] != kBlank && ext[s] != ext[s - 2];
  };

  r.log_alpha = Tensor({T, S}, kNegInf);
  r.log_beta = Tensor({T, S}, kNegInf);
  Tensor& a = r.log_alpha;
  Tensor& b = r.log_beta;

  a.at(0, 0) = lp(0, 0);
  if (S > 1) a.at(0, 1) = lp(0, 1);
  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      double acc = a.at(t - 1, s);
      if (s >= 1) acc = log_add(acc, a.at(t - 1, s - 1));
      if (can_skip(s)) acc = log_add(acc, a.at(t - 1, s - 2));
      a.at(t, s) = acc == kNegInf ? kNegInf : acc + lp(t, s);
    }
  }

  b.at(T - 1, S - 1) = 0.0;
  if (S > 1) b.at(T - 1, S - 2) = 0.0;
  for (std::size_t t = T - 1; t-- > 0;) {
    for (std::size_t s = 0; s < S; ++s) {
      double acc = b.at(t + 1, s) + lp(t + 1, s);
      if (s + 1 < S) acc = log_add(acc, b.at(t + 1, s + 1) + lp(t + 1, s + 1));
      if (s + 2 < S && can_skip(s + 2)) {
        acc = log_add(acc, b.at(t + 1, s + 2) + lp(t + 1, s + 2));
      }
      b.at(t, s) = std::isnan(acc) ? kNegInf : acc;
    }
  }

  double total = a.at(T - 1, S - 1);
  if (S > 1) total = log_add(total, a.at(T - 1, S - 2));
  r.log_likelihood = total;
  r.loss = -total;
  return r;
}

LossResult ctc_loss(const FrameProbs& probs, std::span<const int> target) {
  return ctc_loss_from_log_probs(probs.log_probs(), target);
}

namespace {

// occupancy[t][k] = posterior probability that frame t emits class k.
Tensor occupancy(const LossResult& r, std::span<const int> target,
                 std::size_t K) {
  const std::vector<int> ext = augment(target);
  const std::size_t T = r.log_alpha.dim(0);
  Tensor occ({T, K});
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t s = 0; s < ext.size(); ++s) {
      const double v = r.log_alpha.at(t, s) + r.log_beta.at(t, s);
      if (v == kNegInf) continue;
      occ.at(t, static_cast<std::size_t>(ext[s])) +=
          std::exp(v - r.log_likelihood);
    }
  }
  return occ;
}

}  // namespace

std::optional<Tensor> ctc_gradient(const FrameProbs& probs,
                                   std::span<const int> target) {
  const LossResult r = ctc_loss(probs, target);
  if (!r.feasible() || r.log_likelihood == kNegInf) return std::nullopt;
  Tensor grad = occupancy(r, target, probs.classes());
  for (std::size_t t = 0; t < probs.frames(); ++t) {
    for (std::size_t k = 0; k < probs.classes(); ++k) {
      double& g = grad.at(t, k);
      g = g == 0.0 ? 0.0 : -g / probs(t, k);
    }
  }
  return grad;
}

std::optional<Tensor> ctc_logit_gradient(const Tensor& log_probs,
                                         std::span<const int> target,
                                         double* loss) {
  const LossResult r = ctc_loss_from_log_probs(log_probs, target);
  if (loss) *loss = r.loss;
  if (!r.feasible() || r.log_likelihood == kNegInf) return std::nullopt;
  Tensor grad = occupancy(r, target, log_probs.dim(1));
  for (std::size_t i = 0; i < grad.size(); ++i) {
    grad[i] = std::exp(log_probs[i]) - grad[i];
  }
  return grad;
}

// ---------------------------------------------------------------- decoding

DecodeResult greedy_decode(const FrameProbs& probs) {
  std::vector<int> path(probs.frames());
  double score = 0.0;
  for (std::size_t t = 0; t < probs.frames(); ++t) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < probs.classes(); ++k) {
      if (probs(t, k) > probs(t, best)) best = k;
    }
    path[t] = static_cast<int>(best);
    score += safe_log(probs(t, best));
  }
  return {collapse(path), score};
}

std::vector<DecodeResult> beam_decode(const FrameProbs& probs,
                                      int beam_width) {
  if (beam_width < 1) throw InvalidArgument("beam width must be >= 1");
  struct Mass {
    double blank = kNegInf;
    double non_blank = kNegInf;
    double total() const { return log_add(blank, non_blank); }
  };
  using Beam = std::map<LabelSeq, Mass>;
  const Tensor lp = probs.log_probs();
  const std::size_t K = probs.classes();

  auto prune = [&](const Beam& candidates) {
    std::vector<std::pair<LabelSeq, Mass>> entries(candidates.begin(),
                                                   candidates.end());
    // map iteration is ordered by label sequence; stable sort keeps that
    // order among equal scores
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& x, const auto& y) {
                       return x.second.total() > y.second.total();
                     });
    // zero-mass prefixes (e.g. a repeat with no frame for its blank) are
    // dropped; the list is sorted, so they form the tail
    std::size_t keep = std::min(entries.size(), static_cast<std::size_t>(beam_width));
    while (keep > 1 && entries[keep - 1].second.total() == kNegInf) --keep;
    entries.resize(keep);
    return entries;
  };

  std::vector<std::pair<LabelSeq, Mass>> beam{{LabelSeq{}, Mass{0.0, kNegInf}}};
  for (std::size_t t = 0; t < probs.frames(); ++t) {
    Beam next;
    for (const auto& [prefix, mass] : beam) {
      const double total = mass.total();
      Mass& same = next[prefix];
      same.blank = log_add(same.blank, total + lp.at(t, kBlank));
      for (std::size_t k = 1; k < K; ++k) {
        const double p = lp.at(t, k);
        if (p == kNegInf) continue;
        const int c = static_cast<int>(k);
        LabelSeq extended = prefix;
        extended.push_back(c);
        if (!prefix.empty() && prefix.back() == c) {
          // repeat without a separating blank collapses into the prefix
          Mass& stay = next[prefix];
          stay.non_blank = log_add(stay.non_blank, mass.non_blank + p);
          Mass& ext = next[extended];
          ext.non_blank = log_add(ext.non_blank, mass.blank + p);
        } else {
          Mass& ext = next[extended];
          ext.non_blank = log_add(ext.non_blank, total + p);
        }
      }
    }
    beam = prune(next);
  }
  std::vector<DecodeResult> results;
  results.reserve(beam.size());
  for (const auto& [prefix, mass] : beam) {
    results.push_back({prefix, mass.total()});
  }
  return results;
}

LexiconDecodeResult lexicon_decode(const FrameProbs& probs,
                                   std::span<const std::string> lexicon,
                                   const Alphabet& alphabet) {
  if (lexicon.empty()) throw InvalidArgument("lexicon decode: empty lexicon");
  if (alphabet.num_classes() != probs.classes()) {
    throw InvalidArgument("lexicon decode: alphabet has " +
                          std::to_string(alphabet.num_classes()) +
                          " classes, probs have " +
                          std::to_string(probs.classes()));
  }
  const Tensor lp = probs.log_probs();
  std::optional<LexiconDecodeResult> best;
  for (std::size_t i = 0; i < lexicon.size(); ++i) {
    auto labels = alphabet.encode(lexicon[i]);
    if (!labels) continue;
    const LossResult r = ctc_loss_from_log_probs(lp, *labels);
    if (!r.feasible() || r.log_likelihood == kNegInf) continue;
    if (!best || r.log_likelihood > best->result.log_score) {
      best = LexiconDecodeResult{i, {*labels, r.log_likelihood}};
    }
  }
  if (!best) {
    throw NoLexiconMatch("lexicon decode: no lexicon word is feasible for " +
                         std::to_string(probs.frames()) + " frames");
  }
  return *best;
}

}  // namespace scenetext::ctc
