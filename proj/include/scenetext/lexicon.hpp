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
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace scenetext {

// Decodes UTF-8 into code points; invalid bytes map to U+FFFD.
std::u32string utf8_decode(std::string_view text);
std::string utf8_encode(std::u32string_view text);

// Lowercase folding of ASCII letters; other code points are unchanged.
std::u32string fold_case(std::u32string_view text);
std::string fold_case(std::string_view utf8);
std::string to_upper(std::string_view utf8);

// Levenshtein distance over code points, unit costs.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);
std::size_t edit_distance(std::string_view a, std::string_view b);

struct LexiconHit {
  std::string word;  // as spelled in the source list
  std::size_t distance;
  friend bool operator==(const LexiconHit&, const LexiconHit&) = default;
};

// Immutable word list indexed by a BK-tree over folded edit distance.
// Duplicates (after folding) keep their first occurrence.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(const std::vector<std::string>& words,
                   bool fold = true);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::string& word(std::size_t i) const { return entries_[i].original; }
  std::vector<std::string> words() const;
  bool folds_case() const { return fold_; }

  // All words within `max_distance`, ascending by (distance, lexicon order).
  std::vector<LexiconHit> query(std::string_view word,
                                std::size_t max_distance) const;
  // Brute-force reference for `query`.
  std::vector<LexiconHit> linear_scan(std::string_view word,
                                      std::size_t max_distance) const;
  // Nearest word; ties go to the earlier lexicon entry. Empty lexicon ->
  // nullopt-like result with index npos.
  struct Nearest {
    std::size_t index = npos;
    std::size_t distance = 0;
  };
  Nearest nearest(std::string_view word) const;

  // Checks that every child's edge key equals its distance to the parent.
  bool index_consistent() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  struct Entry {
    std::string original;
    std::u32string key;  // folded code points
  };
  struct Node {
    std::size_t entry;
    std::vector<std::pair<std::size_t, std::unique_ptr<Node>>> children;
  };

  std::u32string key_of(std::string_view word) const;
  void insert(std::size_t entry);

  bool fold_ = true;
  std::vector<Entry> entries_;
  std::unique_ptr<Node> root_;
};

Lexicon load_lexicon_file(const std::filesystem::path& path);
// One word per line, UTF-8, optional BOM, blank lines skipped.
std::vector<std::string> parse_word_list(std::string_view text);

struct CorrectionPolicy {
  double max_norm_dist = 0.4;
};

// Replaces `raw` with its nearest lexicon word when
// distance / max(len(raw), len(word)) <= max_norm_dist.
std::string correct(std::string_view raw, const Lexicon& lexicon,
                    const CorrectionPolicy& policy = {});

}  // namespace scenetext
