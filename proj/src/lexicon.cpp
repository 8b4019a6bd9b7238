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

#include "scenetext/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "scenetext/errors.hpp"

namespace scenetext {

std::u32string utf8_decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    int extra = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      extra = 1;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      extra = 2;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      extra = 3;
    } else {
      out.push_back(U'\uFFFD');
      ++i;
      continue;
    }
    if (i + static_cast<std::size_t>(extra) >= text.size()) {
      out.push_back(U'\uFFFD');
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(U'\uFFFD');
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(extra) + 1;
  }
  return out;
}

std::string utf8_encode(std::u32string_view text) {
  std::string out;
  for (char32_t cp : text) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

std::u32string fold_case(std::u32string_view text) {
  std::u32string out(text);
  for (char32_t& c : out) {
    if (c >= U'A' && c <= U'Z') c = c - U'A' + U'a';
  }
  return out;
}

std::string fold_case(std::string_view utf8) {
  std::string out(utf8);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string to_upper(std::string_view utf8) {
  std::string out(utf8);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  return edit_distance(utf8_decode(a), utf8_decode(b));
}

// ---------------------------------------------------------------- Lexicon

Lexicon::Lexicon(const std::vector<std::string>& words, bool fold)
    : fold_(fold) {
  std::unordered_set<std::u32string> seen;
  for (const std::string& w : words) {
    std::u32string key = key_of(w);
    if (!seen.insert(key).second) continue;
    entries_.push_back({w, std::move(key)});
    insert(entries_.size() - 1);
  }
}

std::u32string Lexicon::key_of(std::string_view word) const {
  std::u32string key = utf8_decode(word);
  return fold_ ? fold_case(key) : key;
}

void Lexicon::insert(std::size_t entry) {
  if (!root_) {
    root_ = std::make_unique<Node>(Node{entry, {}});
    return;
  }
  Node* node = root_.get();
  const std::u32string& key = entries_[entry].key;
  while (true) {
    const std::size_t d = edit_distance(entries_[node->entry].key, key);
    auto it = std::find_if(node->children.begin(), node->children.end(),
                           [d](const auto& c) { return c.first == d; });
    if (it == node->children.end()) {
      node->children.emplace_back(d, std::make_unique<Node>(Node{entry, {}}));
      return;
    }
    node = it->second.get();
  }
}

std::vector<std::string> Lexicon::words() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const Entry& e : entries_) out.push_back(e.original);
  return out;
}

namespace {

void sort_hits(std::vector<std::pair<std::size_t, std::size_t>>& hits) {
  // (distance, entry index)
  std::sort(hits.begin(), hits.end());
}

}  // namespace

std::vector<LexiconHit> Lexicon::query(std::string_view word,
                                       std::size_t max_distance) const {
  std::vector<std::pair<std::size_t, std::size_t>> hits;
  if (root_) {
    const std::u32string key = key_of(word);
    std::vector<const Node*> stack{root_.get()};
    while (!stack.empty()) {
      const Node* node = stack.back();
      stack.pop_back();
      const std::size_t d = edit_distance(entries_[node->entry].key, key);
      if (d <= max_distance) hits.emplace_back(d, node->entry);
      const std::size_t lo = d > max_distance ? d - max_distance : 0;
      const std::size_t hi = d + max_distance;
      for (const auto& [edge, child] : node->children) {
        if (edge >= lo && edge <= hi) stack.push_back(child.get());
      }
    }
  }
  sort_hits(hits);
  std::vector<LexiconHit> out;
  out.reserve(hits.size());
  for (auto [d, e] : hits) out.push_back({entries_[e].original, d});
  return out;
}

std::vector<LexiconHit> Lexicon::linear_scan(std::string_view word,
                                             std::size_t max_distance) const {
  const std::u32string key = key_of(word);
  std::vector<std::pair<std::size_t, std::size_t>> hits;
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const std::size_t d = edit_distance(entries_[e].key, key);
    if (d <= max_distance) hits.emplace_back(d, e);
  }
  sort_hits(hits);
  std::vector<LexiconHit> out;
  for (auto [d, e] : hits) out.push_back({entries_[e].original, d});
  return out;
}

Lexicon::Nearest Lexicon::nearest(std::string_view word) const {
  Nearest best;
  if (!root_) return best;
  const std::u32string key = key_of(word);
  std::size_t radius = static_cast<std::size_t>(-1);
  std::vector<const Node*> stack{root_.get()};
  while (!stack.empty()) {
    const Node* node = stack.back();
    stack.pop_back();
    const std::size_t d = edit_distance(entries_[node->entry].key, key);
    if (d < radius || (d == radius && node->entry < best.index)) {
      radius = d;
      best = {node->entry, d};
    }
    for (const auto& [edge, child] : node->children) {
      // triangle inequality: |edge - d| <= radius is necessary
      const std::size_t gap = edge > d ? edge - d : d - edge;
      if (gap <= radius) stack.push_back(child.get());
    }
  }
  return best;
}

bool Lexicon::index_consistent() const {
  if (!root_) return entries_.empty();
  std::size_t count = 0;
  std::function<bool(const Node&)> visit = [&](const Node& node) {
    ++count;
    for (const auto& [edge, child] : node.children) {
      if (edit_distance(entries_[node.entry].key, entries_[child->entry].key) !=
          edge)
        return false;
      if (!visit(*child)) return false;
    }
    return true;
  };
  return visit(*root_) && count == entries_.size();
}

std::vector<std::string> parse_word_list(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<std::string> words;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                             line.back() == '\t'))
      line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
      line.remove_prefix(1);
    if (!line.empty()) words.emplace_back(line);
    pos = end + 1;
  }
  return words;
}

Lexicon load_lexicon_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read lexicon file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return Lexicon(parse_word_list(ss.str()));
}

std::string correct(std::string_view raw, const Lexicon& lexicon,
                    const CorrectionPolicy& policy) {
  if (!(policy.max_norm_dist >= 0.0 && policy.max_norm_dist <= 1.0)) {
    throw InvalidArgument("correction: max_norm_dist must lie in [0,1]");
  }
  const Lexicon::Nearest hit = lexicon.nearest(raw);
  if (hit.index == Lexicon::npos) return std::string(raw);
  const std::string& candidate = lexicon.word(hit.index);
  const std::size_t len =
      std::max(utf8_decode(raw).size(), utf8_decode(candidate).size());
  const double norm =
      len == 0 ? 0.0
               : static_cast<double>(hit.distance) / static_cast<double>(len);
  return norm <= policy.max_norm_dist ? candidate : std::string(raw);
}

}  // namespace scenetext
