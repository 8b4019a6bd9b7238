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
#include <string_view>
#include <vector>

namespace scenetext::font {

inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;
inline constexpr int kGlyphAdvance = 6;  // glyph plus one blank column

// Row bitmaps, bit 4 is the leftmost column. Covers a-z (case-insensitive)
// and 0-9; nullopt for anything else.
std::optional<std::array<std::uint8_t, kGlyphHeight>> glyph(char c);

// Binary raster of `text` at an integer scale, row-major, 1 = ink.
struct Bitmap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
  std::uint8_t at(int x, int y) const { return pixels[y * width + x]; }
};

// Throws InvalidArgument on characters without a glyph or scale < 1.
Bitmap render(std::string_view text, int scale);

inline int text_width(std::size_t chars, int scale) {
  return chars == 0 ? 0
                    : static_cast<int>(chars) * kGlyphAdvance * scale - scale;
}

}  // namespace scenetext::font
