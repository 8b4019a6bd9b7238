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

#include <filesystem>
#include <string_view>

#include "scenetext/tensor.hpp"

namespace scenetext {

// Grayscale images are Tensor [1, H, W] with intensities in [0, 1].

// Reads binary or ASCII PGM (P2/P5) and PPM (P3/P6), 8-bit. Colour is
// converted to luma with 0.299 R + 0.587 G + 0.114 B.
Tensor read_image(const std::filesystem::path& path);
Tensor decode_pnm(std::string_view bytes);

// Binary PGM; values are clamped and rounded to 8 bits.
void write_pgm(const std::filesystem::path& path, const Tensor& image);
std::string encode_pgm(const Tensor& image);

// Pixel rows [y0, y1) and columns [x0, x1), clamped to the image.
Tensor crop(const Tensor& image, long x0, long y0, long x1, long y1);

// Bilinear resampling with half-pixel centres.
Tensor resize_bilinear(const Tensor& image, std::size_t out_h,
                       std::size_t out_w);

// Edge-replicating pad on the bottom and right.
Tensor pad_edge(const Tensor& image, std::size_t out_h, std::size_t out_w);

}  // namespace scenetext
