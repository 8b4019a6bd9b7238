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

#include <filesystem>

#include "scenetext/errors.hpp"
#include "scenetext/image.hpp"

namespace scenetext {
namespace {

TEST(Pnm, BinaryAndAsciiGray) {
  const std::string p5 = std::string("P5\n# comment\n2 1\n255\n") + '\x00' + '\xff';
  EXPECT_EQ(decode_pnm(p5), Tensor({1, 1, 2}, {0.0, 1.0}));
  EXPECT_EQ(decode_pnm("P2 2 1 255 51 255"), Tensor({1, 1, 2}, {0.2, 1.0}));
}

TEST(Pnm, ColourToLuma) {
  const Tensor t = decode_pnm("P3 1 1 255 255 0 0");
  EXPECT_NEAR(t[0], 0.299, 1e-12);
}

TEST(Pnm, Errors) {
  EXPECT_THROW(decode_pnm("P7 1 1 255"), IoError);
  EXPECT_THROW(decode_pnm("P5 2 2 255 ab"), IoError);
  EXPECT_THROW(decode_pnm("P2 1 1 65535 7"), IoError);
  EXPECT_THROW(read_image("/nonexistent/image.pgm"), IoError);
}

TEST(Pnm, EncodeRoundTrip) {
  Tensor img({1, 3, 4});
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = static_cast<double>(i * 20) / 255.0;
  EXPECT_EQ(decode_pnm(encode_pgm(img)), img);
  const auto path = std::filesystem::temp_directory_path() / "scenetext_image_test.pgm";
  write_pgm(path, img);
  EXPECT_EQ(read_image(path), img);
  std::filesystem::remove(path);
}

TEST(Crop, ClampsToImage) {
  const Tensor img({1, 2, 3}, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(crop(img, 1, 0, 3, 2), Tensor({1, 2, 2}, {2, 3, 5, 6}));
  EXPECT_EQ(crop(img, -4, 1, 2, 9), Tensor({1, 1, 2}, {4, 5}));
  EXPECT_THROW(crop(img, 5, 0, 9, 2), InvalidArgument);
}

TEST(Resize, ConstantImageExact) {
  const Tensor img({1, 5, 7}, 0.3);
  EXPECT_EQ(resize_bilinear(img, 11, 3), Tensor({1, 11, 3}, 0.3));
}

TEST(Resize, IdentityAndUpsample) {
  const Tensor img({1, 1, 2}, {0.0, 1.0});
  EXPECT_EQ(resize_bilinear(img, 1, 2), img);
  // Half-pixel centres: outputs sample at x = -0.25, 0.25, 0.75, 1.25.
  const Tensor up = resize_bilinear(img, 1, 4);
  EXPECT_NEAR(up[0], 0.0, 1e-15);
  EXPECT_NEAR(up[1], 0.25, 1e-15);
  EXPECT_NEAR(up[2], 0.75, 1e-15);
  EXPECT_NEAR(up[3], 1.0, 1e-15);
}

TEST(PadEdge, ReplicatesBorder) {
  const Tensor img({1, 1, 2}, {0.1, 0.2});
  EXPECT_EQ(pad_edge(img, 2, 3), Tensor({1, 2, 3}, {0.1, 0.2, 0.2, 0.1, 0.2, 0.2}));
}

}  // namespace
}  // namespace scenetext
