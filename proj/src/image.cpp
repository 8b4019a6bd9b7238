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

#include "scenetext/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "scenetext/errors.hpp"

namespace scenetext {
namespace {

class PnmReader {
 public:
  explicit PnmReader(std::string_view bytes) : b_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(b_[pos_]))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long number() {
    skip_space_and_comments();
    long v = 0;
    std::size_t start = pos_;
    while (pos_ < b_.size() &&
           std::isdigit(static_cast<unsigned char>(b_[pos_]))) {
      v = v * 10 + (b_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start) throw IoError("pnm: malformed header or sample");
    return v;
  }

  unsigned char byte() {
    if (pos_ >= b_.size()) throw IoError("pnm: truncated pixel data");
    return static_cast<unsigned char>(b_[pos_++]);
  }

  void skip_single_whitespace() { ++pos_; }

 private:
  std::string_view b_;
  std::size_t pos_ = 0;
};

}  // namespace

Tensor decode_pnm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') throw IoError("not a PNM image");
  const char kind = bytes[1];
  const bool color = kind == '3' || kind == '6';
  const bool binary = kind == '5' || kind == '6';
  if (kind != '2' && kind != '3' && kind != '5' && kind != '6') {
    throw IoError(std::string("unsupported PNM type P") + kind);
  }
  PnmReader r(bytes.substr(2));
  const long w = r.number();
  const long h = r.number();
  const long maxval = r.number();
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255) {
    throw IoError("pnm: only 8-bit images with positive size are supported");
  }
  if (binary) r.skip_single_whitespace();
  Tensor img({1, static_cast<std::size_t>(h), static_cast<std::size_t>(w)});
  const auto maxv = static_cast<double>(maxval);
  for (std::size_t i = 0; i < img.size(); ++i) {
    auto sample = [&]() -> double {
      return binary ? r.byte() : static_cast<double>(r.number());
    };
    if (color) {
      const double red = sample(), green = sample(), blue = sample();
      img[i] = (0.299 * red + 0.587 * green + 0.114 * blue) / maxv;
    } else {
      img[i] = sample() / maxv;
    }
  }
  return img;
}

Tensor read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read image " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return decode_pnm(ss.str());
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string encode_pgm(const Tensor& image) {
  if (image.rank() != 3 || image.dim(0) != 1) {
    throw InvalidArgument("write_pgm: expected [1,H,W] image");
  }
  std::string out = "P5\n" + std::to_string(image.dim(2)) + " " +
                    std::to_string(image.dim(1)) + "\n255\n";
  out.reserve(out.size() + image.size());
  for (double v : image.data()) {
    const double c = std::clamp(v, 0.0, 1.0);
    out.push_back(static_cast<char>(static_cast<unsigned char>(
        std::lround(c * 255.0))));
  }
  return out;
}

void write_pgm(const std::filesystem::path& path, const Tensor& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write image " + path.string());
  out << encode_pgm(image);
}

Tensor crop(const Tensor& image, long x0, long y0, long x1, long y1) {
  const long H = static_cast<long>(image.dim(1));
  const long W = static_cast<long>(image.dim(2));
  x0 = std::clamp(x0, 0L, W);
  x1 = std::clamp(x1, 0L, W);
  y0 = std::clamp(y0, 0L, H);
  y1 = std::clamp(y1, 0L, H);
  if (x1 <= x0 || y1 <= y0) throw InvalidArgument("crop: empty region");
  const std::size_t C = image.dim(0);
  Tensor out({C, static_cast<std::size_t>(y1 - y0),
              static_cast<std::size_t>(x1 - x0)});
  for (std::size_t c = 0; c < C; ++c) {
    for (long y = y0; y < y1; ++y) {
      for (long x = x0; x < x1; ++x) {
        out.at(c, static_cast<std::size_t>(y - y0),
               static_cast<std::size_t>(x - x0)) =
            image.at(c, static_cast<std::size_t>(y), static_cast<std::size_t>(x));
      }
    }
  }
  return out;
}

Tensor resize_bilinear(const Tensor& image, std::size_t out_h,
                       std::size_t out_w) {
  if (image.rank() != 3 || out_h == 0 || out_w == 0) {
    throw InvalidArgument("resize: expected [C,H,W] and a positive size");
  }
  const std::size_t C = image.dim(0), H = image.dim(1), W = image.dim(2);
  const double sy = static_cast<double>(H) / static_cast<double>(out_h);
  const double sx = static_cast<double>(W) / static_cast<double>(out_w);
  struct Tap {
    std::size_t i0, i1;
    double frac;
  };
  auto taps = [](std::size_t n_out, std::size_t n_in, double s) {
    std::vector<Tap> t(n_out);
    for (std::size_t o = 0; o < n_out; ++o) {
      double src = (static_cast<double>(o) + 0.5) * s - 0.5;
      src = std::clamp(src, 0.0, static_cast<double>(n_in - 1));
      const auto i0 = static_cast<std::size_t>(std::floor(src));
      const std::size_t i1 = std::min(i0 + 1, n_in - 1);
      t[o] = {i0, i1, src - static_cast<double>(i0)};
    }
    return t;
  };
  const auto ty = taps(out_h, H, sy);
  const auto tx = taps(out_w, W, sx);
  Tensor out({C, out_h, out_w});
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t y = 0; y < out_h; ++y) {
      for (std::size_t x = 0; x < out_w; ++x) {
        const double a = image.at(c, ty[y].i0, tx[x].i0);
        const double b = image.at(c, ty[y].i0, tx[x].i1);
        const double d = image.at(c, ty[y].i1, tx[x].i0);
        const double e = image.at(c, ty[y].i1, tx[x].i1);
        const double top = a + tx[x].frac * (b - a);
        const double bottom = d + tx[x].frac * (e - d);
        out.at(c, y, x) = top + ty[y].frac * (bottom - top);
      }
    }
  }
  return out;
}

Tensor pad_edge(const Tensor& image, std::size_t out_h, std::size_t out_w) {
  const std::size_t C = image.dim(0), H = image.dim(1), W = image.dim(2);
  if (out_h < H || out_w < W) throw InvalidArgument("pad: target too small");
  Tensor out({C, out_h, out_w});
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t y = 0; y < out_h; ++y) {
      for (std::size_t x = 0; x < out_w; ++x) {
        out.at(c, y, x) = image.at(c, std::min(y, H - 1), std::min(x, W - 1));
      }
    }
  }
  return out;
}

}  // namespace scenetext
