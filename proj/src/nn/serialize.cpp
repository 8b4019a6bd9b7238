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

#include "scenetext/nn/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "scenetext/errors.hpp"

namespace scenetext::nn {
namespace {

constexpr std::string_view kMagic = "scenetext-model";

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  std::istringstream next(const char* expecting) {
    std::string line;
    while (pos_ < text_.size()) {
      auto end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      line.assign(text_.substr(pos_, end - pos_));
      pos_ = end + 1;
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return std::istringstream(line);
    }
    throw ParseError(line_no_, std::string("unexpected end of model, expected ") +
                                   expecting);
  }

  std::size_t line() const { return line_no_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

void expect_word(std::istringstream& is, std::string_view word,
                 const LineReader& reader) {
  std::string got;
  if (!(is >> got) || got != word) {
    throw ParseError(reader.line(), "expected '" + std::string(word) +
                                        "', got '" + got + "'");
  }
}

std::pair<std::string, int> parse_attribute(const std::string& token,
                                            const LineReader& reader) {
  const auto eq = token.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ParseError(reader.line(), "malformed attribute '" + token + "'");
  }
  char* end = nullptr;
  const std::string value = token.substr(eq + 1);
  const long v = std::strtol(value.c_str(), &end, 10);
  if (value.empty() || *end != '\0') {
    throw ParseError(reader.line(), "non-integer attribute '" + token + "'");
  }
  return {token.substr(0, eq), static_cast<int>(v)};
}

}  // namespace

std::string serialize_model(const ModelFile& model) {
  std::ostringstream os;
  os << kMagic << '\n';
  os << "format-version " << kModelFormatVersion << '\n';
  os << "model " << model.model_kind;
  for (const auto& [k, v] : model.attributes) os << ' ' << k << '=' << v;
  os << '\n';
  os << "layers " << model.layers.size() << '\n';
  for (const LayerParams& layer : model.layers) {
    os << "layer " << to_string(layer.kind) << ' ' << layer.tensors.size();
    for (const auto& [k, v] : layer.hyper) os << ' ' << k << '=' << v;
    os << '\n';
    for (const Tensor& t : layer.tensors) {
      os << "tensor " << t.rank();
      for (std::size_t d : t.shape()) os << ' ' << d;
      os << '\n';
      for (std::size_t i = 0; i < t.size(); ++i) {
        os << hex_double(t[i]) << ((i + 1) % 8 == 0 || i + 1 == t.size() ? '\n' : ' ');
      }
    }
  }
  os << "end\n";
  return os.str();
}

ModelFile deserialize_model(std::string_view text) {
  LineReader reader(text);
  ModelFile model;
  {
    auto is = reader.next("magic");
    expect_word(is, kMagic, reader);
  }
  {
    auto is = reader.next("format-version");
    expect_word(is, "format-version", reader);
    int version = 0;
    if (!(is >> version) || version != kModelFormatVersion) {
      throw ParseError(reader.line(), "unsupported model format version");
    }
  }
  {
    auto is = reader.next("model");
    expect_word(is, "model", reader);
    if (!(is >> model.model_kind)) {
      throw ParseError(reader.line(), "missing model kind");
    }
    std::string token;
    while (is >> token) model.attributes.insert(parse_attribute(token, reader));
  }
  std::size_t layer_count = 0;
  {
    auto is = reader.next("layers");
    expect_word(is, "layers", reader);
    if (!(is >> layer_count)) throw ParseError(reader.line(), "bad layer count");
  }
  for (std::size_t l = 0; l < layer_count; ++l) {
    LayerParams layer;
    std::size_t tensor_count = 0;
    {
      auto is = reader.next("layer");
      expect_word(is, "layer", reader);
      std::string kind;
      if (!(is >> kind >> tensor_count)) {
        throw ParseError(reader.line(), "malformed layer header");
      }
      try {
        layer.kind = layer_kind_from_string(kind);
      } catch (const InvalidArgument& e) {
        throw ParseError(reader.line(), e.what());
      }
      std::string token;
      while (is >> token) layer.hyper.insert(parse_attribute(token, reader));
    }
    for (std::size_t k = 0; k < tensor_count; ++k) {
      auto is = reader.next("tensor");
      expect_word(is, "tensor", reader);
      std::size_t rank = 0;
      if (!(is >> rank) || rank == 0) {
        throw ParseError(reader.line(), "bad tensor rank");
      }
      std::vector<std::size_t> shape(rank);
      std::size_t count = 1;
      for (auto& d : shape) {
        if (!(is >> d) || d == 0) {
          throw ParseError(reader.line(), "bad tensor extent");
        }
        count *= d;
      }
      std::vector<double> data;
      data.reserve(count);
      while (data.size() < count) {
        auto row = reader.next("tensor values");
        std::string tok;
        while (row >> tok) {
          char* end = nullptr;
          const double v = std::strtod(tok.c_str(), &end);
          if (*end != '\0') {
            throw ParseError(reader.line(), "bad real '" + tok + "'");
          }
          data.push_back(v);
        }
      }
      if (data.size() != count) {
        throw ParseError(reader.line(), "tensor value count mismatch");
      }
      layer.tensors.emplace_back(std::move(shape), std::move(data));
    }
    model.layers.push_back(std::move(layer));
  }
  auto is = reader.next("end");
  expect_word(is, "end", reader);
  return model;
}

void save_model(const ModelFile& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file " + path.string());
  out << serialize_model(model);
  if (!out) throw IoError("failed writing model file " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read model file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str());
}

}  // namespace scenetext::nn
