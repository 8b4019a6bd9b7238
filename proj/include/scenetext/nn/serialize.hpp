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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "scenetext/nn/layer_params.hpp"

namespace scenetext::nn {

inline constexpr int kModelFormatVersion = 1;

// Self-describing text container for a model: a kind tag, free integer
// attributes and the ordered layer list. Reals are written as hex floats so
// a save/load cycle is bit-exact.
struct ModelFile {
  std::string model_kind;
  std::map<std::string, int> attributes;
  std::vector<LayerParams> layers;

  friend bool operator==(const ModelFile&, const ModelFile&) = default;
};

std::string serialize_model(const ModelFile& model);
ModelFile deserialize_model(std::string_view text);

void save_model(const ModelFile& model, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace scenetext::nn
