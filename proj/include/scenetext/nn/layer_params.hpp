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

#include <map>
#include <string>
#include <vector>

#include "scenetext/tensor.hpp"

namespace scenetext::nn {

enum class LayerKind { kConv2d, kLinear, kLstm };

std::string to_string(LayerKind kind);
LayerKind layer_kind_from_string(const std::string& name);

// Serializable description of one parameterized layer: kind tag,
// integer hyperparameters and the weight/bias tensors in a fixed order.
struct LayerParams {
  LayerKind kind = LayerKind::kLinear;
  std::map<std::string, int> hyper;
  std::vector<Tensor> tensors;

  int hyper_at(const std::string& key) const;
  friend bool operator==(const LayerParams&, const LayerParams&) = default;
};

}  // namespace scenetext::nn
