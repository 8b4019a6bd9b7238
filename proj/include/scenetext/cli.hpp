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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scenetext/dataset.hpp"

namespace scenetext::cli {

enum class Task {
  kTrainDetector,
  kTrainRecognizer,
  kDetect,
  kRecognize,
  kE2E,
  kEvaluate,
  kDecode,
  kSynth,
};

std::string to_string(Task task);

// Everything a subcommand needs; unset optionals fall back to the module
// defaults.
struct RunConfig {
  Task task = Task::kEvaluate;

  std::string images, gt, res, boxes, output, report;
  std::string model, detector_model, recognizer_model;
  std::string lexicon, vocab, probs;

  double threshold = 0.5;
  int min_area = 8;
  std::string box_mode = "axis";
  std::string decode = "greedy";
  int beam_width = 16;
  double max_norm_dist = 0.4;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::string optimizer = "adam";
  std::uint64_t seed = 0;

  VocabSetting setting = VocabSetting::kStrong;
  std::string eval_task = "4.1";
  double iou_thresh = 0.5;
  bool normalized_ted = false;

  int count = 10;
  int width = 64;
  int height = 64;
  int min_words = 1;
  int max_words = 3;
  double noise = 0.05;
};

// Bad flags, unknown config keys or a missing required path.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// `args` excludes the program name. A `--config <file>` of key=value lines
// supplies flag values that explicit flags override; a repeated flag takes
// its last value. Throws UsageError.
RunConfig parse_args(const std::vector<std::string>& args);

// Executes a parsed config; returns 0 on success, 1 on a runtime failure.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// parse_args + run; usage errors return 2, `--help` prints and returns 0.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace scenetext::cli
