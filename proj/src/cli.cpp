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

#include "scenetext/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "scenetext/ctc.hpp"
#include "scenetext/detector.hpp"
#include "scenetext/errors.hpp"
#include "scenetext/eval.hpp"
#include "scenetext/image.hpp"
#include "scenetext/lexicon.hpp"
#include "scenetext/nn/serialize.hpp"
#include "scenetext/pipeline.hpp"
#include "scenetext/recognizer.hpp"
#include "scenetext/rng.hpp"

namespace scenetext::cli {

namespace fs = std::filesystem;

std::string to_string(Task task) {
  switch (task) {
    case Task::kTrainDetector: return "train-detector";
    case Task::kTrainRecognizer: return "train-recognizer";
    case Task::kDetect: return "detect";
    case Task::kRecognize: return "recognize";
    case Task::kE2E: return "e2e";
    case Task::kEvaluate: return "evaluate";
    case Task::kDecode: return "decode";
    case Task::kSynth: return "synth";
  }
  return "unknown";
}

namespace {

class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// key=value lines become `--key=value` tokens; '#' starts a comment line.
std::vector<std::string> config_tokens(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot read " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (line_no == 1 && body.starts_with("\xEF\xBB\xBF")) body = trim(body.substr(3));
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    const std::string_view key = eq == std::string_view::npos ? std::string_view{}
                                                              : trim(body.substr(0, eq));
    if (key.empty() || key.starts_with("-")) {
      throw UsageError(path.string() + ":" + std::to_string(line_no) +
                       ": expected key=value");
    }
    if (key == "config") {
      throw UsageError(path.string() + ": nested config files are not supported");
    }
    tokens.push_back("--" + std::string(key) + "=" + std::string(trim(body.substr(eq + 1))));
  }
  return tokens;
}

// Pulls `--config X` / `--config=X` out of the argument list and splices the
// file's tokens in right after the subcommand, ahead of explicit flags.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size();) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
    } else if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
    } else {
      ++i;
    }
  }
  if (!path) return args;
  const auto tokens = config_tokens(*path);
  const auto sub = std::find_if(args.begin(), args.end(),
                                [](const std::string& a) { return !a.starts_with("-"); });
  if (sub == args.end()) throw UsageError("a subcommand is required");
  args.insert(sub + 1, tokens.begin(), tokens.end());
  return args;
}

struct Binder {
  CLI::App* app;
  RunConfig& cfg;

  void path(const char* flag, std::string& field, const char* help, bool required) {
    auto* opt = app->add_option(flag, field, help);
    if (required) opt->required();
  }
  void seed() { app->add_option("--seed", cfg.seed, "Random seed (default 0)"); }
  void training() {
    app->add_option("--epochs", cfg.epochs, "Training epochs");
    app->add_option("--lr", cfg.lr, "Learning rate");
    app->add_option("--optimizer", cfg.optimizer, "adam or sgd")
        ->check(CLI::IsMember({"adam", "sgd"}));
  }
  void detection() {
    app->add_option("--threshold", cfg.threshold, "Text probability threshold")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--min-area", cfg.min_area, "Smallest region in pixels")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--box-mode", cfg.box_mode, "axis or rotated")
        ->check(CLI::IsMember({"axis", "rotated"}));
  }
  void recognition(std::string& setting) {
    app->add_option("--decode", cfg.decode, "greedy, beam or lexicon")
        ->check(CLI::IsMember({"greedy", "beam", "lexicon"}));
    app->add_option("--beam-width", cfg.beam_width, "Prefix beam width")
        ->check(CLI::PositiveNumber);
    app->add_option("--max-norm-dist", cfg.max_norm_dist,
                    "Largest normalized edit distance accepted by correction")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--vocab", cfg.vocab, "Vocabulary directory (strong/, weak.txt, generic.txt)");
    app->add_option("--lexicon", cfg.lexicon, "Single word list used for every image");
    app->add_option("--setting", setting, "strong, weak or generic")
        ->check(CLI::IsMember({"strong", "weak", "generic"}));
  }
};

}  // namespace

RunConfig parse_args(const std::vector<std::string>& raw_args) {
  std::vector<std::string> args = expand_config(raw_args);
  RunConfig cfg;
  std::string setting = "strong";
  std::string config_path;

  CLI::App app{"Scene text detection and recognition toolkit", "scenetext"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.add_option("--config", config_path, "key=value file of flag defaults");

  auto sub = [&](Task task, const char* description) {
    CLI::App* s = app.add_subcommand(to_string(task), description);
    s->callback([&cfg, task] { cfg.task = task; });
    return Binder{s, cfg};
  };

  {
    Binder b = sub(Task::kTrainDetector, "Train the text/non-text FCN");
    b.path("--images", cfg.images, "Directory of training images", true);
    b.path("--gt", cfg.gt, "Directory of gt_<id>.txt files", true);
    b.path("--model", cfg.model, "Output model file", true);
    b.training();
    b.seed();
  }
  {
    Binder b = sub(Task::kTrainRecognizer, "Train the word recognizer on ground-truth crops");
    b.path("--images", cfg.images, "Directory of training images", true);
    b.path("--gt", cfg.gt, "Directory of gt_<id>.txt files", true);
    b.path("--model", cfg.model, "Output model file", true);
    b.training();
    b.seed();
  }
  {
    Binder b = sub(Task::kDetect, "Localize text and write res_<id>.txt boxes");
    b.path("--model", cfg.model, "Detector model file", true);
    b.path("--images", cfg.images, "Directory of images", true);
    b.path("--output", cfg.output, "Result directory", true);
    b.detection();
    b.seed();
  }
  {
    Binder b = sub(Task::kRecognize, "Transcribe previously detected boxes");
    b.path("--model", cfg.model, "Recognizer model file", true);
    b.path("--images", cfg.images, "Directory of images", true);
    b.path("--boxes", cfg.boxes, "Directory of res_<id>.txt boxes", true);
    b.path("--output", cfg.output, "Result directory", true);
    b.recognition(setting);
    b.seed();
  }
  {
    Binder b = sub(Task::kE2E, "Detect, recognize and correct words");
    b.path("--detector", cfg.detector_model, "Detector model file", true);
    b.path("--recognizer", cfg.recognizer_model, "Recognizer model file", true);
    b.path("--images", cfg.images, "Directory of images", true);
    b.path("--output", cfg.output, "Result directory", true);
    b.detection();
    b.recognition(setting);
    b.seed();
  }
  {
    Binder b = sub(Task::kEvaluate, "Score results against ground truth");
    b.app->add_option("--task", cfg.eval_task, "4.1 localization, 4.3 words, 4.4 end-to-end")
        ->check(CLI::IsMember({"4.1", "4.3", "4.4"}));
    b.path("--gt", cfg.gt, "Ground-truth directory (word list file for 4.3)", true);
    b.path("--res", cfg.res, "Result directory (word list file for 4.3)", true);
    b.path("--report", cfg.report, "Report file (default: report.txt next to the results)",
           false);
    b.app->add_option("--iou-thresh", cfg.iou_thresh, "Match threshold")
        ->check(CLI::Range(0.0, 1.0));
    b.app->add_option("--setting", setting, "Label of the end-to-end row")
        ->check(CLI::IsMember({"strong", "weak", "generic"}));
    b.app->add_flag("--normalized-ted", cfg.normalized_ted,
                    "Report edit distance normalized by word length");
    b.seed();
  }
  {
    Binder b = sub(Task::kDecode, "Decode a frame-probability matrix");
    b.path("--probs", cfg.probs, "Matrix file ('-' for stdin)", true);
    b.app->add_option("--beam-width", cfg.beam_width, "Prefix beam width")
        ->check(CLI::PositiveNumber);
    b.app->add_option("--lexicon", cfg.lexicon, "Word list for lexicon decoding");
    b.seed();
  }
  {
    Binder b = sub(Task::kSynth, "Generate a synthetic dataset with vocabularies");
    b.path("--output", cfg.output, "Dataset directory", true);
    b.app->add_option("--count", cfg.count, "Number of images")->check(CLI::PositiveNumber);
    b.app->add_option("--width", cfg.width, "Image width")->check(CLI::PositiveNumber);
    b.app->add_option("--height", cfg.height, "Image height")->check(CLI::PositiveNumber);
    b.app->add_option("--min-words", cfg.min_words, "Fewest words per image");
    b.app->add_option("--max-words", cfg.max_words, "Most words per image");
    b.app->add_option("--noise", cfg.noise, "Noise amplitude in [0, 1]")
        ->check(CLI::Range(0.0, 1.0));
    b.seed();
  }

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  cfg.setting = vocab_setting_from_string(setting);
  return cfg;
}

namespace {

bool verbose() {
  const char* v = std::getenv("SCENETEXT_VERBOSE");
  return v && *v && std::string_view(v) != "0";
}

nn::OptimizerKind optimizer_kind(const std::string& name) {
  return name == "sgd" ? nn::OptimizerKind::kSgd : nn::OptimizerKind::kAdam;
}

void print_log(const nn::TrainingLog& log, std::ostream& err) {
  if (!verbose()) return;
  for (std::size_t e = 0; e < log.epoch_loss.size(); ++e) {
    if (e % 10 == 0 || e + 1 == log.epoch_loss.size()) {
      err << "epoch " << e + 1 << " loss " << log.epoch_loss[e] << "\n";
    }
  }
}

std::vector<std::pair<Tensor, ImageAnnotation>> load_training_set(const RunConfig& cfg) {
  std::vector<std::pair<Tensor, ImageAnnotation>> out;
  for (const auto& in : pipeline::list_images(cfg.images)) {
    const fs::path gt_path = fs::path(cfg.gt) / gt_file_name(in.image_id);
    out.emplace_back(read_image(in.path),
                     parse_gt_file(read_text_file(gt_path), in.image_id));
  }
  if (out.empty()) throw IoError("no images found in " + cfg.images);
  return out;
}

int train_detector_task(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<detector::DetectorSample> samples;
  for (const auto& [image, ann] : load_training_set(cfg)) {
    samples.push_back(detector::make_detector_sample(image, ann));
  }
  Rng rng = Rng::stream(cfg.seed, "detector-init");
  detector::DetectorTrainConfig tc;
  tc.seed = cfg.seed;
  tc.optimizer = optimizer_kind(cfg.optimizer);
  if (cfg.epochs) tc.epochs = *cfg.epochs;
  if (cfg.lr) tc.lr = *cfg.lr;
  nn::TrainingLog log;
  const auto model = detector::train_detector(samples, tc, detector::DetectorModel::init(rng), &log);
  print_log(log, err);
  nn::save_model(model.to_file(), cfg.model);
  out << "initial_loss=" << log.initial_loss << "\nfinal_loss=" << log.final_loss
      << "\npixel_accuracy=" << detector::pixel_accuracy(model, samples) << "\n";
  return 0;
}

int train_recognizer_task(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ctc::Alphabet alphabet = ctc::Alphabet::alphanumeric();
  std::vector<recognizer::RecognizerSample> samples;
  for (const auto& [image, ann] : load_training_set(cfg)) {
    auto words = pipeline::word_samples(image, ann, alphabet);
    samples.insert(samples.end(), std::make_move_iterator(words.begin()),
                   std::make_move_iterator(words.end()));
  }
  if (samples.empty()) throw InvalidArgument("no transcribed words to train on");
  Rng rng = Rng::stream(cfg.seed, "recognizer-init");
  recognizer::RecognizerTrainConfig tc;
  tc.seed = cfg.seed;
  tc.optimizer = optimizer_kind(cfg.optimizer);
  if (cfg.epochs) tc.epochs = *cfg.epochs;
  if (cfg.lr) tc.lr = *cfg.lr;
  nn::TrainingLog log;
  const auto model = recognizer::train_recognizer(
      samples, tc, recognizer::RecognizerModel::init(rng, alphabet.num_classes()), &log);
  print_log(log, err);
  nn::save_model(model.to_file(), cfg.model);
  out << "words=" << samples.size() << "\nepochs=" << log.epochs_run
      << "\ninitial_loss=" << log.initial_loss << "\nfinal_loss=" << log.final_loss
      << "\nexact_match=" << recognizer::exact_match_rate(model, samples) << "\n";
  return 0;
}

detector::DetectConfig detect_config(const RunConfig& cfg) {
  detector::DetectConfig dc;
  dc.threshold = cfg.threshold;
  dc.min_area = cfg.min_area;
  dc.mode = cfg.box_mode == "rotated" ? detector::BoxMode::kMinAreaRect
                                      : detector::BoxMode::kAxisAligned;
  return dc;
}

pipeline::RecognizeConfig recognize_config(const RunConfig& cfg) {
  pipeline::RecognizeConfig rc;
  rc.decode.mode = cfg.decode == "beam"      ? recognizer::DecodeMode::kBeam
                   : cfg.decode == "lexicon" ? recognizer::DecodeMode::kLexicon
                                             : recognizer::DecodeMode::kGreedy;
  rc.decode.beam_width = cfg.beam_width;
  rc.policy.max_norm_dist = cfg.max_norm_dist;
  return rc;
}

std::optional<Vocabulary> vocabulary(const RunConfig& cfg,
                                     std::span<const pipeline::ImageInput> images) {
  if (!cfg.vocab.empty()) {
    std::vector<std::string> ids;
    for (const auto& in : images) ids.push_back(in.image_id);
    return load_vocab(cfg.setting, cfg.vocab, ids);
  }
  if (!cfg.lexicon.empty()) {
    return Vocabulary(VocabSetting::kWeak, load_lexicon_file(cfg.lexicon), {});
  }
  return std::nullopt;
}

int report_run(const pipeline::RunSummary& s, std::ostream& out, std::ostream& err) {
  for (const auto& [id, reason] : s.failures) err << "error: " << id << ": " << reason << "\n";
  out << "images=" << s.written.size() << "\nfailed=" << s.failures.size() << "\n";
  return s.ok() ? 0 : 1;
}

detector::DetectorModel load_detector(const std::string& path) {
  return detector::DetectorModel::from_file(nn::load_model(path));
}

recognizer::RecognizerModel load_recognizer(const std::string& path) {
  return recognizer::RecognizerModel::from_file(nn::load_model(path));
}

int detect_task(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto model = load_detector(cfg.model);
  const auto images = pipeline::list_images(cfg.images);
  return report_run(pipeline::run_detect(images, model, detect_config(cfg), cfg.output), out,
                    err);
}

int recognize_task(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto model = load_recognizer(cfg.model);
  const auto images = pipeline::list_images(cfg.images);
  const auto vocab = vocabulary(cfg, images);
  const auto summary = pipeline::run_recognize(images, cfg.boxes, model,
                                               ctc::Alphabet::alphanumeric(),
                                               recognize_config(cfg),
                                               vocab ? &*vocab : nullptr, cfg.output);
  for (const auto& [id, words] : summary.recognitions) {
    out << "# " << id << "\n";
    for (const auto& r : words) out << r.corrected_text << ", " << r.log_score << "\n";
  }
  return report_run(summary, out, err);
}

int e2e_task(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto det = load_detector(cfg.detector_model);
  const auto rec = load_recognizer(cfg.recognizer_model);
  const auto images = pipeline::list_images(cfg.images);
  const auto vocab = vocabulary(cfg, images);
  const pipeline::E2EConfig ec{detect_config(cfg), recognize_config(cfg)};
  return report_run(pipeline::run_e2e(images, det, rec, ctc::Alphabet::alphanumeric(), ec,
                                      vocab ? &*vocab : nullptr, cfg.output),
                    out, err);
}

void list_ids(std::ostream& err, const char* what, const std::vector<std::string>& ids) {
  for (const auto& id : ids) err << "warning: " << what << ": " << id << "\n";
}

int evaluate_task(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  eval::KeyValues kv;
  if (cfg.eval_task == "4.3") {
    const auto gt = eval::parse_word_transcriptions(read_text_file(cfg.gt));
    const auto res = eval::parse_word_transcriptions(read_text_file(cfg.res));
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<std::string> missing, unknown;
    for (const auto& [id, word] : gt) {
      auto it = res.find(id);
      if (it == res.end()) missing.push_back(id);
      pairs.emplace_back(word, it == res.end() ? std::string{} : it->second);
    }
    for (const auto& [id, word] : res) {
      if (!gt.contains(id)) unknown.push_back(id);
    }
    list_ids(err, "no result for word", missing);
    list_ids(err, "result without ground truth", unknown);
    eval::WordRecognitionReport r = eval::word_metrics(pairs);
    kv = eval::key_values(r);
    if (cfg.normalized_ted) {
      for (auto& [k, v] : kv) {
        if (k == "ted") v = std::to_string(r.ted_normalized);
        if (k == "ted_upper") v = std::to_string(r.ted_upper_normalized);
      }
    }
  } else {
    const auto gt = read_annotation_dir(cfg.gt, true);
    const auto res = read_annotation_dir(cfg.res, false);
    const bool e2e = cfg.eval_task == "4.4";
    const auto ev = e2e ? eval::evaluate_end_to_end(gt, res, cfg.iou_thresh)
                        : eval::evaluate_localization(gt, res, cfg.iou_thresh);
    list_ids(err, "no result file for image", ev.missing_results);
    list_ids(err, "result file without ground truth", ev.unknown_results);
    if (e2e) {
      eval::EndToEndReport r;
      r.rows[cfg.setting] = ev.report;
      kv = eval::key_values(r);
    } else {
      kv = eval::key_values(ev.report);
    }
  }
  fs::path report = cfg.report;
  if (report.empty()) {
    const fs::path res(cfg.res);
    report = (fs::is_directory(res) ? res : res.parent_path()) / "report.txt";
  }
  std::ofstream file(report, std::ios::binary);
  file << eval::format_key_values(kv);
  if (!file) throw IoError("cannot write report " + report.string());
  out << eval::format_table(kv);
  return 0;
}

std::string label_text(const ctc::LabelSeq& labels, std::size_t classes) {
  const ctc::Alphabet alphabet = ctc::Alphabet::alphanumeric();
  if (classes == alphabet.num_classes()) return "\"" + alphabet.decode(labels) + "\"";
  std::string s = "[";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    s += (i ? " " : "") + std::to_string(labels[i]);
  }
  return s + "]";
}

int decode_task(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  std::optional<ctc::FrameProbs> probs;
  if (cfg.probs == "-") {
    probs = ctc::read_frame_probs(std::cin);
  } else {
    std::ifstream in(cfg.probs);
    if (!in) throw IoError("cannot read " + cfg.probs);
    probs = ctc::read_frame_probs(in);
  }
  const std::size_t K = probs->classes();
  const auto greedy = ctc::greedy_decode(*probs);
  out << "greedy " << label_text(greedy.labels, K) << " " << greedy.log_score << "\n";
  const auto beams = ctc::beam_decode(*probs, cfg.beam_width);
  for (std::size_t i = 0; i < std::min<std::size_t>(beams.size(), 5); ++i) {
    out << "beam" << i + 1 << " " << label_text(beams[i].labels, K) << " "
        << beams[i].log_score << "\n";
  }
  if (!cfg.lexicon.empty()) {
    const auto words = parse_word_list(read_text_file(cfg.lexicon));
    const auto hit = ctc::lexicon_decode(*probs, words, ctc::Alphabet::alphanumeric());
    out << "lexicon \"" << words[hit.index] << "\" " << hit.result.log_score << "\n";
  }
  return 0;
}

int synth_task(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  SynthConfig sc;
  sc.width = cfg.width;
  sc.height = cfg.height;
  sc.min_words = cfg.min_words;
  sc.max_words = cfg.max_words;
  sc.noise = cfg.noise;
  sc.seed = cfg.seed;
  const SynthDataset data = synth_generate(sc, static_cast<std::size_t>(cfg.count));
  const fs::path root(cfg.output);
  fs::create_directories(root / "images");
  fs::create_directories(root / "gt");
  fs::create_directories(root / "vocab" / "strong");

  const auto& generic = builtin_vocabulary();
  Rng rng = Rng::stream(cfg.seed, "synth-vocab");
  std::vector<std::string> weak;
  for (const SynthSample& s : data.samples) {
    write_pgm(root / "images" / (s.image_id + ".pgm"), s.image);
    write_gt(root / "gt", s.annotation);
    std::vector<std::string> strong;
    for (const QuadBox& b : s.annotation.boxes) {
      strong.push_back(*b.transcription);
      weak.push_back(*b.transcription);
    }
    for (int i = 0; i < 10; ++i) {
      strong.push_back(generic[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<int>(generic.size()) - 1))]);
    }
    std::ofstream f(root / "vocab" / "strong" / (s.image_id + ".txt"), std::ios::binary);
    for (const auto& w : strong) f << w << "\n";
  }
  std::ofstream wf(root / "vocab" / "weak.txt", std::ios::binary);
  for (const auto& w : weak) wf << w << "\n";
  std::ofstream gf(root / "vocab" / "generic.txt", std::ios::binary);
  for (const auto& w : generic) gf << w << "\n";
  if (data.skipped_words) err << "warning: skipped " << data.skipped_words << " words\n";
  out << "images=" << data.samples.size() << "\n";
  return 0;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.task) {
      case Task::kTrainDetector: return train_detector_task(cfg, out, err);
      case Task::kTrainRecognizer: return train_recognizer_task(cfg, out, err);
      case Task::kDetect: return detect_task(cfg, out, err);
      case Task::kRecognize: return recognize_task(cfg, out, err);
      case Task::kE2E: return e2e_task(cfg, out, err);
      case Task::kEvaluate: return evaluate_task(cfg, out, err);
      case Task::kDecode: return decode_task(cfg, out, err);
      case Task::kSynth: return synth_task(cfg, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  }
  return run(cfg, out, err);
}

}  // namespace scenetext::cli
